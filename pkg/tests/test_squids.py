import pytest

from tvf.graphs import Graph, ProductVertex, product_with_complete
from tvf.schemes import SizeScheme
from tvf.squids import (
    DfTuple,
    RemovalTrace,
    SchemeRunError,
    Squid,
    SquidError,
    check_squid,
    df1_check,
    df1_threshold,
    extract_certificate,
    residual,
    run_df1,
    run_dynamic,
    squid_admissible,
)
from tvf.vd import certificate_to_json, verify_certificate

from conftest import all_labeled_graphs


def _pv(b, r):
    return ProductVertex(b, r)


def _residual_set(trace, node):
    G, q = trace.graph, trace.q
    gi = {v: i for i, v in enumerate(G.vertices)}
    out = set()
    for v in G.vertices:
        for r in range(1, q + 1):
            if node.residual_mask >> (gi[v] * q + (r - 1)) & 1:
                out.add(_pv(v, r))
    return frozenset(out)


def test_df1_threshold_and_check():
    C5 = Graph.cycle(5)
    assert df1_threshold(C5) == 6
    assert df1_check(C5, 7) and not df1_check(C5, 6)
    assert df1_check(Graph.empty(4), 1)
    assert df1_threshold(Graph.complete(3), "walk") == 6
    assert df1_threshold(Graph.complete(3), "distance") == 4
    with pytest.raises(SquidError):
        df1_check(C5, 0)


def test_squid_validation():
    K2 = Graph.complete(2)
    ok = Squid(body=0, kind="I", rows=(1,), vertices=frozenset({_pv(0, 1), _pv(1, 1)}), witness=1)
    check_squid(ok, K2, 2)
    with pytest.raises(SquidError):  # heart outside the vertex set
        check_squid(Squid(body=0, kind="I", rows=(1,), vertices=frozenset({_pv(0, 2)}), witness=1), K2, 2)
    with pytest.raises(SquidError):  # arms need a witness
        check_squid(Squid(body=0, kind="I", rows=(1,), vertices=frozenset({_pv(0, 1), _pv(1, 1)})), K2, 2)
    with pytest.raises(SquidError):  # kind II rows must be i < j
        check_squid(Squid(body=0, kind="II", rows=(2, 1), vertices=frozenset({_pv(0, 1), _pv(0, 2)})), K2, 2)
    with pytest.raises(SquidError):  # arm off the marked rows
        check_squid(
            Squid(body=0, kind="II", rows=(1, 2), vertices=frozenset({_pv(0, 1), _pv(0, 2), _pv(1, 3)})),
            K2,
            3,
        )
    with pytest.raises(SquidError):  # witness must be adjacent
        check_squid(
            Squid(body=0, kind="I", rows=(1,), vertices=frozenset({_pv(0, 1)}), witness=2),
            Graph.empty(3),
            1,
        )


def test_df_tuple_and_residual_examples():
    K2 = Graph.complete(2)
    empty = DfTuple(K2, 2, (), 2)
    assert residual(empty) == product_with_complete(K2, 2)
    column = Squid(body=0, kind="II", rows=(1, 2), vertices=frozenset({_pv(0, 1), _pv(0, 2)}))
    one = DfTuple(K2, 2, (column,), 2)
    r = residual(one)
    assert r.n == 2 and r.m == 1  # the other column is an edge
    with pytest.raises(SquidError):
        DfTuple(K2, 2, (), 3).validate()  # m > |G|
    with pytest.raises(SquidError):
        DfTuple(K2, 0, (), 1).validate()


def test_run_df1_single_vertex():
    trace = run_df1(Graph.complete(1), 1)
    assert trace.m == 1 and trace.root.level == 1
    cert = extract_certificate(trace)
    assert cert.level == 1
    assert verify_certificate(trace.product(), cert).ok
    bare = trace.root.link_child.squid
    assert bare.witness is None and not bare.arms and bare.kind == "I"


def test_run_df1_requires_threshold():
    with pytest.raises(SquidError):
        run_df1(Graph.cycle(5), 6)


def test_run_df1_edgeless_products():
    for n in range(1, 4):
        for q in (1, 2):
            trace = run_df1(Graph.empty(n), q)
            cert = extract_certificate(trace)
            assert cert.level == n
            assert verify_certificate(trace.product(), cert).ok


def test_run_df1_small_graphs_with_threshold_plus_one():
    for n in range(0, 5):
        for G in all_labeled_graphs(n):
            q = df1_threshold(G) + 1
            trace = run_df1(G, q)
            cert = extract_certificate(trace)
            assert cert.level == G.n
            assert verify_certificate(trace.product(), cert).ok


def test_run_df1_c5_level_five():
    trace = run_df1(Graph.cycle(5), 7)
    cert = extract_certificate(trace)
    assert cert.level == 5
    assert verify_certificate(trace.product(), cert).ok


def _isolated_in(res, pivot, G):
    for pv in res:
        if pv == pivot:
            continue
        if pv.base == pivot.base or (pv.row == pivot.row and G.has_edge(pv.base, pivot.base)):
            return False
    return True


def _assert_squids_admissible(trace):
    degenerate = 0
    for node in trace.nodes():
        if node.pivot is None:
            continue
        res = _residual_set(trace, node)
        for ch in node.arm_children:
            assert squid_admissible(ch.squid, node.pivot, res, trace.graph, trace.q), (
                node.pivot,
                ch.squid,
            )
        link = node.link_child.squid
        if len(link.vertices) == 1 and not link.arms:
            # bare pivot: arises exactly when the pivot is isolated in the
            # residual, where neither membership pattern can apply
            assert _isolated_in(res, node.pivot, trace.graph)
            degenerate += 1
            continue
        assert squid_admissible(link, node.pivot, res, trace.graph, trace.q)
    return degenerate


def test_generated_squids_are_admissible_and_well_formed():
    for n in range(0, 4):
        for G in all_labeled_graphs(n):
            trace = run_df1(G, df1_threshold(G) + 1)
            _assert_squids_admissible(trace)
            for node in trace.nodes():
                for ch in node.arm_children:
                    check_squid(ch.squid, G, trace.q)
                if node.link_child is not None:
                    check_squid(node.link_child.squid, G, trace.q)
    _assert_squids_admissible(run_df1(Graph.cycle(5), 7))


def test_body_columns_leave_residuals():
    trace = run_df1(Graph.cycle(5), 7)
    for node in trace.nodes():
        children = list(node.arm_children)
        if node.link_child is not None:
            children.append(node.link_child)
        for ch in children:
            body = ch.squid.body
            child_res = _residual_set(trace, ch.node)
            assert not any(pv.base == body for pv in child_res)


def test_run_dynamic_p4_example():
    scheme = SizeScheme((1, 1), 20, 5, 2)
    trace = run_dynamic(Graph.path(4), 5, scheme)
    assert trace.m == 2
    assert trace.root.block_row == 1
    assert trace.root.pivot == _pv(0, 1)
    cert = extract_certificate(trace)
    assert cert.level == 2
    assert verify_certificate(trace.product(), cert).ok


def test_run_dynamic_forced_single_block():
    scheme = SizeScheme((1,), 4, 2, 1)
    trace = run_dynamic(Graph.complete(2), 2, scheme)
    assert trace.root.pivot == _pv(0, 1)
    assert trace.root.link_child.squid.hearts[0] == _pv(0, 1)
    cert = extract_certificate(trace)
    assert cert.level == 1 and verify_certificate(trace.product(), cert).ok


def test_run_dynamic_preconditions():
    with pytest.raises(SquidError):
        run_dynamic(Graph.empty(3), 2, SizeScheme((1,), 6, 2, 1))
    with pytest.raises(SquidError):  # scheme q mismatch
        run_dynamic(Graph.complete(2), 3, SizeScheme((1,), 4, 2, 1))
    with pytest.raises(SquidError):  # invalid inequality for the real delta
        run_dynamic(Graph.complete(2), 2, SizeScheme((2, 2), 4, 2, 1))
    with pytest.raises(SquidError):  # budget above the product size
        run_dynamic(Graph.complete(2), 2, SizeScheme((1,), 99, 2, 1))


def test_run_dynamic_row_exhaustion_diagnostic():
    # (2,) validates against n = |product| = 4 but one branch empties row 1
    with pytest.raises(SchemeRunError):
        run_dynamic(Graph.complete(2), 2, SizeScheme((2,), 4, 2, 1))


def test_dynamic_row_choice_rule_per_branch():
    scheme = SizeScheme((1, 1), 20, 5, 2)
    trace = run_dynamic(Graph.path(4), 5, scheme)
    q = trace.q
    for node in trace.nodes():
        if node.pivot is None:
            continue
        # recompute the rule at block boundaries: here every step starts a block
        used = node.rows_used[: node.rows_used.index(node.block_row)]
        res = _residual_set(trace, node)
        counts = {r: sum(1 for pv in res if pv.row == r) for r in range(1, q + 1)}
        unused = [r for r in range(1, q + 1) if r not in used]
        best = max(counts[r] for r in unused)
        assert counts[node.block_row] == best
        assert node.block_row == min(r for r in unused if counts[r] == best)
        assert node.pivot.row == node.block_row
        assert node.pivot.base == min(pv.base for pv in res if pv.row == node.block_row)


def test_trace_json_round_trips():
    for trace in (
        run_df1(Graph.cycle(5), 7),
        run_dynamic(Graph.path(4), 5, SizeScheme((1, 1), 20, 5, 2)),
    ):
        text = trace.to_json()
        again = RemovalTrace.from_json(text)
        assert again.to_json() == text
        assert certificate_to_json(extract_certificate(again)) == certificate_to_json(
            extract_certificate(trace)
        )


def test_trace_from_obj_rejects_corruption():
    trace = run_df1(Graph.complete(2), 3)
    obj = trace.to_obj()
    obj["nodes"][0]["residual_size"] += 1
    with pytest.raises(SquidError):
        RemovalTrace.from_obj(obj)


def test_extract_depth_zero():
    trace = run_df1(Graph.empty(0), 1)
    cert = extract_certificate(trace)
    assert cert.level == 0
    assert verify_certificate(trace.product(), cert).ok
