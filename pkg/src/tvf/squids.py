"""Squid removal on products G x K_q, and certificate extraction.

A squid with body w is a structured subset of V(G x K_q): part of w's
column plus "arms" confined to one row (kind I, anchored by an adjacent
witness vertex) or to two rows (kind II).  Removal schedules delete one
squid per step; the branching recursion below mirrors the inductive proof
that such schedules certify decomposability levels of the residual:

  at a node with residual H and level L >= 1, pick a pivot (v, i), order
  its H-neighbors w_1..w_n with the row neighbors first, and branch on

    S'_l = N(w_l) in H, plus {w_1..w_l}          (one child per neighbor)
    S''  = closed neighborhood of (v, i) in H    (the "link" child)

  each child recursing at level L-1.  The S'_l child's residual equals
  H minus (closed nbhd of w_l, plus w_1..w_{l-1}) and the S'' child's
  equals H minus the pivot's closed neighborhood, which is exactly what
  assemble_pivot_decomposition needs, so a complete trace converts into a
  VdCertificate for the whole product at the root level.

Every generated squid empties its body's column from the child residual,
and satisfies one of the two admissibility patterns (squid_admissible)
except the degenerate bare-pivot squid at an isolated residual pivot.

Two pivot rules are provided: run_df1 takes the lexicographically smallest
residual vertex (valid whenever q > |N2(v)| + 2|N(v)| for every v), and
run_dynamic follows a block-size scheme, choosing at each block start the
top-most surviving row with the most preserved vertices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .graphs import (
    Graph,
    ProductVertex,
    distance_two_set,
    neighbor_masks,
    product_with_complete,
)
from .schemes import SizeScheme, validate_scheme
from .vd import VdCertificate, LeafAny, assemble_pivot_decomposition


class SquidError(ValueError):
    """Domain error in squid or removal-trace handling."""


class TheoremViolation(SquidError):
    """A residual emptied early; indicates a bug or a failed hypothesis."""


class SchemeRunError(SquidError):
    """The dynamic row choice found no usable row: scheme/graph mismatch."""


# ---------------------------------------------------------------------------
# Squids and DF-tuples
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Squid:
    """Vertex subset of G x K_q with body/heart bookkeeping.

    kind "I": arms lie on one row inside the neighborhoods of the body and
    an adjacent witness; single heart (body, row).  kind "II": arms lie on
    two rows inside the body's neighborhood; hearts on both rows.  witness
    is None only for armless squids (whole squid inside the body column).
    """

    body: int
    kind: str
    rows: tuple[int, ...]
    vertices: frozenset[ProductVertex]
    witness: Optional[int] = None

    @property
    def hearts(self) -> tuple[ProductVertex, ...]:
        return tuple(ProductVertex(self.body, r) for r in self.rows)

    @property
    def arms(self) -> tuple[ProductVertex, ...]:
        return tuple(sorted(pv for pv in self.vertices if pv.base != self.body))

    @property
    def body_rows(self) -> tuple[int, ...]:
        return tuple(sorted(pv.row for pv in self.vertices if pv.base == self.body))

    def to_obj(self) -> dict:
        return {
            "arms": [[pv.base, pv.row] for pv in self.arms],
            "body": self.body,
            "body_rows": list(self.body_rows),
            "hearts": [[pv.base, pv.row] for pv in self.hearts],
            "kind": self.kind,
            "rows": list(self.rows),
            "witness": self.witness,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "Squid":
        try:
            body = int(obj["body"])
            vertices = {ProductVertex(int(b), int(r)) for b, r in obj["arms"]}
            vertices.update(ProductVertex(body, int(r)) for r in obj["body_rows"])
            witness = obj.get("witness")
            return cls(
                body=body,
                kind=str(obj["kind"]),
                rows=tuple(int(r) for r in obj["rows"]),
                vertices=frozenset(vertices),
                witness=None if witness is None else int(witness),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise SquidError(f"malformed squid object: {exc}") from exc


def check_squid(s: Squid, G: Graph, q: int) -> None:
    """Raise SquidError unless s is a well-formed squid over G x K_q."""
    if s.body not in G:
        raise SquidError(f"body {s.body} is not a vertex of G")
    for pv in s.vertices:
        if pv.base not in G or not 1 <= pv.row <= q:
            raise SquidError(f"{pv} is not a vertex of the product")
    for h in s.hearts:
        if h not in s.vertices:
            raise SquidError(f"heart {h} is outside the squid's vertex set")
    arms = s.arms
    if s.kind == "I":
        if len(s.rows) != 1:
            raise SquidError("kind I squids mark exactly one row")
        (i,) = s.rows
        if s.witness is None:
            if arms:
                raise SquidError("kind I squids with arms need an adjacent witness")
        else:
            if not G.has_edge(s.witness, s.body):
                raise SquidError(f"witness {s.witness} is not adjacent to body {s.body}")
            allowed = G.neighbors(s.witness) | G.neighbors(s.body)
            for pv in arms:
                if pv.row != i or pv.base not in allowed:
                    raise SquidError(f"arm {pv} outside the kind I pattern")
    elif s.kind == "II":
        if len(s.rows) != 2 or not s.rows[0] < s.rows[1]:
            raise SquidError("kind II squids mark a row pair i < j")
        allowed = G.neighbors(s.body)
        for pv in arms:
            if pv.row not in s.rows or pv.base not in allowed:
                raise SquidError(f"arm {pv} outside the kind II pattern")
    else:
        raise SquidError(f"unknown squid kind {s.kind!r}")


@dataclass(frozen=True)
class DfTuple:
    """State of a removal schedule: (G, q, j, squids, m) with |G| >= m >= j >= 0."""

    G: Graph
    q: int
    squids: tuple[Squid, ...]
    m: int

    @property
    def j(self) -> int:
        return len(self.squids)

    def validate(self) -> None:
        if self.q < 1:
            raise SquidError(f"q must be positive, got {self.q}")
        if not self.G.n >= self.m >= self.j >= 0:
            raise SquidError(
                f"need |G| >= m >= j >= 0, got |G|={self.G.n}, m={self.m}, j={self.j}"
            )
        for s in self.squids:
            check_squid(s, self.G, self.q)


def residual(t: DfTuple) -> Graph:
    """Induced subgraph of G x K_q on the vertices no squid covers."""
    t.validate()
    P = product_with_complete(t.G, t.q)
    covered = set()
    for s in t.squids:
        for pv in s.vertices:
            covered.add(t.G.vertices.index(pv.base) * t.q + (pv.row - 1))
    keep = [v for v in P.vertices if v not in covered]
    keepset = set(keep)
    return Graph(keep, [(u, v) for u, v in P.edges if u in keepset and v in keepset])


# ---------------------------------------------------------------------------
# Pivot-rule preconditions
# ---------------------------------------------------------------------------


def df1_threshold(G: Graph, mode: str = "walk") -> int:
    """max over v of |N2(v)| + 2|N(v)|; any q above it admits run_df1."""
    return max(
        (len(distance_two_set(G, v, mode)) + 2 * len(G.neighbors(v)) for v in G.vertices),
        default=0,
    )


def df1_check(G: Graph, q: int, mode: str = "walk") -> bool:
    """Strict inequality q > |N2(v)| + 2|N(v)| at every vertex."""
    if q < 1:
        raise SquidError(f"q must be positive, got {q}")
    return q > df1_threshold(G, mode)


# ---------------------------------------------------------------------------
# Removal traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TraceChild:
    squid: Squid
    node: "TraceNode"
    w: Optional[ProductVertex] = None  # the neighbor consumed; None on the link child


@dataclass(frozen=True)
class TraceNode:
    level: int
    residual_mask: int
    pivot: Optional[ProductVertex] = None
    arm_children: tuple[TraceChild, ...] = ()
    link_child: Optional[TraceChild] = None
    block_row: Optional[int] = None  # dynamic runs: the row of the active block
    rows_used: Optional[tuple[int, ...]] = None  # dynamic runs: block rows so far

    @property
    def residual_size(self) -> int:
        return bin(self.residual_mask).count("1")


@dataclass(frozen=True)
class RemovalTrace:
    graph: Graph
    q: int
    m: int
    kind: str  # "df1" | "dynamic"
    root: TraceNode
    mode: str = "walk"
    scheme: Optional[SizeScheme] = None

    def product(self) -> Graph:
        return product_with_complete(self.graph, self.q)

    def nodes(self) -> list[TraceNode]:
        """Unique nodes in depth-first preorder from the root."""
        seen: dict[int, TraceNode] = {}
        order: list[TraceNode] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if id(node) in seen:
                continue
            seen[id(node)] = node
            order.append(node)
            children = list(node.arm_children)
            if node.link_child is not None:
                children.append(node.link_child)
            for child in reversed(children):
                stack.append(child.node)
        return order

    def to_obj(self) -> dict:
        ids: dict[int, int] = {}
        nodes = self.nodes()
        for i, node in enumerate(nodes):
            ids[id(node)] = i
        node_objs = []
        for i, node in enumerate(nodes):
            obj = {
                "children": [
                    {
                        "node": ids[id(ch.node)],
                        "squid": ch.squid.to_obj(),
                        "w": [ch.w.base, ch.w.row],
                    }
                    for ch in node.arm_children
                ],
                "id": i,
                "level": node.level,
                "link": (
                    None
                    if node.link_child is None
                    else {
                        "node": ids[id(node.link_child.node)],
                        "squid": node.link_child.squid.to_obj(),
                    }
                ),
                "pivot": None if node.pivot is None else [node.pivot.base, node.pivot.row],
                "residual_size": node.residual_size,
            }
            if self.kind == "dynamic":
                obj["block_row"] = node.block_row
                obj["rows_used"] = None if node.rows_used is None else list(node.rows_used)
            node_objs.append(obj)
        return {
            "graph": {"edges": [list(e) for e in self.graph.edges], "vertices": list(self.graph.vertices)},
            "kind": self.kind,
            "m": self.m,
            "mode": self.mode,
            "nodes": node_objs,
            "q": self.q,
            "root": 0,
            "scheme": None if self.scheme is None else self.scheme.to_obj(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_obj(cls, obj: dict) -> "RemovalTrace":
        try:
            G = Graph(obj["graph"]["vertices"], [tuple(e) for e in obj["graph"]["edges"]])
            q = int(obj["q"])
            m = int(obj["m"])
            kind = str(obj["kind"])
            node_objs = obj["nodes"]
            root_id = int(obj["root"])
            scheme = None if obj.get("scheme") is None else SizeScheme.from_obj(obj["scheme"])
        except (KeyError, TypeError, ValueError) as exc:
            raise SquidError(f"malformed trace object: {exc}") from exc
        gi = {v: i for i, v in enumerate(G.vertices)}
        full = (1 << (G.n * q)) - 1

        def squid_mask(s: Squid) -> int:
            mask = 0
            for pv in s.vertices:
                mask |= 1 << (gi[pv.base] * q + (pv.row - 1))
            return mask

        built: dict[int, TraceNode] = {}

        def build(idx: int, mask: int) -> TraceNode:
            if idx in built:
                node = built[idx]
                if node.residual_mask != mask:
                    raise SquidError(f"node {idx} is reached with two different residuals")
                return node
            o = node_objs[idx]
            if o["residual_size"] != bin(mask).count("1"):
                raise SquidError(f"node {idx}: residual size does not replay")
            arm_children = []
            for ch in o["children"]:
                s = Squid.from_obj(ch["squid"])
                child = build(int(ch["node"]), mask & ~squid_mask(s))
                arm_children.append(
                    TraceChild(squid=s, node=child, w=ProductVertex(*ch["w"]))
                )
            link_child = None
            if o.get("link") is not None:
                s = Squid.from_obj(o["link"]["squid"])
                link_child = TraceChild(
                    squid=s, node=build(int(o["link"]["node"]), mask & ~squid_mask(s))
                )
            pivot = None if o["pivot"] is None else ProductVertex(*o["pivot"])
            rows_used = o.get("rows_used")
            node = TraceNode(
                level=int(o["level"]),
                residual_mask=mask,
                pivot=pivot,
                arm_children=tuple(arm_children),
                link_child=link_child,
                block_row=o.get("block_row"),
                rows_used=None if rows_used is None else tuple(rows_used),
            )
            built[idx] = node
            return node

        root = build(root_id, full)
        return cls(graph=G, q=q, m=m, kind=kind, root=root, mode=obj.get("mode", "walk"), scheme=scheme)

    @classmethod
    def from_json(cls, text: str) -> "RemovalTrace":
        return cls.from_obj(json.loads(text))


# ---------------------------------------------------------------------------
# The removal engine
# ---------------------------------------------------------------------------


class _Engine:
    def __init__(self, G: Graph, q: int):
        self.G = G
        self.q = q
        self.P = product_with_complete(G, q)
        _, _, self.nbr = neighbor_masks(self.P)
        self.total = G.n * q
        self.full = (1 << self.total) - 1
        self.base_of = [G.vertices[lab // q] for lab in range(self.total)]
        self.row_of = [lab % q + 1 for lab in range(self.total)]
        self.gi = {v: i for i, v in enumerate(G.vertices)}
        self._graphs: dict[int, Graph] = {}

    def pv(self, label: int) -> ProductVertex:
        return ProductVertex(self.base_of[label], self.row_of[label])

    def label(self, pv: ProductVertex) -> int:
        return self.gi[pv.base] * self.q + (pv.row - 1)

    def column_mask(self, base: int) -> int:
        return ((1 << self.q) - 1) << (self.gi[base] * self.q)

    def pv_set(self, mask: int) -> frozenset[ProductVertex]:
        out = []
        while mask:
            low = mask & -mask
            out.append(self.pv(low.bit_length() - 1))
            mask ^= low
        return frozenset(out)

    def subgraph(self, mask: int) -> Graph:
        got = self._graphs.get(mask)
        if got is None:
            keep = [lab for lab in range(self.total) if mask >> lab & 1]
            keepset = set(keep)
            got = Graph(keep, [(u, v) for u, v in self.P.edges if u in keepset and v in keepset])
            self._graphs[mask] = got
        return got

    def classify_arm_squid(self, w_label: int, pivot_label: int, squid_mask: int) -> Squid:
        v, i = self.base_of[pivot_label], self.row_of[pivot_label]
        wb, wr = self.base_of[w_label], self.row_of[w_label]
        if wr == i and wb != v:
            # row neighbor: one-row squid with body w and the pivot as witness
            return Squid(
                body=wb, kind="I", rows=(i,), vertices=self.pv_set(squid_mask), witness=v
            )
        # column neighbor: two-row squid with the pivot's body
        lo, hi = min(i, wr), max(i, wr)
        return Squid(body=v, kind="II", rows=(lo, hi), vertices=self.pv_set(squid_mask))

    def classify_link_squid(self, pivot_label: int, squid_mask: int) -> Squid:
        v, i = self.base_of[pivot_label], self.row_of[pivot_label]
        verts = self.pv_set(squid_mask)
        nbrs = sorted(self.G.neighbors(v))
        if nbrs:
            return Squid(body=v, kind="I", rows=(i,), vertices=verts, witness=nbrs[0])
        other_rows = sorted(pv.row for pv in verts if pv.row != i)
        if other_rows:
            lo, hi = min(i, other_rows[0]), max(i, other_rows[0])
            return Squid(body=v, kind="II", rows=(lo, hi), vertices=verts)
        # bare pivot: isolated body with nothing else left in its column
        return Squid(body=v, kind="I", rows=(i,), vertices=verts, witness=None)

    def expand(self, mask: int, pivot_label: int):
        """Child squids of a node: (w, squid, child_mask) per neighbor, then
        the closed-neighborhood link squid. Asserts the body-column condition."""
        i_row = self.row_of[pivot_label]
        v_base = self.base_of[pivot_label]
        nb = self.nbr[pivot_label] & mask
        row_nb = []
        col_nb = []
        rest = nb
        while rest:
            low = rest & -rest
            lab = low.bit_length() - 1
            if self.row_of[lab] == i_row:
                row_nb.append(lab)
            else:
                col_nb.append(lab)
            rest ^= low
        order = sorted(row_nb) + sorted(col_nb)
        arm_out = []
        prefix = 0
        for w in order:
            prefix |= 1 << w
            squid_mask = (self.nbr[w] & mask) | prefix
            child_mask = mask & ~squid_mask
            squid = self.classify_arm_squid(w, pivot_label, squid_mask)
            if self.column_mask(squid.body) & child_mask:
                raise SquidError("engine invariant broken: body column survived removal")
            arm_out.append((w, squid, child_mask))
        link_mask = nb | (1 << pivot_label)
        link_squid = self.classify_link_squid(pivot_label, link_mask)
        link_child_mask = mask & ~link_mask
        if self.column_mask(v_base) & link_child_mask:
            raise SquidError("engine invariant broken: pivot column survived removal")
        return arm_out, link_squid, link_child_mask


def run_df1(G: Graph, q: int, mode: str = "walk") -> RemovalTrace:
    """Full branching removal of |V(G)| squids with the lexicographic pivot.

    Requires df1_check(G, q, mode).  Every residual met above level 0 is
    checked nonempty at runtime (that nonemptiness is the substance of the
    pivot rule's validity).
    """
    if not df1_check(G, q, mode):
        raise SquidError(
            f"q={q} does not exceed the threshold {df1_threshold(G, mode)} for this graph"
        )
    eng = _Engine(G, q)
    m = G.n
    memo: dict[tuple[int, int], TraceNode] = {}

    def explore(mask: int, level: int) -> TraceNode:
        key = (mask, level)
        got = memo.get(key)
        if got is not None:
            return got
        if level == 0:
            node = TraceNode(level=0, residual_mask=mask)
        else:
            if mask == 0:
                raise TheoremViolation(
                    f"residual emptied with {level} removal steps still to go"
                )
            pivot_label = (mask & -mask).bit_length() - 1
            arms, link_squid, link_mask = eng.expand(mask, pivot_label)
            arm_children = tuple(
                TraceChild(squid=s, node=explore(cm, level - 1), w=eng.pv(w))
                for w, s, cm in arms
            )
            link_child = TraceChild(squid=link_squid, node=explore(link_mask, level - 1))
            node = TraceNode(
                level=level,
                residual_mask=mask,
                pivot=eng.pv(pivot_label),
                arm_children=arm_children,
                link_child=link_child,
            )
        memo[key] = node
        return node

    root = explore(eng.full, m)
    return RemovalTrace(graph=G, q=q, m=m, kind="df1", root=root, mode=mode)


def run_dynamic(G: Graph, q: int, scheme: SizeScheme) -> RemovalTrace:
    """Blockwise removal: block l removes scheme.sizes[l-1] squids with
    hearts on one row, chosen at each block start as the smallest-index
    unused row with the most surviving vertices; within a block the pivot is
    the smallest surviving base vertex on that row.

    The scheme is re-validated exactly against its own declared budget n
    (bounded by the product size) with the graph's true maximum degree; a
    mid-run exhausted row still raises the scheme-infeasible diagnostic,
    which certificate verification backstops.
    """
    delta = G.max_degree()
    if delta < 1:
        raise SquidError("dynamic removal needs max degree >= 1 (scheme validation requires it)")
    if scheme.q != q:
        raise SquidError(f"scheme was declared for q={scheme.q}, run requested q={q}")
    if scheme.n > G.n * q:
        raise SquidError(
            f"scheme budget n={scheme.n} exceeds the product size {G.n * q}"
        )
    check = validate_scheme(scheme.sizes, scheme.n, q, delta)
    if not check.ok:
        raise SquidError(f"scheme is not valid for this graph: {check.reason}")
    m = sum(scheme.sizes)
    if m > G.n:
        raise SquidError(f"scheme removes {m} squids but the tuple bound needs m <= |G| = {G.n}")
    cumulative = []
    total = 0
    for s in scheme.sizes:
        total += s
        cumulative.append(total)
    eng = _Engine(G, q)
    memo: dict[tuple[int, int, tuple[int, ...]], TraceNode] = {}

    def block_of(step: int) -> int:
        for bi, cum in enumerate(cumulative, start=1):
            if step <= cum:
                return bi
        raise AssertionError("step beyond the scheme")

    def row_counts(mask: int) -> dict[int, int]:
        counts = {r: 0 for r in range(1, q + 1)}
        rest = mask
        while rest:
            low = rest & -rest
            counts[eng.row_of[low.bit_length() - 1]] += 1
            rest ^= low
        return counts

    def explore(mask: int, depth: int, rows: tuple[int, ...]) -> TraceNode:
        level = m - depth
        key = (mask, depth, rows)
        got = memo.get(key)
        if got is not None:
            return got
        if depth == m:
            node = TraceNode(level=0, residual_mask=mask, rows_used=rows)
        else:
            step = depth + 1
            block = block_of(step)
            if block > len(rows):
                counts = row_counts(mask)
                unused = [r for r in range(1, q + 1) if r not in rows]
                best = max((counts[r] for r in unused), default=0)
                if best == 0:
                    raise SchemeRunError(
                        f"no unused row has surviving vertices at step {step}"
                    )
                chosen = min(r for r in unused if counts[r] == best)
                rows = rows + (chosen,)
            row = rows[block - 1]
            candidates = [
                lab
                for lab in range(eng.total)
                if mask >> lab & 1 and eng.row_of[lab] == row
            ]
            if not candidates:
                raise SchemeRunError(
                    f"block {block} row {row} has no surviving vertices at step {step}"
                )
            pivot_label = min(candidates)  # smallest base vertex on the block row
            arms, link_squid, link_mask = eng.expand(mask, pivot_label)
            arm_children = tuple(
                TraceChild(squid=s, node=explore(cm, depth + 1, rows), w=eng.pv(w))
                for w, s, cm in arms
            )
            link_child = TraceChild(
                squid=link_squid, node=explore(link_mask, depth + 1, rows)
            )
            node = TraceNode(
                level=level,
                residual_mask=mask,
                pivot=eng.pv(pivot_label),
                arm_children=arm_children,
                link_child=link_child,
                block_row=row,
                rows_used=rows,
            )
        memo[key] = node
        return node

    root = explore(eng.full, 0, ())
    return RemovalTrace(graph=G, q=q, m=m, kind="dynamic", root=root, scheme=scheme)


# ---------------------------------------------------------------------------
# Certificate extraction
# ---------------------------------------------------------------------------


def extract_certificate(trace: RemovalTrace) -> VdCertificate:
    """Convert a complete trace into a certificate for G x K_q at level m.

    Each node's children supply exactly the ingredient certificates of the
    pivot decomposition (neighbor-chain deletions and the closed-neighborhood
    deletion), assembled bottom-up with subtree sharing per (residual, level).
    """
    eng = _Engine(trace.graph, trace.q)
    cache: dict[tuple[int, int], VdCertificate] = {}

    def certify(node: TraceNode) -> VdCertificate:
        key = (node.residual_mask, node.level)
        got = cache.get(key)
        if got is not None:
            return got
        if node.level == 0:
            cert: VdCertificate = LeafAny()
        else:
            if node.pivot is None or node.link_child is None:
                raise SquidError(f"trace incomplete at level {node.level}")
            arm_certs = [certify(ch.node) for ch in node.arm_children]
            link_cert = certify(node.link_child.node)
            H = eng.subgraph(node.residual_mask)
            order = [eng.label(ch.w) for ch in node.arm_children]
            cert = assemble_pivot_decomposition(
                H, eng.label(node.pivot), order, arm_certs, link_cert, node.level
            )
        cache[key] = cert
        return cert

    return certify(trace.root)


# ---------------------------------------------------------------------------
# Admissibility of generated squids (the two membership patterns)
# ---------------------------------------------------------------------------


def _product_neighbors(G: Graph, q: int, residual: frozenset[ProductVertex], pv: ProductVertex):
    out = set()
    for u in G.neighbors(pv.base):
        cand = ProductVertex(u, pv.row)
        if cand in residual:
            out.add(cand)
    for r in range(1, q + 1):
        if r != pv.row:
            cand = ProductVertex(pv.base, r)
            if cand in residual:
                out.add(cand)
    return out


def squid_admissible(
    squid: Squid, pivot: ProductVertex, residual: frozenset[ProductVertex], G: Graph, q: int
) -> bool:
    """Whether the squid fits one of the two admissible patterns at this pivot:

    (a) inside N((v,i)) union N((v,j)) for some residual (v,j) in the
        pivot's column, or
    (b) inside (N((v,i)) restricted to row i) union N((u,i)) for some
        residual row neighbor (u,i) with u adjacent to v,

    all neighborhoods taken in the residual.
    """
    if pivot not in residual:
        raise SquidError("pivot must lie in the residual")
    S = set(squid.vertices)
    v, i = pivot
    piv_nb = _product_neighbors(G, q, residual, pivot)
    for r in range(1, q + 1):
        other = ProductVertex(v, r)
        if other in residual:
            if S <= piv_nb | _product_neighbors(G, q, residual, other):
                return True
    row_part = {pv for pv in piv_nb if pv.row == i}
    for u in G.neighbors(v):
        mate = ProductVertex(u, i)
        if mate in residual:
            if S <= row_part | _product_neighbors(G, q, residual, mate):
                return True
    return False
