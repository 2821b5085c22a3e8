"""Recursive vertex-decomposability levels of graphs, with certificates.

A graph is at level 0 unconditionally; an edgeless graph on k vertices is
at level k; and a graph is at level k whenever some pivot v leaves G minus v
at level k and G minus the closed neighborhood of v at level k-1.

Certificates are binary derivation trees mirroring that recursion.  They
are plain immutable values, independently re-checkable by
verify_certificate, and serializable to a nested JSON form with explicit
levels so third parties can re-verify them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Union

from .graphs import Graph, GraphError, delete_vertices, neighbor_masks


class VdError(ValueError):
    """Domain error in the vertex-decomposability machinery."""


class CertificateError(VdError):
    """A certificate is structurally malformed for the requested use."""


@dataclass(frozen=True)
class LeafAny:
    """Certifies any graph at level 0."""

    @property
    def level(self) -> int:
        return 0


@dataclass(frozen=True)
class LeafEdgeless:
    """Certifies the edgeless graph on exactly these vertices, at level |vertices|."""

    vertices: tuple[int, ...]

    @property
    def level(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class Node:
    """Pivot step: delete-child claims the same level, link-child one lower."""

    pivot: int
    delete: "VdCertificate"
    link: "VdCertificate"
    level: int


VdCertificate = Union[LeafAny, LeafEdgeless, Node]


# ---------------------------------------------------------------------------
# Decision procedure
# ---------------------------------------------------------------------------


class _Solver:
    """Bitmask recursion over the induced subgraphs of one root graph.

    Memoized on (vertex bitmask, level); bit i is the i-th smallest label.
    All entries are immutable once computed, so a solver can be shared.
    """

    def __init__(self, G: Graph):
        self.verts, self.index, self.nbr = neighbor_masks(G)
        self.closed = [m | (1 << i) for i, m in enumerate(self.nbr)]
        self.full = (1 << len(self.verts)) - 1
        self._memo: dict[tuple[int, int], bool] = {}
        self._edgeless: dict[int, bool] = {}

    def edgeless(self, mask: int) -> bool:
        cached = self._edgeless.get(mask)
        if cached is not None:
            return cached
        rest = mask
        result = True
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            if self.nbr[i] & mask:
                result = False
                break
            rest ^= low
        self._edgeless[mask] = result
        return result

    def vd(self, mask: int, k: int) -> bool:
        if k == 0:
            return True
        size = bin(mask).count("1")
        if k > size:
            return False
        key = (mask, k)
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        if self.edgeless(mask):
            self._memo[key] = True
            return True
        # pivot heuristic: high residual degree first, label order as tie-break
        bits = []
        rest = mask
        while rest:
            low = rest & -rest
            i = low.bit_length() - 1
            bits.append((-bin(self.nbr[i] & mask).count("1"), i))
            rest ^= low
        bits.sort()
        result = False
        for _, i in bits:
            if self.vd(mask & ~(1 << i), k) and self.vd(mask & ~self.closed[i], k - 1):
                result = True
                break
        self._memo[key] = result
        return result


_solvers: dict[Graph, _Solver] = {}


def _solver(G: Graph) -> _Solver:
    s = _solvers.get(G)
    if s is None:
        s = _Solver(G)
        _solvers[G] = s
    return s


def is_vd(G: Graph, k: int) -> bool:
    """Whether G satisfies the level-k recursion. Deterministic, memoized."""
    if k < 0:
        raise VdError(f"level must be non-negative, got {k}")
    s = _solver(G)
    return s.vd(s.full, k)


def max_vd(G: Graph) -> int:
    """Largest k with is_vd(G, k); well-defined since levels are downward closed."""
    s = _solver(G)
    best = 0
    for k in range(1, G.n + 1):
        if not s.vd(s.full, k):
            break
        best = k
    return best


# ---------------------------------------------------------------------------
# Certificate verification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertCheck:
    """Outcome of verify_certificate; path locates the failing branch."""

    ok: bool
    path: tuple[str, ...] = ()
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(G: Graph, cert: VdCertificate) -> CertCheck:
    """Check a certificate tree against G by replaying its deletions.

    Leaves are matched against the actual induced subgraph reached along
    the path; node levels must agree with both children.  Runs once per
    distinct (subtree, subgraph) pair, so shared subtrees verify in time
    polynomial in the tree's unique size.
    """
    s = _solver(G)
    seen: set[tuple[int, int]] = set()
    stack: list[tuple[VdCertificate, int, tuple[str, ...]]] = [(cert, s.full, ())]
    while stack:
        c, mask, path = stack.pop()
        key = (id(c), mask)
        if key in seen:
            continue
        seen.add(key)
        if isinstance(c, LeafAny):
            continue
        if isinstance(c, LeafEdgeless):
            actual = frozenset(s.verts[i] for i in range(len(s.verts)) if mask >> i & 1)
            if actual != frozenset(c.vertices):
                return CertCheck(False, path, "edgeless leaf lists a different vertex set")
            if not s.edgeless(mask):
                return CertCheck(False, path, "edgeless leaf but the subgraph has an edge")
            continue
        if isinstance(c, Node):
            if c.level < 1:
                return CertCheck(False, path, f"pivot node at level {c.level}")
            i = s.index.get(c.pivot)
            if i is None or not mask >> i & 1:
                return CertCheck(False, path, f"pivot {c.pivot} not in the subgraph")
            if c.delete.level != c.level:
                return CertCheck(
                    False, path, f"delete child claims {c.delete.level}, expected {c.level}"
                )
            if c.link.level != c.level - 1:
                return CertCheck(
                    False, path, f"link child claims {c.link.level}, expected {c.level - 1}"
                )
            stack.append((c.delete, mask & ~(1 << i), path + (f"del@{c.pivot}",)))
            stack.append((c.link, mask & ~s.closed[i], path + (f"link@{c.pivot}",)))
            continue
        return CertCheck(False, path, f"unknown certificate object {type(c).__name__}")
    return CertCheck(True)


# ---------------------------------------------------------------------------
# Certificate constructions
# ---------------------------------------------------------------------------


def edgeless_certificate(vertices, k: int) -> VdCertificate:
    """Certificate for the edgeless graph on these vertices at level k <= n."""
    verts = tuple(sorted(vertices))
    if k < 0 or k > len(verts):
        raise VdError(f"edgeless graph on {len(verts)} vertices is not at level {k}")
    memo: dict[tuple[int, int], VdCertificate] = {}

    def rec(n_kept: int, kk: int) -> VdCertificate:
        # vertices used are always the last n_kept of verts (smallest removed first)
        if kk == 0:
            return LeafAny()
        sub = verts[len(verts) - n_kept :]
        if kk == n_kept:
            return LeafEdgeless(sub)
        key = (n_kept, kk)
        got = memo.get(key)
        if got is None:
            got = Node(sub[0], rec(n_kept - 1, kk), rec(n_kept - 1, kk - 1), kk)
            memo[key] = got
        return got

    return rec(len(verts), k)


def _level1_certificate(G: Graph) -> VdCertificate:
    """Any nonempty graph is at level 1: peel minimum-label vertices."""
    if G.n == 0:
        raise VdError("the empty graph is not at level 1")
    if G.is_edgeless():
        return edgeless_certificate(G.vertices, 1)
    v = G.vertices[0]
    return Node(v, _level1_certificate(delete_vertices(G, [v])), LeafAny(), 1)


def lift_isolated(G: Graph, v: int, cert: VdCertificate) -> VdCertificate:
    """Raise a certificate for G minus an isolated vertex v by one level.

    cert must certify G minus v at some level k-1; the result certifies G
    at level k, rebuilt along cert's own pivots (each subgraph keeps v
    isolated, so the rewrite recurses structurally).
    """
    if v not in G:
        raise GraphError(f"vertex {v} not in the graph")
    if G.neighbors(v):
        raise GraphError(f"vertex {v} is not isolated")
    memo: dict[tuple[Graph, int], VdCertificate] = {}

    def rec(H: Graph, c: VdCertificate) -> VdCertificate:
        key = (H, id(c))
        got = memo.get(key)
        if got is not None:
            return got
        if H.is_edgeless():
            out: VdCertificate = edgeless_certificate(H.vertices, c.level + 1)
        elif isinstance(c, LeafAny):
            out = _level1_certificate(H)
        elif isinstance(c, LeafEdgeless):
            raise CertificateError("edgeless leaf given for a graph with edges")
        else:
            u = c.pivot
            if u not in H or u == v:
                raise CertificateError(f"pivot {u} does not exist in the lifted graph")
            del_lift = rec(delete_vertices(H, [u]), c.delete)
            link_lift = rec(delete_vertices(H, H.neighbors(u) | {u}), c.link)
            out = Node(u, del_lift, link_lift, c.level + 1)
        memo[key] = out
        return out

    return rec(G, cert)


def assemble_pivot_decomposition(
    G: Graph,
    pivot: int,
    order: list[int],
    arm_certs: list[VdCertificate],
    link_cert: VdCertificate,
    level: int,
) -> VdCertificate:
    """Certificate for G at `level` from certificates one level down.

    order must enumerate the open neighborhood of pivot; arm_certs[i] must
    certify G minus (closed neighborhood of order[i], plus order[:i]) and
    link_cert must certify G minus the closed neighborhood of pivot, all at
    level-1.  The construction peels order back-to-front and raises the
    isolated pivot on the stripped core.
    """
    if set(order) != set(G.neighbors(pivot)):
        raise VdError("order must enumerate the pivot's open neighborhood")
    if len(arm_certs) != len(order):
        raise VdError("one arm certificate per neighbor is required")
    if link_cert.level != level - 1 or any(c.level != level - 1 for c in arm_certs):
        raise VdError("all ingredient certificates must claim level-1")
    core = delete_vertices(G, order)
    cert = lift_isolated(core, pivot, link_cert)
    for u, arm in zip(reversed(order), reversed(arm_certs)):
        cert = Node(u, cert, arm, level)
    return cert


def build_certificate_degree_bound(G: Graph) -> VdCertificate:
    """Constructive certificate at level floor(n / 2*maxdeg).

    Follows the inductive peeling proof: fix the smallest-label pivot,
    recurse on the closed-neighborhood deletion and on the neighbor-chain
    deletions, then assemble.  An edgeless graph short-circuits to its
    edgeless leaf at level n.
    """
    delta = G.max_degree()
    if delta == 0:
        return LeafEdgeless(G.vertices)
    target = G.n // (2 * delta)
    memo: dict[tuple[Graph, int], VdCertificate] = {}

    def build(H: Graph, k: int) -> VdCertificate:
        if k == 0:
            return LeafAny()
        if H.is_edgeless():
            return edgeless_certificate(H.vertices, k)
        key = (H, k)
        got = memo.get(key)
        if got is not None:
            return got
        v = H.vertices[0]
        order = sorted(H.neighbors(v))
        link_cert = build(delete_vertices(H, H.neighbors(v) | {v}), k - 1)
        arm_certs = []
        for i, u in enumerate(order):
            drop = (H.neighbors(u) | {u}) | set(order[:i])
            arm_certs.append(build(delete_vertices(H, drop), k - 1))
        cert = assemble_pivot_decomposition(H, v, order, arm_certs, link_cert, k)
        memo[key] = cert
        return cert

    return build(G, target)


# ---------------------------------------------------------------------------
# JSON form
# ---------------------------------------------------------------------------
#
# {"leaf": "any", "level": 0}
# {"leaf": "edgeless", "level": k, "vertices": [...]}
# {"level": k, "node": {"del": ..., "link": ..., "pivot": v}}
#
# Keys are emitted in sorted order and levels are always explicit.


def certificate_to_json(cert: VdCertificate) -> str:
    parts: list[str] = []
    stack: list[object] = [cert]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        elif isinstance(item, LeafAny):
            parts.append('{"leaf":"any","level":0}')
        elif isinstance(item, LeafEdgeless):
            verts = ",".join(str(v) for v in item.vertices)
            parts.append(f'{{"leaf":"edgeless","level":{item.level},"vertices":[{verts}]}}')
        elif isinstance(item, Node):
            parts.append(f'{{"level":{item.level},"node":{{"del":')
            stack.append(f',"pivot":{item.pivot}}}}}')
            stack.append(item.link)
            stack.append(',"link":')
            stack.append(item.delete)
        else:
            raise CertificateError(f"cannot serialize {type(item).__name__}")
    return "".join(parts)


def certificate_from_obj(obj) -> VdCertificate:
    done: list[VdCertificate] = []
    stack: list[tuple[dict, bool]] = [(obj, False)]
    while stack:
        o, expanded = stack.pop()
        if not isinstance(o, dict):
            raise CertificateError("certificate JSON nodes must be objects")
        leaf = o.get("leaf")
        if leaf == "any":
            if o.get("level", 0) != 0:
                raise CertificateError("leaf 'any' must be at level 0")
            done.append(LeafAny())
        elif leaf == "edgeless":
            verts = tuple(sorted(int(v) for v in o.get("vertices", [])))
            if o.get("level", len(verts)) != len(verts):
                raise CertificateError("edgeless leaf level must equal its vertex count")
            done.append(LeafEdgeless(verts))
        elif "node" in o:
            if expanded:
                link = done.pop()
                delete = done.pop()
                level = o.get("level", link.level + 1)
                done.append(Node(int(o["node"]["pivot"]), delete, link, int(level)))
            else:
                stack.append((o, True))
                stack.append((o["node"]["link"], False))
                stack.append((o["node"]["del"], False))
        else:
            raise CertificateError(f"unrecognized certificate object with keys {sorted(o)}")
    if len(done) != 1:
        raise CertificateError("malformed certificate nesting")
    return done[0]


def certificate_from_json(text: str) -> VdCertificate:
    return certificate_from_obj(json.loads(text))
