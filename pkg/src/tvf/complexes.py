"""Simplicial complexes stored by their facets, and the checks built on them.

Covers independence complexes, skeleta, links and deletions, vertex
decomposability with shelling-order extraction, an independent shelling
validator, and reduced rational Betti numbers via exact boundary-matrix
ranks.  Face enumeration is budgeted (faces of product graphs explode);
the default cap is 2e6 generated faces.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import BudgetExceeded
from .graphs import Graph

DEFAULT_FACE_BUDGET = 2_000_000

Face = tuple[int, ...]


class ComplexError(ValueError):
    """Domain error in a simplicial-complex operation."""


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, amount: int = 1) -> None:
        self.used += amount
        if self.used > self.limit:
            raise BudgetExceeded(
                f"face budget exceeded ({self.used} > {self.limit})", self.used, self.limit
            )


def _maximal(faces: Iterable[Face]) -> tuple[Face, ...]:
    sets = sorted({frozenset(f) for f in faces}, key=len, reverse=True)
    kept: list[frozenset[int]] = []
    for s in sets:
        if not any(s < t for t in kept):
            kept.append(s)
    return tuple(sorted(tuple(sorted(s)) for s in kept))


class SimplicialComplex:
    """Immutable complex; only the inclusion-maximal faces are stored.

    The empty face is always present, so the smallest complex is {<empty>}
    (facet list containing just the empty tuple).
    """

    __slots__ = ("_facets", "_hash")

    def __init__(self, faces: Iterable[Iterable[int]] = ()):
        facets = _maximal(tuple(sorted(set(f))) for f in faces)
        self._facets: tuple[Face, ...] = facets if facets else ((),)
        self._hash = hash(self._facets)

    @property
    def facets(self) -> tuple[Face, ...]:
        return self._facets

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(sorted({v for f in self._facets for v in f}))

    @property
    def dim(self) -> int:
        return max(len(f) for f in self._facets) - 1

    def is_pure(self) -> bool:
        sizes = {len(f) for f in self._facets}
        return len(sizes) == 1

    def has_face(self, face: Iterable[int]) -> bool:
        s = set(face)
        return any(s.issubset(f) for f in self._facets)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._facets == other._facets

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"SimplicialComplex(facets={len(self._facets)}, dim={self.dim})"


def faces_by_dim(
    S: SimplicialComplex, budget: int = DEFAULT_FACE_BUDGET
) -> dict[int, tuple[Face, ...]]:
    """All faces grouped by dimension (including the empty face at -1)."""
    b = _Budget(budget)
    seen: set[Face] = set()
    for facet in S.facets:
        for r in range(len(facet) + 1):
            for combo in itertools.combinations(facet, r):
                b.spend()
                seen.add(combo)
    out: dict[int, list[Face]] = {}
    for f in seen:
        out.setdefault(len(f) - 1, []).append(f)
    return {d: tuple(sorted(fs)) for d, fs in sorted(out.items())}


def f_vector(S: SimplicialComplex, budget: int = DEFAULT_FACE_BUDGET) -> tuple[int, ...]:
    """(f_-1, f_0, ..., f_dim)."""
    by_dim = faces_by_dim(S, budget)
    return tuple(len(by_dim.get(d, ())) for d in range(-1, S.dim + 1))


def reduced_euler_characteristic(S: SimplicialComplex, budget: int = DEFAULT_FACE_BUDGET) -> int:
    return sum((-1) ** d * len(fs) for d, fs in faces_by_dim(S, budget).items())


def skeleton(S: SimplicialComplex, k: int, budget: int = DEFAULT_FACE_BUDGET) -> SimplicialComplex:
    """Faces of dimension at most k."""
    if k < -1:
        raise ComplexError(f"skeleton dimension must be >= -1, got {k}")
    if k >= S.dim:
        return S
    b = _Budget(budget)
    candidates: set[Face] = set()
    for facet in S.facets:
        if len(facet) <= k + 1:
            candidates.add(facet)
        else:
            for combo in itertools.combinations(facet, k + 1):
                b.spend()
                candidates.add(combo)
    return SimplicialComplex(candidates)


def link(S: SimplicialComplex, v: int) -> SimplicialComplex:
    """Faces not containing v whose union with v is a face."""
    if v not in set(S.vertices):
        raise ComplexError(f"vertex {v} is not in the complex")
    return SimplicialComplex(tuple(x for x in f if x != v) for f in S.facets if v in f)


def deletion(S: SimplicialComplex, v: int) -> SimplicialComplex:
    """Faces not containing v."""
    if v not in set(S.vertices):
        raise ComplexError(f"vertex {v} is not in the complex")
    return SimplicialComplex(
        (f if v not in f else tuple(x for x in f if x != v)) for f in S.facets
    )


def link_and_delete(S: SimplicialComplex, v: int) -> tuple[SimplicialComplex, SimplicialComplex]:
    return link(S, v), deletion(S, v)


# ---------------------------------------------------------------------------
# Independence complexes
# ---------------------------------------------------------------------------


def _maximal_independent_sets(G: Graph) -> list[frozenset[int]]:
    # Bron-Kerbosch with pivoting on the complement graph.
    verts = set(G.vertices)
    nonadj = {v: verts - set(G.neighbors(v)) - {v} for v in G.vertices}
    out: list[frozenset[int]] = []

    def grow(include: set[int], maybe: set[int], exclude: set[int]) -> None:
        if not maybe and not exclude:
            out.append(frozenset(include))
            return
        pivot = max(sorted(maybe | exclude), key=lambda u: len(nonadj[u] & maybe))
        for v in sorted(maybe - nonadj[pivot]):
            grow(include | {v}, maybe & nonadj[v], exclude & nonadj[v])
            maybe = maybe - {v}
            exclude = exclude | {v}

    grow(set(), verts, set())
    return out


def independence_complex(G: Graph) -> SimplicialComplex:
    """Complex whose faces are the independent vertex sets of G."""
    if G.n == 0:
        return SimplicialComplex()
    return SimplicialComplex(_maximal_independent_sets(G))


# ---------------------------------------------------------------------------
# Vertex decomposability and shellings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VertexDecomposition:
    ok: bool
    shelling: Optional[tuple[Face, ...]] = None

    def __bool__(self) -> bool:
        return self.ok


_vd_memo: dict[tuple[Face, ...], Optional[tuple[Face, ...]]] = {}


def _vd_shelling(S: SimplicialComplex) -> Optional[tuple[Face, ...]]:
    key = S.facets
    if key in _vd_memo:
        return _vd_memo[key]
    result: Optional[tuple[Face, ...]] = None
    if S.is_pure():
        if S.facets == ((),):
            result = ((),)
        else:
            for v in S.vertices:
                lk, dl = link_and_delete(S, v)
                shell_dl = _vd_shelling(dl)
                if shell_dl is None:
                    continue
                shell_lk = _vd_shelling(lk)
                if shell_lk is None:
                    continue
                joined = tuple(tuple(sorted(f + (v,))) for f in shell_lk)
                if dl.dim < S.dim:
                    # v lies in every facet: the deletion contributes nothing
                    result = joined
                else:
                    result = shell_dl + joined
                break
    _vd_memo[key] = result
    return result


def is_vertex_decomposable(S: SimplicialComplex) -> VertexDecomposition:
    """Exhaustive, memoized test of the recursive definition.

    On success the returned shelling lists the deletion's facets before the
    link's facets joined with the pivot, recursively (the usual way a
    decomposition is turned into a shelling order).
    """
    shelling = _vd_shelling(S)
    if shelling is None:
        return VertexDecomposition(False)
    return VertexDecomposition(True, shelling)


@dataclass(frozen=True)
class ShellingCheck:
    ok: bool
    index: Optional[int] = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_shelling(order: Sequence[Iterable[int]]) -> ShellingCheck:
    """Validate a facet order: every new facet must meet the union of its
    predecessors in a nonempty pure subcomplex of codimension one (facets of
    dimension 0 meet it in the empty face, which counts)."""
    facets = [tuple(sorted(set(f))) for f in order]
    if not facets:
        return ShellingCheck(False, None, "empty facet order")
    if len(set(facets)) != len(facets):
        return ShellingCheck(False, None, "repeated facet")
    size = len(facets[0])
    for i, f in enumerate(facets):
        if len(f) != size:
            return ShellingCheck(False, i, "facets of different dimensions")
    for i, f in enumerate(facets):
        fs = set(f)
        for j in range(i + 1, len(facets)):
            if fs <= set(facets[j]) or set(facets[j]) <= fs:
                return ShellingCheck(False, j, "one facet contains another")
    for i in range(1, len(facets)):
        fi = set(facets[i])
        meets = {frozenset(fi & set(facets[j])) for j in range(i)}
        tops = [m for m in meets if not any(m < other for other in meets)]
        bad = [m for m in tops if len(m) != size - 1]
        if bad:
            return ShellingCheck(
                False, i, f"intersection with earlier facets is not pure of codimension 1"
            )
    return ShellingCheck(True)


# ---------------------------------------------------------------------------
# Rational homology
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BettiVector:
    """Reduced rational Betti numbers, indexed from dimension -1."""

    numbers: tuple[int, ...]

    def __getitem__(self, dim: int) -> int:
        i = dim + 1
        if 0 <= i < len(self.numbers):
            return self.numbers[i]
        return 0

    @property
    def top_dim(self) -> int:
        return len(self.numbers) - 2

    def alternating_sum(self) -> int:
        return sum((-1) ** (i - 1) * b for i, b in enumerate(self.numbers))

    def as_dict(self) -> dict[int, int]:
        return {i - 1: b for i, b in enumerate(self.numbers)}


def _rank(rows: list[list[int]]) -> int:
    # exact Gaussian elimination over the rationals
    mat = [[Fraction(x) for x in row] for row in rows if any(row)]
    rank = 0
    cols = len(mat[0]) if mat else 0
    col = 0
    while rank < len(mat) and col < cols:
        pivot_row = next((r for r in range(rank, len(mat)) if mat[r][col]), None)
        if pivot_row is None:
            col += 1
            continue
        mat[rank], mat[pivot_row] = mat[pivot_row], mat[rank]
        pv = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            factor = mat[r][col] / pv
            if factor:
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[rank])]
        rank += 1
        col += 1
    return rank


def _boundary_rank(lower: Sequence[Face], upper: Sequence[Face]) -> int:
    if not lower or not upper:
        return 0
    index = {f: i for i, f in enumerate(lower)}
    rows: list[list[int]] = [[0] * len(upper) for _ in lower]
    for j, face in enumerate(upper):
        for pos in range(len(face)):
            sub = face[:pos] + face[pos + 1 :]
            rows[index[sub]][j] = (-1) ** pos
    return _rank(rows)


def betti(S: SimplicialComplex, budget: int = DEFAULT_FACE_BUDGET) -> BettiVector:
    """Reduced Betti numbers over the rationals, dimensions -1..dim."""
    by_dim = faces_by_dim(S, budget)
    top = S.dim
    ranks: dict[int, int] = {}
    for d in range(0, top + 1):
        ranks[d] = _boundary_rank(by_dim.get(d - 1, ()), by_dim.get(d, ()))
    numbers = []
    for d in range(-1, top + 1):
        free = len(by_dim.get(d, ()))
        numbers.append(free - ranks.get(d, 0) - ranks.get(d + 1, 0))
    return BettiVector(tuple(numbers))


# ---------------------------------------------------------------------------
# Cross-check of a graph-level certificate against the complex picture
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SkeletonReport:
    """Outcome of the pure/decomposable/homology checks for one (G, k)."""

    k: int
    passed: bool
    pure: bool
    expected_dim: int
    actual_dim: int
    decomposable: bool
    shelling_valid: bool
    betti_concentrated: bool
    betti_numbers: BettiVector
    shelling: Optional[tuple[Face, ...]] = None
    failures: tuple[str, ...] = ()


def check_prop_isvd(G: Graph, k: int, budget: int = DEFAULT_FACE_BUDGET) -> SkeletonReport:
    """For a graph at level k, audit the (k-1)-skeleton of its independence
    complex: purity in the right dimension, vertex decomposability with a
    validated shelling, and reduced homology vanishing below the top degree.
    """
    from .vd import VdError, is_vd

    if k < 0:
        raise VdError(f"level must be non-negative, got {k}")
    if not is_vd(G, k):
        raise VdError(f"graph is not at level {k}; the cross-check does not apply")
    skel = skeleton(independence_complex(G), k - 1, budget)
    failures: list[str] = []
    pure = skel.is_pure()
    actual_dim = skel.dim
    if not pure:
        failures.append("skeleton is not pure")
    if actual_dim != k - 1:
        failures.append(f"skeleton dimension {actual_dim}, expected {k - 1}")
    decomposition = is_vertex_decomposable(skel)
    if not decomposition.ok:
        failures.append("skeleton is not vertex decomposable")
    shelling_valid = False
    if decomposition.shelling is not None:
        shelling_valid = bool(check_shelling(decomposition.shelling))
        if not shelling_valid:
            failures.append("emitted shelling order fails the shelling validator")
    b = betti(skel, budget)
    concentrated = all(b[d] == 0 for d in range(-1, k - 1))
    if not concentrated:
        failures.append("reduced Betti numbers do not vanish below the top degree")
    return SkeletonReport(
        k=k,
        passed=not failures,
        pure=pure,
        expected_dim=k - 1,
        actual_dim=actual_dim,
        decomposable=decomposition.ok,
        shelling_valid=shelling_valid,
        betti_concentrated=concentrated,
        betti_numbers=b,
        shelling=decomposition.shelling,
        failures=tuple(failures),
    )


# ---------------------------------------------------------------------------
# Facet-list text format: one facet per line, space-separated labels;
# blank lines and "#" comments ignored; an empty file is the {<empty>} complex.
# ---------------------------------------------------------------------------


def parse_facets(text: str) -> SimplicialComplex:
    facets = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        facets.append(tuple(int(x) for x in line.split()))
    return SimplicialComplex(facets)


def format_facets(S: SimplicialComplex) -> str:
    lines = [" ".join(str(v) for v in f) for f in S.facets if f]
    return "\n".join(lines) + ("\n" if lines else "")
