"""Points of P^n(F_q) and codimension-k linear subspaces of the Grassmannian.

A subspace is stored by its annihilator: a k x (n+1) matrix of linear forms
in reduced row echelon form, the unique canonical representative. Membership
testing is then k dot products, which is the hot loop of every census; the
parametrizing basis is derived on demand.

Enumeration orders are fixed so golden files stay stable:
  * points: by position of the leading 1, then the remaining coordinates
    read as a base-q integer (first free coordinate most significant);
  * subspaces: pivot-column patterns in lexicographic order, then free
    entries of the RREF pattern in row-major base-q order.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from . import kernels
from .ff import FieldElement, FieldSpec, enumerate_field


def projective_space_size(n: int, q: int) -> int:
    return (q ** (n + 1) - 1) // (q - 1)


def gaussian_binomial(a: int, b: int, q: int) -> int:
    """The q-binomial coefficient [a choose b]_q as an exact integer."""
    if not 0 <= b <= a:
        raise ValueError("need 0 <= b <= a")
    num = 1
    den = 1
    for i in range(b):
        num *= q ** (a - i) - 1
        den *= q ** (i + 1) - 1
    assert num % den == 0
    return num // den


def grassmannian_dimension(n: int, k: int) -> int:
    """Dimension of the space of codimension-k subspaces of P^n."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    return (n - k + 1) * k


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^n, normalized so the first nonzero coordinate is 1."""

    coords: tuple[FieldElement, ...]

    def __post_init__(self):
        if all(c.is_zero() for c in self.coords):
            raise ValueError("projective point needs a nonzero coordinate")
        lead = next(i for i, c in enumerate(self.coords) if not c.is_zero())
        if self.coords[lead] != self.spec.one():
            s = self.coords[lead].inv()
            object.__setattr__(
                self, "coords", tuple(c * s for c in self.coords)
            )

    @property
    def spec(self) -> FieldSpec:
        return self.coords[0].spec

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    def index_row(self) -> np.ndarray:
        return np.array([c.index for c in self.coords], dtype=np.uint16)

    def __str__(self):
        return "(" + ":".join(str(c) for c in self.coords) + ")"


def enumerate_projective_points(n: int, spec: FieldSpec) -> Iterator[ProjectivePoint]:
    """Each point of P^n(F_q) exactly once, in the canonical order."""
    if n < 0:
        raise ValueError("n must be >= 0")
    elements = list(enumerate_field(spec))
    one = spec.one()
    zero = spec.zero()
    for lead in range(n + 1):
        for tail in itertools.product(elements, repeat=n - lead):
            yield ProjectivePoint((zero,) * lead + (one,) + tail)


def point_matrix(n: int, spec: FieldSpec) -> np.ndarray:
    """All points of P^n(F_q) as element-index rows, same order as the stream."""
    q = spec.q
    blocks = []
    for lead in range(n + 1):
        t = n - lead
        rows = np.zeros((q**t, n + 1), dtype=np.uint16)
        rows[:, lead] = 1  # index of the unit element
        v = np.arange(q**t, dtype=np.int64)
        for j in range(t):
            rows[:, lead + 1 + j] = (v // q ** (t - 1 - j)) % q
        blocks.append(rows)
    return np.concatenate(blocks, axis=0)


# ---------------------------------------------------------------------------


def _rref(rows: list[list[FieldElement]], spec: FieldSpec):
    """Reduced row echelon form over the field; returns (rows, pivot_cols)."""
    rows = [list(r) for r in rows]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if not rows[i][col].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][col].inv()
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and not rows[i][col].is_zero():
                f = rows[i][col]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


@dataclass(frozen=True)
class LinearSubspace:
    """A codimension-k linear subspace of P^n as its canonical RREF annihilator."""

    n: int
    eqs: tuple[tuple[FieldElement, ...], ...]

    def __post_init__(self):
        for row in self.eqs:
            if len(row) != self.n + 1:
                raise ValueError("equation width does not match ambient space")
        if self.eqs and not _is_rref(self.eqs):
            raise ValueError("equations are not in reduced row echelon form")

    @property
    def k(self) -> int:
        return len(self.eqs)

    @property
    def dim(self) -> int:
        return self.n - self.k

    @property
    def spec(self) -> FieldSpec:
        return self.eqs[0][0].spec

    def contains(self, x: ProjectivePoint) -> bool:
        if x.n != self.n:
            raise ValueError("ambient dimensions differ")
        zero = x.spec.zero()
        for row in self.eqs:
            acc = zero
            for a, c in zip(row, x.coords):
                acc = acc + a * c
            if not acc.is_zero():
                return False
        return True

    def matrix(self) -> np.ndarray:
        return np.array(
            [[a.index for a in row] for row in self.eqs], dtype=np.uint16
        )

    def points(self) -> Iterator[ProjectivePoint]:
        """The #P^(n-k)(F_q) points of the subspace."""
        basis = parametrize(self)
        spec = self.spec
        for t in enumerate_projective_points(self.n - self.k, spec):
            coords = [spec.zero()] * (self.n + 1)
            for ti, row in zip(t.coords, basis):
                for j, bj in enumerate(row):
                    coords[j] = coords[j] + ti * bj
            yield ProjectivePoint(tuple(coords))

    def __str__(self):
        rows = ["[" + " ".join(str(a) for a in row) + "]" for row in self.eqs]
        return "{" + ", ".join(rows) + "}"


def _is_rref(eqs) -> bool:
    prev = -1
    leads = []
    for row in eqs:
        lead = next((j for j, a in enumerate(row) if not a.is_zero()), None)
        if lead is None or lead <= prev:
            return False
        if row[lead] != row[lead].spec.one():
            return False
        leads.append(lead)
        prev = lead
    for i, row in enumerate(eqs):
        for lead in leads:
            if lead != leads[i] and not row[lead].is_zero():
                return False
    return True


def subspace_from_equations(rows, spec: FieldSpec | None = None) -> LinearSubspace:
    """Canonicalize arbitrary annihilating forms into a LinearSubspace."""
    rows = [list(r) for r in rows]
    if not rows:
        raise ValueError("need at least one equation row")
    n = len(rows[0]) - 1
    spec = spec or rows[0][0].spec
    red, _ = _rref(rows, spec)
    if len(red) == n + 1:
        raise ValueError("equations cut out the empty set")
    return LinearSubspace(n, tuple(red))


def subspace_from_span(rows) -> LinearSubspace:
    """The subspace spanned by the given coordinate rows (its annihilator)."""
    rows = [list(r) for r in rows]
    if not rows:
        raise ValueError("need at least one spanning row")
    spec = rows[0][0].spec
    n = len(rows[0]) - 1
    red, pivots = _rref(rows, spec)
    if not red:
        raise ValueError("span is zero")
    ann = _solution_basis(red, pivots, n + 1, spec)
    if not ann:
        return LinearSubspace(n, ())  # the whole space
    red_ann, _ = _rref(ann, spec)
    return LinearSubspace(n, tuple(red_ann))


def _solution_basis(rref_rows, pivots, width, spec):
    """Basis of the solution space of rref_rows . y = 0, one row per free column."""
    free = [j for j in range(width) if j not in pivots]
    out = []
    for j in free:
        vec = [spec.zero()] * width
        vec[j] = spec.one()
        for i, pi in enumerate(pivots):
            vec[pi] = -rref_rows[i][j]
        out.append(vec)
    return out


def parametrize(h: LinearSubspace):
    """A deterministic (n-k+1) x (n+1) basis of h, solved from the RREF."""
    spec = h.spec
    pivots = [
        next(j for j, a in enumerate(row) if not a.is_zero()) for row in h.eqs
    ]
    rows = _solution_basis(list(h.eqs), pivots, h.n + 1, spec)
    return tuple(tuple(r) for r in rows)


def contains(h: LinearSubspace, x: ProjectivePoint) -> bool:
    return h.contains(x)


def subspace_contains_subspace(h: LinearSubspace, m: LinearSubspace) -> bool:
    """Whether m is contained in h (every basis row of m annihilated by h)."""
    if h.n != m.n:
        raise ValueError("ambient dimensions differ")
    zero = h.spec.zero()
    for brow in parametrize(m):
        for erow in h.eqs:
            acc = zero
            for a, c in zip(erow, brow):
                acc = acc + a * c
            if not acc.is_zero():
                return False
    return True


SubspaceOrPoint = Union[LinearSubspace, ProjectivePoint]


def join(a: SubspaceOrPoint, b: SubspaceOrPoint) -> LinearSubspace:
    """The projective span of the union of the two loci."""
    rows = []
    for x in (a, b):
        if isinstance(x, ProjectivePoint):
            rows.append(list(x.coords))
        else:
            rows.extend(list(r) for r in parametrize(x))
    return subspace_from_span(rows)


def intersect(a: LinearSubspace, b: LinearSubspace) -> LinearSubspace | None:
    """Intersection subspace, or None when it is empty."""
    if a.n != b.n:
        raise ValueError("ambient dimensions differ")
    try:
        return subspace_from_equations(list(a.eqs) + list(b.eqs), a.spec)
    except ValueError:
        return None


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GrassmannianSpec:
    """The parameter space of codimension-k subspaces of P^n over a field."""

    n: int
    k: int
    spec: FieldSpec

    def __post_init__(self):
        if not 1 <= self.k <= self.n:
            raise ValueError("need 1 <= k <= n")

    @property
    def size(self) -> int:
        return gaussian_binomial(self.n + 1, self.k, self.spec.q)

    @property
    def dimension(self) -> int:
        return grassmannian_dimension(self.n, self.k)


def subspace_matrix_blocks(gspec: GrassmannianSpec):
    """RREF equation matrices grouped by pivot pattern, as index arrays.

    Yields (pivots, block) with block of shape (q^free, k, n+1). Within a
    block the free entries run in row-major base-q order; concatenated over
    lexicographic pivot patterns this is the canonical subspace order.
    """
    n, k, q = gspec.n, gspec.k, gspec.spec.q
    w = n + 1
    for pivots in itertools.combinations(range(w), k):
        cells = [
            (i, j)
            for i in range(k)
            for j in range(w)
            if j not in pivots and j > pivots[i]
        ]
        nfree = len(cells)
        count = q**nfree
        block = np.zeros((count, k, w), dtype=np.uint16)
        for i, pj in enumerate(pivots):
            block[:, i, pj] = 1
        v = np.arange(count, dtype=np.int64)
        for t, (i, j) in enumerate(cells):
            block[:, i, j] = (v // q ** (nfree - 1 - t)) % q
        yield pivots, block


def all_subspace_matrices(gspec: GrassmannianSpec) -> np.ndarray:
    blocks = [b for _, b in subspace_matrix_blocks(gspec)]
    return np.concatenate(blocks, axis=0)


def enumerate_subspaces(gspec: GrassmannianSpec) -> Iterator[LinearSubspace]:
    """Each codimension-k subspace exactly once, canonical RREF matrices."""
    spec = gspec.spec
    for _, block in subspace_matrix_blocks(gspec):
        for mat in block:
            eqs = tuple(
                tuple(spec.from_index(int(idx)) for idx in row) for row in mat
            )
            yield LinearSubspace(gspec.n, eqs)


def block_bases(ctx, pivots, block: np.ndarray) -> np.ndarray:
    """Vectorized parametrize for a pivot-pattern block of RREF matrices.

    Returns (B, n-k+1, n+1) basis rows matching geometry.parametrize row for
    row; only negation of the RREF entries is needed.
    """
    b, k, w = block.shape
    free = [j for j in range(w) if j not in pivots]
    bases = np.zeros((b, len(free), w), dtype=np.uint16)
    for t, j in enumerate(free):
        bases[:, t, j] = 1
        for i, pj in enumerate(pivots):
            col = block[:, i, j].astype(np.intp)
            if ctx.mode == "prime":
                bases[:, t, pj] = (-col) % ctx.p
            else:
                bases[:, t, pj] = ctx.neg[col]
    return bases


def count_through_points(
    gspec: GrassmannianSpec, points: Sequence[ProjectivePoint]
) -> int:
    """Subspaces containing all given points (one point, or a distinct pair)."""
    if not 1 <= len(points) <= 2:
        raise ValueError("pass one point or two distinct points")
    if len(points) == 2 and points[0] == points[1]:
        raise ValueError("the two points must be distinct")
    for x in points:
        if x.n != gspec.n:
            raise ValueError("point does not live in P^n")
    ctx = kernels.context_for(gspec.spec)
    xrows = np.stack([x.index_row() for x in points])
    total = 0
    for _, block in subspace_matrix_blocks(gspec):
        counts = kernels.incidence_counts(ctx, xrows, block)
        total += int((counts == len(points)).sum())
    return total


def incidence_matrix(gspec: GrassmannianSpec) -> np.ndarray:
    """0/1 matrix: rows subspaces (canonical order), columns points."""
    ctx = kernels.context_for(gspec.spec)
    pts = point_matrix(gspec.n, gspec.spec)
    out = []
    for _, block in subspace_matrix_blocks(gspec):
        out.append(kernels.incidence_mask(ctx, pts, block))
    return np.concatenate(out, axis=0).astype(np.uint8)


def random_subspace(gspec: GrassmannianSpec, seed) -> LinearSubspace:
    """A uniformly random codimension-k subspace.

    Draws a k x (n+1) matrix with independent uniform entries and retries
    until it has rank k; every row space has the same number of rank-k
    matrices above it, so the RREF class is uniform. seed may be an int or
    a random.Random.
    """
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    spec = gspec.spec
    q = spec.q
    w = gspec.n + 1
    while True:
        rows = [
            [spec.from_index(rng.randrange(q)) for _ in range(w)]
            for _ in range(gspec.k)
        ]
        red, _ = _rref(rows, spec)
        if len(red) == gspec.k:
            return LinearSubspace(gspec.n, tuple(red))
