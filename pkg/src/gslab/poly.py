"""Sparse homogeneous multivariate polynomials over a finite field.

Terms map exponent vectors (entries summing to the degree) to nonzero
coefficients; the printed form and the stored tuple use graded
lexicographic order. An identically-zero polynomial keeps its degree as
metadata so callers can see that a substitution collapsed completely.

Degrees in scope stay at most 4 and variable counts at most 6, so linear
substitution expands terms naively through products of linear forms.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from .ff import FieldElement, FieldSpec, is_square
from .geometry import ProjectivePoint, _rref


@dataclass(frozen=True)
class HomogeneousPolynomial:
    spec: FieldSpec
    nvars: int
    degree: int
    terms: tuple[tuple[tuple[int, ...], FieldElement], ...]

    def __post_init__(self):
        for exps, coeff in self.terms:
            if len(exps) != self.nvars:
                raise ValueError("exponent vector has wrong arity")
            if any(e < 0 for e in exps):
                raise ValueError("negative exponent")
            if sum(exps) != self.degree:
                raise ValueError("term degree differs from the declared degree")
            if coeff.is_zero():
                raise ValueError("stored coefficients must be nonzero")
            if coeff.spec != self.spec:
                raise ValueError("coefficient from a different field")
        ordered = tuple(sorted(self.terms, key=lambda t: t[0], reverse=True))
        object.__setattr__(self, "terms", ordered)

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, exps: tuple[int, ...]) -> FieldElement:
        for e, c in self.terms:
            if e == exps:
                return c
        return self.spec.zero()

    def __add__(self, other: "HomogeneousPolynomial") -> "HomogeneousPolynomial":
        self._compatible(other)
        acc = dict(self.terms)
        for e, c in other.terms:
            s = acc.get(e, self.spec.zero()) + c
            if s.is_zero():
                acc.pop(e, None)
            else:
                acc[e] = s
        return HomogeneousPolynomial(self.spec, self.nvars, self.degree,
                                     tuple(acc.items()))

    def __neg__(self):
        return HomogeneousPolynomial(
            self.spec, self.nvars, self.degree,
            tuple((e, -c) for e, c in self.terms),
        )

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, FieldElement):
            return self.scale(other)
        if other.spec != self.spec or other.nvars != self.nvars:
            raise ValueError("polynomials live in different rings")
        acc: dict[tuple[int, ...], FieldElement] = {}
        zero = self.spec.zero()
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                s = acc.get(e, zero) + c1 * c2
                if s.is_zero():
                    acc.pop(e, None)
                else:
                    acc[e] = s
        return HomogeneousPolynomial(self.spec, self.nvars,
                                     self.degree + other.degree,
                                     tuple(acc.items()))

    def scale(self, c: FieldElement) -> "HomogeneousPolynomial":
        if c.is_zero():
            return zero_poly(self.spec, self.nvars, self.degree)
        return HomogeneousPolynomial(
            self.spec, self.nvars, self.degree,
            tuple((e, k * c) for e, k in self.terms),
        )

    def _compatible(self, other):
        if (other.spec != self.spec or other.nvars != self.nvars
                or other.degree != self.degree):
            raise ValueError("polynomials are not compatible")

    def exponent_arrays(self):
        """(exps, coeffs) index arrays in kernel form."""
        if self.is_zero:
            return (np.zeros((0, self.nvars), dtype=np.uint8),
                    np.zeros(0, dtype=np.uint16))
        exps = np.array([e for e, _ in self.terms], dtype=np.uint8)
        coeffs = np.array([c.index for _, c in self.terms], dtype=np.uint16)
        return exps, coeffs

    def __str__(self):
        return format_poly(self)


def make_poly(spec: FieldSpec, nvars: int,
              terms: Mapping[tuple[int, ...], FieldElement | int],
              degree: int | None = None) -> HomogeneousPolynomial:
    """Build a polynomial from an exponent-to-coefficient mapping.

    Integer coefficients are embedded through the prime subfield. degree is
    only needed when the mapping is (or reduces to) empty.
    """
    cleaned = {}
    for exps, c in terms.items():
        coeff = c if isinstance(c, FieldElement) else spec.scalar(c)
        if coeff.is_zero():
            continue
        cleaned[tuple(exps)] = coeff
    if not cleaned:
        if degree is None:
            raise ValueError("zero polynomial needs an explicit degree")
        return zero_poly(spec, nvars, degree)
    degrees = {sum(e) for e in cleaned}
    if len(degrees) != 1:
        raise ValueError(f"not homogeneous: degrees {sorted(degrees)}")
    d = degrees.pop()
    if degree is not None and degree != d:
        raise ValueError("declared degree does not match the terms")
    return HomogeneousPolynomial(spec, nvars, d, tuple(cleaned.items()))


def zero_poly(spec: FieldSpec, nvars: int, degree: int) -> HomogeneousPolynomial:
    return HomogeneousPolynomial(spec, nvars, degree, ())


def evaluate(f: HomogeneousPolynomial, x) -> FieldElement:
    """f at a point or coordinate sequence; zero tests are scale-invariant."""
    coords = x.coords if isinstance(x, ProjectivePoint) else tuple(x)
    if len(coords) != f.nvars:
        raise ValueError("coordinate arity does not match the polynomial")
    acc = f.spec.zero()
    for exps, coeff in f.terms:
        term = coeff
        for c, e in zip(coords, exps):
            if e:
                term = term * c**e
        acc = acc + term
    return acc


def substitute_linear(f: HomogeneousPolynomial,
                      rows: Sequence[Sequence[FieldElement]]) -> HomogeneousPolynomial:
    """f composed with the linear map t -> sum_i t_i * rows[i].

    rows is an (s+1) x (nvars) matrix; the result lives in s+1 variables and
    is homogeneous of the same degree, or identically zero (degree kept).
    """
    spec = f.spec
    s1 = len(rows)
    # linear form for each original variable, as a polynomial in t
    linears = []
    for j in range(f.nvars):
        lin = {}
        for i in range(s1):
            c = rows[i][j]
            if not c.is_zero():
                e = tuple(1 if t == i else 0 for t in range(s1))
                lin[e] = c
        linears.append(make_poly(spec, s1, lin, degree=1))
    power_cache: dict[tuple[int, int], HomogeneousPolynomial] = {}

    def lin_pow(j: int, e: int) -> HomogeneousPolynomial:
        key = (j, e)
        if key not in power_cache:
            if e == 1:
                power_cache[key] = linears[j]
            else:
                power_cache[key] = lin_pow(j, e - 1) * linears[j]
        return power_cache[key]

    out = zero_poly(spec, s1, f.degree)
    for exps, coeff in f.terms:
        piece = None
        for j, e in enumerate(exps):
            if e == 0:
                continue
            factor = lin_pow(j, e)
            piece = factor if piece is None else piece * factor
        if piece is None:  # degree-0 cannot occur for homogeneous d >= 1
            raise AssertionError("unreachable: constant term")
        if piece.is_zero:
            continue
        out = out + piece.scale(coeff)
    return out


def lift(f: HomogeneousPolynomial, new_spec: FieldSpec) -> HomogeneousPolynomial:
    """Reinterpret prime-subfield coefficients inside a larger field."""
    if new_spec.p != f.spec.p:
        raise ValueError("characteristics differ")
    out = {}
    for exps, c in f.terms:
        if any(v != 0 for v in c.rep[1:]):
            raise ValueError("coefficient is outside the prime subfield")
        out[exps] = new_spec.scalar(c.rep[0])
    return make_poly(new_spec, f.nvars, out, degree=f.degree)


def pad_variables(f: HomogeneousPolynomial, nvars: int) -> HomogeneousPolynomial:
    """The same polynomial read in a larger variable set (new exponents 0)."""
    if nvars < f.nvars:
        raise ValueError("cannot drop variables")
    out = {e + (0,) * (nvars - f.nvars): c for e, c in f.terms}
    return make_poly(f.spec, nvars, out, degree=f.degree)


# ---------------------------------------------------------------------------
# quadratic forms


class SquareClass(Enum):
    ZERO = "zero"
    SQUARE = "square"
    NONSQUARE = "nonsquare"


@dataclass(frozen=True)
class QuadraticFormInfo:
    """Gram matrix, rank, and discriminant square class of a quadratic form.

    The discriminant carries the conventional sign (-1)^(s(s-1)/2) times the
    determinant of a maximal nondegenerate block (s = rank), so for rank 2
    it is square exactly when the form splits into two rational factors.
    """

    gram: tuple[tuple[FieldElement, ...], ...]
    rank: int
    disc_class: SquareClass


def quadratic_form_info(f: HomogeneousPolynomial) -> QuadraticFormInfo:
    spec = f.spec
    if spec.q % 2 == 0:
        raise ValueError("quadratic form analysis needs odd characteristic")
    if f.degree != 2:
        raise ValueError("not a quadratic form")
    n = f.nvars
    half = spec.scalar(2).inv()
    gram = [[spec.zero() for _ in range(n)] for _ in range(n)]
    for exps, c in f.terms:
        support = [j for j, e in enumerate(exps) if e]
        if len(support) == 1:
            gram[support[0]][support[0]] = c
        else:
            i, j = support
            gram[i][j] = c * half
            gram[j][i] = c * half
    diag = _diagonalize([row[:] for row in gram], spec)
    rank = len(diag)
    if rank == 0:
        disc = SquareClass.ZERO
    else:
        det = spec.one()
        for d in diag:
            det = det * d
        if rank * (rank - 1) // 2 % 2 == 1:
            det = -det
        disc = SquareClass.SQUARE if is_square(det) else SquareClass.NONSQUARE
    return QuadraticFormInfo(tuple(tuple(r) for r in gram), rank, disc)


def _diagonalize(m: list[list[FieldElement]], spec: FieldSpec) -> list[FieldElement]:
    """Diagonal of a congruence diagonalization; nonzero entries only."""
    size = len(m)
    diag = []
    t = 0
    while t < size:
        piv = next((i for i in range(t, size) if not m[i][i].is_zero()), None)
        if piv is None:
            off = next(((i, j) for i in range(t, size)
                        for j in range(i + 1, size) if not m[i][j].is_zero()),
                       None)
            if off is None:
                break
            i, j = off
            for c in range(size):
                m[i][c] = m[i][c] + m[j][c]
            for c in range(size):
                m[c][i] = m[c][i] + m[c][j]
            piv = i
        if piv != t:
            m[piv], m[t] = m[t], m[piv]
            for row in m:
                row[piv], row[t] = row[t], row[piv]
        d = m[t][t]
        diag.append(d)
        dinv = d.inv()
        for i in range(t + 1, size):
            factor = m[i][t] * dinv
            if not factor.is_zero():
                for c in range(size):
                    m[i][c] = m[i][c] - factor * m[t][c]
                for c in range(size):
                    m[c][i] = m[c][i] - factor * m[c][t]
        t += 1
    return diag


def gram_matrix_indices(f: HomogeneousPolynomial) -> np.ndarray:
    """Gram matrix as element indices, kernel form."""
    info = quadratic_form_info(f)
    return np.array(
        [[a.index for a in row] for row in info.gram], dtype=np.uint16
    )


def rank_of_matrix(rows: Sequence[Sequence[FieldElement]], spec: FieldSpec) -> int:
    red, _ = _rref([list(r) for r in rows], spec)
    return len(red)


# ---------------------------------------------------------------------------
# plain-text format: terms "c*x0^a0*..." joined by "+", prime coefficients

_TERM_RE = re.compile(r"^(?:(\d+)\*?)?((?:x\d+(?:\^\d+)?(?:\*x\d+(?:\^\d+)?)*))?$")


def format_poly(f: HomogeneousPolynomial) -> str:
    if f.is_zero:
        return "0"
    parts = []
    for exps, c in f.terms:
        if any(v != 0 for v in c.rep[1:]):
            raise ValueError("text format carries prime-field coefficients only")
        factors = [str(c.rep[0])]
        for j, e in enumerate(exps):
            if e == 1:
                factors.append(f"x{j}")
            elif e > 1:
                factors.append(f"x{j}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def parse_poly(text: str, nvars: int, spec: FieldSpec,
               degree: int | None = None) -> HomogeneousPolynomial:
    """Parse the plain-text polynomial format.

    Grammar per term: optional integer coefficient (negatives allowed,
    reduced mod p), then "*"-separated powers "xJ" or "xJ^E". Terms are
    joined by "+". "0" is the zero polynomial (needs degree).
    """
    text = text.strip()
    if text in ("0", ""):
        return zero_poly(spec, nvars, 1 if degree is None else degree)
    acc: dict[tuple[int, ...], FieldElement] = {}
    for raw in text.split("+"):
        term = raw.strip().replace(" ", "")
        if not term:
            raise ValueError("empty term")
        sign = 1
        while term.startswith("-"):
            sign = -sign
            term = term[1:]
        coeff = sign
        exps = [0] * nvars
        for factor in term.split("*"):
            if not factor:
                raise ValueError(f"malformed term {raw!r}")
            if factor[0] == "x":
                var, _, power = factor.partition("^")
                j = int(var[1:])
                if j >= nvars:
                    raise ValueError(f"variable x{j} out of range")
                exps[j] += int(power) if power else 1
            else:
                coeff *= int(factor)
        key = tuple(exps)
        prev = acc.get(key, spec.zero())
        new = prev + spec.scalar(coeff)
        if new.is_zero():
            acc.pop(key, None)
        else:
            acc[key] = new
    return make_poly(spec, nvars, acc, degree=degree)
