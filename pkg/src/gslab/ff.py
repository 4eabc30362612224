"""Exact arithmetic in prime fields GF(p) and extension fields GF(p^m).

Elements are coefficient vectors over GF(p) reduced modulo a fixed monic
irreducible polynomial. The modulus is chosen deterministically (the
lexicographically smallest irreducible, coefficients compared low-to-high),
so element indices and every downstream count are reproducible run to run.

Extension towers are not modeled: GF(p^(m*d)) is always built directly over
GF(p), which keeps prime-subfield coefficients embeddable without maps.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import TableLimitError

MAX_PRIME = 2**31

#: largest field order for which q x q arithmetic tables are precomputed
TABLE_LIMIT = 2048


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p); a polynomial is a tuple of ints, low-to-high


def _trim(c: tuple[int, ...]) -> tuple[int, ...]:
    i = len(c)
    while i > 0 and c[i - 1] == 0:
        i -= 1
    return c[:i]


def _poly_mul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _trim(tuple(out))


def _poly_mod(a, mod, p):
    # mod is monic
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            a[i] = 0
            for j in range(dm):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    return _trim(tuple(x % p for x in a))


def _poly_pow_mod(base, e, mod, p):
    result = (1,)
    base = _poly_mod(base, mod, p)
    while e:
        if e & 1:
            result = _poly_mod(_poly_mul(result, base, p), mod, p)
        base = _poly_mod(_poly_mul(base, base, p), mod, p)
        e >>= 1
    return result


def _poly_rem(a, b, p):
    # remainder of a by monic b
    r = list(_trim(a))
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        c = r[-1] % p
        if c:
            shift = len(r) - 1 - db
            for j in range(db):
                r[shift + j] = (r[shift + j] - c * b[j]) % p
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return tuple(r)


def _poly_gcd(a, b, p):
    a, b = _trim(tuple(a)), _trim(tuple(b))
    while b:
        inv_lead = pow(b[-1], p - 2, p)
        monic_b = tuple((c * inv_lead) % p for c in b)
        a, b = monic_b, _poly_rem(a, monic_b, p)
    return a


def _is_irreducible(coeffs: tuple[int, ...], p: int) -> bool:
    """coeffs is monic of degree m >= 1, low-to-high including leading 1."""
    m = len(coeffs) - 1
    if m == 1:
        return True
    if m <= 3:
        # degree 2 and 3 are reducible exactly when they have a root
        return all(
            sum(c * pow(x, i, p) for i, c in enumerate(coeffs)) % p != 0
            for x in range(p)
        )
    # no factor of degree i < m: gcd(f, x^(p^i) - x) must be constant
    x = (0, 1)
    frob = x
    for _ in range(1, m):
        frob = _poly_pow_mod(frob, p, coeffs, p)
        diff = tuple(
            (a - b) % p
            for a, b in itertools.zip_longest(frob, x, fillvalue=0)
        )
        g = _poly_gcd(coeffs, _trim(diff), p)
        if len(g) > 1:
            return False
    return True


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^m) presented as GF(p)[x] / (modulus)."""

    p: int
    m: int
    modulus: tuple[int, ...]  # monic, degree m, coefficients low-to-high

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.p > MAX_PRIME:
            raise ValueError(f"p = {self.p} exceeds {MAX_PRIME}")
        if self.m < 1:
            raise ValueError("extension degree must be >= 1")
        mod = tuple(c % self.p for c in self.modulus)
        if len(mod) != self.m + 1 or mod[-1] != 1:
            raise ValueError("modulus must be monic of degree m")
        if not _is_irreducible(mod, self.p):
            raise ValueError(f"modulus {mod} is reducible over GF({self.p})")
        object.__setattr__(self, "modulus", mod)

    @property
    def q(self) -> int:
        return self.p**self.m

    @property
    def name(self) -> str:
        return str(self.p) if self.m == 1 else f"{self.p}^{self.m}"

    def zero(self) -> "FieldElement":
        return FieldElement(self, (0,) * self.m)

    def one(self) -> "FieldElement":
        return self.scalar(1)

    def gen(self) -> "FieldElement":
        """The residue class of x; generates the extension over GF(p)."""
        if self.m == 1:
            raise ValueError("prime field has no adjoined generator")
        rep = [0] * self.m
        rep[1] = 1
        return FieldElement(self, tuple(rep))

    def scalar(self, c: int) -> "FieldElement":
        rep = [0] * self.m
        rep[0] = c % self.p
        return FieldElement(self, tuple(rep))

    def from_coeffs(self, coeffs) -> "FieldElement":
        rep = [0] * self.m
        for i, c in enumerate(coeffs):
            rep[i] = c % self.p
        return FieldElement(self, tuple(rep))

    def from_index(self, i: int) -> "FieldElement":
        if not 0 <= i < self.q:
            raise ValueError(f"index {i} out of range for {self.name}")
        rep = []
        for _ in range(self.m):
            rep.append(i % self.p)
            i //= self.p
        return FieldElement(self, tuple(rep))

    def __repr__(self):
        return f"FieldSpec({self.name}, modulus={list(self.modulus)})"


def make_field(p: int, m: int = 1) -> FieldSpec:
    """GF(p^m) with the lexicographically smallest monic irreducible modulus.

    Candidate moduli are compared by their coefficient tuples read
    low-to-high, so the choice is deterministic across runs and machines.
    """
    if not is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if m < 1:
        raise ValueError("extension degree must be >= 1")
    for lower in itertools.product(range(p), repeat=m):
        coeffs = lower + (1,)
        if _is_irreducible(coeffs, p):
            return FieldSpec(p, m, coeffs)
    raise AssertionError("no irreducible polynomial found")  # unreachable


@dataclass(frozen=True)
class FieldElement:
    """A canonical element of GF(p^m): one coefficient vector per element."""

    spec: FieldSpec
    rep: tuple[int, ...]

    def __post_init__(self):
        if len(self.rep) != self.spec.m:
            raise ValueError("coefficient vector has wrong length")
        if any(not 0 <= c < self.spec.p for c in self.rep):
            object.__setattr__(
                self, "rep", tuple(c % self.spec.p for c in self.rep)
            )

    @property
    def index(self) -> int:
        """Position in the canonical enumeration (base-p value of rep)."""
        i = 0
        for c in reversed(self.rep):
            i = i * self.spec.p + c
        return i

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.rep)

    def __bool__(self):
        return not self.is_zero()

    def _same(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError(f"cannot combine FieldElement with {type(other)!r}")
        if other.spec != self.spec:
            raise ValueError("elements belong to different fields")
        return other

    def __add__(self, other):
        other = self._same(other)
        p = self.spec.p
        return FieldElement(
            self.spec, tuple((a + b) % p for a, b in zip(self.rep, other.rep))
        )

    def __sub__(self, other):
        other = self._same(other)
        p = self.spec.p
        return FieldElement(
            self.spec, tuple((a - b) % p for a, b in zip(self.rep, other.rep))
        )

    def __neg__(self):
        p = self.spec.p
        return FieldElement(self.spec, tuple((-a) % p for a in self.rep))

    def __mul__(self, other):
        other = self._same(other)
        spec = self.spec
        prod = _poly_mul(_trim(self.rep), _trim(other.rep), spec.p)
        red = _poly_mod(prod, spec.modulus, spec.p)
        rep = red + (0,) * (spec.m - len(red))
        return FieldElement(spec, rep)

    def inv(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self._pow_nonneg(self.spec.q - 2)

    def __truediv__(self, other):
        other = self._same(other)
        return self * other.inv()

    def _pow_nonneg(self, e: int) -> "FieldElement":
        result = self.spec.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __pow__(self, e: int) -> "FieldElement":
        if e < 0:
            return self.inv()._pow_nonneg(-e)
        return self._pow_nonneg(e)

    def __str__(self):
        if self.spec.m == 1:
            return str(self.rep[0])
        parts = []
        for i, c in enumerate(self.rep):
            if c == 0:
                continue
            if i == 0:
                parts.append(str(c))
            else:
                var = "t" if i == 1 else f"t^{i}"
                parts.append(var if c == 1 else f"{c}*{var}")
        return "+".join(parts) if parts else "0"

    def __repr__(self):
        return f"<{self} in GF({self.spec.name})>"


def enumerate_field(spec: FieldSpec) -> Iterator[FieldElement]:
    """All q elements, coefficient vectors read as base-p integers, zero first."""
    for i in range(spec.q):
        yield spec.from_index(i)


def frobenius(a: FieldElement) -> FieldElement:
    """The p-th power map, an automorphism fixing the prime subfield."""
    return a**a.spec.p


def is_square(a: FieldElement) -> bool:
    """Whether a is a nonzero square (Euler's criterion; any square in char 2)."""
    if a.is_zero():
        raise ValueError("zero is neither square class")
    q = a.spec.q
    if q % 2 == 0:
        return True
    return a._pow_nonneg((q - 1) // 2) == a.spec.one()


# ---------------------------------------------------------------------------
# index-level arithmetic tables for the kernel core

SQCLASS_ZERO = 0
SQCLASS_SQUARE = 1
SQCLASS_NONSQUARE = 2


@dataclass(frozen=True)
class FieldTables:
    """Dense index-level operation tables for a small field.

    Element i in [0, q) is the i-th element of the canonical enumeration;
    for a prime field the index equals the residue.
    """

    q: int
    p: int
    m: int
    add: np.ndarray  # (q, q) uint16
    mul: np.ndarray  # (q, q) uint16
    neg: np.ndarray  # (q,)  uint16
    inv: np.ndarray  # (q,)  uint16, inv[0] unused
    sqclass: np.ndarray  # (q,) uint8


_TABLE_CACHE: dict[FieldSpec, FieldTables] = {}


def build_tables(spec: FieldSpec, limit: int = TABLE_LIMIT) -> FieldTables:
    q = spec.q
    if q > limit:
        raise TableLimitError(f"q = {q} exceeds table limit {limit}")
    cached = _TABLE_CACHE.get(spec)
    if cached is not None:
        return cached

    p, m = spec.p, spec.m
    if m == 1:
        idx = np.arange(q, dtype=np.int64)
        add = ((idx[:, None] + idx[None, :]) % q).astype(np.uint16)
        mul = ((idx[:, None] * idx[None, :]) % q).astype(np.uint16)
        neg = ((-idx) % q).astype(np.uint16)
    else:
        digits = np.empty((q, m), dtype=np.int64)
        v = np.arange(q, dtype=np.int64)
        for j in range(m):
            digits[:, j] = v % p
            v //= p
        weights = p ** np.arange(m, dtype=np.int64)
        add = np.empty((q, q), dtype=np.uint16)
        for a in range(q):
            add[a] = ((digits[a][None, :] + digits) % p) @ weights
        neg = (((-digits) % p) @ weights).astype(np.uint16)

        # multiplication through a discrete-log table
        gen = _find_generator(spec)
        exp = np.empty(q - 1, dtype=np.int64)
        acc = spec.one()
        for i in range(q - 1):
            exp[i] = acc.index
            acc = acc * gen
        log = np.zeros(q, dtype=np.int64)
        log[exp] = np.arange(q - 1)
        mul = np.zeros((q, q), dtype=np.uint16)
        nz = exp  # indices of nonzero elements in generator order
        for a in nz:
            mul[a, nz] = exp[(log[a] + log[nz]) % (q - 1)]

    inv = np.zeros(q, dtype=np.uint16)
    sqclass = np.zeros(q, dtype=np.uint8)
    one_idx = spec.one().index
    for a in range(1, q):
        row = mul[a]
        inv[a] = int(np.nonzero(row == one_idx)[0][0])
    if q % 2 == 0:
        sqclass[1:] = SQCLASS_SQUARE
    else:
        squares = np.unique(mul[np.arange(1, q), np.arange(1, q)])
        sqclass[1:] = SQCLASS_NONSQUARE
        sqclass[squares] = SQCLASS_SQUARE
    sqclass[0] = SQCLASS_ZERO

    tables = FieldTables(q=q, p=p, m=m, add=add, mul=mul, neg=neg, inv=inv,
                         sqclass=sqclass)
    _TABLE_CACHE[spec] = tables
    return tables


def _find_generator(spec: FieldSpec) -> FieldElement:
    """A multiplicative generator of GF(q)*, by order testing."""
    q = spec.q
    factors = _prime_factors(q - 1)
    for i in range(1, q):
        cand = spec.from_index(i)
        if cand.is_zero():
            continue
        if all(cand._pow_nonneg((q - 1) // f) != spec.one() for f in factors):
            return cand
    raise AssertionError("no generator found")  # unreachable


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out
