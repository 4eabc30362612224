"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The compiled extension (gslab._ckernels, Cython) is used when it imported
cleanly and the field is small enough for index-level arithmetic tables.
Otherwise the numpy fallback (gslab._pykernels) runs the same contracts.
Set GSL_KERNELS=pure or GSL_KERNELS=compiled to force a backend.

Data model: a field element is its index in the canonical enumeration
(gslab.ff); points and equation matrices are integer arrays of indices.
Polynomials are (exps, coeffs) pairs: exps is (terms, nvars) uint8, coeffs
is (terms,) of coefficient indices.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from . import _pykernels
from .errors import TableLimitError
from .ff import TABLE_LIMIT, FieldSpec, build_tables

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on build environment
    _ckernels = None

CLASS_WHOLE = _pykernels.CLASS_WHOLE
CLASS_IRREDUCIBLE = _pykernels.CLASS_IRREDUCIBLE
CLASS_SPLIT = _pykernels.CLASS_SPLIT
CLASS_CONJUGATE = _pykernels.CLASS_CONJUGATE
CLASS_DOUBLE = _pykernels.CLASS_DOUBLE


def compiled_available() -> bool:
    return _ckernels is not None


def active_backend_name() -> str:
    forced = os.environ.get("GSL_KERNELS", "auto")
    if forced == "pure":
        return "pure"
    if forced == "compiled":
        if _ckernels is None:
            raise RuntimeError("GSL_KERNELS=compiled but gslab._ckernels is not built")
        return "compiled"
    return "compiled" if _ckernels is not None else "pure"


@dataclass(frozen=True)
class KernelContext:
    """Field arithmetic handed to the kernels, plus the chosen backend."""

    q: int
    p: int
    m: int
    mode: str  # "tables" or "prime"
    add: np.ndarray | None
    mul: np.ndarray | None
    neg: np.ndarray | None
    inv: np.ndarray | None
    sqclass: np.ndarray | None
    backend: str


_CTX_CACHE: dict[tuple[FieldSpec, str], KernelContext] = {}


def context_for(spec: FieldSpec, backend: str | None = None) -> KernelContext:
    """Kernel context for a field; raises TableLimitError for huge extensions."""
    chosen = backend or active_backend_name()
    key = (spec, chosen)
    ctx = _CTX_CACHE.get(key)
    if ctx is not None:
        return ctx
    if spec.q <= TABLE_LIMIT:
        t = build_tables(spec)
        ctx = KernelContext(q=t.q, p=t.p, m=t.m, mode="tables", add=t.add,
                            mul=t.mul, neg=t.neg, inv=t.inv, sqclass=t.sqclass,
                            backend=chosen)
    elif spec.m == 1:
        # large prime field: modular arithmetic, pure backend only
        ctx = KernelContext(q=spec.q, p=spec.p, m=1, mode="prime", add=None,
                            mul=None, neg=None, inv=None, sqclass=None,
                            backend="pure")
    else:
        raise TableLimitError(
            f"GF({spec.name}) exceeds the table limit; use object-level fallback"
        )
    _CTX_CACHE[key] = ctx
    return ctx


def _impl(ctx: KernelContext):
    if ctx.backend == "compiled" and ctx.mode == "tables" and _ckernels is not None:
        return _ckernels
    return _pykernels


def eval_poly(ctx: KernelContext, points: np.ndarray, exps: np.ndarray,
              coeffs: np.ndarray) -> np.ndarray:
    """Polynomial values (element indices) at each point row."""
    return _impl(ctx).eval_poly(ctx, points, exps, coeffs)


def incidence_counts(ctx: KernelContext, xpoints: np.ndarray,
                     eqs: np.ndarray) -> np.ndarray:
    """Per-subspace count of the given points annihilated by all k forms."""
    return _impl(ctx).incidence_counts(ctx, xpoints, eqs)


def quadric_classes(ctx: KernelContext, gram: np.ndarray,
                    bases: np.ndarray) -> np.ndarray:
    """Class codes for the restriction of one quadratic form to many bases."""
    return _impl(ctx).quadric_classes(ctx, gram, bases)


def restrict_gram(ctx: KernelContext, gram: np.ndarray,
                  bases: np.ndarray) -> np.ndarray:
    return _pykernels.restrict_gram(ctx, gram, bases)


def incidence_mask(ctx: KernelContext, xpoints: np.ndarray,
                   eqs: np.ndarray) -> np.ndarray:
    """Full membership matrix; diagnostic helper, always the numpy path."""
    return _pykernels.incidence_mask(ctx, xpoints, eqs)
