"""Pure-Python (numpy) implementations of the hot kernels.

Same contracts as gslab._ckernels; selected automatically when the compiled
extension is unavailable or disabled. Two data regimes:

  * "tables": arbitrary small fields, arithmetic by table gather;
  * "prime":  GF(p) with direct modular arithmetic (works for any p).

All inputs are index-level integer arrays (see gslab.kernels).
"""

from __future__ import annotations

import numpy as np

CLASS_WHOLE = 0
CLASS_IRREDUCIBLE = 1
CLASS_SPLIT = 2
CLASS_CONJUGATE = 3
CLASS_DOUBLE = 4

_CHUNK_CELLS = 4_000_000


def eval_poly(ctx, points, exps, coeffs):
    """Values of a polynomial at each point; (N,) int64 of element indices."""
    n = points.shape[0]
    out = np.zeros(n, dtype=np.int64)
    if exps.shape[0] == 0:
        return out
    if ctx.mode == "prime":
        p = ctx.p
        pts = points.astype(np.int64)
        for t in range(exps.shape[0]):
            term = np.full(n, int(coeffs[t]), dtype=np.int64)
            for j in range(exps.shape[1]):
                for _ in range(int(exps[t, j])):
                    term = (term * pts[:, j]) % p
            out = (out + term) % p
        return out
    add, mul = ctx.add, ctx.mul
    for t in range(exps.shape[0]):
        term = np.full(n, int(coeffs[t]), dtype=np.intp)
        for j in range(exps.shape[1]):
            for _ in range(int(exps[t, j])):
                term = mul[term, points[:, j]].astype(np.intp)
        out = add[out, term].astype(np.int64)
    return out


def incidence_counts(ctx, xpoints, eqs):
    """For each of B subspaces, how many of the Nx points satisfy all k forms."""
    b = eqs.shape[0]
    nx = xpoints.shape[0]
    out = np.zeros(b, dtype=np.int64)
    if nx == 0 or b == 0:
        return out
    step = max(1, _CHUNK_CELLS // max(1, eqs.shape[1] * nx))
    for lo in range(0, b, step):
        hi = min(b, lo + step)
        out[lo:hi] = _incidence_block(ctx, xpoints, eqs[lo:hi])
    return out


def _incidence_block(ctx, xpoints, eqs):
    if ctx.mode == "prime":
        vals = np.einsum(
            "bkw,xw->bkx",
            eqs.astype(np.int64),
            xpoints.astype(np.int64),
        ) % ctx.p
        return (vals == 0).all(axis=1).sum(axis=1).astype(np.int64)
    add, mul = ctx.add, ctx.mul
    b, k, w = eqs.shape
    nx = xpoints.shape[0]
    on_all = np.ones((b, nx), dtype=bool)
    for i in range(k):
        acc = np.zeros((b, nx), dtype=np.intp)
        for j in range(w):
            prod = mul[eqs[:, i, j].astype(np.intp)[:, None],
                       xpoints[:, j].astype(np.intp)[None, :]]
            acc = add[acc, prod.astype(np.intp)].astype(np.intp)
        on_all &= acc == 0
    return on_all.sum(axis=1).astype(np.int64)


def incidence_mask(ctx, xpoints, eqs):
    """Boolean (B, Nx) membership matrix; small inputs only (no chunking)."""
    if ctx.mode == "prime":
        vals = np.einsum(
            "bkw,xw->bkx",
            eqs.astype(np.int64),
            xpoints.astype(np.int64),
        ) % ctx.p
        return (vals == 0).all(axis=1)
    add, mul = ctx.add, ctx.mul
    b, k, w = eqs.shape
    nx = xpoints.shape[0]
    on_all = np.ones((b, nx), dtype=bool)
    for i in range(k):
        acc = np.zeros((b, nx), dtype=np.intp)
        for j in range(w):
            prod = mul[eqs[:, i, j].astype(np.intp)[:, None],
                       xpoints[:, j].astype(np.intp)[None, :]]
            acc = add[acc, prod.astype(np.intp)].astype(np.intp)
        on_all &= acc == 0
    return on_all


def restrict_gram(ctx, gram, bases):
    """Congruence restriction R = B G B^T for each basis; (B, s1, s1) indices."""
    if ctx.mode == "prime":
        p = ctx.p
        bi = bases.astype(np.int64)
        return np.einsum("bij,jk,blk->bil", bi, gram.astype(np.int64), bi) % p
    add, mul = ctx.add, ctx.mul
    b, s1, w = bases.shape
    t1 = np.zeros((b, s1, w), dtype=np.intp)
    for i in range(s1):
        for kk in range(w):
            acc = np.zeros(b, dtype=np.intp)
            for j in range(w):
                acc = add[acc, mul[bases[:, i, j].astype(np.intp),
                                   int(gram[j, kk])].astype(np.intp)]
            t1[:, i, kk] = acc
    out = np.zeros((b, s1, s1), dtype=np.int64)
    for i in range(s1):
        for ll in range(s1):
            acc = np.zeros(b, dtype=np.intp)
            for kk in range(w):
                acc = add[acc, mul[t1[:, i, kk],
                                   bases[:, ll, kk].astype(np.intp)].astype(np.intp)]
            out[:, i, ll] = acc
    return out


def quadric_classes(ctx, gram, bases):
    """Classify the restriction of a quadratic form to each basis; (B,) uint8."""
    restricted = restrict_gram(ctx, gram, bases)
    b, s1 = restricted.shape[0], restricted.shape[1]
    out = np.empty(b, dtype=np.uint8)
    if ctx.mode == "prime":
        p = ctx.p
        fadd = lambda x, y: (x + y) % p
        fmul = lambda x, y: (x * y) % p
        fsub = lambda x, y: (x - y) % p
        fneg = lambda x: (-x) % p
        finv = lambda x: pow(int(x), p - 2, p)
        fsq = lambda x: 1 if pow(int(x), (p - 1) // 2, p) == 1 else 2
    else:
        mul, add, neg, inv, sq = ctx.mul, ctx.add, ctx.neg, ctx.inv, ctx.sqclass
        fadd = lambda x, y: int(add[x, y])
        fmul = lambda x, y: int(mul[x, y])
        fsub = lambda x, y: int(add[x, neg[y]])
        fneg = lambda x: int(neg[x])
        finv = lambda x: int(inv[x])
        fsq = lambda x: int(sq[x])
    for idx in range(b):
        out[idx] = _classify_one(
            [[int(v) for v in row] for row in restricted[idx]],
            s1, fadd, fmul, fsub, fneg, finv, fsq,
        )
    return out


def _classify_one(r, s1, fadd, fmul, fsub, fneg, finv, fsq):
    diag = []
    t = 0
    while t < s1:
        piv = -1
        for i in range(t, s1):
            if r[i][i] != 0:
                piv = i
                break
        if piv < 0:
            found = False
            for i in range(t, s1):
                for j in range(i + 1, s1):
                    if r[i][j] != 0:
                        # row/col j folded into i makes r[i][i] = 2*r[i][j] != 0
                        for c in range(s1):
                            r[i][c] = fadd(r[i][c], r[j][c])
                        for c in range(s1):
                            r[c][i] = fadd(r[c][i], r[c][j])
                        piv = i
                        found = True
                        break
                if found:
                    break
            if not found:
                break
        if piv != t:
            r[piv], r[t] = r[t], r[piv]
            for c in range(s1):
                r[c][piv], r[c][t] = r[c][t], r[c][piv]
        d = r[t][t]
        diag.append(d)
        dinv = finv(d)
        for i in range(t + 1, s1):
            f = fmul(r[i][t], dinv)
            if f:
                for c in range(s1):
                    r[i][c] = fsub(r[i][c], fmul(f, r[t][c]))
                for c in range(s1):
                    r[c][i] = fsub(r[c][i], fmul(f, r[c][t]))
        t += 1
    rank = len(diag)
    if rank == 0:
        return CLASS_WHOLE
    if rank >= 3:
        return CLASS_IRREDUCIBLE
    if rank == 1:
        return CLASS_DOUBLE
    disc = fneg(fmul(diag[0], diag[1]))
    return CLASS_SPLIT if fsq(disc) == 1 else CLASS_CONJUGATE
