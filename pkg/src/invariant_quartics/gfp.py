"""Vectorized F_p kernels: batched determinants, echelon forms, Newton
interpolation and root scans. numpy int64 throughout; entries stay below p,
so products fit comfortably for any p below 2^31.
"""

from __future__ import annotations

import numpy as np

__all__ = [
    "modpow_vec",
    "modinv_vec",
    "det_batch",
    "rank_mod",
    "kernel_basis_mod",
    "rref_mod",
    "newton_interpolate",
    "polyval_vec",
    "poly_roots",
    "poly_divmod_mod",
]


def modpow_vec(base: np.ndarray, e: int, p: int) -> np.ndarray:
    """Elementwise base**e mod p by square and multiply."""
    result = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            result = result * b % p
        b = b * b % p
        e >>= 1
    return result


def modinv_vec(a: np.ndarray, p: int) -> np.ndarray:
    return modpow_vec(a, p - 2, p)


def det_batch(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants of a (B, n, n) stack over F_p, fraction-free Gaussian
    elimination with per-matrix partial pivoting."""
    a = np.array(mats, dtype=np.int64) % p
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError("det_batch expects (B, n, n)")
    B, n, _ = a.shape
    det = np.ones(B, dtype=np.int64)
    alive = np.ones(B, dtype=bool)
    idx = np.arange(B)
    for k in range(n):
        col = a[:, k:, k] != 0
        has = col.any(axis=1)
        det[alive & ~has] = 0
        alive &= has
        if not alive.any():
            break
        off = col.argmax(axis=1)
        swap = alive & (off > 0)
        if swap.any():
            src = k + off[swap]
            rows_k = a[idx[swap], k, :].copy()
            a[idx[swap], k, :] = a[idx[swap], src, :]
            a[idx[swap], src, :] = rows_k
            det[swap] = (p - det[swap]) % p
        piv = a[:, k, k].copy()
        piv[~alive] = 1
        det[alive] = det[alive] * piv[alive] % p
        if k + 1 < n:
            inv = modinv_vec(piv, p)
            factors = a[:, k + 1 :, k] * inv[:, None] % p
            a[:, k + 1 :, k:] = (
                a[:, k + 1 :, k:] - factors[:, :, None] * a[:, k, None, k:]
            ) % p
    det[~alive] = 0
    return det % p


def rref_mod(mat: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over F_p, first-nonzero pivoting."""
    a = np.array(mat, dtype=np.int64) % p
    nr, nc = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(nc):
        if r == nr:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = a[r] * pow(int(a[r, c]), p - 2, p) % p
        mask = np.ones(nr, dtype=bool)
        mask[r] = False
        coeffs = a[mask, c]
        a[mask] = (a[mask] - coeffs[:, None] * a[r][None, :]) % p
        pivots.append(c)
        r += 1
    return a[: len(pivots)], pivots


def rank_mod(mat: np.ndarray, p: int) -> int:
    return len(rref_mod(mat, p)[1])


def kernel_basis_mod(mat: np.ndarray, p: int) -> np.ndarray:
    """Rows span the right null space; canonical w.r.t. the RREF pivots."""
    a, pivots = rref_mod(mat, p)
    nc = mat.shape[1]
    free = [c for c in range(nc) if c not in set(pivots)]
    out = np.zeros((len(free), nc), dtype=np.int64)
    for i, j in enumerate(free):
        out[i, j] = 1
        for t, pc in enumerate(pivots):
            out[i, pc] = (-a[t, j]) % p
    return out


def newton_interpolate(xs: np.ndarray, ys: np.ndarray, p: int) -> np.ndarray:
    """Coefficients (ascending) of the unique poly of degree < len(xs)
    through the points, over F_p."""
    xs = np.asarray(xs, dtype=np.int64) % p
    ys = np.asarray(ys, dtype=np.int64) % p
    n = len(xs)
    if len(np.unique(xs)) != n:
        raise ValueError("interpolation nodes must be distinct mod p")
    coef = ys.copy()
    for j in range(1, n):
        denom = (xs[j:] - xs[:-j]) % p
        coef[j:] = (coef[j:] - coef[j - 1 : n - 1]) * modinv_vec(denom, p) % p
    # expand Newton form to monomial coefficients
    poly = np.zeros(n, dtype=np.int64)
    for j in range(n - 1, -1, -1):
        # poly = poly * (x - xs[j]) + coef[j]
        shifted = np.roll(poly, 1)
        shifted[0] = 0
        poly = (shifted - poly * xs[j] + (np.arange(n) == 0) * coef[j]) % p
    return poly


def polyval_vec(coeffs: np.ndarray, xs: np.ndarray, p: int) -> np.ndarray:
    """Evaluate an ascending-coefficient poly at many points (Horner)."""
    xs = np.asarray(xs, dtype=np.int64) % p
    acc = np.zeros_like(xs)
    for c in reversed(list(np.asarray(coeffs, dtype=np.int64) % p)):
        acc = (acc * xs + int(c)) % p
    return acc


def poly_roots(coeffs: np.ndarray, p: int) -> list[int]:
    """All roots in F_p by full scan (p is small)."""
    xs = np.arange(p, dtype=np.int64)
    vals = polyval_vec(coeffs, xs, p)
    return [int(x) for x in xs[vals == 0]]


def poly_divmod_mod(a: np.ndarray, b: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Quotient and remainder of ascending-coefficient polys over F_p."""
    a = list(np.asarray(a, dtype=np.int64) % p)
    b = list(np.asarray(b, dtype=np.int64) % p)
    while b and b[-1] == 0:
        b.pop()
    if not b:
        raise ZeroDivisionError("poly division by zero")
    while a and a[-1] == 0:
        a.pop()
    db = len(b) - 1
    lead_inv = pow(int(b[-1]), p - 2, p)
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        c = a[-1] * lead_inv % p
        d = len(a) - 1 - db
        q[d] = c
        for j in range(db + 1):
            a[d + j] = (a[d + j] - c * b[j]) % p
        while a and a[-1] == 0:
            a.pop()
    return np.array(q, dtype=np.int64), np.array(a if a else [0], dtype=np.int64)
