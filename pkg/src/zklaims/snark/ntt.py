"""Compiled number-theoretic transform over the BLS12-381 scalar field.

Elements are rows of eight 32-bit limbs (little-endian) held in uint64 so
limb products never overflow.  Data stays in canonical form; only the
twiddle tables are in Montgomery form, so ``mont_mul(x, w * 2^256)`` is
plain ``x * w``.  ``field.Domain`` keeps a pure-Python transform that the
tests use as an independent oracle for this one.
"""

from __future__ import annotations

import numpy as np
from numba import njit

from .field import R

LIMBS = 8
MASK = (1 << 32) - 1
MONT = 1 << 256
_P = np.array([(R >> (32 * i)) & MASK for i in range(LIMBS)], dtype=np.uint64)
_PINV = np.uint64((-pow(R, -1, 1 << 32)) % (1 << 32))
_M32 = np.uint64(MASK)
_S32 = np.uint64(32)
_S63 = np.uint64(63)
_ONE = np.uint64(1)
_ZERO = np.uint64(0)


def to_limbs(values, n: int | None = None) -> np.ndarray:
    """Python ints in [0, R) to an (n, 8) limb array, zero-padded to ``n`` rows."""
    n = len(values) if n is None else n
    buf = b"".join(v.to_bytes(32, "little") for v in values) + bytes(32 * (n - len(values)))
    return np.frombuffer(buf, dtype="<u4").reshape(n, LIMBS).astype(np.uint64)


def from_limbs(arr: np.ndarray) -> list[int]:
    raw = arr.astype("<u4").tobytes()
    return [int.from_bytes(raw[i:i + 32], "little") for i in range(0, len(raw), 32)]


def mont_table(values) -> np.ndarray:
    return to_limbs([v * MONT % R for v in values])


@njit(cache=True, inline="always")
def _geq_p(t, p):
    for j in range(7, -1, -1):
        if t[j] > p[j]:
            return True
        if t[j] < p[j]:
            return False
    return True


@njit(cache=True, inline="always")
def _mont_mul(a, b, out, p, pinv, t):
    for j in range(10):
        t[j] = 0
    for i in range(8):
        c = _ZERO
        bi = b[i]
        for j in range(8):
            s = t[j] + a[j] * bi + c
            t[j] = s & _M32
            c = s >> _S32
        s = t[8] + c
        t[8] = s & _M32
        t[9] = s >> _S32
        m = (t[0] * pinv) & _M32
        s = t[0] + m * p[0]
        c = s >> _S32
        for j in range(1, 8):
            s = t[j] + m * p[j] + c
            t[j - 1] = s & _M32
            c = s >> _S32
        s = t[8] + c
        t[7] = s & _M32
        t[8] = t[9] + (s >> _S32)
    if t[8] != 0 or _geq_p(t, p):
        borrow = _ZERO
        for j in range(8):
            s = t[j] - p[j] - borrow
            out[j] = s & _M32
            borrow = (s >> _S63) & _ONE
    else:
        for j in range(8):
            out[j] = t[j]


@njit(cache=True, inline="always")
def _add(a, b, out, p):
    c = _ZERO
    for j in range(8):
        s = a[j] + b[j] + c
        out[j] = s & _M32
        c = s >> _S32
    if _geq_p(out, p):
        borrow = _ZERO
        for j in range(8):
            s = out[j] - p[j] - borrow
            out[j] = s & _M32
            borrow = (s >> _S63) & _ONE


@njit(cache=True, inline="always")
def _sub(a, b, out, p):
    borrow = _ZERO
    for j in range(8):
        s = a[j] - b[j] - borrow
        out[j] = s & _M32
        borrow = (s >> _S63) & _ONE
    if borrow:
        c = _ZERO
        for j in range(8):
            s = out[j] + p[j] + c
            out[j] = s & _M32
            c = s >> _S32


@njit(cache=True)
def _ntt_pow2(a, roots, p, pinv):
    """In-place radix-2 transform of ``a`` (length m, a power of two dividing len(roots))."""
    m = a.shape[0]
    n = roots.shape[0]
    t = np.zeros(10, dtype=np.uint64)
    u = np.zeros(8, dtype=np.uint64)
    v = np.zeros(8, dtype=np.uint64)
    j = 0
    for i in range(1, m):
        bit = m >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            for k in range(8):
                tmp = a[i, k]
                a[i, k] = a[j, k]
                a[j, k] = tmp
    h = 1
    while h < m:
        step = n // (2 * h)
        for start in range(0, m, 2 * h):
            for k in range(h):
                x = start + k
                y = x + h
                if k == 0:
                    for q in range(8):
                        v[q] = a[y, q]
                else:
                    _mont_mul(a[y], roots[k * step], v, p, pinv, t)
                for q in range(8):
                    u[q] = a[x, q]
                _add(u, v, a[x], p)
                _sub(u, v, a[y], p)
        h *= 2


@njit(cache=True)
def _ntt(a, roots, p, pinv):
    n = a.shape[0]
    if n & (n - 1) == 0:
        _ntt_pow2(a, roots, p, pinv)
        return a
    m = n // 3
    f0 = a[0::3].copy()
    f1 = a[1::3].copy()
    f2 = a[2::3].copy()
    _ntt_pow2(f0, roots, p, pinv)
    _ntt_pow2(f1, roots, p, pinv)
    _ntt_pow2(f2, roots, p, pinv)
    t = np.zeros(10, dtype=np.uint64)
    x = np.zeros(8, dtype=np.uint64)
    out = np.empty_like(a)
    for k in range(n):
        i = k % m
        _mont_mul(f1[i], roots[k], x, p, pinv, t)
        _add(f0[i], x, out[k], p)
        _mont_mul(f2[i], roots[(2 * k) % n], x, p, pinv, t)
        _add(out[k], x, out[k], p)
    return out


@njit(cache=True)
def _scale(a, factors, p, pinv):
    t = np.zeros(10, dtype=np.uint64)
    for i in range(a.shape[0]):
        _mont_mul(a[i], factors[i], a[i], p, pinv, t)


@njit(cache=True)
def _quotient(a, b, c, z_r2, z_r, p, pinv):
    """a <- (a*b - c) / z elementwise.

    mont(a, b) is a*b/2^256, so it is rescaled by z_r2 = z^-1 * 2^512 while c
    gets z_r = z^-1 * 2^256 (both reduced mod R).
    """
    t = np.zeros(10, dtype=np.uint64)
    x = np.zeros(8, dtype=np.uint64)
    y = np.zeros(8, dtype=np.uint64)
    for i in range(a.shape[0]):
        _mont_mul(a[i], b[i], x, p, pinv, t)
        _mont_mul(x, z_r2, x, p, pinv, t)
        _mont_mul(c[i], z_r, y, p, pinv, t)
        _sub(x, y, a[i], p)


class Transformer:
    """Forward/inverse and coset transforms for one domain, on limb arrays."""

    def __init__(self, domain):
        self.size = domain.size
        self.roots = mont_table(domain._roots)
        self.roots_inv = mont_table(domain._roots_inv)
        s = domain.size_inv
        self.coset_fwd = mont_table(domain.coset_powers)
        self.coset_back = mont_table([g * s % R for g in domain.coset_inv_powers])
        self.scale_inv = mont_table([s] * domain.size)

    def fft(self, a):
        return _ntt(a, self.roots, _P, _PINV)

    def ifft(self, a):
        a = _ntt(a, self.roots_inv, _P, _PINV)
        _scale(a, self.scale_inv, _P, _PINV)
        return a

    def coset_fft(self, a):
        _scale(a, self.coset_fwd, _P, _PINV)
        return _ntt(a, self.roots, _P, _PINV)

    def coset_ifft(self, a):
        a = _ntt(a, self.roots_inv, _P, _PINV)
        _scale(a, self.coset_back, _P, _PINV)
        return a

    def quotient(self, a, b, c, z: int):
        z_inv = pow(z, -1, R)
        z_r2 = to_limbs([z_inv * MONT % R * MONT % R])[0]
        z_r = to_limbs([z_inv * MONT % R])[0]
        _quotient(a, b, c, z_r2, z_r, _P, _PINV)
        return a
