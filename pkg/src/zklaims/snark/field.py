"""Scalar field of BLS12-381 and multiplicative evaluation domains.

Domains have size ``2^k`` or ``3 * 2^k`` so that the domain (and with it the
H-query, FFT cost and proving-key size) tracks the constraint count closely
instead of doubling at every power of two.
"""

from __future__ import annotations

from functools import lru_cache

R = 0x73EDA753299D7D483339D80809A1D80553BDA402FFFE5BFEFFFFFFFF00000001
GENERATOR = 7
TWO_ADICITY = 32


def inv(x: int) -> int:
    return pow(x, -1, R)


def batch_inverse(xs: list[int]) -> list[int]:
    """Montgomery's trick; every input must be non-zero."""
    prefix = [1] * (len(xs) + 1)
    acc = 1
    for i, x in enumerate(xs):
        acc = acc * x % R
        prefix[i + 1] = acc
    acc = inv(acc)
    out = [0] * len(xs)
    for i in range(len(xs) - 1, -1, -1):
        out[i] = acc * prefix[i] % R
        acc = acc * xs[i] % R
    return out


def domain_size_for(n: int) -> int:
    """Smallest admissible domain size (2^k or 3*2^k) holding ``n`` points."""
    size = 1
    while size < n:
        size <<= 1
    if size >= 4 and size // 4 * 3 >= n:
        return size // 4 * 3
    return size


def _powers(base: int, n: int) -> list[int]:
    out = [1] * n
    for i in range(1, n):
        out[i] = out[i - 1] * base % R
    return out


def _fft2(vals: list[int], roots: list[int]) -> list[int]:
    # roots[i] = w^i for the current length; outputs are unreduced
    n = len(vals)
    if n == 1:
        return list(vals)
    if n == 2:
        a, b = vals
        return [a + b, a - b]
    sub = roots[::2]
    even = _fft2(vals[::2], sub)
    odd = _fft2(vals[1::2], sub)
    t = [o * w % R for o, w in zip(odd, roots)]
    return [e + x for e, x in zip(even, t)] + [e - x for e, x in zip(even, t)]


class Domain:
    """The subgroup of ``size``-th roots of unity, with FFTs over it and a coset."""

    def __init__(self, size: int):
        k = size
        while k % 2 == 0:
            k //= 2
        if k not in (1, 3) or size < 1:
            raise ValueError(f"unsupported domain size {size}")
        self.size = size
        self.radix3 = k == 3
        self.omega = pow(GENERATOR, (R - 1) // size, R)
        self.omega_inv = inv(self.omega)
        self.size_inv = inv(size)
        self.coset = GENERATOR
        self._roots = _powers(self.omega, size)
        self._roots_inv = _powers(self.omega_inv, size)

    def _fft(self, vals: list[int], roots: list[int]) -> list[int]:
        n = self.size
        if len(vals) < n:
            vals = list(vals) + [0] * (n - len(vals))
        if not self.radix3:
            return [v % R for v in _fft2(vals, roots)]
        # one radix-3 split, then three power-of-two transforms with root w^3
        m = n // 3
        sub = roots[::3]
        f0 = _fft2(vals[0::3], sub)
        f1 = _fft2(vals[1::3], sub)
        f2 = _fft2(vals[2::3], sub)
        out = [0] * n
        for q in range(3):
            base = q * m
            out[base:base + m] = [
                (a + b * roots[base + i] + c * roots[(2 * (base + i)) % n]) % R
                for i, (a, b, c) in enumerate(zip(f0, f1, f2))
            ]
        return out

    def fft(self, coeffs: list[int]) -> list[int]:
        return self._fft(coeffs, self._roots)

    def ifft(self, evals: list[int]) -> list[int]:
        s = self.size_inv
        return [v * s % R for v in self._fft(evals, self._roots_inv)]

    @property
    def coset_powers(self) -> list[int]:
        return _coset_powers(self.size, self.coset)

    @property
    def coset_inv_powers(self) -> list[int]:
        return _coset_powers(self.size, inv(self.coset))

    def coset_fft(self, coeffs: list[int]) -> list[int]:
        return self.fft([c * g % R for c, g in zip(coeffs, self.coset_powers)])

    def coset_ifft(self, evals: list[int]) -> list[int]:
        s = self.size_inv
        raw = self._fft(evals, self._roots_inv)
        return [v * g % R * s % R for v, g in zip(raw, self.coset_inv_powers)]

    def vanishing_at(self, x: int) -> int:
        return (pow(x, self.size, R) - 1) % R

    def lagrange_at(self, tau: int) -> list[int]:
        """All Lagrange basis polynomials of the domain evaluated at ``tau``."""
        z = self.vanishing_at(tau)
        if z == 0:
            raise ValueError("tau lies in the domain")
        denom = batch_inverse([(tau - w) % R for w in self._roots])
        scale = z * self.size_inv % R
        return [scale * w % R * d % R for w, d in zip(self._roots, denom)]


@lru_cache(maxsize=8)
def _coset_powers(size: int, g: int) -> list[int]:
    return _powers(g, size)


@lru_cache(maxsize=8)
def get_domain(size: int) -> Domain:
    return Domain(size)


@lru_cache(maxsize=8)
def get_transformer(size: int):
    from .ntt import Transformer

    return Transformer(get_domain(size))
