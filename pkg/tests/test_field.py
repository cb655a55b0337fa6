import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from zklaims.snark.field import R, Domain, domain_size_for, get_domain, get_transformer, inv
from zklaims.snark.ntt import from_limbs, to_limbs


def naive_dft(coeffs, w):
    n = len(coeffs)
    return [sum(c * pow(w, i * k, R) for i, c in enumerate(coeffs)) % R for k in range(n)]


def poly_eval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % R
    return acc


def test_modulus_facts():
    # r - 1 = 2^32 * odd, and 3 divides the odd part
    assert (R - 1) % (1 << 32) == 0 and ((R - 1) >> 32) % 2 == 1
    assert ((R - 1) >> 32) % 3 == 0
    assert pow(7, (R - 1) // 2, R) == R - 1  # 7 is a non-residue


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 2), (3, 3), (5, 6), (7, 8), (13, 16), (17, 24), (25, 32),
                                        (32768, 32768), (32769, 49152), (65537, 98304), (98305, 131072)])
def test_domain_size_for(n, expected):
    assert domain_size_for(n) == expected


def test_domain_rejects_bad_sizes():
    for n in (5, 10, 20):
        with pytest.raises(ValueError):
            Domain(n)


@pytest.mark.parametrize("n", [2, 4, 8, 16, 6, 12, 24, 48])
def test_fft_against_naive(n):
    rng = random.Random(n)
    d = get_domain(n)
    assert pow(d.omega, n, R) == 1 and all(pow(d.omega, n // p, R) != 1 for p in (2, 3) if n % p == 0)
    v = [rng.randrange(R) for _ in range(n)]
    assert d.fft(v) == naive_dft(v, d.omega)
    assert d.ifft(d.fft(v)) == v
    # coset transform = evaluations at g * w^k
    assert d.coset_fft(v) == [poly_eval(v, d.coset * pow(d.omega, k, R) % R) for k in range(n)]
    assert d.coset_ifft(d.coset_fft(v)) == v


@pytest.mark.parametrize("n", [8, 12, 256, 384, 2048, 3072])
def test_compiled_ntt_matches_python(n):
    rng = random.Random(1000 + n)
    d, t = get_domain(n), get_transformer(n)
    v = [rng.randrange(R) for _ in range(n)]
    assert from_limbs(t.fft(to_limbs(v))) == d.fft(v)
    assert from_limbs(t.ifft(to_limbs(v))) == d.ifft(v)
    assert from_limbs(t.coset_fft(to_limbs(v))) == d.coset_fft(v)
    assert from_limbs(t.coset_ifft(to_limbs(v))) == d.coset_ifft(v)


def test_compiled_quotient():
    rng = random.Random(5)
    n = 48
    t = get_transformer(n)
    a, b, c = ([rng.randrange(R) for _ in range(n)] for _ in range(3))
    z = rng.randrange(1, R)
    got = from_limbs(t.quotient(to_limbs(a), to_limbs(b), to_limbs(c), z))
    zi = inv(z)
    assert got == [(x * y - w) * zi % R for x, y, w in zip(a, b, c)]


def test_edge_values_through_ntt():
    # 0, 1 and R-1 exercise the carry and borrow paths
    n = 16
    v = [0, 1, R - 1, R - 2, 2**255 % R, 2**128, 1, 0] * 2
    assert from_limbs(get_transformer(n).fft(to_limbs(v))) == get_domain(n).fft(v)


@given(st.lists(st.integers(0, R - 1), min_size=1, max_size=40))
def test_limb_roundtrip(vals):
    assert from_limbs(to_limbs(vals)) == vals


@pytest.mark.parametrize("n", [4, 6, 16, 24])
def test_lagrange_at(n):
    rng = random.Random(n)
    d = get_domain(n)
    tau = rng.randrange(R)
    lag = d.lagrange_at(tau)
    v = [rng.randrange(R) for _ in range(n)]
    # interpolate through the Lagrange basis and compare with evaluating the coefficients
    assert sum(a * b for a, b in zip(lag, v)) % R == poly_eval(d.ifft(v), tau)
    assert d.vanishing_at(tau) == (pow(tau, n, R) - 1) % R
