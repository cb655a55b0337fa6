"""Groth16 over BLS12-381: Setup, Prove, Verify for a ConstraintSystemDescriptor.

Group arithmetic, multi-scalar multiplication and pairings come from
``py_arkworks_bls12381``; the QAP reduction, key generation, the prover's
H-polynomial and the verification equation are implemented here.

Variable layout follows the descriptor: index 0 is the constant one,
``1..num_inputs`` are public, the rest private.  For every public variable
(and the constant) an extra row ``x_j * 0 = 0`` is appended to the QAP so
the public polynomials are linearly independent.
"""

from __future__ import annotations

import hashlib
import secrets
from dataclasses import dataclass
from typing import TYPE_CHECKING

from py_arkworks_bls12381 import GT, G1Point, G2Point, Scalar

from ..errors import KeyMismatch, ShapeError, UnsatisfiedConstraints
from .field import R, domain_size_for, get_domain, get_transformer, inv
from .ntt import from_limbs, to_limbs

if TYPE_CHECKING:
    from ..circuit.system import ConstraintSystemDescriptor, WitnessAssignment
    from ..encoding import PublicInput

G1_BYTES = 48
G2_BYTES = 96
PROOF_BYTES = 2 * G1_BYTES + G2_BYTES


def to_scalar(x: int) -> Scalar:
    return Scalar.from_le_bytes(list((x % R).to_bytes(32, "little")))


class FixedBase:
    """Windowed table for repeated multiplication of one generator."""

    WINDOW = 8

    def __init__(self, generator):
        self.identity = type(generator).identity()
        self.rows = []
        base = generator
        for _ in range(256 // self.WINDOW):
            row = [None]
            acc = base
            for _ in range(1, 1 << self.WINDOW):
                row.append(acc)
                acc = acc + base
            self.rows.append(row)
            base = acc

    def mul(self, x: int):
        acc = self.identity
        for row, digit in zip(self.rows, (x % R).to_bytes(32, "little")):
            if digit:
                acc = acc + row[digit]
        return acc

    def batch(self, xs):
        return [self.mul(x) for x in xs]


def _seeded_scalar(seed: bytes, label: str) -> int:
    counter = 0
    while True:
        digest = hashlib.sha512(b"zklaims-setup|" + seed + b"|" + label.encode() + bytes([counter])).digest()
        value = int.from_bytes(digest, "big") % R
        if value:
            return value
        counter += 1


def _random_scalar() -> int:
    return 1 + secrets.randbelow(R - 1)


@dataclass(eq=False)
class ProvingKey:
    hash_id: int
    payload_count: int
    seeded: bool
    fingerprint: bytes
    num_inputs: int
    num_variables: int
    domain_size: int
    alpha_g1: G1Point
    beta_g1: G1Point
    beta_g2: G2Point
    delta_g1: G1Point
    delta_g2: G2Point
    a_query: list
    b_g1_query: list
    b_g2_query: list
    l_query: list
    h_query: list


@dataclass(eq=False)
class VerificationKey:
    hash_id: int
    payload_count: int
    seeded: bool
    fingerprint: bytes
    alpha_g1: G1Point
    beta_g2: G2Point
    gamma_g2: G2Point
    delta_g2: G2Point
    ic: list

    @property
    def num_inputs(self) -> int:
        return len(self.ic) - 1


@dataclass(frozen=True, eq=False)
class Proof:
    a: G1Point
    b: G2Point
    c: G1Point

    def to_bytes(self) -> bytes:
        return bytes(self.a.to_compressed_bytes()) + bytes(self.b.to_compressed_bytes()) + bytes(self.c.to_compressed_bytes())

    def __eq__(self, other):
        return isinstance(other, Proof) and self.to_bytes() == other.to_bytes()

    def __hash__(self):
        return hash(self.to_bytes())


def qap_at(descriptor: ConstraintSystemDescriptor, tau: int):
    """Evaluate every variable's A/B/C polynomial at ``tau``."""
    n_rows = descriptor.constraint_count + descriptor.num_inputs + 1
    domain = get_domain(domain_size_for(n_rows))
    lag = domain.lagrange_at(tau)
    nv = descriptor.num_variables
    u, v, w = [0] * nv, [0] * nv, [0] * nv
    for acc, rows in ((u, descriptor.a), (v, descriptor.b), (w, descriptor.c)):
        for li, row in zip(lag, rows):
            for var, k in row:
                acc[var] += k * li
    base = descriptor.constraint_count
    for j in range(descriptor.num_inputs + 1):
        u[j] += lag[base + j]
    return domain, [x % R for x in u], [x % R for x in v], [x % R for x in w]


def setup(descriptor: ConstraintSystemDescriptor, rng_seed: bytes | None = None) -> tuple[ProvingKey, VerificationKey]:
    """Generate (pk, vk).  A seed makes the output reproducible and is for tests only."""
    if rng_seed is not None:
        if len(rng_seed) != 32:
            raise ValueError("setup seed must be 32 bytes")
        draw = lambda label: _seeded_scalar(rng_seed, label)  # noqa: E731
    else:
        draw = lambda label: _random_scalar()  # noqa: E731
    tau, alpha, beta, gamma, delta = (draw(s) for s in ("tau", "alpha", "beta", "gamma", "delta"))

    domain, u, v, w = qap_at(descriptor, tau)
    while domain.vanishing_at(tau) == 0:  # negligible, but tau must avoid the domain
        tau = (tau + 1) % R
        domain, u, v, w = qap_at(descriptor, tau)

    g1, g2 = FixedBase(G1Point()), FixedBase(G2Point())
    gamma_inv, delta_inv = inv(gamma), inv(delta)
    ni = descriptor.num_inputs
    combined = [(beta * ui + alpha * vi + wi) % R for ui, vi, wi in zip(u, v, w)]
    ic = g1.batch(c * gamma_inv for c in combined[: ni + 1])
    l_query = g1.batch(c * delta_inv for c in combined[ni + 1:])

    z_over_delta = domain.vanishing_at(tau) * delta_inv % R
    h_scalars = []
    acc = z_over_delta
    for _ in range(domain.size - 1):
        h_scalars.append(acc)
        acc = acc * tau % R

    pk = ProvingKey(
        hash_id=descriptor.hash_algorithm_id,
        payload_count=descriptor.payload_count,
        seeded=rng_seed is not None,
        fingerprint=descriptor.fingerprint,
        num_inputs=ni,
        num_variables=descriptor.num_variables,
        domain_size=domain.size,
        alpha_g1=g1.mul(alpha),
        beta_g1=g1.mul(beta),
        beta_g2=g2.mul(beta),
        delta_g1=g1.mul(delta),
        delta_g2=g2.mul(delta),
        a_query=g1.batch(u),
        b_g1_query=g1.batch(v),
        b_g2_query=g2.batch(v),
        l_query=l_query,
        h_query=g1.batch(h_scalars),
    )
    vk = VerificationKey(
        hash_id=pk.hash_id,
        payload_count=pk.payload_count,
        seeded=pk.seeded,
        fingerprint=pk.fingerprint,
        alpha_g1=pk.alpha_g1,
        beta_g2=pk.beta_g2,
        gamma_g2=g2.mul(gamma),
        delta_g2=pk.delta_g2,
        ic=ic,
    )
    return pk, vk


def _msm(identity, points: list, scalars: list[int]):
    """Multi-scalar multiplication that adds points directly for 0/1 scalars."""
    acc = identity
    big_points, big_scalars = [], []
    for p, s in zip(points, scalars):
        if s == 0:
            continue
        if s == 1:
            acc = acc + p
        else:
            big_points.append(p)
            big_scalars.append(to_scalar(s))
    if big_points:
        acc = acc + type(identity).multiexp_unchecked(big_points, big_scalars)
    return acc


def compute_h(descriptor: ConstraintSystemDescriptor, values: list[int], domain_size: int) -> list[int]:
    """Coefficients of H(X) = (A(X)B(X) - C(X)) / Z(X); raises if the witness is unsatisfying."""
    domain = get_domain(domain_size)
    rows_a, rows_b, rows_c = descriptor.a, descriptor.b, descriptor.c
    a_vals, b_vals, c_vals = [], [], []
    for i, (ra, rb, rc) in enumerate(zip(rows_a, rows_b, rows_c)):
        av = sum(values[v] * k for v, k in ra) % R
        bv = sum(values[v] * k for v, k in rb) % R
        cv = sum(values[v] * k for v, k in rc) % R
        if av * bv % R != cv:
            raise UnsatisfiedConstraints(i)
        a_vals.append(av)
        b_vals.append(bv)
        c_vals.append(cv)
    a_vals.extend(values[: descriptor.num_inputs + 1])

    n = domain.size
    t = get_transformer(n)
    a = t.coset_fft(t.ifft(to_limbs(a_vals, n)))
    b = t.coset_fft(t.ifft(to_limbs(b_vals, n)))
    c = t.coset_fft(t.ifft(to_limbs(c_vals, n)))
    h = from_limbs(t.coset_ifft(t.quotient(a, b, c, domain.vanishing_at(domain.coset))))
    if any(h[n - 1:]):
        raise UnsatisfiedConstraints(-1, "quotient polynomial has unexpected degree")
    return h[: domain.size - 1]


def prove(pk: ProvingKey, witness: WitnessAssignment, x: PublicInput, *, r: int | None = None, s: int | None = None) -> Proof:
    descriptor = witness.descriptor
    elements = x.field_elements
    if len(elements) != pk.num_inputs:
        raise KeyMismatch(f"proving key expects {pk.num_inputs} public inputs, got {len(elements)}")
    if descriptor.fingerprint != pk.fingerprint or descriptor.num_variables != pk.num_variables:
        raise KeyMismatch("witness was synthesized for a different constraint system")
    values = list(witness.values)
    values[1: 1 + pk.num_inputs] = [e % R for e in elements]

    h = compute_h(descriptor, values, pk.domain_size)
    r = _random_scalar() if r is None else r % R
    s = _random_scalar() if s is None else s % R

    a = pk.alpha_g1 + _msm(G1Point.identity(), pk.a_query, values) + pk.delta_g1 * to_scalar(r)
    b2 = pk.beta_g2 + _msm(G2Point.identity(), pk.b_g2_query, values) + pk.delta_g2 * to_scalar(s)
    b1 = pk.beta_g1 + _msm(G1Point.identity(), pk.b_g1_query, values) + pk.delta_g1 * to_scalar(s)
    private = values[pk.num_inputs + 1:]
    c = _msm(G1Point.identity(), pk.l_query, private)
    c = c + G1Point.multiexp_unchecked(pk.h_query, [to_scalar(v) for v in h])
    c = c + a * to_scalar(s) + b1 * to_scalar(r) - pk.delta_g1 * to_scalar(r * s)
    return Proof(a, b2, c)


def verify(vk: VerificationKey, proof: Proof, x: PublicInput) -> bool:
    elements = x.field_elements
    if len(elements) != vk.num_inputs:
        raise ShapeError(f"verification key expects {vk.num_inputs} public inputs, got {len(elements)}")
    acc = vk.ic[0] + _msm(G1Point.identity(), vk.ic[1:], [e % R for e in elements])
    check = GT.multi_pairing(
        [proof.a, -vk.alpha_g1, -acc, -proof.c],
        [proof.b, vk.beta_g2, vk.gamma_g2, vk.delta_g2],
    )
    return check == GT.one()
