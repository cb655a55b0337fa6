"""Per-slot predicate gadget.

For one attribute ``a`` (given as 50 private bits), a public reference ``r``
and a public mask ``p``:

* ``d = a - r + 2^50`` is decomposed into 51 bits; its top bit is ``a >= r``,
  so ``lt`` is its negation;
* ``eq`` comes from an is-zero check on ``a - r``;
* ``gt = 1 - lt - eq`` and is constrained boolean, so exactly one outcome is set;
* the mask is decomposed into three bits and ``p0*lt + p1*eq + p2*gt = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..encoding import ATTRIBUTE_BITS
from ..snark.field import R
from .gadgets import Bit, _add_into, alloc_bit, and_, not_, unpack_lc
from .r1cs import ONE, ConstraintSystem


@dataclass(frozen=True)
class SlotWires:
    """Where a slot's comparison outcome lives in the assignment."""

    lt: tuple  # linear combination items
    eq: tuple
    gt: tuple

    def outcome(self, values: list[int]) -> tuple[int, int, int]:
        return tuple(sum(values[v] * k for v, k in lc) % R for lc in (self.lt, self.eq, self.gt))


def compare_slot(
    cs: ConstraintSystem, value_bits: list[Bit], mask_var: int, ref_var: int
) -> SlotWires:
    assert len(value_bits) == ATTRIBUTE_BITS
    a_value = 0
    a_lc: dict = {}
    for i, bit in enumerate(value_bits):
        a_value = (a_value << 1) | bit.value
        _add_into(a_lc, bit.lc(), 1 << (ATTRIBUTE_BITS - 1 - i))
    mask = cs.values[mask_var]
    ref = cs.values[ref_var]

    m_bits = [alloc_bit(cs, (mask >> k) & 1) for k in range(3)]
    cs.enforce({m_bits[0].var: 1, m_bits[1].var: 2, m_bits[2].var: 4, mask_var: -1}, {ONE: 1}, {})

    diff_lc = dict(a_lc)
    diff_lc[ref_var] = diff_lc.get(ref_var, 0) - 1
    shifted = dict(diff_lc)
    shifted[ONE] = shifted.get(ONE, 0) + (1 << ATTRIBUTE_BITS)
    d_bits = unpack_lc(cs, shifted, a_value - ref + (1 << ATTRIBUTE_BITS), ATTRIBUTE_BITS + 1)
    ge = d_bits[ATTRIBUTE_BITS]
    lt = not_(ge)

    diff = (a_value - ref) % R
    eq_value = int(diff == 0)
    eq = cs.alloc(eq_value)
    inverse = cs.alloc(pow(diff, -1, R) if diff else 0)
    cs.enforce(diff_lc, {inverse: 1}, {ONE: 1, eq: -1})
    cs.enforce(diff_lc, {eq: 1}, {})
    eq_bit = Bit(eq, eq_value)

    gt_lc = {ge.var: 1, eq: -1}
    cs.enforce(gt_lc, gt_lc, gt_lc)

    t0 = and_(cs, m_bits[0], lt)
    t1 = and_(cs, m_bits[1], eq_bit)
    cs.enforce(m_bits[2].lc(), gt_lc, _add_into(_add_into({ONE: 1}, t0.lc(), -1), t1.lc(), -1))
    return SlotWires(tuple(lt.lc().items()), ((eq, 1),), tuple(gt_lc.items()))
