"""Rank-1 constraint systems: ``<A_i, w> * <B_i, w> = <C_i, w>``.

Variable 0 is the constant one, variables ``1..num_inputs`` are the public
inputs and everything after is private.  Linear combinations are plain
``{variable: coefficient}`` dicts with small signed integer coefficients;
reduction modulo the field happens only when values are evaluated.
"""

from __future__ import annotations

from ..snark.field import R

ONE = 0

LinearCombination = dict  # {variable index: int coefficient}


class ConstraintSystem:
    """Collects variables and (optionally) constraints while a circuit is synthesized.

    The same synthesis code runs in two modes: with ``recording=True`` it
    stores every constraint (used once per circuit shape), with
    ``recording=False`` it only fills in the assignment (used per proof).
    """

    def __init__(self, num_inputs: int, recording: bool = True):
        self.num_inputs = num_inputs
        self.recording = recording
        self.values: list[int] = [1] + [0] * num_inputs
        self.a: list[tuple] = []
        self.b: list[tuple] = []
        self.c: list[tuple] = []
        self._inputs_set = 0

    @property
    def num_variables(self) -> int:
        return len(self.values)

    @property
    def num_constraints(self) -> int:
        return len(self.a)

    def input(self, value: int) -> int:
        if self._inputs_set >= self.num_inputs:
            raise IndexError("all public inputs already allocated")
        self._inputs_set += 1
        self.values[self._inputs_set] = value % R
        return self._inputs_set

    def alloc(self, value: int) -> int:
        self.values.append(value)
        return len(self.values) - 1

    def enforce(self, a: LinearCombination, b: LinearCombination, c: LinearCombination) -> None:
        if self.recording:
            self.a.append(tuple(a.items()))
            self.b.append(tuple(b.items()))
            self.c.append(tuple(c.items()))

    def enforce_boolean(self, var: int) -> None:
        if self.recording:
            self.a.append(((var, 1),))
            self.b.append(((var, 1), (ONE, -1)))
            self.c.append(())


def evaluate(row: tuple, values: list[int]) -> int:
    return sum(values[v] * k for v, k in row) % R


def first_unsatisfied(a: list, b: list, c: list, values: list[int]) -> int | None:
    """Index of the first violated constraint, or None if all hold."""
    for i, (ra, rb, rc) in enumerate(zip(a, b, c)):
        if evaluate(ra, values) * evaluate(rb, values) % R != evaluate(rc, values):
            return i
    return None
