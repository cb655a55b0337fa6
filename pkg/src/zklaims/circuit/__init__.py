from .system import (
    ConstraintSystemDescriptor,
    WitnessAssignment,
    assign_witness,
    build_constraint_system,
    synthesize_witness,
)

__all__ = [
    "ConstraintSystemDescriptor",
    "WitnessAssignment",
    "assign_witness",
    "build_constraint_system",
    "synthesize_witness",
]
