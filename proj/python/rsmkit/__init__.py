"""Transaction-level simulation and verification for reconfigurable systems."""

from rsmkit._core import (
    CombinatorialLimit,
    LivelockGuard,
    Model,
    PropertyFailsOnGoldenModel,
    ReconfigViolation,
    RuntimeTrap,
    UnknownChannel,
    compare_traces,
)

__all__ = [
    "CombinatorialLimit",
    "LivelockGuard",
    "Model",
    "PropertyFailsOnGoldenModel",
    "ReconfigViolation",
    "RuntimeTrap",
    "UnknownChannel",
    "compare_traces",
]
