"""Energy-efficient cooperative spectrum sensing: fixed-size censoring and
truncated sequential energy tests with OR fusion."""

from ._accel import BACKEND
from .models import (
    FixedSizeDesign,
    Infeasible,
    NetworkModel,
    SensorProfile,
    SequentialDesign,
    Solution,
    uniform_profiles,
)

__all__ = [
    "BACKEND",
    "FixedSizeDesign",
    "Infeasible",
    "NetworkModel",
    "SensorProfile",
    "SequentialDesign",
    "Solution",
    "uniform_profiles",
]
