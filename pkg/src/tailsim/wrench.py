"""Frame-tagged force/torque pairs."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

BODY = "body"
INERTIAL = "inertial"


@dataclass
class Wrench:
    """A force and torque with an explicit frame tag.

    Adding wrenches with mismatched frames is a programming error and raises.
    """

    force: np.ndarray = field(default_factory=lambda: np.zeros(3))
    torque: np.ndarray = field(default_factory=lambda: np.zeros(3))
    frame: str = BODY

    def __post_init__(self):
        if self.frame not in (BODY, INERTIAL):
            raise ValueError(f"unknown frame tag {self.frame!r}")
        self.force = np.asarray(self.force, dtype=float)
        self.torque = np.asarray(self.torque, dtype=float)

    def __add__(self, other: "Wrench") -> "Wrench":
        if self.frame != other.frame:
            raise ValueError(f"cannot add {self.frame} wrench to {other.frame} wrench")
        return Wrench(self.force + other.force, self.torque + other.torque, self.frame)
