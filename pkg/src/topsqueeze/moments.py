"""Second-moment containers shared by the Gaussian model and the Fock oracle."""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class MomentSet:
    N_s: np.ndarray
    N_i: np.ndarray
    M: np.ndarray

    @property
    def dimension(self):
        return self.N_s.shape[0]


@dataclass(frozen=True)
class DetectionModel:
    eta_s: float = 1.0
    eta_i: float = 1.0
    # background click probability per detection gate, each arm
    dark_counts: float = 0.0

    def __post_init__(self):
        for name in ("eta_s", "eta_i"):
            eta = getattr(self, name)
            if not 0 < eta <= 1:
                raise ValueError(f"{name} must lie in (0, 1], got {eta}")
        if not 0 <= self.dark_counts < 1:
            raise ValueError(f"dark_counts must lie in [0, 1), got {self.dark_counts}")
