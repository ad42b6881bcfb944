import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from fracdiff.models.model_params import ModelParams


class ProfileSource(enum.Enum):
    CLOSED_FORM = "closed-form"
    ORACLE = "oracle"


@dataclass(frozen=True)
class Profile:
    """Density samples at one time.

    A closed-form profile may carry *evaluator*, the exact density as a function of
    |x|, so that integrals over it need not rely on interpolation.
    """

    x_grid: np.ndarray
    values: np.ndarray
    t: float
    params: ModelParams
    source: ProfileSource = ProfileSource.CLOSED_FORM
    error_estimate: np.ndarray | float = 0.0
    evaluator: Callable[[float], float] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        x = np.array(self.x_grid, dtype=float)
        v = np.array(self.values, dtype=float)
        if x.ndim != 1 or x.shape != v.shape:
            raise ValueError(f"x_grid and values must be 1-d arrays of equal length, got {x.shape} and {v.shape}")
        if x.size < 2 or np.any(np.diff(x) <= 0.0):
            raise ValueError("x_grid must be strictly increasing")
        if isinstance(self.source, str):
            object.__setattr__(self, "source", ProfileSource(self.source))
        x.setflags(write=False)
        v.setflags(write=False)
        object.__setattr__(self, "x_grid", x)
        object.__setattr__(self, "values", v)

    def weighted(self) -> np.ndarray:
        """Density times the radial weight |x|^(N-1)."""
        return np.abs(self.x_grid) ** (self.params.n_dim - 1) * self.values

    def half_line(self) -> tuple[np.ndarray, np.ndarray]:
        """Samples with x >= 0, the part that fixes an even profile."""
        keep = self.x_grid >= 0.0
        return self.x_grid[keep], self.values[keep]
