import dataclasses
import enum
from dataclasses import dataclass

import numpy as np

from fracdiff.core.errors import AdmissibilityError

# Parameters of the generalized N-dimensional fractional diffusion equation
#
#   d^gamma rho / dt^gamma = int_0^t D(t - t') L rho(t') dt' - div(F rho)
#
# with L = x^{1-N} d/dx (x^{N-1-theta} d^{mu-1}/dx^{mu-1} rho^nu) and a memory kernel
# D(t) that is either impulsive (D delta(t)) or a power law D t^{alpha-1}/Gamma(alpha).


class KernelKind(enum.Enum):
    IMPULSIVE = "impulsive"
    POWER_LAW = "power-law"


@dataclass(frozen=True)
class ModelParams:
    gamma: float = 1.0
    mu: float = 2.0
    nu: float = 1.0
    theta: float = 0.0
    n_dim: int = 1
    d_coeff: float = 1.0
    k_drift: float = 0.0
    alpha_mem: float = 1.0
    kernel_kind: KernelKind = KernelKind.IMPULSIVE
    # Exponent of the power-law drift F(x) = K x |x|^{drift_exponent - 1}; None means linear drift.
    drift_exponent: float | None = None

    def __post_init__(self):
        if isinstance(self.kernel_kind, str):
            try:
                object.__setattr__(self, "kernel_kind", KernelKind(self.kernel_kind))
            except ValueError:
                valid = ", ".join(k.value for k in KernelKind)
                raise AdmissibilityError(f"Invalid kernel_kind '{self.kernel_kind}'. Must be one of: {valid}")

        for name in ("gamma", "mu", "nu", "theta", "d_coeff", "k_drift", "alpha_mem"):
            if not np.isfinite(getattr(self, name)):
                raise AdmissibilityError(f"{name} must be finite, got {getattr(self, name)}")

        if not 0.0 < self.gamma <= 1.0:
            raise AdmissibilityError(f"gamma must satisfy 0 < gamma <= 1, got {self.gamma}")
        if self.d_coeff <= 0.0:
            raise AdmissibilityError(f"d_coeff must be positive, got {self.d_coeff}")
        if isinstance(self.n_dim, bool) or int(self.n_dim) != self.n_dim or self.n_dim < 1:
            raise AdmissibilityError(f"n_dim must be a positive integer, got {self.n_dim}")
        object.__setattr__(self, "n_dim", int(self.n_dim))
        if self.alpha_mem <= 0.0:
            raise AdmissibilityError(f"alpha_mem must be positive, got {self.alpha_mem}")

    @property
    def effective_order(self) -> float:
        """Time order seen by the spatial operator once the kernel is folded in."""
        if self.kernel_kind is KernelKind.POWER_LAW:
            return self.gamma + self.alpha_mem
        return self.gamma

    def diffusion_laplace(self, s):
        """Laplace transform of the memory kernel, D or D s^-alpha."""
        if self.kernel_kind is KernelKind.POWER_LAW:
            return self.d_coeff * s ** (-self.alpha_mem)
        return self.d_coeff * (s ** 0)

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)
