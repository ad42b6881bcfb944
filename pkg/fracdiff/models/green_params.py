from dataclasses import dataclass
from typing import Any, Callable

from fracdiff.core.errors import AdmissibilityError
from fracdiff.models.model_params import ModelParams

# Symbols of the Laplace-domain propagator
#
#   G~(x, s) = C(s) |x|^{delta v} K_lambda(2 A(s) |x|^v)
#
# of the radial equation with mu = 2, nu = 1. A(s) and C(s) accept numpy or mpmath
# scalars so the same record feeds both the closed forms and the Laplace inversion.


@dataclass(frozen=True)
class LaplaceGreenParams:
    v: float
    lambda_: float
    delta: float
    a_of_s: Callable[[Any], Any]
    c_of_s: Callable[[Any], Any]
    theta: float
    n_dim: int

    def __post_init__(self):
        width = 2.0 + self.theta
        order = (width - self.n_dim) / width
        if abs(self.v - width / 2.0) > 1e-15 * width:
            raise AdmissibilityError(f"v must equal (2+theta)/2 = {width / 2.0}, got {self.v}")
        if abs(self.lambda_ - order) > 1e-15 or abs(self.delta - order) > 1e-15:
            raise AdmissibilityError(f"lambda and delta must equal (2+theta-N)/(2+theta) = {order}")

    @classmethod
    def from_params(cls, p: ModelParams) -> "LaplaceGreenParams":
        from fracdiff.core.specfun import gamma_fn

        width = 2.0 + p.theta
        if width <= 0.0:
            raise AdmissibilityError(f"2 + theta must be positive, got {width}")
        order = (width - p.n_dim) / width
        norm = width / gamma_fn(p.n_dim / width).value
        power = (width + p.n_dim) / width

        def a_of_s(s):
            return (s ** p.gamma / p.diffusion_laplace(s)) ** 0.5 / width

        def c_of_s(s):
            return norm * a_of_s(s) ** power / s

        return cls(v=width / 2.0, lambda_=order, delta=order, a_of_s=a_of_s, c_of_s=c_of_s,
                   theta=p.theta, n_dim=p.n_dim)
