from dataclasses import dataclass

import numpy as np

from fracdiff.core.errors import AdmissibilityError

# Parameters of a Fox H-function H^{m,n}_{p,q}[z | (a_i, A_i); (b_j, B_j)].
#
# Convention: H = 1/(2 pi i) int_L Theta(s) z^-s ds with
#   Theta(s) = prod_{j<=m} Gamma(b_j + B_j s) prod_{i<=n} Gamma(1 - a_i - A_i s)
#            / (prod_{j>m} Gamma(1 - b_j - B_j s) prod_{i>n} Gamma(a_i + A_i s))
# so that H^{1,0}_{0,1}[z | (0,1)] = exp(-z).


@dataclass(frozen=True)
class HParams:
    m: int
    n: int
    upper: tuple[tuple[float, float], ...] = ()
    lower: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple((float(a), float(A)) for a, A in self.upper))
        object.__setattr__(self, "lower", tuple((float(b), float(B)) for b, B in self.lower))

        if not 0 <= self.m <= self.q:
            raise AdmissibilityError(f"m must satisfy 0 <= m <= q={self.q}, got {self.m}")
        if not 0 <= self.n <= self.p:
            raise AdmissibilityError(f"n must satisfy 0 <= n <= p={self.p}, got {self.n}")

        for a, A in self.upper + self.lower:
            if not (np.isfinite(a) and np.isfinite(A)):
                raise AdmissibilityError(f"H parameters must be finite, got ({a}, {A})")
            if A == 0.0:
                raise AdmissibilityError("H parameter scales must be nonzero")

        # Gammas that carry contour poles need positive scales; the others may be negative.
        for b, B in self.lower[: self.m]:
            if B <= 0.0:
                raise AdmissibilityError(f"lower pair ({b}, {B}) among the first m needs B > 0")
        for a, A in self.upper[: self.n]:
            if A <= 0.0:
                raise AdmissibilityError(f"upper pair ({a}, {A}) among the first n needs A > 0")

    @property
    def p(self) -> int:
        return len(self.upper)

    @property
    def q(self) -> int:
        return len(self.lower)

    @property
    def decay(self) -> float:
        """Decay rate a* of |Theta| along vertical lines (integrand ~ exp(-pi a* |y| / 2))."""
        pole_side = sum(abs(B) for _, B in self.lower[: self.m]) + sum(abs(A) for _, A in self.upper[: self.n])
        other_side = sum(abs(B) for _, B in self.lower[self.m:]) + sum(abs(A) for _, A in self.upper[self.n:])
        return pole_side - other_side

    def strip(self) -> tuple[float, float]:
        """Open interval of contour abscissae separating the two pole families."""
        lo = max((-b / B for b, B in self.lower[: self.m]), default=-np.inf)
        hi = min(((1.0 - a) / A for a, A in self.upper[: self.n]), default=np.inf)
        return lo, hi

    def __str__(self) -> str:
        up = ", ".join(f"({a:g},{A:g})" for a, A in self.upper)
        lo = ", ".join(f"({b:g},{B:g})" for b, B in self.lower)
        return f"H^{{{self.m},{self.n}}}_{{{self.p},{self.q}}}[{up}; {lo}]"
