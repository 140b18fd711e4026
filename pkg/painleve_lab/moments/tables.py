"""Value types shared by every coefficient route."""

import dataclasses
from dataclasses import dataclass

from mpmath import mp, mpf

from numerics.exceptions import DomainError, IndexOutOfRangeError
from numerics.precision import to_ext

ROUTES = ("hankel", "discrete", "toda")


@dataclass(frozen=True)
class WeightParams:
    """Parameters of the weight x^alpha exp(-x^2 + t x) on (0, inf)."""

    alpha: mpf
    t: mpf

    def __post_init__(self):
        object.__setattr__(self, "alpha", to_ext(self.alpha))
        object.__setattr__(self, "t", to_ext(self.t))
        if not self.alpha > -1:
            raise DomainError(
                f"alpha must exceed -1, got {mp.nstr(self.alpha, 15)}"
            )

    def with_t(self, t):
        return WeightParams(self.alpha, t)

    def shifted(self, k=1):
        """Parameters of x^k w(x), the weight with alpha raised by k."""
        return WeightParams(self.alpha + k, self.t)

    @property
    def cache_token(self):
        # _mpf_ tuples are exact, unlike the printed value
        return (self.alpha._mpf_, self.t._mpf_)

    def __str__(self):
        return f"alpha={mp.nstr(self.alpha, 15)}, t={mp.nstr(self.t, 15)}"


@dataclass(frozen=True)
class MomentTable:
    params: WeightParams
    mu: tuple
    precision_bits: int

    @property
    def size(self):
        return len(self.mu) - 1

    def recursion_defect(self, k):
        """mu_{k+2} - ((alpha + k + 1) mu_k + t mu_{k+1})/2."""
        alpha, t = self.params.alpha, self.params.t
        return self.mu[k + 2] - ((alpha + k + 1) * self.mu[k] + t * self.mu[k + 1]) / 2


@dataclass(frozen=True)
class CoeffTable:
    """
    Recurrence coefficients of the orthonormal polynomials.

    ``a2[n]`` holds a_n^2 with ``a2[0] == 0``; ``b[n]`` holds b_n. In the monic
    normalization beta_n = a_n^2 and alpha_n = b_n.
    """

    params: WeightParams
    a2: tuple
    b: tuple
    route: str
    precision_bits: int

    def __post_init__(self):
        if self.route not in ROUTES:
            raise DomainError(f"unknown route {self.route!r}")
        if len(self.a2) != len(self.b):
            raise DomainError("a2 and b must cover the same indices")

    @property
    def n_max(self):
        return len(self.b) - 1

    def check_index(self, n):
        if not 0 <= n <= self.n_max:
            raise IndexOutOfRangeError(
                f"index {n} outside the table range 0..{self.n_max}"
            )

    def beta(self, n):
        self.check_index(n)
        return self.a2[n]

    def truncated(self, n_max, route=None):
        self.check_index(n_max)
        return dataclasses.replace(
            self,
            a2=self.a2[: n_max + 1],
            b=self.b[: n_max + 1],
            route=route or self.route,
        )

    def perturbed(self, field, n, delta):
        """Copy of the table with one coefficient shifted by ``delta``."""
        self.check_index(n)
        values = list(getattr(self, field))
        values[n] = values[n] + delta
        return dataclasses.replace(self, **{field: tuple(values)})

    def rows(self):
        return [
            {"n": n, "a2": self.a2[n], "b": self.b[n]} for n in range(self.n_max + 1)
        ]
