"""Exponent bundles and the hypotheses each inequality places on them."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, replace

from .errors import ParameterError
from .padic import check_prime

BALANCE_TOL = 1e-9


def conjugate(q: float) -> float:
    """Hölder conjugate q/(q-1), infinite for q = 1."""
    if q < 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    if q == 1:
        return math.inf
    if q == math.inf:
        return 1.0
    return q / (q - 1)


@dataclass(frozen=True)
class SpaceParams:
    p: int
    n: int
    q: float = 2.0
    r: float = 2.0
    s: float = math.inf
    alpha: float = 0.0
    gamma: float = 0.0
    beta: float = 0.0
    delta: float = 0.5
    lam: float = -0.5

    def __post_init__(self):
        check_prime(self.p)
        if self.n < 1:
            raise ParameterError("n must be >= 1")

    @property
    def q_conj(self) -> float:
        return conjugate(self.q)

    @property
    def inv_q_conj(self) -> float:
        return 1.0 - 1.0 / self.q

    def replace(self, **changes) -> "SpaceParams":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return asdict(self)

    def thm3_admissible(self) -> None:
        if not 1 <= self.q < math.inf:
            raise ParameterError("need 1 <= q < inf")
        if not -1.0 / self.q - 1e-15 <= self.lam < 0:
            raise ParameterError(f"need -1/q <= lambda < 0, got lambda={self.lam}")

    def _weights_admissible(self) -> None:
        if min(self.alpha, self.gamma) <= -self.n:
            raise ParameterError("need min(alpha, gamma) > -n")
        if not 0 <= self.beta < self.n:
            raise ParameterError(f"need 0 <= beta < n, got beta={self.beta}")
        if not (1 <= self.q < math.inf and 1 <= self.r < math.inf):
            raise ParameterError("need 1 <= q, r < inf")

    def thm4_balance_gap(self) -> float:
        return (self.n + self.alpha) / self.q - self.beta - (self.n + self.gamma) / self.r

    def thm5_balance_gap(self) -> float:
        return (self.beta + self.delta) - (self.n + self.alpha) / self.q + (self.n + self.gamma) / self.r

    def thm4_admissible(self) -> None:
        self._weights_admissible()
        if abs(self.thm4_balance_gap()) > BALANCE_TOL:
            raise ParameterError("balance (n+alpha)/q - beta = (n+gamma)/r violated")

    def thm5_admissible(self) -> None:
        self._weights_admissible()
        if not 0 < self.delta < 1:
            raise ParameterError("need 0 < delta < 1")
        if not 1 < self.q < self.r:
            raise ParameterError("need 1 < q < r")
        if abs(self.thm5_balance_gap()) > BALANCE_TOL:
            raise ParameterError("balance (beta+delta) - (n+alpha)/q = -(n+gamma)/r violated")
