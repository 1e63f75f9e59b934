"""
Sensitivity pairs (chi, f) and their registry.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from config.enums import PairKind
from utils.exceptions import ConfigError


@dataclass(frozen=True)
class SensitivityPair:
    """
    Chemotactic sensitivity chi and consumption rate f.

    Both families are polynomial so that derivatives are exact:
    chi(s) = chi0 + chi1*s and f(s) = f1*s + f2*s**2. The linear pair is
    chi0=1, chi1=0, f1=1, f2=0.
    """

    name: str
    kind: PairKind
    chi0: float = 1.0
    chi1: float = 0.0
    f1: float = 1.0
    f2: float = 0.0

    def chi(self, s):
        """Chemotactic sensitivity chi(s)."""
        return self.chi0 + self.chi1 * np.asarray(s, dtype=float)

    def f(self, s):
        """Consumption rate f(s)."""
        s = np.asarray(s, dtype=float)
        return self.f1 * s + self.f2 * s * s

    def chi_prime(self, s):
        """Derivative chi'(s)."""
        return np.full_like(np.asarray(s, dtype=float), self.chi1)

    def f_prime(self, s):
        """Derivative f'(s)."""
        return self.f1 + 2.0 * self.f2 * np.asarray(s, dtype=float)

    def g(self, s):
        """Ratio g(s) = f(s)/chi(s) entering the energy weight Psi."""
        return self.f(s) / self.chi(s)

    @property
    def is_linear(self) -> bool:
        """True for chi == 1, f(s) == s."""
        return (self.chi0, self.chi1, self.f1, self.f2) == (1.0, 0.0, 1.0, 0.0)

    def max_f_prime(self, s_max: float) -> float:
        """Largest f' on [0, s_max] (f' is affine, so an endpoint attains it)."""
        return float(max(self.f_prime(0.0), self.f_prime(s_max), 0.0))

    @classmethod
    def linear(cls) -> "SensitivityPair":
        """The pair chi == 1, f(s) = s."""
        return cls(name="linear", kind=PairKind.LINEAR)

    @classmethod
    def affine_table(
        cls,
        chi0: float,
        chi1: float,
        f1: float,
        f2: float = 0.0,
        name: str = "affine-table",
    ) -> "SensitivityPair":
        """Build a pair from its coefficient table."""
        return cls(
            name=name,
            kind=PairKind.AFFINE_TABLE,
            chi0=float(chi0),
            chi1=float(chi1),
            f1=float(f1),
            f2=float(f2),
        )


PAIR_REGISTRY: dict[str, SensitivityPair] = {
    "linear": SensitivityPair.linear(),
    "saturating": SensitivityPair.affine_table(1.0, 1.0, 1.0, 0.0, name="saturating"),
}


def get_pair(
    pair_id: str, coefficients: Optional[dict[str, float]] = None
) -> SensitivityPair:
    """
    Look up a registered sensitivity pair.

    Args:
        pair_id: Registered name, or "affine-table" together with coefficients
        coefficients: chi0, chi1, f1, f2 for an affine-table pair

    Returns:
        The sensitivity pair

    Raises:
        ConfigError: If the id is unknown or coefficients are missing
    """
    if pair_id == PairKind.AFFINE_TABLE.value:
        if not coefficients:
            raise ConfigError("affine-table pair requires coefficients")
        unknown = set(coefficients) - {"chi0", "chi1", "f1", "f2"}
        if unknown:
            raise ConfigError(f"unknown pair coefficients: {sorted(unknown)}")
        return SensitivityPair.affine_table(
            coefficients.get("chi0", 1.0),
            coefficients.get("chi1", 0.0),
            coefficients.get("f1", 1.0),
            coefficients.get("f2", 0.0),
        )
    if pair_id not in PAIR_REGISTRY:
        raise ConfigError(
            f"unknown sensitivity pair '{pair_id}', expected one of "
            f"{sorted(PAIR_REGISTRY) + [PairKind.AFFINE_TABLE.value]}"
        )
    return PAIR_REGISTRY[pair_id]
