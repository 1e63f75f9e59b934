"""
Physical and regularization parameters of the model.
"""

from dataclasses import dataclass, field

import numpy as np

from config.constants import ModelConstants
from config.enums import DiffusionRegime
from models.sensitivity import SensitivityPair
from utils.exceptions import ConfigError


@dataclass(frozen=True)
class ModelParams:
    """
    Parameters (p, kappa, epsilon), the sensitivity pair and the potential.

    The potential is affine, so only its constant gradient is stored.
    s0 is the maximum of the initial oxygen field.
    """

    p: float
    kappa: float
    epsilon: float
    sensitivity: SensitivityPair = field(default_factory=SensitivityPair.linear)
    phi_gradient: tuple[float, ...] = (0.0, 0.0)
    s0: float = 1.0

    def __post_init__(self):
        if not np.isfinite(self.p) or self.p <= 1.0:
            raise ConfigError(f"p must be > 1, got {self.p}")
        if not 0.0 < self.epsilon < 1.0:
            raise ConfigError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.s0 < 0.0:
            raise ConfigError(f"s0 must be >= 0, got {self.s0}")
        if not all(np.isfinite(g) for g in self.phi_gradient):
            raise ConfigError("phi_gradient must be finite")

    @property
    def regime(self) -> DiffusionRegime:
        """Diffusion regime of p."""
        return DiffusionRegime.classify(self.p, ModelConstants.THEOREM_P)

    @property
    def in_theorem_regime(self) -> bool:
        """True when p > 32/15 (and therefore p >= 2)."""
        return self.regime is DiffusionRegime.THEOREM

    def with_s0(self, s0: float) -> "ModelParams":
        """Copy with s0 replaced (set once the initial oxygen field is known)."""
        return ModelParams(
            p=self.p,
            kappa=self.kappa,
            epsilon=self.epsilon,
            sensitivity=self.sensitivity,
            phi_gradient=self.phi_gradient,
            s0=float(s0),
        )

    def with_epsilon(self, epsilon: float) -> "ModelParams":
        """Copy with epsilon replaced (used by the epsilon sweep)."""
        return ModelParams(
            p=self.p,
            kappa=self.kappa,
            epsilon=float(epsilon),
            sensitivity=self.sensitivity,
            phi_gradient=self.phi_gradient,
            s0=self.s0,
        )
