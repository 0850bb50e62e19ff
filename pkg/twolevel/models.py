import math
from dataclasses import dataclass
from typing import NamedTuple

from .exceptions import InvalidParameters, ZeroFrequency


@dataclass(frozen=True)
class TwoLevelParams:
    """
    Level splitting ``omega`` and coupling amplitude ``v`` (hbar = 1).

    Only |v| enters the closed forms, through Omega = sqrt(omega^2 + 4 |v|^2).
    """
    omega: float
    v: complex = 0j

    def __post_init__(self):
        try:
            object.__setattr__(self, 'omega', float(self.omega))
            object.__setattr__(self, 'v', complex(self.v))
        except (TypeError, ValueError) as exc:
            raise InvalidParameters(str(exc)) from exc
        if not (math.isfinite(self.omega) and math.isfinite(self.v.real) and math.isfinite(self.v.imag)):
            raise InvalidParameters(f"got omega={self.omega}, v={self.v}")

    @classmethod
    def from_frequencies(cls, omega, Omega):
        """Parameters with level splitting ``omega`` and Rabi frequency ``Omega`` (real v)."""
        if Omega < abs(omega):
            raise InvalidParameters(f"Omega={Omega} is smaller than |omega|={abs(omega)}", field='Omega')
        return cls(omega=omega, v=math.sqrt(Omega ** 2 - omega ** 2) / 2)

    @property
    def Omega(self):
        return math.sqrt(self.omega ** 2 + 4 * abs(self.v) ** 2)

    @property
    def ratio(self):
        """omega / Omega."""
        if self.Omega == 0:
            raise ZeroFrequency(field='Omega')
        return self.omega / self.Omega

    @property
    def mixing(self):
        """omega^2 / Omega^2."""
        return self.ratio ** 2


class ConditionalClosed(NamedTuple):
    tau1_of_0: float
    tau2_of_0: float
    tau1_of_1: float
