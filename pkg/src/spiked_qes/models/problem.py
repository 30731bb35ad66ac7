"""QES problem, coefficient table and solution models."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from spiked_qes.exceptions import InternalConsistencyError
from spiked_qes.polyalg import RationalPoly, RootBracket


class Parity(str, Enum):
    """Parity of the wavefunction under x -> -x."""

    EVEN = "even"
    ODD = "odd"

    @property
    def sign(self) -> int:
        """Mirror factor relating psi(-x) to psi(x)."""
        return 1 if self is Parity.EVEN else -1


class WellType(str, Enum):
    """Shape of the potential: one well for d < 0, two wells for d > 0."""

    SINGLE_WELL = "single_well"
    DOUBLE_WELL = "double_well"

    @classmethod
    def for_shift(cls, d) -> WellType:
        return cls.SINGLE_WELL if d < 0 else cls.DOUBLE_WELL


@dataclass(frozen=True)
class QESProblem:
    """One QES family: polynomial degree N and wavefunction parity."""

    N: int
    parity: Parity

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, int) or self.N < 0:
            raise ValueError(f"N must be a non-negative integer, got {self.N!r}")
        object.__setattr__(self, "parity", Parity(self.parity))

    @property
    def energy(self) -> int:
        """QES energy E = 2N + 1."""
        return 2 * self.N + 1

    @property
    def table_variable(self) -> str:
        """Variable used by the published tables: d (even) or a = -d (odd)."""
        return "d" if self.parity is Parity.EVEN else "a"

    def __str__(self) -> str:
        return f"N={self.N} {self.parity.value}"


@dataclass(frozen=True)
class CoefficientTable:
    """Coefficients a_0..a_N of the polynomial factor, each a polynomial in d."""

    problem: QESProblem
    a: tuple[RationalPoly, ...]

    def at(self, d) -> tuple[Fraction, ...]:
        """Exact coefficient values at a rational shift."""
        d = Fraction(d)
        return tuple(poly.evaluate(d) for poly in self.a)

    def polynomial_at(self, d) -> RationalPoly:
        """Polynomial part p(x) for a rational shift, as a polynomial in x."""
        return RationalPoly(self.at(d))


@dataclass(frozen=True)
class ReducedCondition:
    """Condition polynomial with content and the factor d**m stripped."""

    poly: RationalPoly
    stripped_zero_multiplicity: int
    content: Fraction
    raw: RationalPoly


@dataclass(frozen=True)
class QESSolution:
    """One admissible shift with its energy and closed-form wavefunction."""

    problem: QESProblem
    energy: int
    d_bracket: RootBracket
    d_value: Fraction
    coefficients: tuple[float, ...]
    exact_coefficients: tuple[Fraction, ...]
    well_type: WellType
    digits: int

    def __post_init__(self):
        if self.d_value == 0:
            raise InternalConsistencyError("d = 0 is the harmonic oscillator, not a QES shift")
        if self.exact_coefficients[-1] == 0:
            raise InternalConsistencyError(f"a_N vanishes at d = {float(self.d_value)}")
        if self.well_type is not WellType.for_shift(self.d_value):
            raise InternalConsistencyError("well type disagrees with the sign of d")
        if self.energy != self.problem.energy:
            raise InternalConsistencyError("energy must equal 2N + 1")

    @property
    def N(self) -> int:
        return self.problem.N

    @property
    def parity(self) -> Parity:
        return self.problem.parity

    @property
    def d(self) -> float:
        return float(self.d_value)

    @property
    def polynomial(self) -> RationalPoly:
        """Exact polynomial part p(x) at the refined shift."""
        return RationalPoly(self.exact_coefficients)
