"""Golden copies of the published condition-polynomial tables."""

from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

import yaml

from spiked_qes.exceptions import GoldenTableError
from spiked_qes.models.problem import Parity, QESProblem, QESSolution
from spiked_qes.polyalg import RationalPoly

MATCH_EXACT = "exact"
MATCH_SIGN = "up_to_sign"
MATCH_VARIABLE = "variable_convention"
MISMATCH = "mismatch"


@dataclass(frozen=True)
class GoldenRow:
    """One table row: reduced condition polynomial and the elimination relation."""

    problem: QESProblem
    polynomial: RationalPoly
    elimination_poly: RationalPoly
    a_N_coefficient: int

    def elimination_residual(self, sol: QESSolution) -> float:
        """Value of the row's linear relation in (variable, a_N) at a solution.

        The odd-parity tables use the variable a = -d.
        """
        var = sol.d if self.problem.parity is Parity.EVEN else -sol.d
        return self.elimination_poly.evaluate(float(var)) + self.a_N_coefficient * sol.coefficients[-1]


def _default_path() -> Path:
    return Path(str(resources.files("spiked_qes") / "data" / "golden_tables.yml"))


def load_golden_tables(path: Optional[Path] = None) -> dict[QESProblem, GoldenRow]:
    """Load golden rows keyed by problem.

    Raises:
        GoldenTableError: If the file is missing or malformed.
    """
    path = path or _default_path()
    if not path.exists():
        raise GoldenTableError(f"golden tables not found: {path}")
    with open(path, 'r', encoding='utf-8') as f:
        data = yaml.safe_load(f) or {}

    rows = {}
    try:
        for parity in Parity:
            for N, row in (data.get(parity.value) or {}).items():
                problem = QESProblem(int(N), parity)
                elimination = row["elimination"]
                rows[problem] = GoldenRow(
                    problem=problem,
                    polynomial=RationalPoly(tuple(int(c) for c in row["polynomial"])),
                    elimination_poly=RationalPoly(tuple(int(c) for c in elimination["poly"])),
                    a_N_coefficient=int(elimination["a_N_coefficient"]),
                )
    except (KeyError, TypeError, ValueError) as e:
        raise GoldenTableError(f"malformed golden tables in {path}: {e}") from e
    return rows


def compare_with_golden(row: GoldenRow, reduced: RationalPoly) -> str:
    """Classify agreement between a computed reduced condition and a golden row.

    Returns one of ``exact``, ``up_to_sign``, ``variable_convention`` (agrees
    only after a -> -d, a distinct diagnostic for the odd table) or
    ``mismatch``.
    """
    golden = row.polynomial
    if reduced == golden:
        return MATCH_EXACT
    if reduced == -golden:
        return MATCH_SIGN
    flipped = golden.negated_argument()
    if reduced == flipped or reduced == -flipped:
        return MATCH_VARIABLE
    return MISMATCH


def is_match(verdict: str) -> bool:
    return verdict in (MATCH_EXACT, MATCH_SIGN)
