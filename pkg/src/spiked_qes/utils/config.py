"""Configuration management for the QES solver."""

import os
from pathlib import Path
from typing import Any, Optional

import yaml
from dotenv import load_dotenv


class Config:
    """Configuration manager: YAML defaults with environment overrides."""

    def __init__(self, env_file: Optional[Path] = None, config_file: Optional[Path] = None):
        """Initialize configuration.

        Args:
            env_file: Path to .env file
            config_file: Path to config.yml file
        """
        if env_file and env_file.exists():
            load_dotenv(env_file)
        else:
            load_dotenv()

        self.project_root = Path.cwd()

        if config_file is None:
            config_file = self.project_root / "config" / "config.yml"

        if config_file.exists():
            with open(config_file, 'r', encoding='utf-8') as f:
                self.yaml_config = yaml.safe_load(f) or {}
        else:
            self.yaml_config = {}

        self.errors: list[str] = []
        self._init_paths()

    def _init_paths(self):
        """Initialize file paths from YAML config with .env overrides."""
        self.logs_folder = self.project_root / self.get_env(
            "LOGS_FOLDER",
            self.get_yaml("paths", "logs_folder", default="logs")
        )
        golden = self.get_env("QES_GOLDEN_TABLES", self.get_yaml("files", "golden_tables"))
        self.golden_tables_path = self.project_root / golden if golden else None

    def get_env(self, key: str, default: Any = None) -> Any:
        """Get environment variable with default value.

        Args:
            key: Environment variable key
            default: Default value if key not found

        Returns:
            Environment variable value or default
        """
        value = os.getenv(key, default)

        if isinstance(value, str):
            value = value.strip()

            if value.lower() == 'true':
                return True
            elif value.lower() == 'false':
                return False

        return value

    def get_yaml(self, *keys, default: Any = None) -> Any:
        """Get value from YAML config using nested keys.

        Args:
            *keys: Nested keys to traverse
            default: Default value if key path not found

        Returns:
            Value from YAML config or default
        """
        result = self.yaml_config
        for key in keys:
            if isinstance(result, dict) and key in result:
                result = result[key]
            else:
                return default
        return result

    def _number(self, env_key: Optional[str], section: str, key: str, default, kind=float):
        """Read a numeric setting, recording a configuration error on bad input."""
        raw = self.get_yaml(section, key, default=default)
        if env_key:
            raw = self.get_env(env_key, raw)
        try:
            return kind(raw)
        except (TypeError, ValueError):
            message = f"{env_key or f'{section}.{key}'} must be a number, got {raw!r}"
            if message not in self.errors:
                self.errors.append(message)
            return default

    @property
    def digits(self) -> int:
        """Default refinement precision (QES_DIGITS overrides)."""
        return self._number("QES_DIGITS", "solver", "digits", 12, int)

    @property
    def box_padding(self) -> float:
        """Finite-difference box half-width beyond |d|."""
        return self._number("QES_BOX_PADDING", "spectrum", "box_padding", 10.0)

    @property
    def grid_points(self) -> int:
        """Interior grid points of the finite-difference oracle."""
        return self._number("QES_GRID_POINTS", "spectrum", "grid_points", 4000, int)

    @property
    def match_tolerance(self) -> float:
        """Largest accepted gap between 2N+1 and the nearest eigenvalue."""
        return self._number("QES_MATCH_TOLERANCE", "spectrum", "match_tolerance", 5e-3)

    @property
    def eigen_rtol(self) -> float:
        """Relative bracket width for eigenvalue bisection."""
        return self._number(None, "spectrum", "eigen_rtol", 1e-10)

    @property
    def convergence_sizes(self) -> list[int]:
        """Grid sizes for the grid-doubling study."""
        sizes = self.get_yaml("spectrum", "convergence_sizes", default=[2000, 4000, 8000])
        return [int(n) for n in sizes]

    @property
    def convergence_band(self) -> tuple[float, float]:
        """Accepted range of gap shrink factors on doubling."""
        lo, hi = self.get_yaml("spectrum", "convergence_band", default=[3.4, 4.6])
        return float(lo), float(hi)

    @property
    def wave_points(self) -> int:
        """Default number of wavefunction grid points."""
        return self._number(None, "wavefunction", "points", 601, int)

    @property
    def wave_padding(self) -> float:
        """Default x_max beyond |d| for wavefunction grids."""
        return self._number(None, "wavefunction", "padding", 8.0)

    @property
    def verify_n_max(self) -> int:
        """Largest N covered by the verification suite."""
        return self._number(None, "verify", "n_max", 8, int)

    @property
    def tables_n_max(self) -> int:
        """Largest N rendered by the tables command."""
        return self._number(None, "tables", "n_max", 5, int)

    @property
    def log_level(self) -> str:
        """Get logging level."""
        return str(self.get_env("LOG_LEVEL", self.get_yaml("logging", "level", default="WARNING")))

    @property
    def log_to_file(self) -> bool:
        """Whether to keep a timestamped log file in the logs folder."""
        return bool(self.get_yaml("logging", "to_file", default=False))

    def as_dict(self) -> dict:
        """Settings echoed into JSON reports."""
        return {
            "digits": self.digits,
            "box_padding": self.box_padding,
            "grid_points": self.grid_points,
            "match_tolerance": self.match_tolerance,
        }

    def validate(self) -> tuple[bool, list[str]]:
        """Validate configuration.

        Returns:
            Tuple of (is_valid, list of error messages)
        """
        errors = []

        if self.digits < 1:
            errors.append(f"digits must be positive, got {self.digits}")
        if self.box_padding <= 0:
            errors.append(f"box padding must be positive, got {self.box_padding}")
        if self.grid_points < 16:
            errors.append(f"grid points must be at least 16, got {self.grid_points}")
        if self.match_tolerance <= 0:
            errors.append(f"match tolerance must be positive, got {self.match_tolerance}")
        lo, hi = self.convergence_band
        if not lo < hi:
            errors.append(f"convergence band must satisfy lo < hi, got [{lo}, {hi}]")
        if self.golden_tables_path is not None and not self.golden_tables_path.exists():
            errors.append(f"golden tables file does not exist: {self.golden_tables_path}")

        errors = self.errors + errors
        return len(errors) == 0, errors

    def create_directories(self):
        """Create the logs directory when file logging is enabled."""
        if self.log_to_file:
            self.logs_folder.mkdir(parents=True, exist_ok=True)
