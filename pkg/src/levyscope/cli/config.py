"""src/levyscope/cli/config.py

Flat ``section.key = value`` run configuration.

One pair per line, ``#`` starts a comment, lists are ``;``-separated and
vectors ``,``-separated::

    measure.kind = stable
    measure.alpha = 1.5
    grid.h = 0.05          # node spacing
    operator.points = 0; 0.5; 1
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from levyscope.exceptions import ConfigError

__all__ = [
    "SUBCOMMANDS",
    "SECTIONS",
    "PARAM_SECTIONS",
    "ConfigEntry",
    "RunConfig",
    "parse_config",
    "load_config",
]

logger = logging.getLogger(__name__)

SUBCOMMANDS = (
    "eval-op",
    "verify",
    "stability",
    "solve",
    "compare",
    "quadrature-report",
)

SECTIONS: Dict[str, frozenset] = {
    "run": frozenset({"seed", "out"}),
    "measure": frozenset(
        {
            "kind",
            "dim",
            "alpha",
            "angular",
            "angular_csv",
            "gamma_plus",
            "gamma_minus",
            "atoms",
        }
    ),
    "quadrature": frozenset(
        {
            "tol",
            "n_gauss",
            "n_angular",
            "panel_width",
            "r_resolved",
            "max_levels",
            "deltas",
        }
    ),
    "operator": frozenset({"name", "delta", "points", "p"}),
    "grid": frozenset({"dim", "half_width", "h", "extension"}),
    "equation": frozenset({"gamma", "nu", "source", "slack"}),
    "verify": frozenset({"kind", "delta", "tol", "scope", "free_probes"}),
    "stability": frozenset({"eps", "sign", "delta", "tol", "scope"}),
    "problem": frozenset(
        {
            "kind",
            "nu",
            "gamma",
            "source",
            "horizon",
            "hamiltonian",
            "slope_bound",
            "times",
        }
    ),
    "controls": frozenset({"sigma", "drift", "source"}),
    "solver": frozenset({"delta", "tol", "dt", "max_iter", "max_policies"}),
    "compare": frozenset({"pairs", "amplitude"}),
}

# Sections holding a catalog ``name`` plus free constructor parameters.
PARAM_SECTIONS = ("probe", "jump", "weight", "candidate", "initial")


@dataclass(frozen=True)
class ConfigEntry:
    """Raw value of one key and the line it came from."""

    value: str
    line: int


@dataclass
class RunConfig:
    """
    Parsed run configuration.

    Values are kept as text and converted by the typed getters, which also
    record every value actually used (defaults included) in ``resolved``.

    Attributes:
        entries: Raw ``section.key`` entries.
        origin: File the entries came from.
        resolved: Every key read so far with its effective value.
    """

    entries: Dict[str, ConfigEntry] = field(default_factory=dict)
    origin: str = "<memory>"
    resolved: Dict[str, Any] = field(default_factory=dict)

    def has(self, key: str) -> bool:
        """Whether ``key`` is set."""
        return key in self.entries

    def _error(self, key: str, message: str) -> ConfigError:
        entry = self.entries.get(key)
        return ConfigError(message, field=key, line=entry.line if entry else None)

    def _record(self, key: str, value: Any) -> Any:
        self.resolved[key] = value
        return value

    def get_str(self, key: str, default: Optional[str] = None) -> str:
        """Text value; a missing key without default is an error."""
        if key in self.entries:
            return self._record(key, self.entries[key].value)
        if default is None:
            raise ConfigError("required key is missing", field=key)
        return self._record(key, default)

    def get_choice(
        self, key: str, choices: tuple, default: Optional[str] = None
    ) -> str:
        """Text value restricted to ``choices``."""
        value = self.get_str(key, default)
        if value not in choices:
            expected = ", ".join(choices)
            raise self._error(key, f"expected one of {expected}, got {value!r}")
        return value

    def get_float(
        self,
        key: str,
        default: Optional[float] = None,
        *,
        minimum: Optional[float] = None,
        positive: bool = False,
    ) -> float:
        """Float value with optional range checks."""
        if key not in self.entries:
            if default is None:
                raise ConfigError("required key is missing", field=key)
            return self._record(key, float(default))
        value = self._to_float(key, self.entries[key].value)
        if positive and value <= 0:
            raise self._error(key, f"must be positive, got {value}")
        if minimum is not None and value < minimum:
            raise self._error(key, f"must be at least {minimum}, got {value}")
        return self._record(key, value)

    def get_optional_float(
        self, key: str, *, positive: bool = False
    ) -> Optional[float]:
        """Float value or None when unset."""
        if key not in self.entries:
            return None
        return self.get_float(key, positive=positive)

    def get_int(
        self, key: str, default: Optional[int] = None, *, minimum: int = 0
    ) -> int:
        """Integer value, at least ``minimum``."""
        if key not in self.entries:
            if default is None:
                raise ConfigError("required key is missing", field=key)
            return self._record(key, int(default))
        text = self.entries[key].value
        try:
            value = int(text)
        except ValueError as exc:
            raise self._error(key, f"expected an integer, got {text!r}") from exc
        if value < minimum:
            raise self._error(key, f"must be at least {minimum}, got {value}")
        return self._record(key, value)

    def get_vector(
        self, key: str, default: Optional[List[float]] = None
    ) -> List[float]:
        """Comma-separated floats."""
        if key not in self.entries:
            if default is None:
                raise ConfigError("required key is missing", field=key)
            return self._record(key, list(default))
        return self._record(key, self._vector(key, self.entries[key].value))

    def get_list(self, key: str, default: Optional[List[float]] = None) -> List[float]:
        """Semicolon-separated floats."""
        if key not in self.entries:
            if default is None:
                raise ConfigError("required key is missing", field=key)
            return self._record(key, list(default))
        items = [part.strip() for part in self.entries[key].value.split(";")]
        return self._record(key, [self._to_float(key, item) for item in items if item])

    def get_vectors(
        self, key: str, default: Optional[List[List[float]]] = None
    ) -> List[List[float]]:
        """Semicolon-separated list of comma-separated vectors."""
        if key not in self.entries:
            if default is None:
                raise ConfigError("required key is missing", field=key)
            return self._record(key, [list(v) for v in default])
        items = [part.strip() for part in self.entries[key].value.split(";")]
        return self._record(key, [self._vector(key, item) for item in items if item])

    def params(self, section: str) -> Dict[str, Union[float, List[float]]]:
        """Constructor parameters of a catalog section (``name`` excluded)."""
        prefix = section + "."
        result: Dict[str, Union[float, List[float]]] = {}
        for key in sorted(self.entries):
            if not key.startswith(prefix) or key == prefix + "name":
                continue
            vector = self._vector(key, self.entries[key].value)
            value: Union[float, List[float]] = vector[0] if len(vector) == 1 else vector
            result[key[len(prefix):]] = self._record(key, value)
        return result

    def _to_float(self, key: str, text: str) -> float:
        try:
            return float(text)
        except ValueError as exc:
            raise self._error(key, f"expected a number, got {text!r}") from exc

    def _vector(self, key: str, text: str) -> List[float]:
        parts = [part.strip() for part in text.split(",")]
        if not all(parts):
            raise self._error(key, f"malformed vector {text!r}")
        return [self._to_float(key, part) for part in parts]


def parse_config(text: str, origin: str = "<memory>") -> RunConfig:
    """
    Parse configuration text.

    Raises:
        ConfigError: On a malformed line, an unknown key or a duplicate key.
    """
    entries: Dict[str, ConfigEntry] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(
                f"expected 'section.key = value', got {raw.strip()!r}", line=number
            )
        key, value = (part.strip() for part in line.split("=", 1))
        section, _, name = key.partition(".")
        if not name or not value:
            raise ConfigError("empty key or value", field=key or None, line=number)
        if section in SECTIONS:
            if name not in SECTIONS[section]:
                raise ConfigError("unknown key", field=key, line=number)
        elif section not in PARAM_SECTIONS:
            raise ConfigError(f"unknown section {section!r}", field=key, line=number)
        if key in entries:
            raise ConfigError(
                f"duplicate key (first set on line {entries[key].line})",
                field=key,
                line=number,
            )
        entries[key] = ConfigEntry(value, number)
    logger.debug("parsed %d entries from %s", len(entries), origin)
    return RunConfig(entries=entries, origin=origin)


def load_config(path: Union[str, Path]) -> RunConfig:
    """
    Read and parse a configuration file.

    Raises:
        ConfigError: If the file cannot be read or does not parse.
    """
    target = Path(path)
    try:
        text = target.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read configuration {target}: {exc}") from exc
    return parse_config(text, str(target))
