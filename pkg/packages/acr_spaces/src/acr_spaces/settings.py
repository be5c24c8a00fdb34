from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from acr_spaces.errors import InvalidParameterError


@dataclass(frozen=True)
class AnalysisSettings:
    """Tunables shared by every analysis operation.

    ``depth`` is how many tail intervals or comparison terms are materialized before a
    series is judged; ``k_max`` caps the doubling search M = 2^k for superlevel sets.
    """

    depth: int = 100
    k_max: int = 64
    root_width: Fraction = Fraction(1, 10**12)
    log_width: Fraction = Fraction(1, 10**12)
    series_truncation: int = 100
    comparison_exponents: tuple[Fraction, ...] = (Fraction(0), Fraction(1, 2), Fraction(1))
    harmonic_run_cap: int = 64
    uniform_run_cap: int = 100_000
    max_workers: int = 4

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise InvalidParameterError("depth must be >= 1")
        if self.k_max < 0:
            raise InvalidParameterError("k_max must be >= 0")
        if self.root_width <= 0 or self.log_width <= 0:
            raise InvalidParameterError("bracketing widths must be positive")
        if self.series_truncation < 1:
            raise InvalidParameterError("series_truncation must be >= 1")
        if self.max_workers < 1:
            raise InvalidParameterError("max_workers must be >= 1")

    def with_overrides(self, **changes: object) -> AnalysisSettings:
        """Copy with the given fields replaced; ``None`` values are ignored."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_SETTINGS = AnalysisSettings()
