"""Turn per-item score tables into bandit instances.

Transform order: ``score / divide_by``, then the optional affine range map,
then the threshold is placed halfway between the k-th and (k+1)-th largest
transformed score.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

from .core import BanditInstance, ConfigError


class ConversionError(ConfigError):
    pass


class ZeroGapWarning(UserWarning):
    pass


@dataclass(frozen=True)
class TransformSpec:
    divide_by: float = 1.0
    affine: Optional[Tuple[float, float, float, float]] = None
    threshold_rank: int = 1

    def __post_init__(self):
        if not self.divide_by > 0:
            raise ConversionError(f"divide_by must be positive, got {self.divide_by}")
        if self.affine is not None:
            if len(self.affine) != 4:
                raise ConversionError("affine map needs (source_lo, source_hi, target_lo, target_hi)")
            object.__setattr__(self, "affine", tuple(float(v) for v in self.affine))
            if self.affine[0] == self.affine[1]:
                raise ConversionError("affine source range is empty")
        if self.threshold_rank < 1:
            raise ConversionError("threshold_rank must be >= 1")

    def apply(self, score: float) -> float:
        x = score / self.divide_by
        if self.affine is not None:
            a, b, c, d = self.affine
            x = c + (x - a) * (d - c) / (b - a)
        return x


# Presets for the three real-world recipes.  Covertype scores are per-class
# relative frequencies; Jester scores are per-joke average ratings in
# [-10, 10]; MovieLens scores are per-movie average ratings in [0, 5].
PRESETS = {
    "covertype": TransformSpec(divide_by=10.0, threshold_rank=3),
    "jester": TransformSpec(divide_by=10.0, affine=(-1.0, 1.0, 0.0, 1.0), threshold_rank=25),
    "movielens": TransformSpec(divide_by=100.0, threshold_rank=168),
}


def rank_threshold(values: Sequence[float], k: int) -> float:
    """Midpoint of the k-th and (k+1)-th largest values; works on any reals.

    A tie between the two yields that common value and a ZeroGapWarning.
    """
    if not 1 <= k < len(values):
        raise ConversionError(f"threshold_rank={k} must lie in [1, {len(values)})")
    ranked = sorted(values, reverse=True)
    hi, lo = ranked[k - 1], ranked[k]
    if hi == lo:
        warnings.warn(f"items ranked {k} and {k + 1} tie at {hi}; threshold has zero gap",
                      ZeroGapWarning, stacklevel=3)
        return hi
    return (hi + lo) / 2


def convert(scores: Sequence[float], spec: TransformSpec, name: str = "converted") -> BanditInstance:
    n = len(scores)
    if n < 2:
        raise ConversionError(f"need at least 2 scores, got {n}")
    k = spec.threshold_rank
    if not k < n:
        raise ConversionError(f"threshold_rank={k} must be below the item count {n}")
    means = []
    for i, s in enumerate(scores):
        x = spec.apply(float(s))
        if not (0.0 <= x <= 1.0):
            raise ConversionError(f"item {i} (score {s}) transforms to {x}, outside [0, 1]")
        means.append(x)
    xi = rank_threshold(means, k)
    if not 0.0 < xi < 1.0:
        raise ConversionError(f"threshold {xi} falls outside (0, 1)")
    return BanditInstance(tuple(means), xi, name)


def load_scores(
    path,
    column: Union[int, str] = 1,
    delimiter: str = ",",
    skip_header: int = 0,
) -> List[float]:
    """Read one numeric column from a delimited file.

    ``column`` is a 0-based index, or a header name when ``skip_header >= 1``
    (the first skipped line is taken as the header).
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh, delimiter=delimiter))
    header, body = rows[:skip_header], rows[skip_header:]
    if isinstance(column, str) and not column.lstrip("-").isdigit():
        if not header:
            raise ConversionError(f"{path}: column name {column!r} given but no header line")
        names = [h.strip() for h in header[0]]
        if column not in names:
            raise ConversionError(f"{path}: no column named {column!r} in header {names}")
        col = names.index(column)
    else:
        col = int(column)

    scores, bad = [], []
    for lineno, row in enumerate(body, start=skip_header + 1):
        if not row or all(not c.strip() for c in row):
            continue
        try:
            scores.append(float(row[col]))
        except (IndexError, ValueError):
            bad.append(lineno)
    if bad:
        shown = ", ".join(map(str, bad[:10])) + (" ..." if len(bad) > 10 else "")
        raise ConversionError(f"{path}: unparsable score in column {column} on line(s) {shown}")
    if not scores:
        raise ConversionError(f"{path}: no scores found")
    return scores
