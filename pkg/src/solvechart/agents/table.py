"""Ground-truth chart tables.

A ChartTable is the underlying data of one chart: named series of
(category, value) points.  One JSON document holds one table.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import SolveChartError

__all__ = ["ChartTable", "Series", "TableFormatError", "load_table"]


class TableFormatError(SolveChartError):
    """The table document is malformed or violates uniqueness rules."""


@dataclass(frozen=True)
class Series:
    name: str
    points: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class ChartTable:
    title: str
    x_label: str
    y_label: str
    series: tuple[Series, ...]

    def __post_init__(self) -> None:
        seen_names = set()
        for entry in self.series:
            folded = entry.name.casefold()
            if folded in seen_names:
                raise TableFormatError(f"duplicate series name {entry.name!r}")
            seen_names.add(folded)
            categories = [category for category, _ in entry.points]
            if len(categories) != len(set(categories)):
                raise TableFormatError(f"duplicate category in series {entry.name!r}")

    def series_names(self) -> list[str]:
        return [entry.name for entry in self.series]

    def categories(self) -> list[str]:
        out: list[str] = []
        for entry in self.series:
            for category, _ in entry.points:
                if category not in out:
                    out.append(category)
        return out

    def find_series(self, name: str) -> Series | None:
        folded = name.casefold()
        for entry in self.series:
            if entry.name.casefold() == folded:
                return entry
        return None

    def lookup(self, series_name: str, category: str) -> float | None:
        entry = self.find_series(series_name)
        if entry is None:
            return None
        folded = category.casefold()
        for cat, value in entry.points:
            if cat.casefold() == folded:
                return value
        return None

    def to_json_dict(self) -> dict:
        return {
            "title": self.title,
            "x_label": self.x_label,
            "y_label": self.y_label,
            "series": [
                {
                    "name": entry.name,
                    "points": [{"category": c, "value": v} for c, v in entry.points],
                }
                for entry in self.series
            ],
        }


def _parse_table(payload: dict) -> ChartTable:
    try:
        series = tuple(
            Series(
                name=str(entry["name"]),
                points=tuple(
                    (str(point["category"]), float(point["value"]))
                    for point in entry["points"]
                ),
            )
            for entry in payload["series"]
        )
        return ChartTable(
            title=str(payload["title"]),
            x_label=str(payload["x_label"]),
            y_label=str(payload["y_label"]),
            series=series,
        )
    except (KeyError, TypeError, ValueError) as err:
        raise TableFormatError(f"malformed chart table: {err}") from err


def load_table(path: str | Path) -> ChartTable:
    """Loads one chart table from a JSON file."""
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise TableFormatError(f"invalid JSON in {path}: {err}") from err
    if not isinstance(payload, dict):
        raise TableFormatError(f"expected a JSON object in {path}")
    return _parse_table(payload)
