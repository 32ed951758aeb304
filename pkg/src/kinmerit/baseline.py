"""Cited-only citation medians per (year, subject category) and normalized impact."""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .model import Publication

Cell = tuple[int, str]


@dataclass(frozen=True)
class CitationBaseline:
    cells: Mapping[Cell, float]
    n_cited: Mapping[Cell, int] = field(default_factory=dict)
    empty_cells: frozenset[Cell] = frozenset()

    def median(self, year: int, category: str) -> float | None:
        return self.cells.get((year, category))


def compute_baselines(publications: Iterable[Publication]) -> CitationBaseline:
    """Median citations over cited publications (>= 1 citation) in every cell.

    A publication votes once in the cell of each distinct category it carries.
    Cells where nothing was cited end up in ``empty_cells``.
    """
    cited: dict[Cell, list[int]] = {}
    seen: set[Cell] = set()
    for pub in publications:
        for cat in dict.fromkeys(pub.categories):
            cell = (pub.year, cat)
            seen.add(cell)
            if pub.citations >= 1:
                cited.setdefault(cell, []).append(pub.citations)
    cells = {cell: float(statistics.median(values)) for cell, values in sorted(cited.items())}
    counts = {cell: len(values) for cell, values in sorted(cited.items())}
    return CitationBaseline(cells, counts, frozenset(seen - set(cited)))


def normalized_impact(publication: Publication, baseline: CitationBaseline,
                      category_weights: Mapping[str, float] | None = None) -> float | None:
    """Citations divided by the cell median, averaged over the publication's categories.

    Categories whose cell has no median are left out of the average. Returns
    None when no category has a median, which callers treat as "cannot be
    scored" rather than as zero.

    ``category_weights`` maps category code to a relative weight (default 1
    for every category).
    """
    total = 0.0
    weight_sum = 0.0
    for cat in dict.fromkeys(publication.categories):
        median = baseline.median(publication.year, cat)
        if median is None:
            continue
        w = 1.0 if category_weights is None else category_weights.get(cat, 1.0)
        total += w * (publication.citations / median)
        weight_sum += w
    if weight_sum == 0.0:
        return None
    return total / weight_sum
