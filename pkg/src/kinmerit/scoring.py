"""Author credit weights and the yearly productivity index.

For one researcher, productivity over the observation window is

    P = (1 / t) * sum_i impact_i * weight_i

where ``impact_i`` is the publication's citations over its field median
(see :mod:`kinmerit.baseline`), ``weight_i`` the researcher's share of the
credit and ``t`` the number of window years the researcher was on faculty.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

from .baseline import CitationBaseline, normalized_impact
from .model import DatasetBundle, ObservationConfig, Publication, Researcher

log = logging.getLogger(__name__)

# Life-science positional shares.
INTRAMURAL_ENDS = 0.40
INTRAMURAL_REST = 0.20
EXTRAMURAL_ENDS = 0.30
EXTRAMURAL_INNER = 0.15
EXTRAMURAL_REST = 0.10


class StructuralError(ValueError):
    pass


@dataclass(frozen=True)
class ScoreCard:
    researcher_id: str
    P: float
    t_years: int
    n_publications: int
    n_cited_publications: int
    n_skipped: int = 0
    n_renormalized: int = 0

    @property
    def has_publications(self) -> bool:
        return self.n_publications > 0

    @property
    def has_citations(self) -> bool:
        return self.n_cited_publications > 0


def is_intramural(publication: Publication) -> bool:
    first, last = publication.authorships[0], publication.authorships[-1]
    return first.university_id == last.university_id


def _raw_positional(s: int, intramural: bool) -> list[float]:
    if intramural:
        raw = [INTRAMURAL_REST / (s - 2)] * s
        raw[0] = raw[-1] = INTRAMURAL_ENDS
        return raw
    raw = [EXTRAMURAL_REST / (s - 4) if s > 4 else 0.0] * s
    # second and penultimate may be the same author (s == 3); they get one share
    raw[1] = raw[-2] = EXTRAMURAL_INNER
    raw[0] = raw[-1] = EXTRAMURAL_ENDS
    return raw


def positional_weights(s: int, intramural: bool) -> tuple[tuple[float, ...], bool]:
    """Weights for byline positions 1..s and whether renormalization was needed."""
    if s <= 2:
        return tuple([1.0 / s] * s), False
    raw = _raw_positional(s, intramural)
    total = sum(raw)
    if abs(total - 1.0) < 1e-12:
        return tuple(raw), False
    return tuple(w / total for w in raw), True


def author_weights(publication: Publication, life_science: bool) -> tuple[float, ...]:
    s = publication.n_authors
    if s == 0:
        return ()
    if not life_science or s <= 2:
        return tuple([1.0 / s] * s)
    return positional_weights(s, is_intramural(publication))[0]


def author_weight(publication: Publication, position: int, life_science: bool) -> float:
    """Share of the publication's credit assigned to the author at ``position`` (1-based).

    Outside the life sciences, and for one or two authors, every author gets
    1/s. Otherwise the share depends on byline position and on whether the
    first and last authors are at the same university.
    """
    s = publication.n_authors
    if not 1 <= position <= s:
        raise ValueError(f"position {position} invalid for {s} author(s) "
                         f"on publication {publication.pub_id}")
    return author_weights(publication, life_science)[position - 1]


def needs_renormalization(publication: Publication, life_science: bool) -> bool:
    s = publication.n_authors
    if not life_science or s <= 2:
        return False
    return positional_weights(s, is_intramural(publication))[1]


def productivity(researcher: Researcher, publications: Iterable[Publication],
                 baseline: CitationBaseline, config: ObservationConfig,
                 life_science: bool = False) -> ScoreCard:
    """Score one researcher.

    Only publications that list the researcher and fall inside the window
    count. Publications with no defined impact are skipped and counted in
    ``n_skipped``; :func:`score_all` logs one warning for the total.
    """
    t = config.faculty_years(researcher)
    if t == 0:
        raise StructuralError(
            f"researcher {researcher.researcher_id} has no faculty years in the window")
    rid = researcher.researcher_id
    total = 0.0
    n_pub = n_cited = skipped = renorm = 0
    for pub in publications:
        if not config.in_window(pub.year):
            continue
        position = pub.position_of(rid)
        if position is None:
            continue
        n_pub += 1
        if pub.citations > 0:
            n_cited += 1
        impact = normalized_impact(pub, baseline)
        if impact is None:
            skipped += 1
            log.debug("publication %s has no defined citation median; skipped for %s",
                      pub.pub_id, rid)
            continue
        if needs_renormalization(pub, life_science):
            renorm += 1
        total += impact * author_weight(pub, position, life_science)
    return ScoreCard(rid, total / t, t, n_pub, n_cited, skipped, renorm)


def score_all(bundle: DatasetBundle, baseline: CitationBaseline) -> dict[str, ScoreCard]:
    """Score cards for every researcher with at least one faculty year in the window."""
    cfg = bundle.config
    by_author = bundle.publications_by_author
    cards = {}
    for r in sorted(bundle.researchers, key=lambda r: r.researcher_id):
        if cfg.faculty_years(r) == 0:
            continue
        cards[r.researcher_id] = productivity(
            r, by_author.get(r.researcher_id, ()), baseline, cfg,
            life_science=bundle.taxonomy.is_life_science(r.sds_code))
    skipped = sum(c.n_skipped for c in cards.values())
    if skipped:
        log.warning("%d researcher-publication contributions skipped: "
                    "no cited publication in any of their cells", skipped)
    return cards
