"""Domain types shared by every stage of the pipeline.

Everything here is a frozen dataclass. Construction never raises on bad
data; structural problems are collected by :func:`validate_dataset`, which
reports instead of throwing so that a loader can show every problem at once.
"""

from __future__ import annotations

import enum
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

EXTERNAL_PREFIX = "EXT:"


class Rank(enum.IntEnum):
    ASSISTANT = 1
    ASSOCIATE = 2
    FULL = 3

    @classmethod
    def parse(cls, token: str) -> "Rank":
        try:
            return cls[token.strip().upper()]
        except KeyError:
            raise ValueError(f"unknown rank token {token!r}") from None


class Area(str, enum.Enum):
    NORTH = "North"
    CENTRE = "Centre"
    SOUTH = "South"

    @classmethod
    def parse(cls, token: str) -> "Area":
        for member in cls:
            if member.value.lower() == token.strip().lower():
                return member
        raise ValueError(f"unknown area {token!r}")


def normalize_surname(name: str) -> str:
    """Uppercase, fold diacritics and collapse whitespace.

    >>> normalize_surname("  d'Alò   Rossi ")
    "D'ALO ROSSI"
    """
    decomposed = unicodedata.normalize("NFKD", name)
    stripped = "".join(ch for ch in decomposed if not unicodedata.combining(ch))
    return " ".join(stripped.upper().split())


@dataclass(frozen=True)
class Researcher:
    researcher_id: str
    full_name: str
    surname: str
    university_id: str
    region: str
    sds_code: str
    rank_events: tuple[tuple[int, Rank], ...]
    hire_year: int
    leave_year: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "surname", normalize_surname(self.surname))
        object.__setattr__(
            self, "rank_events", tuple((int(y), Rank(r)) for y, r in self.rank_events)
        )

    def rank_at(self, year: int) -> Rank | None:
        """Rank held in ``year`` (latest event not after it), or None before the first."""
        current = None
        for event_year, rank in self.rank_events:
            if event_year > year:
                break
            current = rank
        return current

    def on_faculty(self, year: int) -> bool:
        if year < self.hire_year:
            return False
        return self.leave_year is None or self.leave_year >= year

    def years_on_faculty(self, start: int, end: int) -> int:
        return sum(1 for y in range(start, end + 1) if self.on_faculty(y))

    def full_since(self) -> int | None:
        for year, rank in self.rank_events:
            if rank is Rank.FULL:
                return year
        return None


@dataclass(frozen=True)
class TaxonEntry:
    uda_code: str
    life_science: bool


# Labels of the nine hard-science disciplinary areas; codes are free-form in
# data files, these are only used for display when a code matches.
UDA_LABELS = {
    "MAT": "Mathematics and computer science",
    "FIS": "Physics",
    "CHI": "Chemistry",
    "GEO": "Earth sciences",
    "BIO": "Biology",
    "MED": "Medicine",
    "AGR": "Agricultural and veterinary sciences",
    "ICAR": "Civil engineering and architecture",
    "ING": "Industrial and information engineering",
}
LIFE_SCIENCE_UDAS = frozenset({"BIO", "MED", "AGR"})


@dataclass(frozen=True)
class FieldTaxonomy:
    entries: Mapping[str, TaxonEntry]

    def __contains__(self, sds_code: str) -> bool:
        return sds_code in self.entries

    def uda(self, sds_code: str) -> str:
        return self.entries[sds_code].uda_code

    def is_life_science(self, sds_code: str) -> bool:
        return self.entries[sds_code].life_science

    @classmethod
    def from_uda_map(cls, sds_to_uda: Mapping[str, str],
                     life_science_udas: Iterable[str] = LIFE_SCIENCE_UDAS) -> "FieldTaxonomy":
        life = set(life_science_udas)
        return cls({sds: TaxonEntry(uda, uda in life) for sds, uda in sds_to_uda.items()})


@dataclass(frozen=True)
class Authorship:
    position: int
    author_ref: str
    university_id: str

    @property
    def is_external(self) -> bool:
        return self.author_ref.startswith(EXTERNAL_PREFIX)


@dataclass(frozen=True)
class Publication:
    pub_id: str
    year: int
    citations: int
    categories: tuple[str, ...]
    authorships: tuple[Authorship, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "categories", tuple(self.categories))
        object.__setattr__(
            self, "authorships", tuple(sorted(self.authorships, key=lambda a: a.position))
        )

    @property
    def n_authors(self) -> int:
        return len(self.authorships)

    def position_of(self, researcher_id: str) -> int | None:
        for a in self.authorships:
            if a.author_ref == researcher_id:
                return a.position
        return None


@dataclass(frozen=True)
class ObservationConfig:
    window_start: int = 2004
    window_end: int = 2008
    entry_window: tuple[int, int] = (2001, 2003)
    census_date: str = "2009-06-30"
    min_faculty_years: int = 3
    sds_publishing_share_threshold: float = 0.5
    bottom_tier_fraction: float = 0.20
    bottom_decile_fraction: float = 0.10
    top_fractions: tuple[float, float] = (0.20, 0.10)
    absolute_top_fraction: float = 0.01
    # None means window_end
    advancement_horizon: int | None = None
    min_group_children: int = 10
    welch: bool = False
    national_surname_exclusions: frozenset[str] = frozenset()
    regional_surname_exclusions: Mapping[str, frozenset[str]] = field(default_factory=dict)
    region_area_map: Mapping[str, Area] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "entry_window", tuple(self.entry_window))
        object.__setattr__(self, "top_fractions", tuple(self.top_fractions))
        object.__setattr__(
            self, "national_surname_exclusions",
            frozenset(normalize_surname(s) for s in self.national_surname_exclusions),
        )
        object.__setattr__(
            self, "regional_surname_exclusions",
            {r: frozenset(normalize_surname(s) for s in names)
             for r, names in self.regional_surname_exclusions.items()},
        )
        object.__setattr__(
            self, "region_area_map",
            {r: Area(a) if not isinstance(a, Area) else a
             for r, a in self.region_area_map.items()},
        )

    @property
    def horizon(self) -> int:
        return self.window_end if self.advancement_horizon is None else self.advancement_horizon

    def in_window(self, year: int) -> bool:
        return self.window_start <= year <= self.window_end

    def in_entry_window(self, year: int) -> bool:
        return self.entry_window[0] <= year <= self.entry_window[1]

    def faculty_years(self, researcher: Researcher) -> int:
        return researcher.years_on_faculty(self.window_start, self.window_end)

    def excluded_surname(self, surname: str, region: str) -> bool:
        if surname in self.national_surname_exclusions:
            return True
        return surname in self.regional_surname_exclusions.get(region, frozenset())


@dataclass(frozen=True)
class Violation:
    kind: str
    record: str
    message: str

    def __str__(self):
        return f"{self.kind} [{self.record}]: {self.message}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def kinds(self) -> Counter:
        return Counter(v.kind for v in self.violations)


@dataclass(frozen=True)
class DatasetBundle:
    researchers: tuple[Researcher, ...]
    publications: tuple[Publication, ...]
    taxonomy: FieldTaxonomy
    config: ObservationConfig

    def __post_init__(self):
        object.__setattr__(self, "researchers", tuple(self.researchers))
        object.__setattr__(self, "publications", tuple(self.publications))

    @cached_property
    def researcher_index(self) -> dict[str, Researcher]:
        return {r.researcher_id: r for r in self.researchers}

    @cached_property
    def publications_by_author(self) -> dict[str, list[Publication]]:
        out: dict[str, list[Publication]] = {}
        for pub in self.publications:
            seen = set()
            for a in pub.authorships:
                if a.is_external or a.author_ref in seen:
                    continue
                seen.add(a.author_ref)
                out.setdefault(a.author_ref, []).append(pub)
        return out

    def researcher(self, researcher_id: str) -> Researcher:
        return self.researcher_index[researcher_id]

    def with_config(self, config: ObservationConfig) -> "DatasetBundle":
        return DatasetBundle(self.researchers, self.publications, self.taxonomy, config)


def _check_fraction(name: str, value: float, out: list[Violation]) -> None:
    if not 0.0 < value < 1.0:
        out.append(Violation("config", name, f"fraction {value!r} outside (0, 1)"))


def validate_dataset(researchers: Iterable[Researcher],
                     publications: Iterable[Publication],
                     taxonomy: FieldTaxonomy,
                     config: ObservationConfig) -> ValidationReport:
    researchers = list(researchers)
    publications = list(publications)
    out: list[Violation] = []

    if config.window_start > config.window_end:
        out.append(Violation("config", "window", "window_start after window_end"))
    if config.entry_window[0] > config.entry_window[1]:
        out.append(Violation("config", "entry_window", "start after end"))
    for name in ("sds_publishing_share_threshold", "bottom_tier_fraction",
                 "bottom_decile_fraction", "absolute_top_fraction"):
        _check_fraction(name, getattr(config, name), out)
    for i, f in enumerate(config.top_fractions):
        _check_fraction(f"top_fractions[{i}]", f, out)

    id_counts = Counter(r.researcher_id for r in researchers)
    for rid, n in id_counts.items():
        if n > 1:
            out.append(Violation("duplicate_id", rid, f"researcher id appears {n} times"))

    university_region: dict[str, set[str]] = {}
    for r in researchers:
        rid = r.researcher_id
        if r.sds_code not in taxonomy:
            out.append(Violation("unknown_sds", rid, f"SDS {r.sds_code!r} not in taxonomy"))
        if r.region not in config.region_area_map:
            out.append(Violation("unknown_region", rid,
                                 f"region {r.region!r} missing from area map"))
        university_region.setdefault(r.university_id, set()).add(r.region)
        if not r.rank_events:
            out.append(Violation("rank_history", rid, "no rank events"))
            continue
        years = [y for y, _ in r.rank_events]
        ranks = [k for _, k in r.rank_events]
        if any(b <= a for a, b in zip(years, years[1:])):
            out.append(Violation("rank_history", rid, "event years not strictly increasing"))
        if any(b < a for a, b in zip(ranks, ranks[1:])):
            out.append(Violation("rank_history", rid, "rank decreases over time"))
        if r.hire_year > min(years):
            out.append(Violation("rank_history", rid, "hire_year after first rank event"))
        if r.leave_year is not None and r.leave_year < r.hire_year:
            out.append(Violation("rank_history", rid, "leave_year before hire_year"))

    for uni, regions in university_region.items():
        if len(regions) > 1:
            out.append(Violation("inconsistent_region", uni,
                                 f"university listed in regions {sorted(regions)}"))

    pub_counts = Counter(p.pub_id for p in publications)
    for pid, n in pub_counts.items():
        if n > 1:
            out.append(Violation("duplicate_id", pid, f"publication id appears {n} times"))

    for p in publications:
        if p.citations < 0:
            out.append(Violation("citations", p.pub_id, "negative citation count"))
        if not p.categories:
            out.append(Violation("categories", p.pub_id, "no subject categories"))
        if not p.authorships:
            out.append(Violation("no_authors", p.pub_id, "publication has no authorships"))
        positions = sorted(a.position for a in p.authorships)
        if positions != list(range(1, len(positions) + 1)):
            out.append(Violation("position_gap", p.pub_id,
                                 f"positions {positions} are not 1..{len(positions)}"))
        for a in p.authorships:
            if not a.is_external and a.author_ref not in id_counts:
                out.append(Violation("dangling_reference", p.pub_id,
                                     f"unknown researcher {a.author_ref!r}"))

    out.sort(key=lambda v: (v.kind, v.record, v.message))
    return ValidationReport(tuple(out))
