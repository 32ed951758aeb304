"""Seeded synthetic academia datasets with planted same-surname pairs.

Each dataset is driven by one integer seed. Independent numpy streams are
derived from it per entity class (roster, careers, surnames, latent
productivity, planting) and per researcher for publications, so growing
the roster does not reshuffle anyone else's publication record.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from .kinship import find_pairs
from .model import (
    LIFE_SCIENCE_UDAS, UDA_LABELS, Area, Authorship, DatasetBundle, FieldTaxonomy,
    ObservationConfig, Publication, Rank, Researcher, TaxonEntry, normalize_surname,
)

REGIONS: tuple[tuple[str, Area], ...] = (
    ("Lombardia", Area.NORTH), ("Lazio", Area.CENTRE), ("Campania", Area.SOUTH),
    ("Piemonte", Area.NORTH), ("Toscana", Area.CENTRE), ("Sicilia", Area.SOUTH),
    ("Veneto", Area.NORTH), ("Marche", Area.CENTRE), ("Puglia", Area.SOUTH),
)
FIRST_NAMES = ("Marco", "Anna", "Luca", "Giulia", "Paolo", "Sara", "Andrea", "Elena",
               "Giorgio", "Chiara", "Davide", "Irene", "Stefano", "Laura", "Pietro")
CENSUS_YEAR = 2009
LAST_DATA_YEAR = 2010
EARLIEST_HIRE = 1970

# stream indices for SeedSequence spawn keys
_ROSTER, _CAREERS, _SURNAMES, _LATENT, _PLANTING, _PUBLICATIONS = range(6)


class InfeasibleConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SynthConfig:
    seed: int = 0
    n_universities: int = 6
    n_sds: int = 8
    researchers_per_sds: int = 40
    # explicit (surname, relative frequency) pool; None -> truncated Zipf pool
    surname_pool: tuple[tuple[str, float], ...] | None = None
    zipf_size: int = 400
    zipf_exponent: float = 1.0
    citation_distribution: str = "lognormal"
    citation_mu: float = 1.0
    citation_sigma: float = 1.1
    citation_age_slope: float = 0.2
    citation_dispersion: float = 0.8
    quality_loading: float = 0.5
    pubs_per_year: float = 1.0
    productivity_sigma: float = 0.6
    # share of researchers publishing at 5% of the normal rate
    inactive_share: float = 0.15
    internal_coauthor_prob: float = 0.15
    max_authors: int = 15
    planted_pairs: int = 10
    planted_child_performance: str = "matched"
    performance_shift: float = 1.0
    planted_surnames: str = "rare"
    national_exclusions: tuple[str, ...] = ()
    national_exclusion_top_n: int = 0
    regional_exclusions: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    window: tuple[int, int] = (2004, 2008)
    entry_window: tuple[int, int] = (2001, 2003)

    def __post_init__(self):
        if self.citation_distribution not in ("lognormal", "negbin"):
            raise ValueError(f"unknown citation distribution {self.citation_distribution!r}")
        if self.planted_child_performance not in ("matched", "depressed", "boosted"):
            raise ValueError(
                f"unknown planted_child_performance {self.planted_child_performance!r}")
        if self.planted_surnames not in ("rare", "pool"):
            raise ValueError(f"unknown planted_surnames {self.planted_surnames!r}")
        if min(self.n_universities, self.n_sds, self.researchers_per_sds) < 1:
            raise ValueError("n_universities, n_sds and researchers_per_sds must be >= 1")
        if self.planted_pairs < 0:
            raise ValueError("planted_pairs must be >= 0")
        if self.planted_pairs > self.researchers_per_sds * self.n_sds:
            raise InfeasibleConfigError("more planted pairs than researchers")


@dataclass(frozen=True)
class GroundTruth:
    pairs: tuple[tuple[str, str], ...]

    @property
    def children(self) -> frozenset[str]:
        return frozenset(c for c, _ in self.pairs)


@dataclass(frozen=True)
class PowerSummary:
    replications: int
    n_planted: int
    n_recovered: int
    n_detected_pairs: int
    n_false_pairs: int
    recall_per_replication: tuple[float | None, ...]
    fp_rate_per_replication: tuple[float, ...]

    @property
    def recall(self) -> float | None:
        return None if self.n_planted == 0 else self.n_recovered / self.n_planted

    @property
    def false_positive_rate(self) -> float:
        return 0.0 if self.n_detected_pairs == 0 else self.n_false_pairs / self.n_detected_pairs


def zipf_pool(size: int, exponent: float = 1.0) -> tuple[tuple[str, float], ...]:
    return tuple((f"SURNAME{k:04d}", 1.0 / k ** exponent) for k in range(1, size + 1))


def _rng(seed: int, stream: int, *sub: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, *sub)))


def _career(rng: np.random.Generator) -> tuple[int, list[tuple[int, Rank]], int | None]:
    hire = int(rng.integers(EARLIEST_HIRE, 2007))
    events = [(hire, Rank.ASSISTANT)]
    year = hire
    for rank in (Rank.ASSOCIATE, Rank.FULL):
        year += int(rng.integers(3, 13))
        if year > LAST_DATA_YEAR or rng.random() < 0.25:
            break
        events.append((year, rank))
    leave = None
    if hire < 1978 and rng.random() < 0.5:
        leave = int(rng.integers(2004, LAST_DATA_YEAR + 1))
    return hire, events, leave


def _junior_career(rng: np.random.Generator, entry: tuple[int, int]) -> tuple[int, list, None]:
    hire = int(rng.integers(entry[0], entry[1] + 1))
    events = [(hire, Rank.ASSISTANT)]
    promoted = hire + int(rng.integers(3, 10))
    if promoted <= LAST_DATA_YEAR and rng.random() < 0.6:
        events.append((promoted, Rank.ASSOCIATE))
    return hire, events, None


def _taxonomy(n_sds: int) -> tuple[FieldTaxonomy, list[str]]:
    udas = list(UDA_LABELS)
    codes = []
    entries = {}
    for k in range(n_sds):
        uda = udas[k % len(udas)]
        code = f"{uda}/{k // len(udas) + 1:02d}"
        codes.append(code)
        entries[code] = TaxonEntry(uda, uda in LIFE_SCIENCE_UDAS)
    return FieldTaxonomy(entries), codes


def _draw_citations(rng, cfg: SynthConfig, year: int, quality: float) -> int:
    mean_log = cfg.citation_mu + cfg.citation_age_slope * (CENSUS_YEAR - year) \
        + cfg.quality_loading * quality
    if cfg.citation_distribution == "lognormal":
        return int(math.floor(math.exp(rng.normal(mean_log, cfg.citation_sigma))))
    mean = math.exp(mean_log)
    k = cfg.citation_dispersion
    return int(rng.negative_binomial(k, k / (k + mean)))


def generate(cfg: SynthConfig) -> tuple[DatasetBundle, GroundTruth]:
    """Build a validated-by-construction bundle and the list of planted pairs."""
    taxonomy, sds_codes = _taxonomy(cfg.n_sds)
    pool = cfg.surname_pool if cfg.surname_pool is not None else zipf_pool(
        cfg.zipf_size, cfg.zipf_exponent)
    pool_names = [normalize_surname(s) for s, _ in pool]
    weights = np.array([w for _, w in pool], dtype=float)
    weights /= weights.sum()

    unis = [f"U{u + 1:02d}" for u in range(cfg.n_universities)]
    uni_region = {u: REGIONS[i % len(REGIONS)][0] for i, u in enumerate(unis)}
    area_map = {name: area for name, area in REGIONS[:min(len(REGIONS), len(unis))]}

    roster_rng = _rng(cfg.seed, _ROSTER)
    career_rng = _rng(cfg.seed, _CAREERS)
    surname_rng = _rng(cfg.seed, _SURNAMES)
    latent_rng = _rng(cfg.seed, _LATENT)

    n = cfg.n_sds * cfg.researchers_per_sds
    rows = []
    for idx in range(n):
        sds = sds_codes[idx // cfg.researchers_per_sds]
        uni = unis[int(roster_rng.integers(len(unis)))]
        first = FIRST_NAMES[int(roster_rng.integers(len(FIRST_NAMES)))]
        surname = pool_names[int(surname_rng.choice(len(pool_names), p=weights))]
        hire, events, leave = _career(career_rng)
        rows.append({"id": f"R{idx + 1:05d}", "first": first, "surname": surname,
                     "uni": uni, "sds": sds, "hire": hire, "events": events,
                     "leave": leave, "z": float(latent_rng.normal(0.0, cfg.productivity_sigma)),
                     "active": bool(latent_rng.random() >= cfg.inactive_share)})

    truth = _plant(cfg, rows, pool_names, weights)

    researchers = tuple(
        Researcher(r["id"], f"{r['first']} {r['surname'].title()}", r["surname"], r["uni"],
                   uni_region[r["uni"]], r["sds"], tuple(r["events"]), r["hire"], r["leave"])
        for r in rows)
    publications = _publications(cfg, rows, researchers)

    national = set(cfg.national_exclusions)
    if cfg.national_exclusion_top_n:
        ranked = sorted(range(len(pool_names)), key=lambda i: (-weights[i], pool_names[i]))
        national |= {pool_names[i] for i in ranked[:cfg.national_exclusion_top_n]}
    obs = ObservationConfig(
        window_start=cfg.window[0], window_end=cfg.window[1], entry_window=cfg.entry_window,
        national_surname_exclusions=frozenset(national),
        regional_surname_exclusions={k: frozenset(v) for k, v in cfg.regional_exclusions.items()},
        region_area_map=area_map,
    )
    return DatasetBundle(researchers, publications, taxonomy, obs), truth


def _plant(cfg: SynthConfig, rows: list[dict], pool_names: Sequence[str],
           weights: np.ndarray) -> GroundTruth:
    if cfg.planted_pairs == 0:
        return GroundTruth(())
    rng = _rng(cfg.seed, _PLANTING)
    start, end = cfg.entry_window
    hosts = [i for i, r in enumerate(rows)
             if any(rank is Rank.FULL and y <= start - 2 for y, rank in r["events"])
             and (r["leave"] is None or r["leave"] >= end)]
    if len(hosts) < cfg.planted_pairs:
        raise InfeasibleConfigError(
            f"{cfg.planted_pairs} planted pairs requested but only {len(hosts)} "
            "full professors qualify as parents")
    parents = [hosts[i] for i in rng.choice(len(hosts), cfg.planted_pairs, replace=False)]
    others = [i for i in range(len(rows)) if i not in set(parents)]
    if len(others) < cfg.planted_pairs:
        raise InfeasibleConfigError("not enough researchers left to host planted children")
    children = [others[i] for i in rng.choice(len(others), cfg.planted_pairs, replace=False)]
    shift = {"matched": 0.0, "depressed": -cfg.performance_shift,
             "boosted": cfg.performance_shift}[cfg.planted_child_performance]
    pairs = []
    for k, (p, c) in enumerate(zip(parents, children)):
        if cfg.planted_surnames == "rare":
            surname = f"KIN{k + 1:04d}RARE"
        else:
            surname = pool_names[int(rng.choice(len(pool_names), p=weights))]
        hire, events, leave = _junior_career(rng, cfg.entry_window)
        rows[c].update(surname=surname, uni=rows[p]["uni"], hire=hire, events=events,
                       leave=leave, z=rows[c]["z"] + shift)
        rows[p]["surname"] = surname
        pairs.append((rows[c]["id"], rows[p]["id"]))
    return GroundTruth(tuple(sorted(pairs)))


def _publications(cfg: SynthConfig, rows: list[dict],
                  researchers: Sequence[Researcher]) -> tuple[Publication, ...]:
    colleagues: dict[tuple[str, str], list[str]] = {}
    for r in rows:
        colleagues.setdefault((r["sds"], r["uni"]), []).append(r["id"])
    sds_codes = sorted({r["sds"] for r in rows})
    pubs = []
    for idx, (row, res) in enumerate(zip(rows, researchers)):
        rng = _rng(cfg.seed, _PUBLICATIONS, idx)
        rate = cfg.pubs_per_year * math.exp(row["z"]) * (1.0 if row["active"] else 0.05)
        home = f"SC-{row['sds']}"
        peers = [c for c in colleagues[(row["sds"], row["uni"])] if c != row["id"]]
        for year in range(cfg.window[0] - 1, cfg.window[1] + 2):
            if not res.on_faculty(year):
                continue
            for _ in range(int(rng.poisson(rate))):
                s = min(cfg.max_authors, 1 + int(rng.poisson(2.5)))
                own = int(rng.integers(1, s + 1))
                refs = []
                used = {row["id"]}
                for pos in range(1, s + 1):
                    if pos == own:
                        refs.append(Authorship(pos, row["id"], row["uni"]))
                        continue
                    if peers and rng.random() < cfg.internal_coauthor_prob:
                        peer = peers[int(rng.integers(len(peers)))]
                        if peer not in used:
                            used.add(peer)
                            refs.append(Authorship(pos, peer, row["uni"]))
                            continue
                    uni = row["uni"] if rng.random() < 0.5 else f"X{int(rng.integers(1, 50)):03d}"
                    refs.append(Authorship(pos, f"EXT:{row['id']}-{len(pubs)}-{pos}", uni))
                cats = [home]
                if rng.random() < 0.15 and len(sds_codes) > 1:
                    other = sds_codes[int(rng.integers(len(sds_codes)))]
                    if other != row["sds"]:
                        cats.append(f"SC-{other}")
                cites = _draw_citations(rng, cfg, year, row["z"])
                pubs.append(Publication(f"P{len(pubs) + 1:07d}", year, cites, tuple(cats),
                                        tuple(refs)))
    return tuple(pubs)


def replication_seeds(seed: int, replications: int) -> list[int]:
    return [int(s) for s in np.random.SeedSequence(seed).generate_state(replications)]


def detection_power(cfg: SynthConfig, replications: int) -> PowerSummary:
    """Recall of planted pairs and share of detected pairs that were not planted."""
    if replications < 1:
        raise ValueError("replications must be >= 1")
    recalls, fps = [], []
    planted = recovered = detected = false = 0
    for seed in replication_seeds(cfg.seed, replications):
        bundle, truth = generate(replace(cfg, seed=seed))
        _, pairs = find_pairs(bundle)
        found = {(p.child_id, parent) for p in pairs for parent in p.parent_ids}
        hits = sum(pair in found for pair in truth.pairs)
        truth_set = set(truth.pairs)
        wrong = sum(not any((p.child_id, q) in truth_set for q in p.parent_ids) for p in pairs)
        planted += len(truth.pairs)
        recovered += hits
        detected += len(pairs)
        false += wrong
        recalls.append(hits / len(truth.pairs) if truth.pairs else None)
        fps.append(wrong / len(pairs) if pairs else 0.0)
    return PowerSummary(replications, planted, recovered, detected, false,
                        tuple(recalls), tuple(fps))
