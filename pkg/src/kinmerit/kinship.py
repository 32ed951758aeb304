"""Same-surname, same-university links between junior entrants and full professors.

The heuristic groups candidate "children" (assistant/associate professors
who entered or advanced during the entry window) and candidate "parents"
(full professors around that time) by university and normalized surname,
drops surnames on the national or regional exclusion lists, and turns
each group into one pair per child.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

from .model import DatasetBundle, Rank, Researcher

JUNIOR_RANKS = (Rank.ASSISTANT, Rank.ASSOCIATE)


class Cardinality(str, enum.Enum):
    ONE_TO_ONE = "OneToOne"
    ONE_CHILD_MANY_PARENTS = "OneChildManyParents"
    MANY_CHILDREN_ONE_PARENT = "ManyChildrenOneParent"
    MANY_CHILDREN_MANY_PARENTS = "ManyChildrenManyParents"

    @classmethod
    def of(cls, n_children: int, n_parents: int) -> "Cardinality":
        if n_children < 1 or n_parents < 1:
            raise ValueError("a link needs at least one child and one parent")
        if n_children == 1:
            return cls.ONE_TO_ONE if n_parents == 1 else cls.ONE_CHILD_MANY_PARENTS
        return cls.MANY_CHILDREN_ONE_PARENT if n_parents == 1 else cls.MANY_CHILDREN_MANY_PARENTS


@dataclass(frozen=True)
class KinshipLink:
    university_id: str
    surname: str
    children: frozenset[str]
    parents: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "children", frozenset(self.children))
        object.__setattr__(self, "parents", frozenset(self.parents))
        if not self.children or not self.parents:
            raise ValueError("children and parents must be non-empty")
        if self.children & self.parents:
            raise ValueError("a researcher cannot be both child and parent in one link")

    @property
    def cardinality_class(self) -> Cardinality:
        return Cardinality.of(len(self.children), len(self.parents))


@dataclass(frozen=True)
class KinshipPair:
    child_id: str
    parent_ids: frozenset[str]
    university_id: str
    surname: str
    cardinality_class: Cardinality


def entry_year(researcher: Researcher, bundle: DatasetBundle) -> int | None:
    """Earliest junior appointment or promotion inside the entry window."""
    cfg = bundle.config
    for year, rank in researcher.rank_events:
        if rank in JUNIOR_RANKS and cfg.in_entry_window(year):
            return year
    return None


def candidate_children(bundle: DatasetBundle) -> set[str]:
    return {r.researcher_id for r in bundle.researchers if entry_year(r, bundle) is not None}


def full_in(researcher: Researcher, year: int) -> bool:
    return researcher.on_faculty(year) and researcher.rank_at(year) is Rank.FULL


def candidate_parents(bundle: DatasetBundle) -> set[str]:
    start, end = bundle.config.entry_window
    return {r.researcher_id for r in bundle.researchers
            if any(full_in(r, y) for y in range(start - 1, end + 1))}


def parent_eligible(parent: Researcher, child: Researcher, bundle: DatasetBundle) -> bool:
    """The parent must already be full professor in the year before the child's entry."""
    year = entry_year(child, bundle)
    return year is not None and full_in(parent, year - 1)


def detect_links(children: Iterable[str], parents: Iterable[str],
                 bundle: DatasetBundle) -> list[KinshipLink]:
    """Group candidates by (university, surname) and keep groups with both roles.

    A researcher who is a candidate for both roles is counted as a child in
    their own group. Groups whose surname is excluded nationally or for the
    university's region produce no link.
    """
    children = set(children)
    parents = set(parents)
    cfg = bundle.config
    groups: dict[tuple[str, str], tuple[set[str], set[str]]] = defaultdict(
        lambda: (set(), set()))
    region: dict[str, str] = {}
    for r in bundle.researchers:
        rid = r.researcher_id
        if rid in children:
            groups[(r.university_id, r.surname)][0].add(rid)
        elif rid in parents:
            groups[(r.university_id, r.surname)][1].add(rid)
        else:
            continue
        region.setdefault(r.university_id, r.region)
    links = []
    for (uni, surname) in sorted(groups):
        kids, elders = groups[(uni, surname)]
        if not kids or not elders:
            continue
        if cfg.excluded_surname(surname, region[uni]):
            continue
        links.append(KinshipLink(uni, surname, frozenset(kids), frozenset(elders)))
    return links


def resolve_pairs(links: Sequence[KinshipLink],
                  bundle: DatasetBundle | None = None) -> list[KinshipPair]:
    """One pair per child per link, carrying that child's parents.

    With a bundle, parents who were not yet full professor the year before
    the child's entry are dropped, and a child left with no parent yields no
    pair. Without one every parent of the link is kept.
    """
    pairs = []
    for link in links:
        cls = link.cardinality_class
        for child_id in sorted(link.children):
            parent_ids = link.parents
            if bundle is not None:
                child = bundle.researcher(child_id)
                parent_ids = frozenset(p for p in link.parents
                                       if parent_eligible(bundle.researcher(p), child, bundle))
            if parent_ids:
                pairs.append(KinshipPair(child_id, parent_ids, link.university_id,
                                         link.surname, cls))
    return pairs


def find_pairs(bundle: DatasetBundle) -> tuple[list[KinshipLink], list[KinshipPair]]:
    links = detect_links(candidate_children(bundle), candidate_parents(bundle), bundle)
    return links, resolve_pairs(links, bundle)


def dual_role_count(bundle: DatasetBundle, links: Sequence[KinshipLink]) -> int:
    """Linked researchers who are candidates for both roles."""
    both = candidate_children(bundle) & candidate_parents(bundle)
    linked = set().union(*(l.children | l.parents for l in links)) if links else set()
    return len(both & linked)
