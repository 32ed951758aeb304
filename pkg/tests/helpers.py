from kinmerit.model import (
    Area, Authorship, DatasetBundle, FieldTaxonomy, ObservationConfig, Publication, Rank,
    Researcher, TaxonEntry,
)

A, S, F = Rank.ASSISTANT, Rank.ASSOCIATE, Rank.FULL

TAXONOMY = FieldTaxonomy({
    "FIS/01": TaxonEntry("FIS", False),
    "MED/09": TaxonEntry("MED", True),
    "BIO/10": TaxonEntry("BIO", True),
})
AREAS = {"Lazio": Area.CENTRE, "Lombardia": Area.NORTH, "Sicilia": Area.SOUTH}


def researcher(rid, events, surname="NERI", uni="U1", region="Lazio", sds="FIS/01",
               hire=None, leave=None):
    events = tuple(events)
    return Researcher(rid, f"X {surname}", surname, uni, region, sds, events,
                      events[0][0] if hire is None else hire, leave)


def pub(pid, year, citations, categories=("C",), authors=()):
    """authors: sequence of author_ref or (author_ref, university_id)."""
    rows = []
    for i, a in enumerate(authors, start=1):
        ref, uni = (a, "U1") if isinstance(a, str) else a
        rows.append(Authorship(i, ref, uni))
    return Publication(pid, year, citations, tuple(categories), tuple(rows))


def config(**kw):
    kw.setdefault("region_area_map", AREAS)
    return ObservationConfig(**kw)


def bundle(researchers, publications=(), **cfg):
    return DatasetBundle(tuple(researchers), tuple(publications), TAXONOMY, config(**cfg))
