import random

from hypothesis import given, settings, strategies as st

from kinmerit.model import (
    Authorship, Publication, Rank, normalize_surname, validate_dataset,
)

from helpers import A, F, S, TAXONOMY, config, pub, researcher


def consistent():
    rs = [researcher("R1", [(1990, A), (1995, S), (2000, F)]),
          researcher("R2", [(2002, A)]),
          researcher("R3", [(1999, S)], region="Sicilia", uni="U3")]
    ps = [pub("P1", 2005, 3, authors=["R1", "R2"]),
          pub("P2", 2006, 0, authors=["R3", "EXT:z"])]
    return rs, ps


def test_consistent_fixture_has_no_violations():
    rs, ps = consistent()
    assert validate_dataset(rs, ps, TAXONOMY, config()).ok


def test_dangling_reference():
    rs, ps = consistent()
    ps.append(pub("P3", 2006, 1, authors=["R9"]))
    report = validate_dataset(rs, ps, TAXONOMY, config())
    assert [v.kind for v in report] == ["dangling_reference"]


def test_position_gap():
    rs, ps = consistent()
    ps.append(Publication("P3", 2005, 1, ("C",),
                          (Authorship(1, "R1", "U1"), Authorship(3, "R2", "U1"))))
    report = validate_dataset(rs, ps, TAXONOMY, config())
    assert [v.kind for v in report] == ["position_gap"]


def test_structural_problems_are_all_reported():
    rs, ps = consistent()
    rs += [researcher("R1", [(2000, A)]),
           researcher("R4", [(2000, F), (2001, A)], sds="XXX/00", region="Atlantis"),
           researcher("R5", [(2000, A)], hire=2003)]
    kinds = validate_dataset(rs, ps, TAXONOMY, config(window_start=2010)).kinds()
    assert kinds["duplicate_id"] == 1
    assert kinds["unknown_sds"] == 1
    assert kinds["unknown_region"] == 1
    assert kinds["rank_history"] == 2
    assert kinds["config"] == 1


@settings(max_examples=30, deadline=None)
@given(st.randoms(use_true_random=False))
def test_validation_is_order_independent(rnd):
    rs, ps = consistent()
    ps += [pub("P3", 2006, 1, authors=["R9"]), pub("P4", 2007, -1, categories=(), authors=[])]
    rs.append(researcher("R2", [(2002, A)]))
    first = validate_dataset(rs, ps, TAXONOMY, config())
    rnd.shuffle(rs)
    rnd.shuffle(ps)
    again = validate_dataset(rs, ps, TAXONOMY, config())
    assert sorted(map(str, first)) == sorted(map(str, again))
    assert validate_dataset(rs, ps, TAXONOMY, config()) == again


def test_normalize_surname():
    assert normalize_surname("  de   Luca ") == "DE LUCA"
    assert normalize_surname("Nicolò") == "NICOLO"
    assert normalize_surname("d'Alò") == "D'ALO"
    assert researcher("R1", [(2000, A)], surname="Zoë").surname == "ZOE"


def test_rank_at_and_faculty_years():
    r = researcher("R1", [(1990, A), (1995, S), (2006, F)], leave=2007)
    assert r.rank_at(1989) is None
    assert r.rank_at(1995) is S
    assert r.rank_at(2010) is F
    assert r.years_on_faculty(2004, 2008) == 4
    assert r.full_since() == 2006
    assert Rank.parse("associate") is S
