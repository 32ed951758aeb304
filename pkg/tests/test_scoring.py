import math
import random

import pytest
from hypothesis import given, settings, strategies as st

from kinmerit.baseline import compute_baselines
from kinmerit.scoring import (
    StructuralError, author_weight, author_weights, positional_weights, productivity, score_all,
)

from helpers import A, F, bundle, config, pub, researcher


def byline(s, same_ends=True):
    authors = [(f"R{i}", "U1") for i in range(1, s + 1)]
    if not same_ends:
        authors[-1] = (f"R{s}", "U2")
    return pub("P", 2005, 1, authors=authors)


def test_intramural_five():
    p = byline(5)
    assert author_weight(p, 1, True) == pytest.approx(0.40)
    assert author_weight(p, 5, True) == pytest.approx(0.40)
    assert author_weight(p, 3, True) == pytest.approx(0.20 / 3)


def test_extramural_six():
    assert author_weights(byline(6, False), True) == pytest.approx((0.30, 0.15, 0.05, 0.05, 0.15, 0.30))


def test_two_authors_any_field():
    for ls in (True, False):
        assert author_weights(byline(2, False), ls) == (0.5, 0.5)


def test_three_intramural():
    assert author_weights(byline(3), True) == pytest.approx((0.40, 0.20, 0.40))
    assert positional_weights(3, True)[1] is False


def test_small_extramural_renormalized():
    w, renorm = positional_weights(3, False)
    assert renorm and w == pytest.approx((0.4, 0.2, 0.4))
    w, renorm = positional_weights(4, False)
    assert renorm and w == pytest.approx((1 / 3, 1 / 6, 1 / 6, 1 / 3))


def test_fractional_outside_life_sciences():
    assert author_weights(byline(7, False), False) == pytest.approx((1 / 7,) * 7)


def test_invalid_position():
    with pytest.raises(ValueError):
        author_weight(byline(3), 4, True)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 30), st.booleans(), st.booleans())
def test_weights_sum_to_one(s, same_ends, ls):
    w = author_weights(byline(s, same_ends or s == 1), ls)
    assert len(w) == s
    assert all(0 < x <= 1 for x in w)
    assert abs(math.fsum(w) - 1) <= 1e-9


def test_no_publications():
    r = researcher("R1", [(1990, A)])
    card = productivity(r, [], compute_baselines([]), config())
    assert card.P == 0 and card.t_years == 5 and not card.has_publications


def test_unit_publication():
    r = researcher("R1", [(1990, A)])
    p = pub("P1", 2005, 3, authors=["R1"])
    base = compute_baselines([p, pub("P2", 2005, 3, authors=["R9"])])
    assert productivity(r, [p], base, config()).P == pytest.approx(1 / 5 * 1 * 1) == 0.2


def test_hand_evaluated_sum():
    # P1: 4 citations in a cell with median 2 -> impact 2.0, two authors -> 0.5
    # P2: 4 citations, medians 2 and 4 -> impact 1.5, first of intramural trio -> 0.4
    r = researcher("R1", [(1990, A)], leave=2007, sds="MED/09")
    base = compute_baselines([pub("M1", 2005, 2, ("A",), ["R9"]), pub("M2", 2006, 2, ("A",), ["R9"]),
                              pub("M3", 2006, 4, ("C",), ["R9"])])
    p1 = pub("P1", 2005, 4, ("A",), ["R1", "R8"])
    p2 = pub("P2", 2006, 4, ("A", "C"), ["R1", "R7", "R6"])
    card = productivity(r, [p1, p2], base, config(), life_science=True)
    assert card.t_years == 4
    assert card.P == pytest.approx(0.25 * (2.0 * 0.5 + 1.5 * 0.4)) == pytest.approx(0.4)


def test_zero_years_is_structural_error():
    r = researcher("R1", [(2010, A)])
    with pytest.raises(StructuralError):
        productivity(r, [], compute_baselines([]), config())


def test_out_of_window_and_skipped_publications():
    r = researcher("R1", [(1990, A)])
    inside = pub("P1", 2005, 2, authors=["R1"])
    outside = pub("P2", 2009, 2, authors=["R1"])
    uncited = pub("P3", 2007, 0, ("Q",), ["R1"])
    base = compute_baselines([inside, outside, uncited])
    card = productivity(r, [inside, outside, uncited], base, config())
    assert (card.n_publications, card.n_cited_publications, card.n_skipped) == (2, 1, 1)
    assert card.P == pytest.approx(0.2)


def random_corpus(rnd, n_pubs=40):
    people = [researcher(f"R{i}", [(1990, A)]) for i in range(6)]
    pubs = []
    for i in range(n_pubs):
        k = rnd.randint(1, 6)
        authors = [(r.researcher_id, rnd.choice(["U1", "U2"]))
                   for r in rnd.sample(people, k)]
        pubs.append(pub(f"P{i}", rnd.randint(2004, 2008), rnd.choice([0, 1, 2, 5, 30]),
                        tuple(rnd.sample("ABC", rnd.randint(1, 2))), authors))
    return people, pubs


@settings(max_examples=40, deadline=None)
@given(st.randoms(use_true_random=False), st.booleans())
def test_additivity_and_removal(rnd, ls):
    people, pubs = random_corpus(rnd)
    base = compute_baselines(pubs)
    cfg = config()
    r = people[0]
    mine = [p for p in pubs if p.position_of(r.researcher_id)]
    whole = productivity(r, mine, base, cfg, ls).P
    cut = rnd.randint(0, len(mine))
    parts = (productivity(r, mine[:cut], base, cfg, ls).P
             + productivity(r, mine[cut:], base, cfg, ls).P)
    assert abs(whole - parts) <= 1e-9
    if mine:
        drop = rnd.randrange(len(mine))
        assert productivity(r, mine[:drop] + mine[drop + 1:], base, cfg, ls).P <= whole + 1e-12


def test_score_all_skips_off_faculty_and_warns(caplog):
    rs = [researcher("R1", [(1990, A)]), researcher("R2", [(2010, F)])]
    ps = [pub("P1", 2005, 0, authors=["R1"])]
    b = bundle(rs, ps)
    with caplog.at_level("WARNING"):
        cards = score_all(b, compute_baselines(ps))
    assert list(cards) == ["R1"]
    assert "1 researcher-publication contributions skipped" in caplog.text
