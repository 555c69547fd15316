import json
import os

import pytest

from invlat import census as cm
from invlat.canon import canonical_form
from invlat.census import (CapExceeded, TheoremViolated, census, enumerate_i_lattices, i_form,
                           i_structures, lattices_of_size, naive_lattices)
from invlat.congruence import all_congruences, i_congruences
from invlat.constructions import B6, boolean_cube, chain, direct_product, horizontal_sum

from oracles import brute_involutions, is_isomorphic_brute

LATTICE_COUNTS = [1, 1, 1, 2, 5, 15, 53, 222, 1078]


@pytest.mark.parametrize("n,count", list(enumerate(LATTICE_COUNTS, start=1)))
def test_lattice_class_counts(n, count):
    assert len(lattices_of_size(n)) == count


@pytest.mark.parametrize("n", range(1, 7))
def test_generation_matches_naive_enumeration(n):
    assert {canonical_form(L) for L in lattices_of_size(n)} == naive_lattices(n)


@pytest.mark.parametrize("n", range(1, 6))
def test_i_lattice_classes_against_brute_isomorphism(n):
    """Count involutions up to isomorphism with a permutation search."""
    expected = 0
    for L in lattices_of_size(n):
        reps = []
        for s in brute_involutions(L):
            if not any(is_isomorphic_brute(L, L, [s], [r]) for r in reps):
                reps.append(s)
        expected += len(reps)
    assert sum(1 for _ in enumerate_i_lattices(n)) == expected


def test_four_element_i_lattices():
    forms = {i_form(A) for A in enumerate_i_lattices(4)}
    assert forms == {i_form(chain(4)), i_form(boolean_cube(2)),
                     i_form(horizontal_sum(chain(3), chain(3)))}


def test_six_element_reversal_pair():
    """Fewer lattice congruences but more i-congruences."""
    a, b = direct_product(chain(2), chain(3)), B6()
    forms = {i_form(A) for A in enumerate_i_lattices(6)}
    assert i_form(a) in forms and i_form(b) in forms
    ca, cb = all_congruences(a.lattice), all_congruences(b.lattice)
    assert len(ca) > len(cb) and len(i_congruences(a, ca)) < len(i_congruences(b, cb))


def test_i_structures_are_canonically_labelled():
    for L in lattices_of_size(6):
        for A in i_structures(L):
            assert all(x < y for x, y in A.lattice.covers)


def test_cap():
    with pytest.raises(CapExceeded):
        lattices_of_size(10)
    with pytest.raises(CapExceeded):
        lattices_of_size(11, cap=11)


def test_record_json_and_csv():
    r = census(5)
    d = json.loads(r.to_json())
    assert d["lattice_class_count"] == 5 and d["i_lattice_class_count"] == 4
    assert d["max_i_congruences"] == 4
    assert r.histogram_csv().splitlines()[0] == "congruences,classes"
    assert sum(r.histogram.values()) == 4


@pytest.mark.parametrize("n", range(1, 9))
def test_lattice_theorem(n):
    assert cm.verify_lattice_theorem(n).checks["lattice_theorem"]["passed"]


@pytest.mark.parametrize("n", range(1, 9))
def test_max_theorem(n):
    r = cm.verify_max_theorem(n)
    assert r.max_i_congruences == 2 ** (n // 2)


@pytest.mark.parametrize("n", range(2, 9))
def test_bz_theorem(n):
    assert cm.verify_bz_theorem(n).checks["bz_theorem"]["max"] == 2 ** (n // 2 - 1) + 1


@pytest.mark.parametrize("n", range(5, 9))
def test_second_largest(n):
    assert cm.verify_second_largest(n).checks["second_largest"]["passed"]


def test_violation_is_reported(monkeypatch):
    monkeypatch.setattr(cm, "max_witnesses", lambda n: set())
    with pytest.raises(TheoremViolated) as e:
        cm.verify_max_theorem(6)
    assert e.value.witness


def test_parallel_workers_give_the_same_stats(monkeypatch):
    serial = cm.census_stats(6)
    monkeypatch.setenv(cm.WORKERS_ENV, "2")
    monkeypatch.setattr(cm, "_STATS", {})
    assert cm.census_stats(6) == serial
