import io

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from satcube import hypercube as hc
from satcube.errors import CapExceeded
from satcube.formula import Formula, GenConfig, all_clauses, clause_from_ints, random_formula

from oracles import brute_solutions


@pytest.mark.parametrize("n, size", [(3, 8), (10, 1024)])
def test_full_space(n, size):
    assert hc.count(hc.full_space(n)) == size


def test_full_space_cap():
    with pytest.raises(CapExceeded):
        hc.full_space(hc.DEFAULT_CAP + 1)
    with pytest.raises(CapExceeded):
        hc.full_space(5, cap=hc.MAX_CAP + 1)


def test_single_clause_n3():
    s = hc.apply_clause(hc.full_space(3), clause_from_ints((1, 2, 3)))
    assert s.indices().tolist() == list(range(1, 8))


def test_single_clause_n4_removes_0_and_8():
    s = hc.apply_clause(hc.full_space(4), clause_from_ints((1, 2, 3)))
    assert sorted(set(range(16)) - set(s.indices().tolist())) == [0, 8]
    assert hc.count(s) == 14


def test_apply_clause_is_idempotent_and_pure():
    c = clause_from_ints((-2, 3, 5))
    base = hc.full_space(6)
    once = hc.apply_clause(base, c)
    assert hc.apply_clause(once, c) == once
    assert hc.count(base) == 64


@pytest.mark.parametrize("n", [3, 5, 8])
def test_each_clause_removes_one_eighth_of_full_space(n):
    for c in all_clauses(n):
        assert hc.count(hc.apply_clause(hc.full_space(n), c)) == 2**n - 2 ** (n - 3)


def test_enumerate_three_variable_fixtures(shatter, all8):
    assert hc.count(hc.enumerate_solutions(shatter)) == 5
    s = hc.enumerate_solutions(all8)
    assert hc.count(s) == 0 and hc.is_empty(s)


def test_enumerate_empty_formula():
    assert hc.count(hc.enumerate_solutions(Formula(12))) == 4096


def test_face_instance_leaves_four(face):
    s = hc.enumerate_solutions(face)
    assert hc.count(s) == 4 and not hc.is_empty(s)
    assert s.indices().tolist() == [1, 3, 5, 7]


@settings(max_examples=60, deadline=None)
@given(st.integers(3, 12), st.integers(0, 40), st.integers(0, 2**64 - 1))
def test_enumerate_agrees_with_brute_force(n, m, seed):
    f = random_formula(GenConfig(n, m, seed=seed))
    s = hc.enumerate_solutions(f)
    assert s.indices().tolist() == brute_solutions(n, [c.to_ints() for c in f.clauses])


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 9), st.integers(1, 20), st.randoms())
def test_enumerate_ignores_clause_order(n, m, rnd):
    f = random_formula(GenConfig(n, m, seed=rnd.getrandbits(64)))
    shuffled = list(f.clauses)
    rnd.shuffle(shuffled)
    assert hc.enumerate_solutions(f) == hc.enumerate_solutions(Formula(n, shuffled))


@settings(max_examples=30, deadline=None)
@given(st.integers(3, 10), st.integers(0, 30), st.integers(0, 2**32))
def test_filtering_is_monotone(n, m, seed):
    f = random_formula(GenConfig(n, m, seed=seed))
    s = hc.full_space(n)
    prev = hc.count(s)
    for c in f.clauses:
        s = hc.apply_clause(s, c)
        cur = hc.count(s)
        assert prev - 2 ** (n - 3) <= cur <= prev
        prev = cur


@pytest.mark.parametrize("a, b, d", [(0, 0, 0), (0, 4, 1), (0b011, 0b100, 3)])
def test_hamming_distance(a, b, d):
    assert hc.hamming_distance(a, b) == d


def test_neighbors():
    assert sorted(hc.neighbors(0, 3)) == [1, 2, 4]
    assert sorted(hc.neighbors(7, 3)) == [3, 5, 6]
    for a in range(32):
        nb = hc.neighbors(a, 5)
        assert len(nb) == 5 and all(hc.hamming_distance(a, b) == 1 for b in nb)


def test_assignment_index_round_trip():
    for a in range(64):
        assert hc.assignment_index(hc.assignment_bits(a, 6)) == a
    assert hc.assignment_index((1, 0, 0)) == 1


def test_binary_dump_layout(shatter):
    s = hc.enumerate_solutions(shatter)  # valid: 0, 3, 5, 6, 7
    buf = io.BytesIO()
    hc.dump(s, buf)
    raw = buf.getvalue()
    assert raw[:8] == (3).to_bytes(8, "little")
    assert raw[8:] == bytes([0b11101001])
    assert hc.load(io.BytesIO(raw)) == s


def test_binary_dump_round_trip_large():
    f = random_formula(GenConfig(11, 20, seed=8))
    s = hc.enumerate_solutions(f)
    buf = io.BytesIO()
    hc.dump(s, buf)
    assert len(buf.getvalue()) == 8 + 2**11 // 8
    buf.seek(0)
    assert hc.load(buf) == s
