"""
Unit tests for bisimulation, equivalence and distinguishing formulas
"""
import random

import pytest
from hypothesis import given, settings as hsettings, strategies as st

from khow.bisim import (
    A_ZIG,
    ATOM,
    KH_ZAG,
    BisimRelation,
    bisimilar,
    equivalence_fact,
    equivalent,
    find_distinguishing_formula,
    global_profile,
    prop_definable_sets,
    realized_valuations,
    separates,
    valuation_relation,
    verify_bisim,
)
from khow.checker import check_ults
from khow.config import settings
from khow.exceptions import ValuationCapError
from khow.fixtures import emp_fail_lts
from khow.generators import random_ults
from khow.models import Lts, PlanSet, Ults
from khow.syntax import Atom, Kh


def identity(m):
    return BisimRelation.of((s, s) for s in m.states)


def with_duplicated_x(m: Ults) -> Ults:
    base = Lts.build(
        ['w', 'u', 'v_r', 'x', 'x2'],
        {'w': ['p'], 'u': ['q'], 'v_r': ['r']},
        {'a': [('w', 'u')], 'b': [('u', 'v_r')], 'c': [('w', 'x'), ('w', 'x2')]},
        actions=['a', 'b', 'c'], atoms=['p', 'q', 'r'],
    )
    return Ults(base, m.agents, m.plansets)


def with_split_plan_set(m: Ults) -> Ults:
    """emp-fail with {[a,b],[c]} split in two, which makes Kh(p, r) true."""
    return m.with_plansets({'1': (
        PlanSet.of([['a']]), PlanSet.of([['b']]), PlanSet.of([['a', 'b']]), PlanSet.of([['c']]),
    )})


class TestDefinableSets:
    """Valuation classes and profiles"""

    def test_emp_fail_has_sixteen(self, emp_fail):
        assert len(prop_definable_sets(emp_fail)) == 16

    def test_single_valuation(self):
        base = Lts.build(['s', 't'], {}, {'a': [('s', 't')]})
        m = Ults(base, ('1',), {'1': (PlanSet.of([['a']]),)})
        assert prop_definable_sets(m) == [0, 3]

    def test_valuation_cap(self, emp_fail, monkeypatch):
        monkeypatch.setattr(settings, 'MAX_VALUATIONS', 2)
        with pytest.raises(ValuationCapError):
            realized_valuations(emp_fail)

    def test_empty_condition_always_executable(self, emp_fail):
        profile = global_profile(emp_fail, realized_valuations(emp_fail), ['1'])
        assert profile.kh_fact('1', 0, 0)


class TestVerifyBisim:
    """Checking candidate relations clause by clause"""

    def test_identity(self, emp_fail):
        assert verify_bisim(emp_fail, emp_fail, identity(emp_fail)) is None

    def test_atom_clause(self, emp_fail):
        z = BisimRelation.of([('w', 'u')] + [(s, s) for s in emp_fail.states])
        violation = verify_bisim(emp_fail, emp_fail, z)
        assert violation.clause == ATOM
        assert violation.pair == ('w', 'u')

    def test_totality(self, emp_fail):
        z = BisimRelation.of([('w', 'w')])
        assert verify_bisim(emp_fail, emp_fail, z).clause == A_ZIG

    def test_kh_zag(self, emp_fail):
        other = with_split_plan_set(emp_fail)
        violation = verify_bisim(emp_fail, other, valuation_relation(emp_fail, other))
        assert violation.clause == KH_ZAG
        assert violation.agent == '1'

    def test_duplicated_state(self, emp_fail):
        other = with_duplicated_x(emp_fail)
        z = valuation_relation(emp_fail, other)
        assert ('x', 'x2') in z
        assert verify_bisim(emp_fail, other, z) is None


class TestEquivalence:
    """Deciding equivalence and bisimilarity"""

    def test_reflexive(self, emp_fail):
        assert equivalent(emp_fail, 'w', emp_fail, 'w')

    def test_atoms_differ(self, emp_fail):
        assert not equivalent(emp_fail, 'w', emp_fail, 'u')
        ok, violation = bisimilar(emp_fail, 'w', emp_fail, 'u')
        assert not ok and violation.clause == ATOM

    def test_duplicated_state_is_bisimilar(self, emp_fail):
        other = with_duplicated_x(emp_fail)
        ok, z = bisimilar(emp_fail, 'w', other, 'w')
        assert ok
        assert verify_bisim(emp_fail, other, z) is None

    def test_missing_valuation(self, emp_fail):
        base = emp_fail_lts()
        smaller = Lts.build(['w', 'u'], {'w': ['p'], 'u': ['q']}, {'a': [('w', 'u')]}, actions=base.actions, atoms=base.atoms)
        other = Ults(smaller, ('1',), {'1': (PlanSet.of([['a']]),)})
        fact = equivalence_fact(emp_fail, 'w', other, 'w')
        assert fact.clause == A_ZIG

    def test_kh_fact_differs(self, emp_fail):
        other = with_split_plan_set(emp_fail)
        ok, violation = bisimilar(emp_fail, 'w', other, 'w')
        assert not ok
        assert violation.clause == KH_ZAG
        assert violation.definable == ('w',)


class TestDistinguishingFormula:
    """Searching formulas true at exactly one point"""

    def test_atoms_first(self, emp_fail):
        assert find_distinguishing_formula(emp_fail, 'w', emp_fail, 'u', 0) == Atom('p')

    def test_equivalent_points(self, emp_fail):
        other = with_duplicated_x(emp_fail)
        assert find_distinguishing_formula(emp_fail, 'w', other, 'w', 2) is None

    def test_kh_needed(self, emp_fail):
        other = with_split_plan_set(emp_fail)
        assert find_distinguishing_formula(emp_fail, 'w', other, 'w', 0) is None
        f = find_distinguishing_formula(emp_fail, 'w', other, 'w', 1)
        assert isinstance(f, Kh)
        assert check_ults(emp_fail, 'w', f) != check_ults(other, 'w', f)

    def test_negative_depth(self, emp_fail):
        with pytest.raises(ValueError):
            find_distinguishing_formula(emp_fail, 'w', emp_fail, 'w', -1)


def _pointed_pair(seed):
    rng = random.Random(seed)
    m = random_ults(rng, 4, atoms=('p', 'q'), max_plansets=2, max_plan_len=2)
    if rng.random() < 0.5:
        other = m
    else:
        other = random_ults(rng, 4, atoms=('p', 'q'), max_plansets=2, max_plan_len=2)
    w = rng.choice(m.states)
    same = [s for s, v in zip(other.states, other.base.val) if v == m.base.val[m.index(w)]]
    w2 = rng.choice(same) if same else rng.choice(other.states)
    return m, w, other, w2


class TestTheorems:
    """Bisimilarity and equivalence coincide on finite models"""

    @hsettings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_bisimilar_iff_equivalent(self, seed):
        m, w, other, w2 = _pointed_pair(seed)
        ok, result = bisimilar(m, w, other, w2)
        assert ok == equivalent(m, w, other, w2)
        assert equivalent(m, w, other, w2) == equivalent(other, w2, m, w)
        if ok:
            assert verify_bisim(m, other, result) is None
            assert find_distinguishing_formula(m, w, other, w2, 2) is None
        else:
            f = find_distinguishing_formula(m, w, other, w2, 2)
            assert f is not None
            assert check_ults(m, w, f) != check_ults(other, w2, f)

    @hsettings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_distinguishing_formula_is_sound(self, seed):
        m, w, other, w2 = _pointed_pair(seed)
        f = find_distinguishing_formula(m, w, other, w2, 2)
        if f is not None:
            assert check_ults(m, w, f) != check_ults(other, w2, f)
            assert not equivalent(m, w, other, w2)

    @hsettings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_differing_agent_sets(self, seed):
        rng = random.Random(seed)
        m = random_ults(rng, 3, agents=('1',), atoms=('p', 'q'), max_plansets=2, max_plan_len=2)
        other = random_ults(rng, 3, agents=('1', '2'), atoms=('p', 'q'), max_plansets=2, max_plan_len=2)
        w, w2 = rng.choice(m.states), rng.choice(other.states)
        ok, _ = bisimilar(m, w, other, w2)
        assert ok == equivalent(m, w, other, w2)
        f = find_distinguishing_formula(m, w, other, w2, 2)
        assert (f is None) == ok
        if f is not None:
            assert separates(m, w, other, w2, f)

    def test_absent_agent_is_distinguished(self, emp_fail):
        other = Ults(emp_fail.base, ('1', '2'), {'1': emp_fail.plansets['1'], '2': (PlanSet.of([['a']]),)})
        assert not equivalent(emp_fail, 'w', other, 'w')
        f = find_distinguishing_formula(emp_fail, 'w', other, 'w', 2)
        assert f is not None
        assert separates(emp_fail, 'w', other, 'w', f)
