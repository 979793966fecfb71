"""
Unit tests for SE-composition, class tests and the LTS/ULTS translations
"""
import random

import pytest
from hypothesis import given, settings, strategies as st

from khow.axioms import soundness_harness
from khow.checker import check_lts, check_ults
from khow.exceptions import PreconditionError
from khow.fixtures import emp_fail_lts
from khow.generators import random_formula, random_lts, random_ults
from khow.models import EPSILON, Lts, PlanSet, Ults, stexec_set
from khow.syntax import parse
from khow.transform import (
    classify,
    is_active,
    is_nu_style,
    is_se_compositional,
    lts_to_ults_ac,
    lts_to_ults_nu,
    se_compose,
    se_compose_chain,
    ults_to_lts,
)

A, B, AB_C = PlanSet.of([['a']]), PlanSet.of([['b']]), PlanSet.of([['a', 'b'], ['c']])


def epsilon_only():
    base = Lts.build(['s', 't'], {'s': ['p']}, {'a': [('s', 't')]})
    return Ults(base, ('1',), {'1': (PlanSet.of([EPSILON]),)})


class TestSeCompose:
    """Guarded concatenation of plan sets"""

    def test_composable(self, emp_fail):
        assert se_compose(emp_fail, A, B) == PlanSet.of([['a', 'b']])

    def test_lands_outside(self, emp_fail):
        assert se_compose(emp_fail, B, A) is None

    def test_nowhere_executable(self, emp_fail):
        dead = PlanSet.of([['b', 'a']])
        assert se_compose(emp_fail, dead, A) is None

    def test_chain(self, emp_fail):
        assert se_compose_chain(emp_fail, [A]) == A
        chained = se_compose_chain(emp_fail, [A, B])
        assert chained == PlanSet.of([['a', 'b']])
        assert emp_fail.base.names(stexec_set(emp_fail.base, chained)) == ('w',)
        assert se_compose_chain(emp_fail, [A, B, A]) is None

    def test_empty_chain(self, emp_fail):
        with pytest.raises(ValueError):
            se_compose_chain(emp_fail, [])

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_chain_keeps_first_se_set(self, seed):
        rng = random.Random(seed)
        m = random_ults(rng, 4, max_plan_len=2)
        collection = m.plansets['1']
        chain = [rng.choice(collection) for _ in range(rng.randint(1, 4))]
        result = se_compose_chain(m, chain)
        if result is not None:
            assert stexec_set(m.base, result) == stexec_set(m.base, chain[0])


class TestClassTests:
    """Active, SE-compositional and nu-style models"""

    def test_emp_fail_is_neither(self, emp_fail):
        assert is_active(emp_fail) == (False, None)
        ok, counterexample = is_se_compositional(emp_fail)
        assert not ok
        assert counterexample == (A, B)

    def test_epsilon_only(self):
        m = epsilon_only()
        ok, witness = is_active(m)
        assert ok and witness == PlanSet.of([EPSILON])
        assert is_se_compositional(m) == (True, None)

    def test_ac_translation_is_in_class(self):
        report = classify(lts_to_ults_ac(emp_fail_lts()))
        assert report.is_active and report.is_se_compositional
        assert report.counterexample is None

    def test_nu_translation_is_nu_style(self, emp_fail):
        assert is_nu_style(lts_to_ults_nu(emp_fail_lts()))
        assert not is_nu_style(emp_fail)

    def test_multi_agent_rejected(self, emp_fail):
        two = Ults(emp_fail.base, ('1', '2'), {'1': emp_fail.plansets['1'], '2': (A,)})
        with pytest.raises(PreconditionError) as info:
            classify(two)
        assert info.value.test == 'single-agent'


class TestTranslations:
    """Semantics-preserving translations"""

    def test_nu_has_one_plan_set_per_behavior(self):
        m = lts_to_ults_nu(emp_fail_lts())
        assert len(m.plansets['1']) == 6
        assert check_ults(m, 'w', parse('Kh[1](p, r)'))

    def test_nu_of_relation_free_lts(self):
        m = lts_to_ults_nu(Lts.build(['s'], {}, {}))
        assert m.plansets['1'] == (PlanSet.of([EPSILON]),)

    def test_ac_has_one_action_per_live_behavior(self):
        m = lts_to_ults_ac(emp_fail_lts())
        assert len(m.base.actions) == 5
        assert check_ults(m, 'w', parse('Kh[1](p, r)'))

    def test_ults_to_lts_rejects_emp_fail(self, emp_fail):
        with pytest.raises(PreconditionError) as info:
            ults_to_lts(emp_fail)
        assert info.value.test == 'is_active'

    def test_ults_to_lts_epsilon_only(self):
        lts = ults_to_lts(epsilon_only())
        assert lts.actions == ('pi0',)
        assert lts.rel['pi0'] == (1, 2)

    def test_behavior_equal_plans_are_interchangeable(self):
        m = lts_to_ults_nu(emp_fail_lts())
        dead = PlanSet.of([['a', 'a']])
        assert dead in m.plansets['1']
        swapped = m.with_plansets({'1': tuple(
            PlanSet.of([['c', 'c']]) if ps == dead else ps for ps in m.plansets['1']
        )})
        for text in ('Kh[1](p, r)', 'Kh[1](p, false)', 'Kh[1](q | r, ~p)', 'A(p -> ~q)'):
            f = parse(text)
            assert check_ults(m, 'w', f) == check_ults(swapped, 'w', f)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=0, max_value=10 ** 6))
    def test_translations_preserve_truth(self, seed):
        rng = random.Random(seed)
        lts = random_lts(rng, 4)
        nu, ac = lts_to_ults_nu(lts), lts_to_ults_ac(lts)
        back = ults_to_lts(ac)
        for _ in range(5):
            f = random_formula(rng, max_kh_depth=2)
            for state in lts.states:
                expected = check_lts(lts, state, f)
                assert check_ults(nu, state, f) == expected
                assert check_ults(ac, state, f) == expected
                assert check_lts(back, state, f) == expected

    @pytest.mark.parametrize('source', ['ults-nu', 'ults-ac'])
    def test_emp_and_compkh_hold_on_translations(self, source):
        report = soundness_harness(['EMP', 'COMPKh'], trials=150, max_states=4, source=source, seed=3)
        assert report.clean
