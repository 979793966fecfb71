"""
Unit tests for formula parsing, printing and structure
"""
import pytest
from hypothesis import given, settings, strategies as st

from khow.exceptions import EmptyAgentSetError, FormulaSyntaxError, SigmaNotClosedError, UnknownAgentError
from khow.syntax import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Bot,
    Existential,
    Implies,
    Kh,
    Neg,
    Or,
    Top,
    Universal,
    agents_of,
    atoms,
    closure_of,
    desugar,
    format_formula,
    is_core,
    is_subformula_closed,
    kh_depth,
    kh_pairs,
    parse,
    require_subformula_closed,
    size,
    subformula_closure,
    substitute,
)

p, q, r = Atom('p'), Atom('q'), Atom('r')


def surface_formulas():
    leaves = st.one_of(
        st.sampled_from([p, q, r, Atom('s_1')]),
        st.just(Top()),
        st.just(Bot()),
    )

    def extend(children):
        return st.one_of(
            st.builds(Neg, children),
            st.builds(Universal, children),
            st.builds(Existential, children),
            st.builds(Or, children, children),
            st.builds(And, children, children),
            st.builds(Implies, children, children),
            st.builds(Kh, st.sampled_from(['1', '2', 'bob']), children, children),
        )

    return st.recursive(leaves, extend, max_leaves=8)


class TestParse:
    """Grammar and precedence"""

    def test_atom(self):
        assert parse('p') == p

    def test_precedence(self):
        assert parse('~p | q -> r') == Implies(Or(Neg(p), q), r)

    def test_kh(self):
        assert parse('Kh[1](p, q & r)') == Kh('1', p, And(q, r))

    def test_implication_is_right_associative(self):
        assert parse('p -> q -> r') == Implies(p, Implies(q, r))

    def test_and_binds_tighter_than_or(self):
        assert parse('p | q & r') == Or(p, And(q, r))

    def test_modalities_and_constants(self):
        assert parse('A ~p & E true') == And(Universal(Neg(p)), Existential(Top()))
        assert parse('false') == Bot()

    def test_agent_tokens_need_not_be_numbers(self):
        assert parse('Kh[alice](p, q)').agent == 'alice'

    def test_unknown_agent(self):
        with pytest.raises(UnknownAgentError):
            parse('Kh[2](p, q)', agents=['1'])

    def test_syntax_error_reports_byte_offset(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse('p & ')
        assert info.value.offset == 4

    def test_unexpected_character(self):
        with pytest.raises(FormulaSyntaxError) as info:
            parse('p $ q')
        assert info.value.offset == 2

    def test_empty_text(self):
        with pytest.raises(FormulaSyntaxError):
            parse('   ')

    def test_unclosed_kh(self):
        with pytest.raises(FormulaSyntaxError):
            parse('Kh[1](p, q')


class TestPrint:
    """Printing and round trips"""

    def test_examples(self):
        assert format_formula(Kh('1', p, q)) == 'Kh[1](p, q)'
        assert format_formula(Neg(p)) == '~p'
        assert format_formula(Or(p, Or(q, r))) == 'p | (q | r)'

    def test_str_uses_printer(self):
        assert str(Implies(p, Implies(q, r))) == 'p -> q -> r'
        assert str(Implies(Implies(p, q), r)) == '(p -> q) -> r'

    @settings(max_examples=200, deadline=None)
    @given(surface_formulas())
    def test_round_trip(self, f):
        assert parse(format_formula(f)) == f


class TestDesugar:
    """Rewriting surface sugar into the core"""

    def test_universal_single_agent(self):
        assert desugar(Universal(p), ['1']) == Kh('1', Neg(p), BOTTOM)

    def test_universal_is_disjunction_over_agents(self):
        assert desugar(Universal(p), ['2', '1']) == Or(Kh('1', Neg(p), BOTTOM), Kh('2', Neg(p), BOTTOM))

    def test_existential(self):
        assert desugar(Existential(p), ['1']) == Neg(Kh('1', Neg(Neg(p)), BOTTOM))

    def test_top(self):
        assert desugar(Top(), ['1']) == TOP
        assert atoms(TOP) == {'p0'}

    def test_empty_agent_set(self):
        with pytest.raises(EmptyAgentSetError):
            desugar(Universal(p), [])

    @settings(max_examples=100, deadline=None)
    @given(surface_formulas())
    def test_desugar_is_core(self, f):
        core = desugar(f, ['1', '2', 'bob'])
        assert is_core(core)
        assert agents_of(core) <= {"1", "2", "bob"}


class TestStructure:
    """Closures, Kh pairs and substitution"""

    def test_closure_examples(self):
        assert subformula_closure(p) == (p,)
        assert set(subformula_closure(Kh('1', p, q))) == {p, q, Kh('1', p, q)}
        f = Neg(Or(p, q))
        assert set(subformula_closure(f)) == {p, q, Or(p, q), f}

    def test_closure_is_post_order(self):
        f = Neg(Or(p, q))
        order = subformula_closure(f)
        assert order.index(Or(p, q)) < order.index(f)
        assert order[-1] == f

    def test_kh_pairs(self):
        f = desugar(And(Kh('1', p, q), Neg(Kh('2', q, r))), ['1', '2'])
        assert set(kh_pairs(f)) == {('1', p, q), ('2', q, r)}
        assert kh_pairs(p) == ()
        nested = Kh('1', p, Kh('1', q, r))
        assert set(kh_pairs(nested)) == {('1', p, Kh('1', q, r)), ('1', q, r)}

    def test_closed_sets(self):
        f = Kh('1', p, Neg(q))
        assert is_subformula_closed(closure_of([f, r]))
        assert not is_subformula_closed([f, p])
        with pytest.raises(SigmaNotClosedError):
            require_subformula_closed([f])

    def test_measures(self):
        f = parse('Kh[1](p, Kh[2](q, r)) | ~s')
        assert kh_depth(f) == 2
        assert agents_of(f) == {'1', '2'}
        assert atoms(f) == {'p', 'q', 'r', 's'}

    def test_substitute_atoms_and_agents(self):
        template = parse('Kh[i](PSI, PHI) -> A PHI')
        result = substitute(template, {'PSI': p, 'PHI': Or(q, r)}, {'i': '7'})
        assert result == Implies(Kh('7', p, Or(q, r)), Universal(Or(q, r)))

    @settings(max_examples=100, deadline=None)
    @given(surface_formulas())
    def test_closure_is_closed_and_small(self, f):
        core = desugar(f, ['1'])
        closure = subformula_closure(core)
        assert is_subformula_closed(closure)
        assert len(closure) <= size(core)
        assert closure_of([core]) == closure
