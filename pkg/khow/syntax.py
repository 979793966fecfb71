"""
Formula syntax for the multi-agent knowing-how language.

The core AST has exactly four constructors (Atom, Neg, Or, Kh). Surface
formulas may also use And, Implies, Top, Bot and the universal/existential
modalities; `desugar` rewrites them into the core given an agent set.

Concrete grammar, loosest binding first::

    formula := disj ('->' formula)?             right-associative
    disj    := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := ('~' | 'A' | 'E') unary | primary
    primary := '(' formula ')' | 'true' | 'false'
             | 'Kh' '[' ident ']' '(' formula ',' formula ')' | ident
"""
import re
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from .exceptions import EmptyAgentSetError, FormulaSyntaxError, SigmaNotClosedError, UnknownAgentError

RESERVED_ATOM = 'p0'
KEYWORDS = frozenset({'Kh', 'A', 'E', 'true', 'false'})


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Neg:
    sub: 'SurfaceFormula'

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Or:
    left: 'SurfaceFormula'
    right: 'SurfaceFormula'

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Kh:
    agent: str
    cond: 'SurfaceFormula'
    goal: 'SurfaceFormula'

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class And:
    left: 'SurfaceFormula'
    right: 'SurfaceFormula'

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Implies:
    left: 'SurfaceFormula'
    right: 'SurfaceFormula'

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Bot:
    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Universal:
    """A φ: φ holds at every state."""
    sub: 'SurfaceFormula'

    def __str__(self) -> str:
        return format_formula(self)


@dataclass(frozen=True)
class Existential:
    """E φ: φ holds at some state."""
    sub: 'SurfaceFormula'

    def __str__(self) -> str:
        return format_formula(self)


Formula = Union[Atom, Neg, Or, Kh]
SurfaceFormula = Union[Atom, Neg, Or, Kh, And, Implies, Top, Bot, Universal, Existential]
KhTriple = Tuple[str, Formula, Formula]

_CORE_TYPES = (Atom, Neg, Or, Kh)

# ⊥ := p0 ∧ ¬p0, spelled with core connectives only
BOTTOM: Formula = Neg(Or(Neg(Atom(RESERVED_ATOM)), Neg(Neg(Atom(RESERVED_ATOM)))))
TOP: Formula = Neg(BOTTOM)


# ============ PARSING ============

_TOKEN_RE = re.compile(r'\s*(?:(?P<arrow>->)|(?P<punct>[()\[\],~&|])|(?P<ident>[A-Za-z0-9_]+))')


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    offset: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode('utf-8'))


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    index = 0
    while index < len(text):
        if text[index:].strip() == '':
            break
        match = _TOKEN_RE.match(text, index)
        if match is None or match.end() == index:
            start = index + (len(text[index:]) - len(text[index:].lstrip()))
            raise FormulaSyntaxError(f"Unexpected character {text[start]!r}", _byte_offset(text, start))
        kind = match.lastgroup
        start = match.start(kind)
        tokens.append(_Token(kind, match.group(kind), _byte_offset(text, start)))
        index = match.end()
    tokens.append(_Token('end', '', _byte_offset(text, len(text))))
    return tokens


class _Parser:
    def __init__(self, text: str, agents: Optional[Iterable[str]]):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.agents = None if agents is None else frozenset(agents)

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def _accept(self, text: str) -> bool:
        if self.current.kind != 'ident' and self.current.text == text:
            self.pos += 1
            return True
        if self.current.kind == 'ident' and self.current.text == text and text in KEYWORDS:
            self.pos += 1
            return True
        return False

    def _expect(self, text: str) -> None:
        if not self._accept(text):
            found = self.current.text or 'end of input'
            raise FormulaSyntaxError(f"Expected {text!r} but found {found!r}", self.current.offset)

    def parse(self) -> SurfaceFormula:
        result = self.formula()
        if self.current.kind != 'end':
            raise FormulaSyntaxError(f"Unexpected token {self.current.text!r}", self.current.offset)
        return result

    def formula(self) -> SurfaceFormula:
        left = self.disjunction()
        if self._accept('->'):
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> SurfaceFormula:
        result = self.conjunction()
        while self._accept('|'):
            result = Or(result, self.conjunction())
        return result

    def conjunction(self) -> SurfaceFormula:
        result = self.unary()
        while self._accept('&'):
            result = And(result, self.unary())
        return result

    def unary(self) -> SurfaceFormula:
        if self._accept('~'):
            return Neg(self.unary())
        if self._accept('A'):
            return Universal(self.unary())
        if self._accept('E'):
            return Existential(self.unary())
        return self.primary()

    def primary(self) -> SurfaceFormula:
        token = self.current
        if self._accept('('):
            inner = self.formula()
            self._expect(')')
            return inner
        if self._accept('true'):
            return Top()
        if self._accept('false'):
            return Bot()
        if self._accept('Kh'):
            self._expect('[')
            agent_token = self.current
            if agent_token.kind != 'ident':
                raise FormulaSyntaxError('Expected agent id', agent_token.offset)
            self.pos += 1
            if self.agents is not None and agent_token.text not in self.agents:
                raise UnknownAgentError(agent_token.text)
            self._expect(']')
            self._expect('(')
            cond = self.formula()
            self._expect(',')
            goal = self.formula()
            self._expect(')')
            return Kh(agent_token.text, cond, goal)
        if token.kind == 'ident' and token.text not in KEYWORDS:
            self.pos += 1
            return Atom(token.text)
        found = token.text or 'end of input'
        raise FormulaSyntaxError(f"Unexpected token {found!r}", token.offset)


def parse(text: str, agents: Optional[Iterable[str]] = None) -> SurfaceFormula:
    """Parse formula text. When `agents` is given, Kh agent ids must belong to it."""
    if not text or not text.strip():
        raise FormulaSyntaxError('Empty formula', 0)
    return _Parser(text, agents).parse()


def compile_formula(text: str, agents: Iterable[str]) -> Formula:
    """Parse and desugar in one step."""
    agents = tuple(agents)
    return desugar(parse(text, agents), agents)


# ============ PRINTING ============

_IMPLIES, _OR, _AND, _UNARY, _ATOMIC = 1, 2, 3, 4, 5


def _render(f: SurfaceFormula) -> Tuple[str, int]:
    if isinstance(f, Atom):
        return f.name, _ATOMIC
    if isinstance(f, Top):
        return 'true', _ATOMIC
    if isinstance(f, Bot):
        return 'false', _ATOMIC
    if isinstance(f, Kh):
        return f"Kh[{f.agent}]({_wrap(f.cond, 0)}, {_wrap(f.goal, 0)})", _ATOMIC
    if isinstance(f, Neg):
        return '~' + _wrap(f.sub, _UNARY), _UNARY
    if isinstance(f, (Universal, Existential)):
        keyword = 'A' if isinstance(f, Universal) else 'E'
        inner = _wrap(f.sub, _UNARY)
        return keyword + (inner if inner.startswith('(') else ' ' + inner), _UNARY
    if isinstance(f, And):
        return f"{_wrap(f.left, _AND)} & {_wrap(f.right, _AND + 1)}", _AND
    if isinstance(f, Or):
        return f"{_wrap(f.left, _OR)} | {_wrap(f.right, _OR + 1)}", _OR
    if isinstance(f, Implies):
        return f"{_wrap(f.left, _IMPLIES + 1)} -> {_wrap(f.right, _IMPLIES)}", _IMPLIES
    raise TypeError(f"Not a formula: {f!r}")


def _wrap(f: SurfaceFormula, min_prec: int) -> str:
    text, prec = _render(f)
    return f"({text})" if prec < min_prec else text


def format_formula(f: SurfaceFormula) -> str:
    """Print a formula so that `parse(format_formula(f)) == f`."""
    return _wrap(f, 0)


# ============ DESUGARING ============

def _conj(a: Formula, b: Formula) -> Formula:
    return Neg(Or(Neg(a), Neg(b)))


def universal(f: Formula, agents: Sequence[str]) -> Formula:
    """A f := Kh_i1(¬f, ⊥) ∨ ... ∨ Kh_in(¬f, ⊥) over the agent set."""
    disjuncts = [Kh(agent, Neg(f), BOTTOM) for agent in agents]
    result = disjuncts[0]
    for disjunct in disjuncts[1:]:
        result = Or(result, disjunct)
    return result


def _normalize_agents(agents: Iterable[str]) -> Tuple[str, ...]:
    normalized = tuple(sorted(set(agents)))
    if not normalized:
        raise EmptyAgentSetError()
    return normalized


def desugar(f: SurfaceFormula, agents: Iterable[str]) -> Formula:
    """Rewrite surface sugar into the four core constructors."""
    ordered = _normalize_agents(agents)

    def go(g: SurfaceFormula) -> Formula:
        if isinstance(g, Atom):
            return g
        if isinstance(g, Neg):
            return Neg(go(g.sub))
        if isinstance(g, Or):
            return Or(go(g.left), go(g.right))
        if isinstance(g, Kh):
            return Kh(g.agent, go(g.cond), go(g.goal))
        if isinstance(g, And):
            return _conj(go(g.left), go(g.right))
        if isinstance(g, Implies):
            return Or(Neg(go(g.left)), go(g.right))
        if isinstance(g, Top):
            return TOP
        if isinstance(g, Bot):
            return BOTTOM
        if isinstance(g, Universal):
            return universal(go(g.sub), ordered)
        if isinstance(g, Existential):
            return Neg(universal(Neg(go(g.sub)), ordered))
        raise TypeError(f"Not a formula: {g!r}")

    return go(f)


def is_core(f: SurfaceFormula) -> bool:
    return isinstance(f, _CORE_TYPES) and all(is_core(child) for child in children(f))


# ============ STRUCTURE ============

def children(f: SurfaceFormula) -> Tuple[SurfaceFormula, ...]:
    if isinstance(f, (Neg, Universal, Existential)):
        return (f.sub,)
    if isinstance(f, (Or, And, Implies)):
        return (f.left, f.right)
    if isinstance(f, Kh):
        return (f.cond, f.goal)
    return ()


def subformula_closure(f: Formula) -> Tuple[Formula, ...]:
    """Subformulas of `f` in post-order, each listed once."""
    seen: Set[Formula] = set()
    ordered: List[Formula] = []

    def visit(g: Formula) -> None:
        if g in seen:
            return
        for child in children(g):
            visit(child)
        seen.add(g)
        ordered.append(g)

    visit(f)
    return tuple(ordered)


def closure_of(formulas: Iterable[Formula]) -> Tuple[Formula, ...]:
    """Smallest subformula-closed set containing every given formula."""
    seen: Set[Formula] = set()
    ordered: List[Formula] = []
    for f in formulas:
        for g in subformula_closure(f):
            if g not in seen:
                seen.add(g)
                ordered.append(g)
    return tuple(ordered)


def first_missing_subformula(formulas: Iterable[Formula]) -> Optional[Formula]:
    members = set(formulas)
    for f in members:
        for child in children(f):
            if child not in members:
                return child
    return None


def is_subformula_closed(formulas: Iterable[Formula]) -> bool:
    return first_missing_subformula(formulas) is None


def require_subformula_closed(formulas: Iterable[Formula]) -> Tuple[Formula, ...]:
    members = tuple(dict.fromkeys(formulas))
    missing = first_missing_subformula(members)
    if missing is not None:
        raise SigmaNotClosedError(format_formula(missing))
    return members


def kh_pairs(f: Formula) -> Tuple[KhTriple, ...]:
    """Argument triples (agent, cond, goal) of every Kh subformula, deduplicated."""
    return tuple((g.agent, g.cond, g.goal) for g in subformula_closure(f) if isinstance(g, Kh))


def atoms(f: SurfaceFormula) -> Set[str]:
    if isinstance(f, Atom):
        return {f.name}
    result: Set[str] = set()
    for child in children(f):
        result |= atoms(child)
    return result


def agents_of(f: SurfaceFormula) -> Set[str]:
    result: Set[str] = {f.agent} if isinstance(f, Kh) else set()
    for child in children(f):
        result |= agents_of(child)
    return result


def kh_depth(f: SurfaceFormula) -> int:
    nested = max((kh_depth(child) for child in children(f)), default=0)
    return nested + 1 if isinstance(f, Kh) else nested


def size(f: SurfaceFormula) -> int:
    return 1 + sum(size(child) for child in children(f))


def substitute(
    f: SurfaceFormula,
    atom_map: Mapping[str, SurfaceFormula],
    agent_map: Optional[Mapping[str, str]] = None,
) -> SurfaceFormula:
    """Replace atoms (and optionally agent ids) throughout a formula."""
    agent_map = agent_map or {}

    def go(g: SurfaceFormula) -> SurfaceFormula:
        if isinstance(g, Atom):
            return atom_map.get(g.name, g)
        if isinstance(g, Kh):
            return Kh(agent_map.get(g.agent, g.agent), go(g.cond), go(g.goal))
        if isinstance(g, (Neg, Universal, Existential)):
            return type(g)(go(g.sub))
        if isinstance(g, (Or, And, Implies)):
            return type(g)(go(g.left), go(g.right))
        return g

    return go(f)


def conjunction(formulas: Sequence[SurfaceFormula]) -> SurfaceFormula:
    if not formulas:
        return Top()
    result = formulas[0]
    for f in formulas[1:]:
        result = And(result, f)
    return result


def disjunction(formulas: Sequence[SurfaceFormula]) -> SurfaceFormula:
    if not formulas:
        return Bot()
    result = formulas[0]
    for f in formulas[1:]:
        result = Or(result, f)
    return result


def describe_valuation(valuation: Iterable[str], over: Sequence[str]) -> SurfaceFormula:
    """Characteristic conjunction of a valuation over the listed atoms."""
    true_atoms = set(valuation)
    literals: List[SurfaceFormula] = [
        Atom(p) if p in true_atoms else Neg(Atom(p)) for p in over
    ]
    return conjunction(literals)


