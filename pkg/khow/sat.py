"""
Satisfiability and validity by bounded search over selection-shaped models.

A candidate is fixed by (1) a truth value for every Kh subformula and (2)
a set T of valuations over the formula's atoms, one state per valuation.
Each Kh subformula ⟨ψ,φ⟩ owns an action a_k with the canonical relation
⟦ψ⟧ × ⟦φ⟧, and every agent also holds the inert plan set {d}. Under a
fixed Kh assignment every subformula denotes a fixed set of valuations, so
whether the assignment is realized on T reduces to hit/avoid constraints
on T, solved by backtracking with three-valued pruning.

The canonical relation is the least one witnessing its own pair, so any
model of the formula yields a satisfying T among its realized valuations.
A minimal T needs one valuation per hit constraint, which stays within
the bound N(f).
"""
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .checker import Labeling
from .config import settings
from .exceptions import EmptyAgentSetError, UnknownAgentError
from .logging_config import get_logger
from .models import Lts, PlanSet, Ults, bits
from .syntax import (
    RESERVED_ATOM,
    Atom,
    Formula,
    Kh,
    KhTriple,
    Neg,
    Or,
    SurfaceFormula,
    agents_of,
    atoms,
    desugar,
    format_formula,
    is_core,
    kh_pairs,
    subformula_closure,
)

logger = get_logger(__name__)

DUMMY_ACTION = 'd'

Assignment = Tuple[bool, ...]


# ============ CONSTRAINTS ============
# ('hit', X) | ('avoid', X) | ('and', parts) | ('or', parts), X a mask over valuations

Constraint = tuple


def _kleene(c: Constraint, inside: int, outside: int) -> Optional[bool]:
    kind = c[0]
    if kind in ('hit', 'avoid'):
        target = c[1]
        if target & inside:
            hit = True
        elif target & ~outside == 0:
            hit = False
        else:
            return None
        return hit if kind == 'hit' else not hit
    unknown = False
    for part in c[1]:
        value = _kleene(part, inside, outside)
        if value is None:
            unknown = True
        elif value == (kind == 'or'):
            return value
    return None if unknown else kind == 'and'


def _search(constraint: Constraint, size: int, bound: int) -> Optional[int]:
    """Smallest-first subset of range(size), at most `bound` members, meeting `constraint`."""

    def go(v: int, inside: int, outside: int, count: int) -> Optional[int]:
        verdict = _kleene(constraint, inside, outside)
        if verdict is not None:
            return inside if verdict else None
        if v == size:
            return None
        found = go(v + 1, inside, outside | 1 << v, count)
        if found is None and count < bound:
            found = go(v + 1, inside | 1 << v, outside, count + 1)
        return found

    chosen = go(0, 0, 0, 0)
    if chosen is None:
        return None
    everything = (1 << size) - 1
    for v in list(bits(chosen)):
        smaller = chosen & ~(1 << v)
        if _kleene(constraint, smaller, everything & ~smaller):
            chosen = smaller
    return chosen


# ============ SHAPE ============

@dataclass(frozen=True)
class SearchShape:
    formula: Formula
    agents: Tuple[str, ...]
    atoms: Tuple[str, ...]
    pairs: Tuple[Tuple[Formula, Formula], ...]
    triples: Tuple[KhTriple, ...]
    bound: int

    @classmethod
    def of(cls, f: Formula, agents: Sequence[str]) -> 'SearchShape':
        triples = kh_pairs(f)
        pairs = tuple(dict.fromkeys((cond, goal) for _, cond, goal in triples))
        return cls(
            formula=f,
            agents=tuple(agents),
            atoms=tuple(sorted(atoms(f) - {RESERVED_ATOM})),
            pairs=pairs,
            triples=triples,
            bound=sat_bound(f),
        )

    @property
    def universe(self) -> int:
        return 1 << len(self.atoms)

    def action_name(self, pair: Tuple[Formula, Formula]) -> str:
        return f'a{self.pairs.index(pair)}'

    def extensions(self, assignment: Assignment) -> Dict[Formula, int]:
        """Valuation-level extension of every subformula under a Kh assignment."""
        everything = (1 << self.universe) - 1
        truth = dict(zip(self.triples, assignment))
        masks: Dict[Formula, int] = {}
        for g in subformula_closure(self.formula):
            if isinstance(g, Atom):
                if g.name == RESERVED_ATOM:
                    masks[g] = 0
                else:
                    b = self.atoms.index(g.name)
                    masks[g] = sum(1 << v for v in range(self.universe) if v >> b & 1)
            elif isinstance(g, Neg):
                masks[g] = everything & ~masks[g.sub]
            elif isinstance(g, Or):
                masks[g] = masks[g.left] | masks[g.right]
            elif isinstance(g, Kh):
                masks[g] = everything if truth[(g.agent, g.cond, g.goal)] else 0
        return masks

    def constraint(self, assignment: Assignment) -> Constraint:
        masks = self.extensions(assignment)
        truth = dict(zip(self.triples, assignment))
        parts: List[Constraint] = [('hit', masks[self.formula])]
        for agent, cond, goal in self.triples:
            c, g = masks[cond], masks[goal]
            offered = [(masks[c2], masks[g2]) for a2, c2, g2 in self.triples if a2 == agent and truth[(a2, c2, g2)]]
            if truth[(agent, cond, goal)]:
                parts.append(('or', [('avoid', c)] + [
                    ('and', [('avoid', c & ~c2), ('hit', g2), ('avoid', g2 & ~g)]) for c2, g2 in offered
                ]))
            else:
                parts.append(('and', [('hit', c)] + [
                    ('or', [('hit', c & ~c2), ('avoid', g2), ('hit', g2 & ~g)]) for c2, g2 in offered
                ]))
        return ('and', parts)

    def build_model(self, types: Sequence[int], assignment: Assignment) -> Ults:
        """Materialize the candidate with one state per valuation in `types`."""
        masks = self.extensions(assignment)
        types = sorted(types)
        states = tuple(f's{k}' for k in range(len(types)))
        val = tuple(frozenset(p for b, p in enumerate(self.atoms) if t >> b & 1) for t in types)

        def state_mask(x: int) -> int:
            return sum(1 << k for k, t in enumerate(types) if x >> t & 1)

        actions = tuple(self.action_name(pair) for pair in self.pairs) + (DUMMY_ACTION,)
        rel = {}
        for pair in self.pairs:
            cond, goal = state_mask(masks[pair[0]]), state_mask(masks[pair[1]])
            rel[self.action_name(pair)] = tuple(goal if cond >> k & 1 else 0 for k in range(len(types)))
        rel[DUMMY_ACTION] = (0,) * len(types)
        base = Lts(states, self.atoms, actions, rel, val)

        truth = dict(zip(self.triples, assignment))
        plansets = {}
        for agent in self.agents:
            collection = [PlanSet(((DUMMY_ACTION,),))]
            for a, cond, goal in self.triples:
                if a == agent and truth[(a, cond, goal)]:
                    planset = PlanSet(((self.action_name((cond, goal)),),))
                    if planset not in collection:
                        collection.append(planset)
            plansets[agent] = tuple(collection)
        return Ults(base, self.agents, plansets)


@dataclass(frozen=True)
class SatOutcome:
    satisfiable: bool
    bound: int
    model: Optional[Ults] = None
    point: Optional[str] = None
    # Kh subformula text -> truth value in the witness model
    kh_values: Mapping[str, bool] = field(default_factory=dict)


# ============ OPERATIONS ============

def _prepare(f: SurfaceFormula, agents: Optional[Iterable[str]]) -> Tuple[Formula, Tuple[str, ...]]:
    mentioned = agents_of(f)
    if agents is None:
        chosen = tuple(sorted(mentioned)) or (settings.DEFAULT_AGENT,)
    else:
        chosen = tuple(sorted(set(agents)))
        if not chosen:
            raise EmptyAgentSetError()
        unknown = mentioned - set(chosen)
        if unknown:
            raise UnknownAgentError(sorted(unknown)[0])
    core = f if is_core(f) else desugar(f, chosen)
    return core, chosen


def sat_bound(f: SurfaceFormula) -> int:
    core = f if is_core(f) else _prepare(f, None)[0]
    closure = subformula_closure(core)
    pairs = {(cond, goal) for _, cond, goal in kh_pairs(core)}
    return 1 + 2 * len(closure) * (len(pairs) + 1)


def _verify(shape: SearchShape, model: Ults, point: str, assignment: Assignment) -> None:
    labeling = Labeling(model, [shape.formula])
    if not labeling.holds(shape.formula, model.index(point)):
        raise RuntimeError(f'witness model fails {format_formula(shape.formula)} at {point}')
    for (agent, cond, goal), expected in zip(shape.triples, assignment):
        if labeling.holds(Kh(agent, cond, goal), 0) != expected:
            raise RuntimeError(f'witness model disagrees on {format_formula(Kh(agent, cond, goal))}')


def is_satisfiable(f: SurfaceFormula, agents: Optional[Iterable[str]] = None) -> SatOutcome:
    core, chosen = _prepare(f, agents)
    shape = SearchShape.of(core, chosen)
    for assignment in product((False, True), repeat=len(shape.triples)):
        target = shape.extensions(assignment)[core]
        if not target:
            continue
        types = _search(shape.constraint(assignment), shape.universe, shape.bound)
        if types is None:
            logger.debug(f'No valuation set realizes Kh assignment {assignment}')
            continue
        model = shape.build_model(list(bits(types)), assignment)
        point_type = next(t for t in bits(types) if target >> t & 1)
        point = model.states[sorted(bits(types)).index(point_type)]
        _verify(shape, model, point, assignment)
        kh_values = {format_formula(Kh(*t)): v for t, v in zip(shape.triples, assignment)}
        logger.info(
            f'SAT with {model.n} states (bound {shape.bound}): {format_formula(core)}',
            extra={'bound': shape.bound, 'states': model.n},
        )
        return SatOutcome(True, shape.bound, model, point, kh_values)
    logger.info(f'UNSAT within bound {shape.bound}: {format_formula(core)}', extra={'bound': shape.bound})
    return SatOutcome(False, shape.bound)


def is_valid(f: SurfaceFormula, agents: Optional[Iterable[str]] = None) -> bool:
    core, chosen = _prepare(f, agents)
    return not is_satisfiable(Neg(core), chosen).satisfiable
