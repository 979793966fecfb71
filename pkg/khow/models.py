"""
Finite LTS and ULTS models, plans, plan sets and the plan-behavior algebra.

States are indexed by file order. A set of states is an int bitmask and a
binary relation is a tuple of successor bitmasks, one row per state.
"""
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .exceptions import EmptyPlanSetError, ModelInvariantError, UnknownAgentError, UnknownStateError
from .syntax import RESERVED_ATOM

Plan = Tuple[str, ...]
Relation = Tuple[int, ...]
EPSILON: Plan = ()


# ============ BITMASK HELPERS ============

def bits(mask: int) -> Iterator[int]:
    index = 0
    while mask:
        if mask & 1:
            yield index
        mask >>= 1
        index += 1


def full_mask(n: int) -> int:
    return (1 << n) - 1


def identity_relation(n: int) -> Relation:
    return tuple(1 << i for i in range(n))


def empty_relation(n: int) -> Relation:
    return (0,) * n


def image(rel: Relation, mask: int) -> int:
    result = 0
    for i in bits(mask):
        result |= rel[i]
    return result


def compose(first: Relation, second: Relation) -> Relation:
    """first ∘ second: follow `first`, then `second`."""
    return tuple(image(second, row) for row in first)


def restrict(rel: Relation, sources: int) -> Relation:
    return tuple(row if sources >> i & 1 else 0 for i, row in enumerate(rel))


def domain(rel: Relation) -> int:
    return sum(1 << i for i, row in enumerate(rel) if row)


def union(first: Relation, second: Relation) -> Relation:
    return tuple(a | b for a, b in zip(first, second))


def is_subrelation(smaller: Relation, larger: Relation) -> bool:
    return all(a & ~b == 0 for a, b in zip(smaller, larger))


def relation_pairs(rel: Relation) -> List[Tuple[int, int]]:
    return [(i, j) for i, row in enumerate(rel) for j in bits(row)]


def relation_from_pairs(n: int, pairs: Iterable[Tuple[int, int]]) -> Relation:
    rows = [0] * n
    for i, j in pairs:
        rows[i] |= 1 << j
    return tuple(rows)


def format_plan(plan: Plan) -> str:
    return '[' + ','.join(plan) + ']'


def _plan_key(plan: Plan) -> Tuple[int, Plan]:
    return len(plan), plan


# ============ DOMAIN TYPES ============

@dataclass(frozen=True)
class PlanSet:
    """A set of plans the agent cannot tell apart, kept in canonical order."""
    plans: Tuple[Plan, ...]

    @classmethod
    def of(cls, plans: Iterable[Sequence[str]]) -> 'PlanSet':
        return cls(tuple(sorted({tuple(p) for p in plans}, key=_plan_key)))

    def __len__(self) -> int:
        return len(self.plans)

    def __iter__(self) -> Iterator[Plan]:
        return iter(self.plans)

    def __str__(self) -> str:
        return '{' + ', '.join(format_plan(p) for p in self.plans) + '}'

    def actions(self) -> FrozenSet[str]:
        return frozenset(a for plan in self.plans for a in plan)

    def concatenate(self, other: 'PlanSet') -> 'PlanSet':
        return PlanSet.of(p + q for p in self.plans for q in other.plans)


@dataclass(frozen=True)
class PlanBehavior:
    """SE-restricted relation of a plan together with its SE set."""
    rel: Relation
    se: int

    @property
    def is_dead(self) -> bool:
        return self.se == 0


@dataclass(frozen=True)
class Lts:
    states: Tuple[str, ...]
    atoms: Tuple[str, ...]
    actions: Tuple[str, ...]
    rel: Mapping[str, Relation]
    val: Tuple[FrozenSet[str], ...]
    _index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.states)
        if n == 0:
            raise ModelInvariantError('Model must have at least one state')
        if len(set(self.states)) != n:
            raise ModelInvariantError('State ids must be unique')
        if len(self.val) != n:
            raise ModelInvariantError('Valuation must assign a set of atoms to every state')
        declared = set(self.atoms)
        for state, valuation in zip(self.states, self.val):
            if RESERVED_ATOM in valuation:
                raise ModelInvariantError(f"Atom {RESERVED_ATOM} is reserved and cannot be true at {state}")
            undeclared = valuation - declared
            if undeclared:
                raise ModelInvariantError(f"State {state} uses undeclared atoms {sorted(undeclared)}")
        actions = set(self.actions)
        for action, rows in self.rel.items():
            if action not in actions:
                raise ModelInvariantError(f"Relation given for undeclared action {action}")
            if len(rows) != n or any(row >> n for row in rows):
                raise ModelInvariantError(f"Relation for {action} has endpoints outside the state set")
        object.__setattr__(self, '_index', {s: i for i, s in enumerate(self.states)})

    @classmethod
    def build(
        cls,
        states: Sequence[str],
        val: Mapping[str, Iterable[str]],
        rel: Mapping[str, Iterable[Tuple[str, str]]],
        actions: Optional[Sequence[str]] = None,
        atoms: Optional[Sequence[str]] = None,
    ) -> 'Lts':
        """Build from state names; unlisted actions/atoms are inferred."""
        index = {s: i for i, s in enumerate(states)}
        valuation = tuple(frozenset(val.get(s, ())) for s in states)
        if atoms is None:
            atoms = sorted(set().union(*valuation)) if valuation else []
        if actions is None:
            actions = sorted(rel)
        relations = {}
        for action, pairs in rel.items():
            try:
                relations[action] = relation_from_pairs(len(states), ((index[u], index[v]) for u, v in pairs))
            except KeyError as exc:
                raise ModelInvariantError(f"Relation for {action} mentions unknown state {exc.args[0]}")
        return cls(tuple(states), tuple(atoms), tuple(actions), relations, valuation)

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def full(self) -> int:
        return full_mask(self.n)

    def index(self, state: str) -> int:
        try:
            return self._index[state]
        except KeyError:
            raise UnknownStateError(state)

    def mask_of(self, states: Iterable[str]) -> int:
        return sum(1 << self.index(s) for s in set(states))

    def names(self, mask: int) -> Tuple[str, ...]:
        return tuple(self.states[i] for i in bits(mask))

    def atom_mask(self, atom: str) -> int:
        return sum(1 << i for i, v in enumerate(self.val) if atom in v)

    def pairs(self, rel: Relation) -> List[Tuple[str, str]]:
        return [(self.states[i], self.states[j]) for i, j in relation_pairs(rel)]

    @cached_property
    def behavior_plans(self) -> Dict[PlanBehavior, Plan]:
        return behavior_representatives(self)


@dataclass(frozen=True)
class Ults:
    base: Lts
    agents: Tuple[str, ...]
    plansets: Mapping[str, Tuple[PlanSet, ...]]

    def __post_init__(self):
        if not self.agents:
            raise ModelInvariantError('Agent set must be nonempty')
        if set(self.plansets) != set(self.agents):
            raise ModelInvariantError('Every agent needs exactly one plan-set collection', clause='(i)')
        actions = set(self.base.actions)
        for agent in self.agents:
            collection = self.plansets[agent]
            if not collection:
                raise ModelInvariantError(f"Agent {agent} has no plan sets", clause='(i)')
            seen = set()
            for planset in collection:
                if len(planset) == 0:
                    raise EmptyPlanSetError(agent)
                unknown = planset.actions() - actions
                if unknown:
                    raise ModelInvariantError(f"Plan set {planset} of agent {agent} uses unknown actions {sorted(unknown)}")
                overlap = seen.intersection(planset.plans)
                if overlap:
                    plan = format_plan(sorted(overlap, key=_plan_key)[0])
                    raise ModelInvariantError(f"Plan {plan} belongs to two plan sets of agent {agent}", clause='(ii)')
                seen.update(planset.plans)

    @property
    def states(self) -> Tuple[str, ...]:
        return self.base.states

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def full(self) -> int:
        return self.base.full

    def index(self, state: str) -> int:
        return self.base.index(state)

    def collection(self, agent: str) -> Tuple[PlanSet, ...]:
        try:
            return self.plansets[agent]
        except KeyError:
            raise UnknownAgentError(agent)

    def with_plansets(self, plansets: Mapping[str, Sequence[PlanSet]]) -> 'Ults':
        return replace(self, plansets={a: tuple(c) for a, c in plansets.items()})

    @cached_property
    def planset_table(self) -> Dict[PlanSet, Tuple[int, Relation]]:
        """(SE set, induced relation) for every plan set of every agent."""
        table: Dict[PlanSet, Tuple[int, Relation]] = {}
        for agent in self.agents:
            for planset in self.plansets[agent]:
                if planset not in table:
                    table[planset] = (stexec_set(self.base, planset), rel_of_set(self.base, planset))
        return table


Model = Union[Lts, Ults]


def as_lts(m: Model) -> Lts:
    return m.base if isinstance(m, Ults) else m


# ============ PLAN SEMANTICS ============

def rel_of_plan(m: Model, plan: Sequence[str]) -> Optional[Relation]:
    """R_σ, or None when some action of σ has no relation in the model."""
    m = as_lts(m)
    result = identity_relation(m.n)
    for action in plan:
        step = m.rel.get(action)
        if step is None:
            return None
        result = compose(result, step)
    return result


def stexec_plan(m: Model, plan: Sequence[str]) -> int:
    """States where every partial execution of the plan can be continued."""
    m = as_lts(m)
    if rel_of_plan(m, plan) is None:
        return 0
    result = 0
    for u in range(m.n):
        frontier = 1 << u
        for action in plan:
            step = m.rel[action]
            if any(step[v] == 0 for v in bits(frontier)):
                break
            frontier = image(step, frontier)
        else:
            result |= 1 << u
    return result


def stexec_set(m: Model, planset: PlanSet) -> int:
    if len(planset) == 0:
        raise ModelInvariantError('empty plan set', clause='(iv)')
    m = as_lts(m)
    result = m.full
    for plan in planset:
        result &= stexec_plan(m, plan)
    return result


def rel_of_set(m: Model, planset: Iterable[Plan]) -> Relation:
    m = as_lts(m)
    result = empty_relation(m.n)
    for plan in planset:
        rel = rel_of_plan(m, plan)
        if rel is not None:
            result = union(result, rel)
    return result


def behavior(m: Model, plan: Sequence[str]) -> PlanBehavior:
    m = as_lts(m)
    rel = rel_of_plan(m, plan)
    if rel is None:
        return PlanBehavior(empty_relation(m.n), 0)
    se = stexec_plan(m, plan)
    return PlanBehavior(restrict(rel, se), se)


def behavior_compose(first: PlanBehavior, second: PlanBehavior) -> PlanBehavior:
    se = 0
    for u in bits(first.se):
        if first.rel[u] & ~second.se == 0:
            se |= 1 << u
    return PlanBehavior(restrict(compose(first.rel, second.rel), se), se)


def behavior_representatives(m: Model) -> Dict[PlanBehavior, Plan]:
    """Every reachable behavior with its shortest, then lexicographically least, plan.

    Breadth-first over behaviors, extending representatives by one basic
    action at a time in sorted action order.
    """
    m = as_lts(m)
    basics = [(a, behavior(m, (a,))) for a in sorted(m.actions)]
    start = behavior(m, EPSILON)
    found: Dict[PlanBehavior, Plan] = {start: EPSILON}
    frontier = [start]
    while frontier:
        next_frontier = []
        for current in frontier:
            plan = found[current]
            for action, step in basics:
                extended = behavior_compose(current, step)
                if extended not in found:
                    found[extended] = plan + (action,)
                    next_frontier.append(extended)
        frontier = next_frontier
    return found


def behavior_closure(m: Model) -> Tuple[PlanBehavior, ...]:
    return tuple(as_lts(m).behavior_plans)


def behavior_closure_with_plans(m: Model) -> Dict[PlanBehavior, Plan]:
    return dict(as_lts(m).behavior_plans)
