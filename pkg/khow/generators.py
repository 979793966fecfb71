"""
Random models and formulas for the soundness harness and the property tests.

Every generator takes an explicit `random.Random` so that a harness run is
reproducible from its seed.
"""
import random
from typing import Dict, List, Optional, Sequence, Tuple

from .models import EPSILON, Lts, Plan, PlanSet, Ults, relation_from_pairs
from .syntax import And, Atom, Implies, Kh, Neg, Or, SurfaceFormula

DEFAULT_ATOMS = ('p', 'q', 'r')
ACTION_NAMES = tuple('abcdefgh')


def random_lts(
    rng: random.Random,
    max_states: int,
    atoms: Sequence[str] = DEFAULT_ATOMS,
    max_actions: int = 3,
    density: float = 0.35,
) -> Lts:
    n = rng.randint(1, max_states)
    states = tuple(f's{k}' for k in range(n))
    actions = ACTION_NAMES[:rng.randint(1, min(max_actions, len(ACTION_NAMES)))]
    val = tuple(frozenset(p for p in atoms if rng.random() < 0.5) for _ in states)
    rel = {
        action: relation_from_pairs(n, [(u, v) for u in range(n) for v in range(n) if rng.random() < density])
        for action in actions
    }
    return Lts(states, tuple(atoms), actions, rel, val)


def random_plan(rng: random.Random, actions: Sequence[str], max_len: int) -> Plan:
    return tuple(rng.choice(actions) for _ in range(rng.randint(0, max_len)))


def random_collection(
    rng: random.Random, actions: Sequence[str], max_plansets: int, max_plan_len: int,
) -> Tuple[PlanSet, ...]:
    """Pairwise disjoint, nonempty plan sets over `actions`."""
    pool: List[Plan] = []
    for _ in range(rng.randint(1, 2 * max_plansets)):
        plan = random_plan(rng, actions, max_plan_len)
        if plan not in pool:
            pool.append(plan)
    rng.shuffle(pool)
    k = rng.randint(1, min(max_plansets, len(pool)))
    groups: List[List[Plan]] = [[plan] for plan in pool[:k]]
    for plan in pool[k:]:
        rng.choice(groups).append(plan)
    return tuple(PlanSet.of(group) for group in groups)


def random_ults(
    rng: random.Random,
    max_states: int,
    agents: Sequence[str] = ('1',),
    atoms: Sequence[str] = DEFAULT_ATOMS,
    max_actions: int = 3,
    max_plansets: int = 3,
    max_plan_len: int = 3,
    base: Optional[Lts] = None,
) -> Ults:
    base = base or random_lts(rng, max_states, atoms=atoms, max_actions=max_actions)
    plansets = {
        agent: random_collection(rng, base.actions, max_plansets, max_plan_len)
        for agent in agents
    }
    return Ults(base, tuple(agents), plansets)


def random_formula(
    rng: random.Random,
    atoms: Sequence[str] = DEFAULT_ATOMS,
    agents: Sequence[str] = ('1',),
    max_kh_depth: int = 2,
    size: int = 4,
) -> SurfaceFormula:
    """Random formula over `atoms` with at most `max_kh_depth` nested Kh."""
    if size <= 1:
        return Atom(rng.choice(atoms))
    choice = rng.random()
    if max_kh_depth > 0 and choice < 0.3:
        cond = random_formula(rng, atoms, agents, max_kh_depth - 1, size // 2)
        goal = random_formula(rng, atoms, agents, max_kh_depth - 1, size // 2)
        return Kh(rng.choice(agents), cond, goal)
    if choice < 0.5:
        return Neg(random_formula(rng, atoms, agents, max_kh_depth, size - 1))
    left = random_formula(rng, atoms, agents, max_kh_depth, size // 2)
    right = random_formula(rng, atoms, agents, max_kh_depth, size // 2)
    connective = rng.choice((Or, And, Implies))
    return connective(left, right)


def random_bindings(
    rng: random.Random,
    metavariables: Sequence[str],
    atoms: Sequence[str] = DEFAULT_ATOMS,
    agents: Sequence[str] = ('1',),
    max_kh_depth: int = 1,
) -> Dict[str, SurfaceFormula]:
    return {
        name: random_formula(rng, atoms, agents, max_kh_depth, size=rng.randint(1, 3))
        for name in metavariables
    }


def chain_ults(n: int, agent: str = '1', plan_length: int = 2) -> Ults:
    """A chain s0 -a-> s1 -a-> ... with p on even and q on odd states.

    The agent holds {ε} and {[a^k]} for k from 1 to `plan_length`.
    """
    states = tuple(f's{k}' for k in range(n))
    val = tuple(frozenset({'p'} if k % 2 == 0 else {'q'}) for k in range(n))
    rel = {'a': relation_from_pairs(n, [(k, k + 1) for k in range(n - 1)])}
    base = Lts(states, ('p', 'q'), ('a',), rel, val)
    plansets = tuple(PlanSet((('a',) * k,)) for k in range(1, plan_length + 1))
    return Ults(base, (agent,), {agent: (PlanSet((EPSILON,)),) + plansets})
