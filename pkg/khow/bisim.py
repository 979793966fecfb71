"""
Bisimulation checking and equivalence deciding for finite pointed ULTSs.

Every definable set is a union of valuation classes and Kh is global, so
two pointed models are equivalent exactly when the points agree on atoms,
the models realize the same valuations, and their global profiles agree.
A profile records, per agent and set U of valuation classes, the minimal
images R_π(U) over plan sets SE on U.
"""
from dataclasses import dataclass
from itertools import product
from typing import Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .checker import Labeling, executes
from .config import settings
from .exceptions import ValuationCapError
from .logging_config import get_logger
from .models import Ults, bits, image
from .syntax import Atom, Kh, SurfaceFormula, desugar, describe_valuation, disjunction, format_formula

logger = get_logger(__name__)

Valuation = FrozenSet[str]

ATOM = 'Atom'
KH_ZIG = 'KhZig'
KH_ZAG = 'KhZag'
A_ZIG = 'AZig'
A_ZAG = 'AZag'


@dataclass(frozen=True)
class BisimRelation:
    pairs: FrozenSet[Tuple[str, str]]

    @classmethod
    def of(cls, pairs) -> 'BisimRelation':
        return cls(frozenset((u, v) for u, v in pairs))

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def __len__(self) -> int:
        return len(self.pairs)

    def sorted_pairs(self) -> List[Tuple[str, str]]:
        return sorted(self.pairs)


@dataclass(frozen=True)
class Violation:
    clause: str
    pair: Optional[Tuple[str, str]] = None
    agent: Optional[str] = None
    definable: Tuple[str, ...] = ()
    target: Tuple[str, ...] = ()
    detail: str = ''

    def __str__(self) -> str:
        return f"{self.clause}: {self.detail}" if self.detail else self.clause


# ============ VALUATION CLASSES ============

def realized_valuations(m: Ults) -> Tuple[Valuation, ...]:
    found = sorted(set(m.base.val), key=lambda v: sorted(v))
    if len(found) > settings.MAX_VALUATIONS:
        raise ValuationCapError(len(found), settings.MAX_VALUATIONS)
    return tuple(found)


def _class_masks(m: Ults, classes: Sequence[Valuation]) -> List[int]:
    masks = [0] * len(classes)
    position = {v: k for k, v in enumerate(classes)}
    for i, v in enumerate(m.base.val):
        if v in position:
            masks[position[v]] |= 1 << i
    return masks


def _states_of(class_masks: Sequence[int], selection: int) -> int:
    result = 0
    for k in bits(selection):
        result |= class_masks[k]
    return result


def _classes_of(class_masks: Sequence[int], states: int) -> int:
    return sum(1 << k for k, mask in enumerate(class_masks) if mask & states)


def prop_definable_sets(m: Ults) -> List[int]:
    """Every union of valuation classes, as state bitmasks."""
    class_masks = _class_masks(m, realized_valuations(m))
    return [_states_of(class_masks, selection) for selection in range(1 << len(class_masks))]


# ============ PROFILES ============

@dataclass(frozen=True)
class GlobalProfile:
    valuations: Tuple[Valuation, ...]
    # (agent, U) -> antichain of minimal images, all as class selections
    images: Mapping[Tuple[str, int], FrozenSet[int]]

    def kh_fact(self, agent: str, cond: int, goal: int) -> bool:
        return any(img & ~goal == 0 for img in self.images.get((agent, cond), ()))


def _minimal(sets: Iterator[int]) -> FrozenSet[int]:
    candidates = set(sets)
    return frozenset(s for s in candidates if not any(t != s and t & ~s == 0 for t in candidates))


def global_profile(m: Ults, valuations: Sequence[Valuation], agents: Sequence[str]) -> GlobalProfile:
    """Profile over the given valuation classes; unknown agents get no images."""
    class_masks = _class_masks(m, valuations)
    images: Dict[Tuple[str, int], FrozenSet[int]] = {}
    for agent in agents:
        collection = m.plansets.get(agent, ())
        for selection in range(1 << len(valuations)):
            cond = _states_of(class_masks, selection)
            reachable = (
                _classes_of(class_masks, image(rel, cond))
                for se, rel in (m.planset_table[p] for p in collection)
                if cond & ~se == 0
            )
            images[(agent, selection)] = _minimal(reachable)
    return GlobalProfile(tuple(valuations), images)


def _all_agents(m: Ults, m2: Ults) -> Tuple[str, ...]:
    return tuple(sorted(set(m.agents) | set(m2.agents)))


def equivalence_fact(m: Ults, w: str, m2: Ults, w2: str) -> Optional[Violation]:
    """First profile fact separating the two points, or None when they are equivalent."""
    left_val = m.base.val[m.index(w)]
    right_val = m2.base.val[m2.index(w2)]
    if left_val != right_val:
        return Violation(ATOM, pair=(w, w2), detail=f"valuations {sorted(left_val)} and {sorted(right_val)} differ")

    left, right = realized_valuations(m), realized_valuations(m2)
    for clause, source, target, model in ((A_ZIG, left, right, m), (A_ZAG, right, left, m2)):
        missing = [v for v in source if v not in target]
        if missing:
            state = model.states[model.base.val.index(missing[0])]
            return Violation(clause, detail=f"state {state} realizes {sorted(missing[0])}, which the other model lacks")

    agents = _all_agents(m, m2)
    profile, profile2 = global_profile(m, left, agents), global_profile(m2, left, agents)
    left_masks, right_masks = _class_masks(m, left), _class_masks(m2, left)
    for agent, selection in product(agents, range(1 << len(left))):
        ours = profile.images[(agent, selection)]
        theirs = profile2.images[(agent, selection)]
        if ours == theirs:
            continue
        # some minimal image on one side has no image below it on the other
        for img in sorted(ours):
            if not profile2.kh_fact(agent, selection, img):
                return Violation(
                    KH_ZIG, agent=agent,
                    definable=m.base.names(_states_of(left_masks, selection)),
                    target=m.base.names(_states_of(left_masks, img)),
                    detail=f"agent {agent} executes this step only in the first model",
                )
        for img in sorted(theirs):
            if not profile.kh_fact(agent, selection, img):
                return Violation(
                    KH_ZAG, agent=agent,
                    definable=m2.base.names(_states_of(right_masks, selection)),
                    target=m2.base.names(_states_of(right_masks, img)),
                    detail=f"agent {agent} executes this step only in the second model",
                )
    return None


# ============ OPERATIONS ============

def _relation_rows(m: Ults, m2: Ults, z: BisimRelation) -> Tuple[List[int], List[int]]:
    forward, backward = [0] * m.n, [0] * m2.n
    for u, v in z.pairs:
        i, j = m.index(u), m2.index(v)
        forward[i] |= 1 << j
        backward[j] |= 1 << i
    return forward, backward


def _kh_transfer(
    source: Ults, target: Ults, rows: Sequence[int], agents: Sequence[str], clause: str,
) -> Optional[Violation]:
    for cond in prop_definable_sets(source):
        mapped = image(rows, cond)
        for agent in agents:
            for planset in source.plansets.get(agent, ()):
                se, rel = source.planset_table[planset]
                if cond & ~se:
                    continue
                goal = image(rows, image(rel, cond))
                if agent not in target.plansets or not executes(target, agent, mapped, goal):
                    return Violation(
                        clause, agent=agent,
                        definable=source.base.names(cond),
                        target=target.base.names(goal),
                        detail=f"{planset} has no counterpart for agent {agent}",
                    )
    return None


def verify_bisim(m: Ults, m2: Ults, z: BisimRelation) -> Optional[Violation]:
    """None when `z` is a bisimulation, otherwise the first failed clause."""
    forward, backward = _relation_rows(m, m2, z)
    for u, v in sorted(z.pairs):
        if m.base.val[m.index(u)] != m2.base.val[m2.index(v)]:
            return Violation(ATOM, pair=(u, v), detail=f"{u} and {v} disagree on atoms")
    for i, row in enumerate(forward):
        if not row:
            return Violation(A_ZIG, detail=f"{m.states[i]} is unrelated")
    for j, row in enumerate(backward):
        if not row:
            return Violation(A_ZAG, detail=f"{m2.states[j]} is unrelated")
    agents = _all_agents(m, m2)
    return (
        _kh_transfer(m, m2, forward, agents, KH_ZIG)
        or _kh_transfer(m2, m, backward, agents, KH_ZAG)
    )


def equivalent(m: Ults, w: str, m2: Ults, w2: str) -> bool:
    return equivalence_fact(m, w, m2, w2) is None


def valuation_relation(m: Ults, m2: Ults) -> BisimRelation:
    return BisimRelation.of(
        (u, v)
        for u, val in zip(m.states, m.base.val)
        for v, val2 in zip(m2.states, m2.base.val)
        if val == val2
    )


def bisimilar(m: Ults, w: str, m2: Ults, w2: str) -> Tuple[bool, Union[BisimRelation, Violation]]:
    difference = equivalence_fact(m, w, m2, w2)
    if difference is not None:
        return False, difference
    z = valuation_relation(m, m2)
    violation = verify_bisim(m, m2, z)
    if violation is not None:
        logger.error(f'Equivalent points failed bisimulation certification: {violation}')
        return False, violation
    return True, z


def self_bisimulation(m: Ults) -> BisimRelation:
    """Same-valuation pairs of one model, certified as a bisimulation."""
    z = valuation_relation(m, m)
    violation = verify_bisim(m, m, z)
    if violation is not None:
        raise AssertionError(f'valuation partition is not an autobisimulation: {violation}')
    return z


# ============ DISTINGUISHING FORMULAS ============

def find_distinguishing_formula(
    m: Ults, w: str, m2: Ults, w2: str, maxdepth: int,
) -> Optional[SurfaceFormula]:
    found = _distinguishing_candidate(m, w, m2, w2, maxdepth)
    if found is not None and not separates(m, w, m2, w2, found):
        raise RuntimeError(f"candidate {format_formula(found)} does not separate {w} and {w2}")
    return found


def _distinguishing_candidate(
    m: Ults, w: str, m2: Ults, w2: str, maxdepth: int,
) -> Optional[SurfaceFormula]:
    """Search formulas of Kh-depth <= maxdepth true at exactly one point.

    Depth 0 tries atoms, then descriptions of every set of realized
    valuations. Each further level tries Kh over all pairs of formulas
    found so far. Candidates with the same extensions in both models are
    tried once.
    """
    if maxdepth < 0:
        raise ValueError('maxdepth must be non-negative')
    i, j = m.index(w), m2.index(w2)
    atom_names = sorted(set(m.base.atoms) | set(m2.base.atoms) | set().union(*m.base.val, *m2.base.val))
    valuations = sorted(set(m.base.val) | set(m2.base.val), key=lambda v: sorted(v))
    agents = _all_agents(m, m2)

    pool: List[Tuple[SurfaceFormula, int, int]] = []
    seen = set()

    def offer(f: SurfaceFormula, mask: int, mask2: int) -> Optional[SurfaceFormula]:
        if (mask, mask2) in seen:
            return None
        seen.add((mask, mask2))
        pool.append((f, mask, mask2))
        if bool(mask >> i & 1) != bool(mask2 >> j & 1):
            return f
        return None

    def valuation_mask(model: Ults, chosen: Sequence[Valuation]) -> int:
        return sum(1 << k for k, v in enumerate(model.base.val) if v in chosen)

    for p in atom_names:
        found = offer(Atom(p), m.base.atom_mask(p), m2.base.atom_mask(p))
        if found is not None:
            return found
    for selection in range(1 << len(valuations)):
        chosen = [valuations[k] for k in bits(selection)]
        description = disjunction([describe_valuation(v, atom_names) for v in chosen])
        found = offer(description, valuation_mask(m, chosen), valuation_mask(m2, chosen))
        if found is not None:
            return found

    for depth in range(1, maxdepth + 1):
        previous = list(pool)
        for agent in agents:
            for (cond, c1, c2), (goal, g1, g2) in product(previous, previous):
                holds = agent in m.plansets and executes(m, agent, c1, g1)
                holds2 = agent in m2.plansets and executes(m2, agent, c2, g2)
                found = offer(Kh(agent, cond, goal), m.full if holds else 0, m2.full if holds2 else 0)
                if found is not None:
                    return found
        if len(pool) == len(previous):
            break
    return None


def separates(m: Ults, w: str, m2: Ults, w2: str, f: SurfaceFormula) -> bool:
    """True when `f` holds at exactly one of the two points.

    Agents missing from one model hold no plan sets there.
    """
    core = desugar(f, _all_agents(m, m2))
    left = Labeling(m, [core], missing_agents_empty=True).holds(core, m.index(w))
    right = Labeling(m2, [core], missing_agents_empty=True).holds(core, m2.index(w2))
    return left != right
