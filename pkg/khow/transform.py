"""
SE-composition of plan sets, class-membership tests and the translations
between LTS and single-agent ULTS semantics.

Infinite plan families are replaced by one representative per plan
behavior: Kh truth depends on a plan only through its behavior.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .bisim import self_bisimulation
from .config import settings
from .exceptions import PreconditionError
from .logging_config import get_logger
from .models import (
    Lts,
    PlanSet,
    Relation,
    Ults,
    as_lts,
    behavior,
    image,
    is_subrelation,
    relation_pairs,
    rel_of_set,
    restrict,
    stexec_set,
)

logger = get_logger(__name__)


@dataclass(frozen=True)
class ClassReport:
    is_nu_style: bool
    is_active: bool
    is_se_compositional: bool
    active_witness: Optional[PlanSet] = None
    # (π1, π2, covering π) for every composable pair
    composition_witnesses: Tuple[Tuple[PlanSet, PlanSet, PlanSet], ...] = ()
    counterexample: Optional[Tuple[PlanSet, PlanSet]] = None


def _single_agent(m: Ults) -> str:
    if len(m.agents) != 1:
        raise PreconditionError('single-agent', f"expected one agent, got {len(m.agents)}")
    return m.agents[0]


def _semantics(m: Ults, planset: PlanSet) -> Tuple[int, Relation]:
    cached = m.planset_table.get(planset)
    if cached is not None:
        return cached
    return stexec_set(m.base, planset), rel_of_set(m.base, planset)


# ============ SE-COMPOSITION ============

def se_compose(m: Ults, first: PlanSet, second: PlanSet) -> Optional[PlanSet]:
    """π1π2 when π1 is SE somewhere and lands inside SE(π2); None otherwise."""
    se1, rel1 = _semantics(m, first)
    se2, _ = _semantics(m, second)
    if se1 == 0 or image(rel1, se1) & ~se2:
        return None
    return first.concatenate(second)


def se_compose_chain(m: Ults, plansets: Sequence[PlanSet]) -> Optional[PlanSet]:
    if not plansets:
        raise ValueError('se_compose_chain needs at least one plan set')
    for first, second in zip(plansets, plansets[1:]):
        if se_compose(m, first, second) is None:
            return None
    result = plansets[0]
    for planset in plansets[1:]:
        result = result.concatenate(planset)
    return result


# ============ CLASS TESTS ============

def _bisimilar_rows(m: Ults) -> List[int]:
    rows = [0] * m.n
    for u, v in self_bisimulation(m).pairs:
        rows[m.index(u)] |= 1 << m.index(v)
    return rows


def _active_witness(m: Ults, rows: Sequence[int]) -> Optional[PlanSet]:
    for planset in m.plansets[m.agents[0]]:
        se, rel = _semantics(m, planset)
        if se == m.full and all(rel[u] & ~rows[u] == 0 for u in range(m.n)):
            return planset
    return None


def is_active(m: Ults) -> Tuple[bool, Optional[PlanSet]]:
    _single_agent(m)
    witness = _active_witness(m, _bisimilar_rows(m))
    return witness is not None, witness


def _covers(m: Ults, rows: Sequence[int], composed: PlanSet, candidate: PlanSet) -> bool:
    se_c, rel_c = _semantics(m, composed)
    se, rel = _semantics(m, candidate)
    if not is_subrelation(rel_c, rel) or se_c & ~se:
        return False
    # every edge of the candidate is matched by a composed edge up to bisimilarity
    composed_edges = relation_pairs(rel_c)
    for w, v in relation_pairs(rel):
        if not any(rows[w] >> w2 & 1 and rows[v] >> v2 & 1 for w2, v2 in composed_edges):
            return False
    return True


def _composition_check(m: Ults, rows: Sequence[int]):
    collection = m.plansets[m.agents[0]]
    found = []
    for first in collection:
        for second in collection:
            composed = se_compose(m, first, second)
            if composed is None:
                continue
            cover = next((p for p in collection if _covers(m, rows, composed, p)), None)
            if cover is None:
                return False, tuple(found), (first, second)
            found.append((first, second, cover))
    return True, tuple(found), None


def is_se_compositional(m: Ults) -> Tuple[bool, Optional[Tuple[PlanSet, PlanSet]]]:
    _single_agent(m)
    ok, _, counterexample = _composition_check(m, _bisimilar_rows(m))
    return ok, counterexample


def is_nu_style(m: Ults) -> bool:
    """Singleton plan sets realizing every behavior of the closure."""
    collection = m.plansets[_single_agent(m)]
    if any(len(planset) != 1 for planset in collection):
        return False
    realized = {behavior(m.base, planset.plans[0]) for planset in collection}
    return set(m.base.behavior_plans) <= realized


def classify(m: Ults) -> ClassReport:
    _single_agent(m)
    rows = _bisimilar_rows(m)
    witness = _active_witness(m, rows)
    compositional, found, counterexample = _composition_check(m, rows)
    return ClassReport(
        is_nu_style=is_nu_style(m),
        is_active=witness is not None,
        is_se_compositional=compositional,
        active_witness=witness,
        composition_witnesses=found,
        counterexample=counterexample,
    )


# ============ TRANSLATIONS ============

def lts_to_ults_nu(m: Lts) -> Ults:
    """One singleton plan set per behavior, holding its representative plan."""
    m = as_lts(m)
    agent = settings.DEFAULT_AGENT
    plansets = tuple(PlanSet((plan,)) for plan in m.behavior_plans.values())
    logger.info(f'Translated LTS to ULTS with {len(plansets)} singleton plan sets')
    return Ults(m, (agent,), {agent: plansets})


def lts_to_ults_ac(m: Lts) -> Ults:
    """One fresh action per behavior with nonempty SE set."""
    m = as_lts(m)
    agent = settings.DEFAULT_AGENT
    live = [b for b in m.behavior_plans if b.se]
    actions = tuple(f'b{k}' for k in range(len(live)))
    rel = {name: b.rel for name, b in zip(actions, live)}
    base = Lts(m.states, m.atoms, actions, rel, m.val)
    plansets = tuple(PlanSet(((name,),)) for name in actions)
    logger.info(f'Translated LTS to active compositional ULTS with {len(actions)} actions')
    return Ults(base, (agent,), {agent: plansets})


def ults_to_lts(m: Ults) -> Lts:
    """One action per plan set, restricted to the set's SE states."""
    _single_agent(m)
    active, _ = is_active(m)
    if not active:
        raise PreconditionError('is_active', 'model has no plan set behaving like the empty plan')
    compositional, counterexample = is_se_compositional(m)
    if not compositional:
        first, second = counterexample
        raise PreconditionError('is_se_compositional', f"no plan set covers {first} composed with {second}")
    collection = m.plansets[m.agents[0]]
    actions = tuple(f'pi{k}' for k in range(len(collection)))
    rel: Dict[str, Relation] = {}
    for name, planset in zip(actions, collection):
        se, planset_rel = _semantics(m, planset)
        rel[name] = restrict(planset_rel, se)
    logger.info(f'Translated ULTS to LTS with {len(actions)} actions')
    return Lts(m.states, m.base.atoms, actions, rel, m.base.val)
