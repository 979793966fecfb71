"""
Filtration of a ULTS through a subformula-closed set Σ.

States are merged when they agree on Σ; plan sets are grouped by the Σ-Kh
formulas they witness. Each agent gets one action per plan class that
first witnesses a true Kh_i formula of Σ. An action only copies edges
leaving the condition states of the formulas its class witnesses, so a
merged state never looks strongly executable because of a Σ-equivalent
state it absorbed.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from . import storage
from .checker import Labeling
from .exceptions import UnknownAgentError
from .logging_config import get_logger
from .models import Lts, PlanSet, Relation, Ults, bits, empty_relation, image
from .schemas import ModelFile
from .syntax import RESERVED_ATOM, Atom, Formula, Kh, KhTriple, format_formula, require_subformula_closed

logger = get_logger(__name__)

DUMMY_ACTION = 'a_bot'


@dataclass(frozen=True)
class SigmaClasses:
    sigma: Tuple[Formula, ...]
    state_classes: Tuple[Tuple[str, ...], ...]
    plan_classes: Tuple[Tuple[PlanSet, ...], ...]
    # witness profile of each plan class: the (agent, cond, goal) triples it witnesses
    profiles: Tuple[FrozenSet[KhTriple], ...]

    def plan_class_of(self, planset: PlanSet) -> int:
        for k, members in enumerate(self.plan_classes):
            if planset in members:
                return k
        raise KeyError(str(planset))


@dataclass(frozen=True)
class Filtration:
    model: Ults
    class_map: Mapping[str, str]
    classes: SigmaClasses
    metadata: Mapping[str, object] = field(default_factory=dict)

    def to_document(self) -> ModelFile:
        return storage.model_to_document(self.model, class_map=self.class_map, metadata=self.metadata)


@dataclass(frozen=True)
class FiltrationViolation:
    kind: str  # 'truth' | 'size'
    formula: Optional[str] = None
    state: Optional[str] = None
    detail: str = ''

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def _sigma_triples(sigma: Iterable[Formula]) -> List[KhTriple]:
    return [(f.agent, f.cond, f.goal) for f in sigma if isinstance(f, Kh)]


def _check_agents(m: Ults, sigma: Iterable[Formula]) -> None:
    for agent, _, _ in _sigma_triples(sigma):
        if agent not in m.plansets:
            raise UnknownAgentError(agent)


def _witnesses(labeling: Labeling, m: Ults, planset: PlanSet, triple: KhTriple) -> bool:
    _, cond, goal = triple
    se, rel = m.planset_table[planset]
    c, g = labeling.mask(cond), labeling.mask(goal)
    return c & ~se == 0 and image(rel, c) & ~g == 0


def _classify(m: Ults, sigma: Tuple[Formula, ...], labeling: Labeling) -> SigmaClasses:
    signature: Dict[Tuple[bool, ...], List[str]] = {}
    for index, state in enumerate(m.states):
        key = tuple(labeling.holds(f, index) for f in sigma)
        signature.setdefault(key, []).append(state)

    triples = _sigma_triples(sigma)
    # a plan set shared between agents gets the union of its per-agent profiles
    witnessed: Dict[PlanSet, FrozenSet[KhTriple]] = {}
    for agent in m.agents:
        for planset in m.plansets[agent]:
            profile = frozenset(
                t for t in triples if t[0] == agent and _witnesses(labeling, m, planset, t)
            )
            witnessed[planset] = witnessed.get(planset, frozenset()) | profile
    grouped: Dict[FrozenSet[KhTriple], List[PlanSet]] = {}
    for planset, profile in witnessed.items():
        grouped.setdefault(profile, []).append(planset)

    return SigmaClasses(
        sigma=sigma,
        state_classes=tuple(tuple(states) for states in signature.values()),
        plan_classes=tuple(tuple(members) for members in grouped.values()),
        profiles=tuple(grouped),
    )


def sigma_classes(m: Ults, sigma: Iterable[Formula]) -> SigmaClasses:
    sigma = require_subformula_closed(sigma)
    _check_agents(m, sigma)
    return _classify(m, sigma, Labeling(m, sigma))


def _class_name(states: Tuple[str, ...]) -> str:
    return '[' + ','.join(states) + ']'


def filtrate(m: Ults, sigma: Iterable[Formula]) -> Filtration:
    sigma = require_subformula_closed(sigma)
    _check_agents(m, sigma)
    labeling = Labeling(m, sigma)
    classes = _classify(m, sigma, labeling)

    names = [_class_name(states) for states in classes.state_classes]
    class_map = {s: name for states, name in zip(classes.state_classes, names) for s in states}
    class_index = {s: k for k, states in enumerate(classes.state_classes) for s in states}
    state_class = [class_index[s] for s in m.states]
    sigma_atoms = sorted({f.name for f in sigma if isinstance(f, Atom) and f.name != RESERVED_ATOM})
    val = tuple(
        frozenset(p for p in sigma_atoms if p in m.base.val[m.index(states[0])])
        for states in classes.state_classes
    )

    # one action per plan class chosen as the first witness of a true Kh_i in Σ
    chosen: List[int] = []
    per_agent: Dict[str, List[int]] = {agent: [] for agent in m.agents}
    for agent, cond, goal in _sigma_triples(sigma):
        if not labeling.kh(agent, labeling.mask(cond), labeling.mask(goal)):
            continue
        first = next(p for p in m.plansets[agent] if _witnesses(labeling, m, p, (agent, cond, goal)))
        k = classes.plan_class_of(first)
        if k not in chosen:
            chosen.append(k)
        if k not in per_agent[agent]:
            per_agent[agent].append(k)

    n = len(names)
    actions: List[str] = []
    rel: Dict[str, Relation] = {}
    for k in chosen:
        name = f'a{k}'
        domain = 0
        for _, cond, _ in classes.profiles[k]:
            domain |= labeling.mask(cond)
        rows = [0] * n
        for planset in classes.plan_classes[k]:
            _, planset_rel = m.planset_table[planset]
            for i in bits(domain):
                for j in bits(planset_rel[i]):
                    rows[state_class[i]] |= 1 << state_class[j]
        actions.append(name)
        rel[name] = tuple(rows)

    plansets: Dict[str, Tuple[PlanSet, ...]] = {}
    for agent in m.agents:
        if per_agent[agent]:
            plansets[agent] = tuple(PlanSet(((f'a{k}',),)) for k in per_agent[agent])
        else:
            if DUMMY_ACTION not in rel:
                actions.append(DUMMY_ACTION)
                rel[DUMMY_ACTION] = empty_relation(n)
            plansets[agent] = (PlanSet(((DUMMY_ACTION,),)),)

    base = Lts(tuple(names), tuple(sigma_atoms), tuple(actions), rel, val)
    filtrated = Ults(base, m.agents, plansets)
    metadata = {
        'sigma': [format_formula(f) for f in sigma],
        'action_signature': 'finite; extends to infinitely many inert actions without changing any truth value',
    }
    logger.info(f'Filtrated {m.n} states into {n} classes with {len(actions)} actions')
    return Filtration(filtrated, class_map, classes, metadata)


def verify_filtration(m: Ults, sigma: Iterable[Formula], filt: Filtration) -> Optional[FiltrationViolation]:
    sigma = require_subformula_closed(sigma)
    if filt.model.n > 2 ** len(sigma):
        return FiltrationViolation('size', detail=f"{filt.model.n} classes exceed 2^{len(sigma)}")
    original = Labeling(m, sigma)
    filtered = Labeling(filt.model, sigma)
    for f in sigma:
        for index, state in enumerate(m.states):
            target = filt.model.index(filt.class_map[state])
            if original.holds(f, index) != filtered.holds(f, target):
                text = format_formula(f)
                return FiltrationViolation(
                    'truth', formula=text, state=state,
                    detail=f"{text} differs between {state} and {filt.class_map[state]}",
                )
    return None
