"""
Model checking by bottom-up labeling.

Every subformula is labeled with its extension (a state bitmask) in
subformula-closure order. Kh formulas are global, so their label is either
every state or none. Over a ULTS the witnesses are the agent's plan sets;
over an LTS they are the members of the behavior closure.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Tuple

from .config import settings
from .exceptions import UnknownAgentError
from .models import Lts, Model, Plan, PlanSet, Ults, as_lts, image
from .syntax import (
    Atom,
    Formula,
    Kh,
    Neg,
    Or,
    SurfaceFormula,
    agents_of,
    closure_of,
    desugar,
    is_core,
)


@dataclass(frozen=True)
class Extension:
    formula: Formula
    mask: int
    states: Tuple[str, ...]


# ============ KH PRIMITIVES ============

def witnesses_for(m: Ults, agent: str, cond: int, goal: int) -> List[PlanSet]:
    """Plan sets of `agent` that are SE on `cond` and take it inside `goal`."""
    found = []
    for planset in m.collection(agent):
        se, rel = m.planset_table[planset]
        if cond & ~se == 0 and image(rel, cond) & ~goal == 0:
            found.append(planset)
    return found


def executes(m: Ults, agent: str, cond: int, goal: int) -> bool:
    """U ->_i T: some plan set of the agent is SE on U and maps U into T."""
    for planset in m.collection(agent):
        se, rel = m.planset_table[planset]
        if cond & ~se == 0 and image(rel, cond) & ~goal == 0:
            return True
    return False


def lts_witness(m: Lts, cond: int, goal: int) -> Optional[Plan]:
    """Representative plan of the first witnessing behavior, if any."""
    for b, plan in m.behavior_plans.items():
        if cond & ~b.se == 0 and image(b.rel, cond) & ~goal == 0:
            return plan
    return None


# ============ LABELING ============

class Labeling:
    """Extensions of every member of the closure of `formulas` in `m`.

    With `missing_agents_empty`, an agent the model does not declare is read
    as holding no plan sets, the way the bisimulation profiles read it.
    """

    def __init__(self, m: Model, formulas: Iterable[Formula], missing_agents_empty: bool = False):
        self.m = m
        self.missing_agents_empty = missing_agents_empty
        self.masks: Dict[Formula, int] = {}
        self._kh_cache: Dict[Tuple[str, int, int], bool] = {}
        full = m.full
        for f in closure_of(formulas):
            if isinstance(f, Atom):
                self.masks[f] = as_lts(m).atom_mask(f.name)
            elif isinstance(f, Neg):
                self.masks[f] = full & ~self.masks[f.sub]
            elif isinstance(f, Or):
                self.masks[f] = self.masks[f.left] | self.masks[f.right]
            elif isinstance(f, Kh):
                holds = self.kh(f.agent, self.masks[f.cond], self.masks[f.goal])
                self.masks[f] = full if holds else 0
            else:
                raise TypeError(f"Not a core formula: {f!r}")

    def kh(self, agent: str, cond: int, goal: int) -> bool:
        key = (agent, cond, goal)
        if key not in self._kh_cache:
            self._kh_cache[key] = self._kh(agent, cond, goal)
        return self._kh_cache[key]

    def _kh(self, agent: str, cond: int, goal: int) -> bool:
        if isinstance(self.m, Lts):
            return lts_witness(self.m, cond, goal) is not None
        if agent not in self.m.plansets:
            if self.missing_agents_empty:
                return False
            raise UnknownAgentError(agent)
        return executes(self.m, agent, cond, goal)

    def mask(self, f: Formula) -> int:
        return self.masks[f]

    def holds(self, f: Formula, index: int) -> bool:
        return bool(self.masks[f] >> index & 1)


def _core(m: Model, f: SurfaceFormula) -> Formula:
    if isinstance(m, Ults):
        unknown = agents_of(f) - set(m.agents)
        if unknown:
            raise UnknownAgentError(sorted(unknown)[0])
    if is_core(f):
        return f
    if isinstance(m, Ults):
        return desugar(f, m.agents)
    return desugar(f, agents_of(f) or {settings.DEFAULT_AGENT})


# ============ OPERATIONS ============

def extension(m: Model, f: SurfaceFormula) -> Extension:
    core = _core(m, f)
    mask = Labeling(m, [core]).mask(core)
    return Extension(core, mask, as_lts(m).names(mask))


def check_ults(m: Ults, w: str, f: SurfaceFormula) -> bool:
    index = m.index(w)
    core = _core(m, f)
    return Labeling(m, [core]).holds(core, index)


def check_lts(m: Lts, w: str, f: SurfaceFormula) -> bool:
    """Truth over an LTS; Kh agent ids are ignored."""
    m = as_lts(m)
    index = m.index(w)
    core = _core(m, f)
    return Labeling(m, [core]).holds(core, index)


def check(m: Model, w: str, f: SurfaceFormula) -> bool:
    if isinstance(m, Ults):
        return check_ults(m, w, f)
    return check_lts(m, w, f)


def holds_universally(m: Model, f: SurfaceFormula) -> bool:
    return extension(m, f).mask == m.full


def witnesses(m: Ults, agent: str, cond: SurfaceFormula, goal: SurfaceFormula) -> List[PlanSet]:
    m.collection(agent)
    cond, goal = _core(m, cond), _core(m, goal)
    labeling = Labeling(m, [cond, goal])
    return witnesses_for(m, agent, labeling.mask(cond), labeling.mask(goal))


def lts_witness_plan(m: Lts, cond: SurfaceFormula, goal: SurfaceFormula) -> Optional[Plan]:
    cond, goal = _core(m, cond), _core(m, goal)
    labeling = Labeling(m, [cond, goal])
    return lts_witness(as_lts(m), labeling.mask(cond), labeling.mask(goal))
