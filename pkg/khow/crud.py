"""
Operations shared by the CLI and the HTTP routers.

Each function takes domain models or formula text and returns the pydantic
response body for the operation.
"""
from typing import Iterable, List, Optional, Sequence

from . import schemas, storage
from .axioms import soundness_harness
from .bisim import Violation, bisimilar, equivalence_fact
from .checker import extension, lts_witness_plan, witnesses
from .exceptions import PreconditionError
from .filtration import filtrate, verify_filtration
from .logging_config import get_logger
from .models import Lts, Model, PlanSet, Ults
from .sat import is_satisfiable
from .syntax import Kh, Neg, SurfaceFormula, closure_of, desugar, parse
from .transform import classify, lts_to_ults_ac, lts_to_ults_nu, ults_to_lts

logger = get_logger(__name__)


def require_ults(m: Model) -> Ults:
    if not isinstance(m, Ults):
        raise PreconditionError('is_ults', 'operation needs a model with agents and plan sets')
    return m


def require_lts(m: Model) -> Lts:
    if not isinstance(m, Lts):
        raise PreconditionError('is_lts', 'operation needs a model without plan sets')
    return m


def parse_for(m: Model, text: str) -> SurfaceFormula:
    """Parse formula text against the model's agent set (any agent for an LTS)."""
    return parse(text, m.agents if isinstance(m, Ults) else None)


def planset_out(planset: PlanSet) -> List[List[str]]:
    return [list(plan) for plan in planset]


def violation_out(v: Optional[Violation]) -> Optional[schemas.ViolationOut]:
    if v is None:
        return None
    return schemas.ViolationOut(
        clause=v.clause, pair=v.pair, agent=v.agent,
        definable=list(v.definable), target=list(v.target), detail=v.detail,
    )


# ============ FORMULA OPERATIONS ============

def check_formula(m: Model, state: str, text: str) -> schemas.CheckOut:
    f = parse_for(m, text)
    ext = extension(m, f)
    verdict = bool(ext.mask >> m.index(state) & 1)
    found: List[List[List[str]]] = []
    if isinstance(f, Kh):
        if isinstance(m, Ults):
            found = [planset_out(p) for p in witnesses(m, f.agent, f.cond, f.goal)]
        else:
            plan = lts_witness_plan(m, f.cond, f.goal)
            if plan is not None:
                found = [[list(plan)]]
    return schemas.CheckOut(verdict=verdict, witnesses=found, extension=list(ext.states))


def sat_formula(text: str, agents: Optional[Sequence[str]] = None) -> schemas.SatOut:
    f = parse(text, agents)
    outcome = is_satisfiable(f, agents)
    model = None
    if outcome.satisfiable:
        model = storage.model_to_document(
            outcome.model, point=outcome.point, metadata={'kh_values': dict(outcome.kh_values)},
        )
    return schemas.SatOut(satisfiable=outcome.satisfiable, bound=outcome.bound, model=model, point=outcome.point)


def valid_formula(text: str, agents: Optional[Sequence[str]] = None) -> schemas.ValidOut:
    f = parse(text, agents)
    outcome = is_satisfiable(Neg(f), agents)
    return schemas.ValidOut(valid=not outcome.satisfiable, bound=outcome.bound)


# ============ EQUIVALENCE OPERATIONS ============

def equiv_models(left: Model, left_state: str, right: Model, right_state: str) -> schemas.EquivOut:
    fact = equivalence_fact(require_ults(left), left_state, require_ults(right), right_state)
    return schemas.EquivOut(equivalent=fact is None, fact=violation_out(fact))


def bisim_models(left: Model, left_state: str, right: Model, right_state: str) -> schemas.BisimOut:
    ok, result = bisimilar(require_ults(left), left_state, require_ults(right), right_state)
    if ok:
        return schemas.BisimOut(bisimilar=True, relation=result.sorted_pairs())
    return schemas.BisimOut(bisimilar=False, violation=violation_out(result))


# ============ MODEL OPERATIONS ============

def filter_model(m: Model, texts: Iterable[str]) -> schemas.ModelFile:
    """Filtrate through the subformula closure of the given formulas."""
    m = require_ults(m)
    sigma = closure_of([desugar(parse_for(m, text), m.agents) for text in texts])
    result = filtrate(m, sigma)
    violation = verify_filtration(m, sigma, result)
    if violation is not None:
        logger.error(f'Filtration failed its own check: {violation}')
    return result.to_document()


def translate_model(m: Model, to: str) -> schemas.ModelFile:
    if to == 'lts':
        return storage.model_to_document(ults_to_lts(require_ults(m)))
    if to == 'ults-nu':
        return storage.model_to_document(lts_to_ults_nu(require_lts(m)))
    if to == 'ults-ac':
        return storage.model_to_document(lts_to_ults_ac(require_lts(m)))
    raise ValueError(f"unknown translation target {to!r}")


def classify_model(m: Model) -> schemas.ClassReportOut:
    report = classify(require_ults(m))
    return schemas.ClassReportOut(
        is_nu_style=report.is_nu_style,
        is_active=report.is_active,
        is_se_compositional=report.is_se_compositional,
        active_witness=planset_out(report.active_witness) if report.active_witness else None,
        counterexample=[planset_out(p) for p in report.counterexample] if report.counterexample else None,
    )


# ============ HARNESS OPERATIONS ============

def run_axioms(
    schema_names: Optional[Sequence[str]] = None,
    trials: Optional[int] = None,
    max_states: Optional[int] = None,
    source: str = 'general',
    seed: Optional[int] = None,
) -> schemas.HarnessReport:
    return soundness_harness(schema_names, trials=trials, max_states=max_states, source=source, seed=seed)
