"""
Axiom schemas of the knowing-how logic and a randomized soundness harness.

Schemas are written in the formula grammar with metavariables PSI, PHI,
CHI and THETA and the agent placeholder `i`. EMP and COMPKh hold on LTS
translations only; on general ULTSs the harness meets the `emp-fail`
counterexample on its first trial.
"""
import random
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Union

from . import storage
from .checker import extension
from .config import settings
from .exceptions import MissingBindingError, UnknownSchemaError
from .fixtures import emp_fail
from .generators import random_bindings, random_lts, random_ults
from .logging_config import get_logger
from .models import Ults
from .schemas import Counterexample, HarnessReport, SchemaResult
from .syntax import Atom, SurfaceFormula, atoms, format_formula, parse, substitute
from .transform import lts_to_ults_ac, lts_to_ults_nu

logger = get_logger(__name__)

METAVARIABLES = ('PSI', 'PHI', 'CHI', 'THETA')
AGENT_PLACEHOLDER = 'i'
SOURCES = ('general', 'ults-nu', 'ults-ac')
MAX_STORED_COUNTEREXAMPLES = 10


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    template: SurfaceFormula
    metavariables: tuple
    # model sources on which every instance is valid
    sound_over: FrozenSet[str]

    @classmethod
    def of(cls, name: str, text: str, sound_over: Iterable[str] = SOURCES) -> 'AxiomSchema':
        template = parse(text)
        used = tuple(v for v in METAVARIABLES if v in atoms(template))
        return cls(name, template, used, frozenset(sound_over))


SCHEMAS: Dict[str, AxiomSchema] = {
    s.name: s for s in (
        AxiomSchema.of('TAUT', '(PSI -> PHI) -> (~PHI -> ~PSI)'),
        AxiomSchema.of('DISTA', 'A(PHI -> PSI) -> (A PHI -> A PSI)'),
        AxiomSchema.of('TA', 'A PHI -> PHI'),
        AxiomSchema.of('4KhA', 'Kh[i](PSI, PHI) -> A Kh[i](PSI, PHI)'),
        AxiomSchema.of('5KhA', '~Kh[i](PSI, PHI) -> A ~Kh[i](PSI, PHI)'),
        AxiomSchema.of('KhE', '(E PSI & Kh[i](PSI, PHI)) -> E PHI'),
        AxiomSchema.of('KhA', '(A(CHI -> PSI) & Kh[i](PSI, PHI) & A(PHI -> THETA)) -> Kh[i](CHI, THETA)'),
        AxiomSchema.of('SCOND', 'A ~PSI -> Kh[i](PSI, PHI)'),
        AxiomSchema.of('COND', 'Kh[i](false, PHI)'),
        AxiomSchema.of('EMP', 'A(PSI -> PHI) -> Kh[i](PSI, PHI)', sound_over=('ults-nu', 'ults-ac')),
        AxiomSchema.of('COMPKh', '(Kh[i](PSI, PHI) & Kh[i](PHI, CHI)) -> Kh[i](PSI, CHI)', sound_over=('ults-nu', 'ults-ac')),
    )
}

# bindings under which EMP and COMPKh fail on the emp-fail model
FIXTURE_BINDINGS: Dict[str, Dict[str, SurfaceFormula]] = {
    'EMP': {'PSI': Atom('p'), 'PHI': Atom('p')},
    'COMPKh': {'PSI': Atom('p'), 'PHI': Atom('q'), 'CHI': Atom('r')},
}


def get_schema(name: str) -> AxiomSchema:
    try:
        return SCHEMAS[name]
    except KeyError:
        raise UnknownSchemaError(name)


def instantiate(
    schema: Union[str, AxiomSchema],
    bindings: Mapping[str, SurfaceFormula],
    agent: Optional[str] = None,
) -> SurfaceFormula:
    if isinstance(schema, str):
        schema = get_schema(schema)
    for metavariable in schema.metavariables:
        if metavariable not in bindings:
            raise MissingBindingError(schema.name, metavariable)
    agent = agent or settings.DEFAULT_AGENT
    return substitute(schema.template, dict(bindings), {AGENT_PLACEHOLDER: agent})


# ============ HARNESS ============

def _random_model(rng: random.Random, source: str, max_states: int) -> Ults:
    if source == 'ults-nu':
        return lts_to_ults_nu(random_lts(rng, max_states))
    if source == 'ults-ac':
        return lts_to_ults_ac(random_lts(rng, max_states))
    return random_ults(rng, max_states, agents=(settings.DEFAULT_AGENT,))


def _refute(m: Ults, f: SurfaceFormula) -> Optional[str]:
    """A state where `f` fails, if any."""
    ext = extension(m, f)
    missing = m.full & ~ext.mask
    if not missing:
        return None
    return m.states[(missing & -missing).bit_length() - 1]


def soundness_harness(
    schemas: Optional[Iterable[str]] = None,
    trials: Optional[int] = None,
    max_states: Optional[int] = None,
    source: str = 'general',
    seed: Optional[int] = None,
) -> HarnessReport:
    """Check random instances of each schema on random models of `source`."""
    if source not in SOURCES:
        raise ValueError(f"source must be one of {SOURCES}")
    names = list(schemas) if schemas else list(SCHEMAS)
    chosen = [get_schema(name) for name in names]
    if trials is None:
        trials = settings.HARNESS_TRIALS
    if trials < 1:
        raise ValueError('trials must be positive')
    if max_states is None:
        max_states = settings.HARNESS_MAX_STATES
    if max_states < 1:
        raise ValueError('max_states must be positive')
    seed = settings.SEED if seed is None else seed

    results: List[SchemaResult] = []
    stored: List[Counterexample] = []
    for schema in chosen:
        rng = random.Random(f'{seed}:{schema.name}')
        failures = 0
        for trial in range(trials):
            if trial == 0 and source == 'general' and schema.name in FIXTURE_BINDINGS:
                m, bindings = emp_fail(), FIXTURE_BINDINGS[schema.name]
            else:
                m = _random_model(rng, source, max_states)
                bindings = random_bindings(rng, schema.metavariables, agents=m.agents)
            instance = instantiate(schema, bindings, m.agents[0])
            state = _refute(m, instance)
            if state is None:
                continue
            failures += 1
            text = format_formula(instance)
            if failures == 1:
                logger.warning(f'{schema.name} fails at {state}: {text}', extra={'schema': schema.name, 'state': state})
            if len(stored) < MAX_STORED_COUNTEREXAMPLES:
                stored.append(Counterexample(
                    schema_name=schema.name, formula=text, state=state,
                    model=storage.model_to_document(m, point=state),
                ))
        results.append(SchemaResult(schema_name=schema.name, trials=trials, counterexamples=failures))
        logger.info(f'{schema.name}: {failures} counterexamples in {trials} trials over {source}')
    return HarnessReport(source=source, seed=seed, max_states=max_states, results=results, counterexamples=stored)
