from typing import Any, Dict, List, Optional, Tuple
from pydantic import BaseModel, Field, root_validator, validator


class StateEntry(BaseModel):
    id: str = Field(..., min_length=1)
    val: List[str] = []

    @validator('id')
    def id_not_blank(cls, v):
        if not v.strip():
            raise ValueError('State id cannot be empty')
        return v


class ModelFile(BaseModel):
    """Model document. LTS documents omit `agents` and `plansets`."""
    atoms: List[str] = []
    agents: Optional[List[str]] = None
    states: List[StateEntry] = Field(..., min_items=1)
    actions: List[str] = []
    rel: Dict[str, List[Tuple[str, str]]] = {}
    # agent -> plan sets; a plan set is a list of plans, a plan a list of action names
    plansets: Optional[Dict[str, List[List[List[str]]]]] = None
    class_map: Optional[Dict[str, str]] = None
    point: Optional[str] = None
    metadata: Optional[Dict[str, Any]] = None

    @validator('agents')
    def agents_not_empty(cls, v):
        if v is not None and not v:
            raise ValueError('Agent list cannot be empty')
        return v

    @root_validator(skip_on_failure=True)
    def agents_match_plansets(cls, values):
        agents, plansets = values.get('agents'), values.get('plansets')
        if (agents is None) != (plansets is None):
            raise ValueError('agents and plansets must be given together')
        return values

    class Config:
        extra = 'forbid'


class ViolationOut(BaseModel):
    clause: str
    pair: Optional[Tuple[str, str]] = None
    agent: Optional[str] = None
    definable: List[str] = []
    target: List[str] = []
    detail: str = ''


# ============ REQUEST BODIES ============

class CheckRequest(BaseModel):
    model: ModelFile
    state: str = Field(..., min_length=1)
    formula: str = Field(..., min_length=1)


class FormulaRequest(BaseModel):
    formula: str = Field(..., min_length=1)
    agents: List[str] = ['1']

    @validator('agents')
    def agents_not_empty(cls, v):
        if not v:
            raise ValueError('Agent list cannot be empty')
        return v


class PairRequest(BaseModel):
    left: ModelFile
    left_state: str
    right: ModelFile
    right_state: str


class FilterRequest(BaseModel):
    model: ModelFile
    formula: str = Field(..., min_length=1)


class TranslateRequest(BaseModel):
    model: ModelFile
    to: str

    @validator('to')
    def known_target(cls, v):
        if v not in ('lts', 'ults-nu', 'ults-ac'):
            raise ValueError("to must be one of 'lts', 'ults-nu', 'ults-ac'")
        return v


class ClassifyRequest(BaseModel):
    model: ModelFile


class AxiomsRequest(BaseModel):
    schemas: Optional[List[str]] = None
    trials: int = Field(100, ge=1, le=100000)
    max_states: int = Field(4, ge=1, le=8)
    source: str = 'general'
    seed: Optional[int] = None

    @validator('source')
    def known_source(cls, v):
        if v not in ('general', 'ults-nu', 'ults-ac'):
            raise ValueError("source must be one of 'general', 'ults-nu', 'ults-ac'")
        return v


# ============ RESPONSE BODIES ============

class CheckOut(BaseModel):
    verdict: bool
    witnesses: List[List[List[str]]] = []
    extension: List[str]


class SatOut(BaseModel):
    satisfiable: bool
    bound: int
    model: Optional[ModelFile] = None
    point: Optional[str] = None


class ValidOut(BaseModel):
    valid: bool
    bound: int


class EquivOut(BaseModel):
    equivalent: bool
    fact: Optional[ViolationOut] = None


class BisimOut(BaseModel):
    bisimilar: bool
    relation: Optional[List[Tuple[str, str]]] = None
    violation: Optional[ViolationOut] = None


class ClassReportOut(BaseModel):
    is_nu_style: bool
    is_active: bool
    is_se_compositional: bool
    active_witness: Optional[List[List[str]]] = None
    counterexample: Optional[List[List[List[str]]]] = None


class Counterexample(BaseModel):
    schema_name: str
    formula: str
    state: str
    model: ModelFile


class SchemaResult(BaseModel):
    schema_name: str
    trials: int
    counterexamples: int


class HarnessReport(BaseModel):
    source: str
    seed: int
    max_states: int
    results: List[SchemaResult] = []
    counterexamples: List[Counterexample] = []

    @property
    def clean(self) -> bool:
        return all(r.counterexamples == 0 for r in self.results)
