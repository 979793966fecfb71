"""
Model file I/O: JSON documents validated through `schemas.ModelFile` and
converted to and from the domain types in `models`.
"""
import json
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from pydantic import ValidationError

from . import schemas
from .exceptions import ModelFormatError
from .logging_config import get_logger
from .models import Lts, Model, PlanSet, Ults, relation_pairs

logger = get_logger(__name__)

PathLike = Union[str, Path]


# ============ DOCUMENT CONVERSION ============

def model_from_document(doc: Union[schemas.ModelFile, Mapping[str, Any]]) -> Model:
    if not isinstance(doc, schemas.ModelFile):
        try:
            doc = schemas.ModelFile.parse_obj(doc)
        except ValidationError as exc:
            raise ModelFormatError(_first_error(exc))

    states = [entry.id for entry in doc.states]
    val = {entry.id: entry.val for entry in doc.states}
    actions = list(doc.actions)
    if not actions:
        inferred = set(doc.rel)
        for collection in (doc.plansets or {}).values():
            inferred.update(a for planset in collection for plan in planset for a in plan)
        actions = sorted(inferred)
    atoms = list(doc.atoms) or None
    base = Lts.build(states, val, doc.rel, actions=actions, atoms=atoms)

    if doc.agents is None:
        return base
    plansets = {
        agent: tuple(PlanSet.of(planset) for planset in doc.plansets.get(agent, []))
        for agent in doc.agents
    }
    extra = set(doc.plansets) - set(doc.agents)
    if extra:
        raise ModelFormatError(f"plansets given for undeclared agents {sorted(extra)}")
    return Ults(base, tuple(doc.agents), plansets)


def model_to_document(
    m: Model,
    class_map: Optional[Mapping[str, str]] = None,
    point: Optional[str] = None,
    metadata: Optional[Mapping[str, Any]] = None,
) -> schemas.ModelFile:
    base = m.base if isinstance(m, Ults) else m
    doc: Dict[str, Any] = {
        'atoms': list(base.atoms),
        'states': [{'id': s, 'val': sorted(v)} for s, v in zip(base.states, base.val)],
        'actions': list(base.actions),
        'rel': {
            action: [[base.states[i], base.states[j]] for i, j in relation_pairs(rows)]
            for action, rows in base.rel.items()
        },
    }
    if isinstance(m, Ults):
        doc['agents'] = list(m.agents)
        doc['plansets'] = {
            agent: [[list(plan) for plan in planset] for planset in m.plansets[agent]]
            for agent in m.agents
        }
    if class_map is not None:
        doc['class_map'] = dict(class_map)
    if point is not None:
        doc['point'] = point
    if metadata is not None:
        doc['metadata'] = dict(metadata)
    return schemas.ModelFile.parse_obj(doc)


# ============ FILES ============

def read_document(path: PathLike) -> schemas.ModelFile:
    try:
        return schemas.ModelFile.parse_file(path)
    except ValidationError as exc:
        raise ModelFormatError(_first_error(exc))
    except (OSError, ValueError) as exc:
        raise ModelFormatError(f"cannot read {path}: {exc}")


def load_model(path: PathLike) -> Model:
    m = model_from_document(read_document(path))
    logger.debug(f'Loaded {type(m).__name__} with {m.n} states from {path}')
    return m


def write_document(doc: schemas.ModelFile, path: PathLike) -> None:
    Path(path).write_text(doc.json(exclude_none=True, indent=2) + '\n')


def save_model(m: Model, path: PathLike, **extras: Any) -> None:
    write_document(model_to_document(m, **extras), path)
    logger.debug(f'Saved {type(m).__name__} with {m.n} states to {path}')


def dumps_model(m: Model, **extras: Any) -> str:
    return model_to_document(m, **extras).json(exclude_none=True, indent=2)


def document_dict(m: Model, **extras: Any) -> Dict[str, Any]:
    return json.loads(model_to_document(m, **extras).json(exclude_none=True))


def _first_error(exc: ValidationError) -> str:
    error = exc.errors()[0]
    location = '.'.join(str(part) for part in error['loc'])
    return f"{location}: {error['msg']}"
