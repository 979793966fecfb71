from typing import Tuple

from fastapi import APIRouter, Depends

from .. import crud, schemas
from ..dependencies import check_subject
from ..models import Model

router = APIRouter(tags=['logic'])


@router.post('/check', response_model=schemas.CheckOut)
def check(subject: Tuple[Model, str, str] = Depends(check_subject)):
    m, state, formula = subject
    return crud.check_formula(m, state, formula)


@router.post('/sat', response_model=schemas.SatOut, response_model_exclude_none=True)
def sat(data: schemas.FormulaRequest):
    return crud.sat_formula(data.formula, data.agents)


@router.post('/valid', response_model=schemas.ValidOut)
def valid(data: schemas.FormulaRequest):
    return crud.valid_formula(data.formula, data.agents)
