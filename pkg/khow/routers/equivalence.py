from typing import Tuple

from fastapi import APIRouter, Depends

from .. import crud, schemas
from ..dependencies import pointed_pair
from ..models import Model

router = APIRouter(tags=['equivalence'])

PointedPair = Tuple[Model, str, Model, str]


@router.post('/equiv', response_model=schemas.EquivOut)
def equiv(pair: PointedPair = Depends(pointed_pair)):
    return crud.equiv_models(*pair)


@router.post('/bisim', response_model=schemas.BisimOut)
def bisim(pair: PointedPair = Depends(pointed_pair)):
    """Bisimilarity with the certified relation, or the first violated clause."""
    return crud.bisim_models(*pair)
