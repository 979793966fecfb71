from fastapi import APIRouter

from .. import crud, schemas

router = APIRouter(tags=['harness'])


@router.post('/axioms', response_model=schemas.HarnessReport)
def run_axioms(data: schemas.AxiomsRequest):
    """Run the soundness harness; request limits keep it bounded."""
    return crud.run_axioms(
        data.schemas, trials=data.trials, max_states=data.max_states,
        source=data.source, seed=data.seed,
    )
