from fastapi import APIRouter

from .. import crud, schemas, storage

router = APIRouter(tags=['transforms'])


@router.post('/filter', response_model=schemas.ModelFile, response_model_exclude_none=True)
def filter_model(data: schemas.FilterRequest):
    return crud.filter_model(storage.model_from_document(data.model), [data.formula])


@router.post('/translate', response_model=schemas.ModelFile, response_model_exclude_none=True)
def translate(data: schemas.TranslateRequest):
    return crud.translate_model(storage.model_from_document(data.model), data.to)


@router.post('/classify', response_model=schemas.ClassReportOut)
def classify(data: schemas.ClassifyRequest):
    return crud.classify_model(storage.model_from_document(data.model))
