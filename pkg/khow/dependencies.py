from typing import Tuple

from . import schemas, storage
from .config import Settings, settings
from .models import Model


def get_settings() -> Settings:
    return settings


def check_subject(data: schemas.CheckRequest) -> Tuple[Model, str, str]:
    return storage.model_from_document(data.model), data.state, data.formula


def pointed_pair(data: schemas.PairRequest) -> Tuple[Model, str, Model, str]:
    """Both pointed models of a comparison request."""
    return (
        storage.model_from_document(data.left), data.left_state,
        storage.model_from_document(data.right), data.right_state,
    )
