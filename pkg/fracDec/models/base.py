from pydantic import BaseModel


class FracDecModel(BaseModel):
    """
    Immutable pydantic base for every report; exact rationals and decimals are allowed as field types.
    """

    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False
