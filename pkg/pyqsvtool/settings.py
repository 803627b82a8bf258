from pydantic import BaseModel, ConfigDict, Field

'''
Numerical settings shared across modules.

Operations read the module level `settings` instance for their defaults and
accept an explicit keyword to override any of them.
'''


class Settings(BaseModel):
    model_config = ConfigDict(validate_assignment=True)

    max_dimension: int = Field(2 ** 12, ge=2, description="Largest dense Hilbert space dimension")
    hermitian_atol: float = Field(1e-10, gt=0)
    fixation_atol: float = Field(1e-8, gt=0)
    zero_branch_atol: float = Field(1e-12, gt=0)
    strict_paper_bounds: bool = False
    workers: int = Field(1, ge=1)


settings = Settings()
