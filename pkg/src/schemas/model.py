from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class SlipModelParams(BaseModel):
    """Slip regression: flat-terrain line in wheel speed plus a quadratic slope term."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    a_v: float = 0.0265
    b_v: float = 0.0256
    a_alpha: float = 0.00522
    b_alpha: float = 0.00105
    s_max: Annotated[float, Field(gt=0.0, lt=1.0)] = 0.95


class SinkageModelParams(BaseModel):
    """Sinkage regression in mm (negative down), affine in slip and load deviation."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    c_s: Annotated[float, Field(lt=0.0)] = -33.56
    c_F: float = -0.9291
    c_0: Annotated[float, Field(lt=0.0)] = -3.11
    F_ref: Annotated[float, Field(gt=0.0)] = 8.72


class ModelParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    slip: SlipModelParams = SlipModelParams()
    sinkage: SinkageModelParams = SinkageModelParams()


class RunSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    t: float
    v: float
    omega: Optional[float] = None
    alpha: float = 0.0
    F_z: Optional[float] = None
    z: Optional[float] = None


class SectionSample(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float = 0.0
    distance: float
    duration: float
    revolutions: float


class FitResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    slip: Optional[SlipModelParams] = None
    sinkage: Optional[SinkageModelParams] = None
    rms: float
    r2: float
    n_samples: int

    @field_validator("n_samples")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError("fit requires at least one sample")
        return value
