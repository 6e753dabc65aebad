from enum import Enum
from typing import Annotated, Optional

from pydantic import BaseModel, ConfigDict, Field


class ContactMode(Enum):
    quasi_static: str = "quasi_static"
    ode: str = "ode"


class ContactParams(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)

    N: Annotated[int, Field(ge=1)] = 1
    F_z_min: Annotated[float, Field(gt=0.0)] = 0.5
    denom_min: Annotated[float, Field(gt=0.0)] = 0.001
    v_min: Annotated[float, Field(ge=0.0)] = 0.1
    mode: ContactMode = ContactMode.quasi_static


class ContactState(BaseModel):
    """Per-wheel compliant contact.

    `z_body` is the vertical position of the physics geometry relative to the
    undisturbed surface in meters (negative inside the soil), `p` the matching
    penetration, `zdot` its vertical velocity and `z_latched` the last
    committed sinkage in mm (negative down), None before the first update.
    """

    model_config = ConfigDict(frozen=True)

    k: Annotated[float, Field(gt=0.0)] = 1.0
    c: Annotated[float, Field(ge=0.0)] = 0.0
    p: Annotated[float, Field(ge=0.0)] = 0.0
    z_body: float = 0.0
    zdot: float = 0.0
    z_latched: Optional[float] = None
    force: float = 0.0
