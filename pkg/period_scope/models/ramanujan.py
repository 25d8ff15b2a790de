from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from period_scope.models.arrays import FloatVector, IntMatrix


class RamanujanBasis(BaseModel):
    """
    Integer basis of R^p built from the Ramanujan sums of every divisor q of p.
    Block q holds the first phi(q) circular shifts of the p-periodic extension of c_q.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    period: int = Field(..., ge=1)
    divisors: List[int]
    basis: IntMatrix = Field(..., description="p x p integer matrix, columns grouped by divisor.")
    block_offsets: Dict[int, Tuple[int, int]] = Field(
        ..., description="Divisor q -> (start column, width phi(q))."
    )

    def block(self, q: int) -> np.ndarray:
        start, width = self.block_offsets[q]
        return self.basis[:, start : start + width]


class Decomposition(BaseModel):
    """
    Projection of a folded signal onto the Ramanujan subspaces of the divisors of a period.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    period: int = Field(..., ge=1)
    folded: FloatVector = Field(..., description="Period-averaged signal of length p.")
    projections: Dict[int, FloatVector] = Field(
        ..., description="Divisor q -> component x_q of the folded signal in S_q."
    )
    energies: Dict[int, float] = Field(..., description="Divisor q -> squared norm of x_q.")
    dc_value: float = Field(..., description="Constant level d of the S_1 projection.")

    @property
    def total_energy(self) -> float:
        return float(sum(self.energies.values()))


class ComponentSet(BaseModel):
    """
    Reconstructed hidden components, each rendered over the full composite period.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    components: Dict[int, FloatVector] = Field(
        ..., description="Hidden period p_i -> reconstructed length-p vector."
    )
    alphas: Dict[int, float] = Field(
        ..., description="Hidden period p_i -> share alpha_i of the DC level."
    )
    dc_value: float

    def total(self) -> np.ndarray:
        return np.sum(list(self.components.values()), axis=0)
