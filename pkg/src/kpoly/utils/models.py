from typing import Optional

from pydantic import BaseModel, ConfigDict, Field


class GHBounds(BaseModel):
    """Gromov-Hausdorff bounds between two finite metric spaces.

    Attributes:
        lower: Certified lower bound.
        upper: Half the distortion of `certificate`.
        exact: Exact value when the exhaustive search ran.
        certificate: Related index pairs (i in X, j in Y) realising `upper`.
    """

    lower: float
    upper: float
    exact: Optional[float] = None
    certificate: list[tuple[int, int]] = Field(default_factory=list)


class ConvergenceRow(BaseModel):
    level: int
    delta: float
    gh_upper: float
    max_omega: float


class ReplacementRow(BaseModel):
    level: int
    delta: float
    distortion: float


class SemicontinuityRow(BaseModel):
    level: int
    omega: float
    omega_limit: float
    max_new_omega: float
    holds: bool


class ConicalNetRow(BaseModel):
    level: int
    delta: float
    kappa: float
    min_omega: float
    max_omega: float
    conical_vertices: int
    num_vertices: int
    alexandrov: bool


class CurvatureRow(BaseModel):
    delta: float
    inf_ratio: float
    sup_ratio: float
    n_accepted: int


class WarpSummary(BaseModel):
    """Parameters of the smoothing profile for one cone."""

    model_config = ConfigDict(populate_by_name=True)

    lam: float = Field(alias='lambda')
    A: float
    B: float
    amp: float
    phi: float
    residual: float


class AuditCell(BaseModel):
    """Comparison of the transcribed and the matched coefficients at one grid point."""

    lam: float
    epsilon: float
    matched_A: float
    matched_B: float
    closed_A: float
    closed_B: float
    rel_error_A: float
    rel_error_B: float
    agrees: bool
    first_mismatch: Optional[str] = None


class FormulaAudit(BaseModel):
    passed: bool
    rtol: float
    cells: list[AuditCell]
    first_mismatch: Optional[str] = None
