from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from typing import List, Literal, Optional, Tuple, Union
from datetime import datetime
from enum import Enum

SUPPORTED_Q = (3, 7, 11, 19, 43, 67, 163)


class Method(str, Enum):
    CRITERION = "CRITERION"
    ORACLE = "ORACLE"
    BOTH = "BOTH"

    @property
    def uses_oracle(self) -> bool:
        return self != Method.CRITERION


class OutputFormat(str, Enum):
    CSV = "CSV"
    JSON = "JSON"


class EpRecord(BaseModel):
    model_config = ConfigDict(frozen=True)

    q: int
    p: int
    chi: int
    chi4: Optional[int] = None
    u: Optional[int] = None
    v: Optional[int] = None
    e: int
    h: Optional[int] = None
    v2h: Optional[int] = None
    agree: Optional[bool] = None

    @model_validator(mode="after")
    def check_invariants(self) -> "EpRecord":
        if self.chi not in (-1, 1):
            raise ValueError(f"chi must be +1 or -1, got {self.chi}")
        if self.e not in (-1, 0, 1):
            raise ValueError(f"e must be in {{-1, 0, 1}}, got {self.e}")
        if self.chi == -1 and (self.e != 0 or self.chi4 is not None):
            raise ValueError("chi = -1 forces e = 0 and chi4 = NA")
        if self.chi4 == -1 and self.e != 0:
            raise ValueError("chi4 = -1 forces e = 0")
        if self.u is not None:
            if self.v is None or self.u * self.u - self.q * self.v * self.v != self.p:
                raise ValueError(f"(u, v) = ({self.u}, {self.v}) does not solve u^2 - {self.q}v^2 = {self.p}")
            if self.u % 4 != 1 or self.v < 0:
                raise ValueError(f"(u, v) = ({self.u}, {self.v}) is not normalized")
        return self

    @property
    def predicted_k(self) -> int:
        """min(v2(h), 4) as predicted by the criterion chain"""
        if self.chi == -1:
            return 1
        return {1: 4, -1: 3, 0: 2}[self.e]


class Checkpoint(BaseModel):
    index: int
    p: int
    partial_sum: int


class DensityReport(BaseModel):
    q: int
    x_max: int
    n1: int
    count2: Optional[int] = None
    count4: int
    count8: int
    count16: int
    ratio2: str = "NA"
    ratio4: str
    ratio8: str
    ratio16: str
    partial_sum: int
    max_abs_partial: int
    nonzero_count: int
    cancellation_bound: str
    cancellation_ok: bool
    checkpoints: List[Checkpoint] = []


class VerifyResult(BaseModel):
    checked: int
    skipped: int
    mismatches: List[EpRecord]

    @property
    def ok(self) -> bool:
        return not self.mismatches


class UnitTableRow(BaseModel):
    q: int
    eps: Tuple[int, int, int, int]
    eps_sigma_eps: Tuple[int, int]
    coeff_row: Tuple[int, int]
    coeff_ok: bool
    orbit_matrix: Tuple[Tuple[int, int], Tuple[int, int]]
    orbit_ok: bool
    discriminant_ok: bool


class SequenceValue(BaseModel):
    q: int
    p: int
    generator: Tuple[int, int, int, int]
    value_re: str
    value_im: str
    e: int


class HealthResponse(BaseModel):
    status: str
    timestamp: datetime


class RunConfig(BaseModel):
    q: Union[int, Literal["ALL"]] = "ALL"
    x_max: int = 20000
    method: Method = Method.BOTH
    oracle_cap: int = 30_000_000
    jobs: int = 1
    out: Optional[str] = None
    format: OutputFormat = OutputFormat.CSV
    chunk_size: int = 256

    @field_validator("q", mode="before")
    @classmethod
    def parse_q(cls, value):
        if isinstance(value, str):
            if value.strip().upper() == "ALL":
                return "ALL"
            value = int(value)
        if value not in SUPPORTED_Q:
            raise ValueError(f"q must be one of {SUPPORTED_Q} or ALL, got {value}")
        return value

    @field_validator("method", "format", mode="before")
    @classmethod
    def upper_case(cls, value):
        return value.upper() if isinstance(value, str) else value

    @field_validator("x_max")
    @classmethod
    def check_x_max(cls, value: int) -> int:
        if value < 2:
            raise ValueError(f"x_max must be at least 2, got {value}")
        return value

    @field_validator("jobs", "chunk_size")
    @classmethod
    def check_positive(cls, value: int) -> int:
        if value < 1:
            raise ValueError(f"must be at least 1, got {value}")
        return value

    @field_validator("oracle_cap")
    @classmethod
    def check_cap(cls, value: int) -> int:
        if value < 0:
            raise ValueError(f"oracle_cap must be non-negative, got {value}")
        return value

    @property
    def q_values(self) -> Tuple[int, ...]:
        return SUPPORTED_Q if self.q == "ALL" else (self.q,)
