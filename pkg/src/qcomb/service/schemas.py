"""Request and response models for the qcomb service."""

from __future__ import annotations

from pydantic import BaseModel, Field, model_validator


class EvalRequest(BaseModel):
    """Filter and state, each by catalog name or as inline text."""

    filter_name: str | None = None
    filter_source: str | None = None
    state_name: str | None = None
    state_text: str | None = None
    brute: bool = False

    @model_validator(mode="after")
    def _exactly_one_each(self):
        if (self.filter_name is None) == (self.filter_source is None):
            raise ValueError("give exactly one of filter_name or filter_source")
        if (self.state_name is None) == (self.state_text is None):
            raise ValueError("give exactly one of state_name or state_text")
        return self


class EvalResponse(BaseModel):
    filter: str
    state: str
    value_re: float
    value_im: float
    modulus: float
    degree: int


class CheckRequest(BaseModel):
    check: str = Field(pattern="^(product|slocc|perm)$")
    filter_name: str | None = None
    filter_source: str | None = None
    state_name: str | None = None
    state_text: str | None = None
    samples: int = Field(default=200, ge=1)
    seed: int = 0
    tol: float | None = None
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _consistent(self):
        if (self.filter_name is None) == (self.filter_source is None):
            raise ValueError("give exactly one of filter_name or filter_source")
        if self.state_name is not None and self.state_text is not None:
            raise ValueError("give at most one of state_name or state_text")
        if self.check == "product" and (self.state_name or self.state_text):
            raise ValueError("product checks sample their own states")
        return self


class ClassifyRequest(BaseModel):
    state_name: str | None = None
    state_text: str | None = None
    tol: float = 1e-8
    rank_tol: float = 1e-10
    seed: int = 202

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.state_name is None) == (self.state_text is None):
            raise ValueError("give exactly one of state_name or state_text")
        return self


class ConcurrenceRequest(BaseModel):
    state_name: str | None = None
    state_text: str | None = None
    rho_text: str | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        given = [x for x in (self.state_name, self.state_text, self.rho_text) if x is not None]
        if len(given) != 1:
            raise ValueError("give exactly one of state_name, state_text, rho_text")
        return self


class ConcurrenceResponse(BaseModel):
    pure_value: float | None
    squared_value: float | None
    mixed_value: float | None


class Tangle3Request(BaseModel):
    state_name: str | None = None
    state_text: str | None = None

    @model_validator(mode="after")
    def _exactly_one(self):
        if (self.state_name is None) == (self.state_text is None):
            raise ValueError("give exactly one of state_name or state_text")
        return self


class Tangle3Response(BaseModel):
    via_F3_1: float
    via_F3_2: float
    via_polynomial: float
    agree: bool


class ParseRequest(BaseModel):
    source: str


class ParsedFilter(BaseModel):
    name: str
    num_qubits: int
    order: int
    degree: int
    labels: list[str]
    canonical: str


class ParseResponse(BaseModel):
    filters: list[ParsedFilter]


class FilterInfo(BaseModel):
    name: str
    num_qubits: int
    order: int
    degree: int
    prefactor: str
    labels: list[str]


class StateInfo(BaseModel):
    name: str
    num_qubits: int
    length: int
    normalized: bool


class HealthResponse(BaseModel):
    status: str
    version: str
