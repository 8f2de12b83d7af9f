"""
JSON report models. Exact rationals travel as "p/q" strings; every report carries
"schema": 1 and is written with sorted keys, so equal inputs give equal bytes.
"""

import json
from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = 1


class Report(BaseModel):
    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    status: str = "success"
    command: str


class ErrorReport(BaseModel):
    schema_version: int = Field(SCHEMA_VERSION, alias="schema")
    status: str = "error"
    error: str
    error_type: str
    exit_code: int
    details: Optional[Dict[str, Any]] = None


class GeneratedGraph(Report):
    name: str
    n: int
    m: int
    path: str


class DegreeSummary(BaseModel):
    min_deg: int
    max_deg: int
    sum_deg: int
    sum_deg_sq: int


class MaximalitySummary(BaseModel):
    is_maximal: bool
    c_star: Optional[str] = None


class IndependenceSummary(BaseModel):
    alpha: int
    count: int
    sets: List[List[int]]


class StarSummary(BaseModel):
    base_vertices: int
    added: List[List[int]]
    entwined: bool


class OracleSummary(BaseModel):
    min_edges: int
    bound: str
    tight: bool
    holds: bool
    witness: List[int]
    mode: str


class KeevashSudakovSummary(BaseModel):
    mean_square_degree_ok: bool
    max_degree_high: bool
    average_degree_ok: bool
    condition_a: bool
    condition_b: bool
    applies: bool


class FdFactSummary(BaseModel):
    d: int
    triangle_free: bool
    three_colorable: bool
    alpha: int
    maximum_set_count: int
    maximum_sets_are_neighborhoods: bool
    passed: bool


class CheckReport(Report):
    n: int
    m: int
    triangle_free: Optional[bool] = None
    triangle: Optional[List[int]] = None
    maximality: Optional[MaximalitySummary] = None
    degrees: Optional[DegreeSummary] = None
    mis: Optional[IndependenceSummary] = None
    entwined: Optional[bool] = None
    star: Optional[StarSummary] = None
    conjecture: Optional[OracleSummary] = None
    keevash_sudakov: Optional[KeevashSudakovSummary] = None
    fd_facts: Optional[FdFactSummary] = None


class OracleReport(Report):
    n: int
    result: OracleSummary


class PipelineSummary(BaseModel):
    vertices: List[int]
    edges: int
    d: int
    fd_half_mass: str
    lifted_mass: str
    meets_bound: bool


class HalfReport(Report):
    method: str
    n: int
    size: int
    bound: str
    pipeline: Optional[PipelineSummary] = None
    oracle: Optional[OracleSummary] = None
    agree: Optional[bool] = None


class DisturbedSummary(BaseModel):
    delta: str
    eps: str
    passed: bool
    disturbed: bool
    violated: Optional[str] = None
    covering_size: Optional[int] = None
    max_extra_neighbors: int
    balanced: bool
    max_deviation: str
    strong: bool
    j_set: List[int]
    broken_bound: Optional[str] = None


class ApproxReport(Report):
    template: str
    n: int
    partition_sizes: List[int]
    eps_achieved: str
    size_deviation: str
    edge_fraction: str
    diff_edges: int
    disturbed: Optional[DisturbedSummary] = None


class ClassifyReport(Report):
    outcome: str
    applicable: List[str]
    eps: str
    delta: str
    high: List[int]
    low: List[int]
    removed_edges: int
    eps_achieved: Optional[str] = None
    surjective: Optional[bool] = None
    bipartite_sides: Optional[List[int]] = None


class LemmaReport(Report):
    target: str
    budget: int
    seed: int
    passed: bool
    worst_excess: float
    worst_point: List[float]
    projection_residual: float
    reference_value: Optional[str] = None


class SuiteSummary(BaseModel):
    suite: str
    instances: int
    failures: int
    passed: bool
    notes: List[str] = []


class PipelineTestReport(Report):
    seed: int
    passed: bool
    suites: List[SuiteSummary]
    csv: Optional[str] = None


def dump(report: BaseModel) -> str:
    data = report.model_dump(mode="json", by_alias=True, exclude_none=True)
    return json.dumps(data, sort_keys=True)
