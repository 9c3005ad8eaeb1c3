from typing import Dict, List, Optional, TypedDict


class RunConfig(TypedDict):
    """Resolved settings of one CLI run, echoed into every JSON summary."""

    command: str
    n: Optional[int]
    t: Optional[int]
    t_min: Optional[int]
    t_max: Optional[int]
    coin: Optional[str]
    k: Optional[int]
    positions: Optional[List[int]]
    pair: Optional[List[int]]
    cut: Optional[List[int]]
    trials: Optional[int]
    seed: Optional[int]
    out: str
    formats: List[str]


class RunSummary(TypedDict):
    """JSON document written next to the CSV output of a command."""

    version: str
    config: RunConfig
    results: Dict[str, object]


# Written by the distance command
class DistanceSample(TypedDict):
    t: int
    mean_distance: float


class ClassicalSample(TypedDict):
    t: int
    empirical: float
    stderr: float
    formula: float


class SpectrumRow(TypedDict):
    """One distinct eigenvalue of M with its degeneracy."""

    mu: int
    eta: float
    degeneracy: int


# Produced by integrals.discrepancy_ledger
class LedgerRow(TypedDict):
    """One closed-form vs quadrature comparison."""

    integral: str
    args: str
    closed: complex
    quadrature: complex
    abs_error: float
    tolerance: float
    agrees: bool


class CheckResult(TypedDict):
    """Outcome of one invariant of the check suite."""

    name: str
    passed: bool
    detail: str
