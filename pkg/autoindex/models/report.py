from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class RunMode(str, Enum):
    AUTO = "auto"
    NAIVE = "naive"
    SCAN = "scan"


class AssignmentEntry(BaseModel):
    search: str
    index: str


class RelationReport(BaseModel):
    name: str
    searches: List[str] = Field(default_factory=list)
    chains: List[str] = Field(default_factory=list)
    indexes: List[str] = Field(default_factory=list)
    assignment: List[AssignmentEntry] = Field(default_factory=list)
    naive_index_count: int = 0
    tuples: Optional[int] = None
    index_inserts: Optional[int] = None
    order_inserts: Dict[str, int] = Field(default_factory=dict)

    @property
    def auto_index_count(self) -> int:
        return len(self.indexes)


class RuleReport(BaseModel):
    head: str
    line: Optional[int] = None
    loops: List[str] = Field(default_factory=list)
    inserted: Optional[int] = None


class RunReport(BaseModel):
    mode: RunMode = RunMode.AUTO
    relations: List[RelationReport] = Field(default_factory=list)
    rules: List[RuleReport] = Field(default_factory=list)
    tuples_loaded: int = 0
    tuples_derived: int = 0
    index_inserts: Dict[str, int] = Field(default_factory=dict)
    timings: Dict[str, float] = Field(default_factory=dict)
    outputs: List[str] = Field(default_factory=list)

    def relation(self, name: str) -> RelationReport:
        for relation in self.relations:
            if relation.name == name:
                return relation
        raise KeyError(name)


class BenchReport(BaseModel):
    runs: Dict[RunMode, RunReport] = Field(default_factory=dict)
    outputs_identical: bool = True
    insert_ratio: Optional[float] = None
    relation_ratios: Dict[str, float] = Field(default_factory=dict)


class SuiteResult(BaseModel):
    name: str
    trials: int = 0
    failures: int = 0
    seconds: float = 0.0
    counterexample: Optional[str] = None

    @property
    def passed(self) -> bool:
        return self.failures == 0


class VerifyReport(BaseModel):
    seed: int
    trials: int
    suites: List[SuiteResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(suite.passed for suite in self.suites)
