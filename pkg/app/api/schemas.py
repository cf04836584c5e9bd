from pydantic import BaseModel
from typing import List

class TableRow(BaseModel):
    i: int
    j: int
    delta: int
    dim: int

class HomologyDocument(BaseModel):
    diagram: str
    crossings: int
    n_plus: int
    n_minus: int
    reduced: bool
    total_dim: int
    width: int | None
    rows: List[TableRow]
    euler: str | None = None

class JonesDocument(BaseModel):
    diagram: str
    crossings: int
    jones: str
    euler: str
    agree: bool

class GridEntry(BaseModel):
    i: int
    delta: int
    dim0: int
    dim1: int

class GridArrow(BaseModel):
    source: List[int]
    target: List[int]
    rank: int

class CheckDocument(BaseModel):
    name: str
    applies: bool
    holds: bool
    detail: str

class TripleDocument(BaseModel):
    diagram: str
    crossing: int
    sign: int
    w_minus: int
    w_plus: int
    entries: List[GridEntry]
    arrows: List[GridArrow]
    connecting_rank: int
    exact: bool
    checks: List[CheckDocument]

class StableEntry(BaseModel):
    i: int
    delta: int
    dim: int
    evidence: str

class StableCandidate(BaseModel):
    i: int
    delta: int
    dim: int

class StableDocument(BaseModel):
    p: int
    cutoff: int
    stage: int
    complete: bool
    entries: List[StableEntry]
    candidates: List[StableCandidate]
    matches_algebra: bool | None

class ClassRef(BaseModel):
    q: int
    i: int
    delta: int

class ProductDocument(BaseModel):
    p: int
    left: ClassRef
    right: ClassRef
    result: ClassRef
    zero: bool
    commutes: bool

class RankRow(BaseModel):
    i: int
    delta: int
    rank: int
    dim: int

class VerdictDocument(BaseModel):
    relation: str
    holds: bool
    detail: str
    certificate: List[RankRow] = []
