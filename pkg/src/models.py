"""
File schemas for instances, reports and certificates.
Every model rejects unknown fields so malformed files fail loudly.
"""

from typing import Dict, List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, field_validator, model_validator

from src.exact_geometry import Hyperplane, Instance, format_scalar, to_scalar

ScalarValue = Union[StrictInt, StrictStr]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra='forbid')


# ========================================
# INSTANCE FILE
# ========================================

class InstanceFile(StrictModel):
    d: StrictInt = Field(ge=1)
    points: List[List[ScalarValue]] = Field(min_length=1)
    z: List[ScalarValue]

    @field_validator('points', 'z')
    @classmethod
    def _scalars_in_lowest_terms(cls, value):
        flat = [c for row in value for c in row] if value and isinstance(value[0], list) else value
        for c in flat:
            if isinstance(c, str) and str(format_scalar(to_scalar(c))) != c.strip():
                raise ValueError(f"scalar {c!r} is not an integer or a fraction p/q in lowest terms")
        return value

    def to_instance(self) -> Instance:
        return Instance.from_coordinates(self.d, self.points, self.z)

    @classmethod
    def from_instance(cls, inst: Instance) -> 'InstanceFile':
        return cls(
            d=inst.d,
            points=[[format_scalar(c) for c in p] for p in inst.points],
            z=[format_scalar(c) for c in inst.z],
        )


# ========================================
# POSITION / COUNTS / VERDICTS
# ========================================

class PositionReport(StrictModel):
    set_in_general_position: bool
    z_in_general_position: bool
    set_witness: Optional[List[int]] = None
    z_witness: Optional[List[int]] = None

    @model_validator(mode='after')
    def _witness_iff_violation(self):
        if (self.set_witness is None) != self.set_in_general_position:
            raise ValueError("set witness must be present exactly when S is not in general position")
        if (self.z_witness is None) != self.z_in_general_position:
            raise ValueError("z witness must be present exactly when z is not in general position")
        return self


class PointCounts(StrictModel):
    index: int
    c: int = Field(ge=0)
    conv: int = Field(ge=0)
    smpl: int = Field(ge=0)
    a_lost: int = Field(ge=0)      # A_s: restriction to S \ s is not maximal there
    a_survive: int = Field(ge=0)   # A^s: restriction to S \ s stays maximal
    a_after_deletion: int = Field(ge=0)  # |A(S \ s)|, recomputed on S \ s
    h: int = Field(ge=0)
    f: int = Field(ge=0)
    h_essential: int = Field(ge=0)


class CountsReport(StrictModel):
    c: int = Field(ge=0)
    a: int = Field(ge=0)
    smpl: int = Field(ge=0)
    conv: int = Field(ge=0)
    h: int = Field(ge=0)
    f: int = Field(ge=0)
    h_essential: int = Field(ge=0)
    per_point: List[PointCounts] = []

    @model_validator(mode='after')
    def _survivors_partition_a(self):
        for row in self.per_point:
            if row.a_lost + row.a_survive != self.a:
                raise ValueError(f"A^s and A_s do not partition A(S) at point {row.index}")
        return self


class TheoremVerdict(StrictModel):
    applicable: bool
    holds: bool
    lhs: int
    rhs: int
    relation: str  # '<=' or '=='
    conditional_on_general_position: bool = True


class TheoremVerdicts(StrictModel):
    bg_question: TheoremVerdict
    main_bound: TheoremVerdict
    weak_bound: TheoremVerdict
    simplex_equality: TheoremVerdict
    d_plus_two_equality: TheoremVerdict
    large_set_bound: TheoremVerdict
    strengthened_bound: TheoremVerdict
    plane_bound: TheoremVerdict

    def items(self):
        return [(name, getattr(self, name)) for name in type(self).model_fields]


# ========================================
# FAMILIES / REPORTS
# ========================================

class HyperplaneRecord(StrictModel):
    normal: List[int]
    offset: int
    essential: bool = False
    incident: List[int] = []

    @classmethod
    def from_hyperplane(cls, H: Hyperplane, **kwargs) -> 'HyperplaneRecord':
        return cls(normal=list(H.normal), offset=H.offset, **kwargs)

    def to_hyperplane(self) -> Hyperplane:
        return Hyperplane(normal=tuple(self.normal), offset=self.offset)


class FamilyRecord(StrictModel):
    C: List[List[int]] = []
    A: List[List[int]] = []
    Smpl: List[List[int]] = []
    F: List[List[int]] = []
    H: List[HyperplaneRecord] = []


class InstanceReport(StrictModel):
    instance: InstanceFile
    position: PositionReport
    counts: CountsReport
    families: FamilyRecord
    verdicts: TheoremVerdicts
    enumeration_path: str
    structure_checks: Dict[str, bool] = {}
    falsifications: List[str] = []


class BatchEntry(StrictModel):
    source: str
    ok: bool
    error: Optional[str] = None
    report: Optional[InstanceReport] = None


class BatchReport(StrictModel):
    entries: List[BatchEntry] = []
    tally: Dict[str, int] = {}

    @property
    def falsified(self) -> bool:
        return any(e.report is not None and e.report.falsifications for e in self.entries)


class OracleComparison(StrictModel):
    fast_C: List[List[int]]
    oracle_C: List[List[int]]
    fast_A: List[List[int]]
    oracle_A: List[List[int]]
    C_equal: bool
    A_equal: bool


# ========================================
# CERTIFICATES
# ========================================

class SimplexCertificate(StrictModel):
    vertices: List[int]
    verified: bool


class FacetCertificate(StrictModel):
    T: List[int]
    s: int
    hyperplane: HyperplaneRecord


class GoodVertexCertificate(StrictModel):
    u: int
    simplex: List[int]
    hyperplane: HyperplaneRecord
    case: str  # 'simplex-interior', 'simplex-boundary' or 'non-simplex'


class SeparationCertificate(StrictModel):
    A: List[int]
    hyperplane: HyperplaneRecord
