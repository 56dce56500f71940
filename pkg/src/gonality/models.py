"""
Pydantic models for search budgets and bound reports.

Reports serialize to the JSON schema used by the CLI and the golden tests:
{graph: {...}, bounds: [{name, kind, value_exact, value_float, ...}],
witness_path}. Exact values are rendered as "p/q" strings.
"""

from enum import Enum
from fractions import Fraction
from typing import Any

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_serializer,
    model_validator,
)

from gonality.config import DEFAULT_LEAF_PATH_LENGTH, DEFAULT_MAX_SUBDIVISIONS, SEARCH_NODE_LIMIT


def format_fraction(value: Fraction) -> str:
    """Render a Fraction as "p" or "p/q"."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


class BoundKind(str, Enum):
    """Whether a bound is a lower or an upper bound."""

    LOWER = "lower"
    UPPER = "upper"


class BoundEntry(BaseModel):
    """
    One bound with its provenance.

    Attributes
    ----------
    name : str
        Short identifier, e.g. "spectral", "treewidth", "search".
    kind : BoundKind
        Lower or upper bound.
    target : str
        The invariant bounded: "sgon", "gon", "dgon", "degree", ...
    value_exact : Fraction
        Exact value.
    provenance : str
        Human-readable statement the bound rests on.

    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    kind: BoundKind
    target: str = "sgon"
    value_exact: Fraction
    provenance: str = ""

    @field_serializer("value_exact")
    def _serialize_exact(self, value: Fraction) -> str:
        return format_fraction(value)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def value_float(self) -> float:
        return float(self.value_exact)


class GraphInfo(BaseModel):
    """Classical invariants of the graph a report is about."""

    name: str | None = None
    vertices: int
    edges: int
    genus: int
    max_degree: int
    volume: int
    edge_connectivity: int


class BoundReport(BaseModel):
    """Bundle of lower and upper bounds, with an optional witness."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    graph: GraphInfo
    bounds: list[BoundEntry] = Field(default_factory=list)
    status: str | None = None
    witness_path: str | None = None
    witness: Any = Field(default=None, exclude=True)

    @model_validator(mode="after")
    def _lower_below_upper(self) -> "BoundReport":
        for target in {b.target for b in self.bounds}:
            mine = [b for b in self.bounds if b.target == target]
            lows = [b.value_exact for b in mine if b.kind == BoundKind.LOWER]
            ups = [b.value_exact for b in mine if b.kind == BoundKind.UPPER]
            if lows and ups and max(lows) > min(ups):
                raise ValueError(
                    f"Inconsistent {target} bounds: lower {max(lows)} > upper {min(ups)}"
                )
        return self

    def best(self, target: str, kind: BoundKind) -> Fraction | None:
        """Largest lower bound or smallest upper bound recorded for `target`."""
        values = [b.value_exact for b in self.bounds if b.target == target and b.kind == kind]
        if not values:
            return None
        return max(values) if kind == BoundKind.LOWER else min(values)


class SearchBudget(BaseModel):
    """
    Limits of the refinement search for stable gonality.

    `max_leaf_paths` None means unlimited; `max_degree` None means the
    Brill–Noether bound when the genus is at least 2, else unlimited.
    """

    model_config = ConfigDict(frozen=True)

    max_subdivisions: int = Field(default=DEFAULT_MAX_SUBDIVISIONS, ge=0)
    max_leaf_paths: int | None = Field(default=None, ge=0)
    max_leaf_length: int = Field(default=DEFAULT_LEAF_PATH_LENGTH, ge=0)
    max_degree: int | None = Field(default=None, ge=1)
    node_limit: int = Field(default=SEARCH_NODE_LIMIT, ge=1)

    def allows_leaves(self) -> bool:
        return self.max_leaf_length > 0 and self.max_leaf_paths != 0
