"""
Closed-form constants for the gonality of Drinfeld modular curves.

Everything is exact. Values of the form a + b·√(q^δ) are kept as a
QuadraticSurd with rational a and b; signs and comparisons are decided by
squaring, never by floating point. Decimal renderings are for display.

Indices [Γ(1):Γ(𝔫)] of principal congruence subgroups are inputs; only
the index of Γ0(𝔫) is computed, from the factorisation of 𝔫.
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    computed_field,
    field_serializer,
    field_validator,
)

from gonality.errors import GonalityError, InvalidInputError
from gonality.models import format_fraction


def is_prime_power(n: int) -> bool:
    """True for p^k with p prime and k ≥ 1."""
    if n < 2:
        return False
    for p in range(2, math.isqrt(n) + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
    return True


class PlaceData(BaseModel):
    """The constant field size q and the degree δ of the place at infinity."""

    model_config = ConfigDict(frozen=True)

    q: int = Field(ge=2)
    delta: int = Field(default=1, ge=1)

    @field_validator("q")
    @classmethod
    def _prime_power(cls, value: int) -> int:
        if not is_prime_power(value):
            raise ValueError(f"q = {value} is not a prime power")
        return value

    @property
    def norm_at_infinity(self) -> int:
        """q^δ."""
        return self.q**self.delta


class IdealFactorization(BaseModel):
    """An ideal 𝔫 as (degree, multiplicity) of each prime dividing it."""

    model_config = ConfigDict(frozen=True)

    factors: tuple[tuple[int, int], ...] = ()

    @field_validator("factors")
    @classmethod
    def _positive(cls, value: tuple[tuple[int, int], ...]) -> tuple[tuple[int, int], ...]:
        for d, m in value:
            if d < 1 or m < 1:
                raise ValueError(f"Prime degree and multiplicity must be positive, got ({d}, {m})")
        return value

    @classmethod
    def parse(cls, text: str) -> "IdealFactorization":
        """Read "d^m,d^m,..." (or "d" for multiplicity one); "" is the unit ideal."""
        factors = []
        for part in filter(None, (p.strip() for p in text.split(","))):
            d, _, m = part.partition("^")
            try:
                factors.append((int(d), int(m) if m else 1))
            except ValueError as exc:
                raise InvalidInputError(f"Bad prime factor {part!r}; expected d or d^m") from exc
        return cls(factors=tuple(factors))

    @property
    def degree(self) -> int:
        return sum(d * m for d, m in self.factors)

    def norm(self, q: int) -> int:
        """|𝔫|_∞ = q^{Σ d·m}."""
        return q**self.degree


@dataclass(frozen=True)
class QuadraticSurd:
    """rational + irrational·√radicand, exactly."""

    rational: Fraction
    irrational: Fraction
    radicand: int

    def __post_init__(self) -> None:
        if self.radicand < 0:
            raise InvalidInputError("Radicand must be nonnegative")

    @property
    def is_rational(self) -> bool:
        return self.irrational == 0 or math.isqrt(self.radicand) ** 2 == self.radicand

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise GonalityError(f"{self} is irrational")
        return self.rational + self.irrational * math.isqrt(self.radicand)

    def sign(self) -> int:
        a, b = self.rational, self.irrational
        if self.is_rational:
            value = self.as_fraction()
            return (value > 0) - (value < 0)
        if a >= 0 and b >= 0:
            return int(a > 0 or b > 0)
        if a <= 0 and b <= 0:
            return -1
        # opposite signs: compare a² with b²·n
        diff = a * a - b * b * self.radicand
        if diff == 0:
            return 0
        dominant = a if diff > 0 else b
        return 1 if dominant > 0 else -1

    def scale(self, factor: Fraction | int) -> "QuadraticSurd":
        return QuadraticSurd(self.rational * factor, self.irrational * factor, self.radicand)

    def __float__(self) -> float:
        return float(self.rational) + float(self.irrational) * math.sqrt(self.radicand)

    def __str__(self) -> str:
        if self.is_rational:
            return format_fraction(self.as_fraction())
        a, b = format_fraction(self.rational), format_fraction(abs(self.irrational))
        op = "-" if self.irrational < 0 else "+"
        return f"({a} {op} {b}*sqrt({self.radicand}))"


class ExactValue(BaseModel):
    """An exact value with its decimal rendering and sign."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    value: QuadraticSurd

    @field_serializer("value")
    def _serialize_value(self, value: QuadraticSurd) -> str:
        return str(value)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def decimal(self) -> float:
        return float(self.value)

    @computed_field  # type: ignore[prop-decorator]
    @property
    def vacuous(self) -> bool:
        return self.value.sign() <= 0


def c_q_delta(place: PlaceData) -> QuadraticSurd:
    """
    (q^δ − 2√q^δ)/(5q^δ − 2√q^δ + 8) · 1/(q(q²−1)), rationalised.

    With n = q^δ and s = √n, multiplying by the conjugate 5n + 8 + 2s gives
    (5n² + 4n − (8n + 16)s) / (((5n + 8)² − 4n)·q(q² − 1)).
    """
    n, q = place.norm_at_infinity, place.q
    denominator = Fraction(((5 * n + 8) ** 2 - 4 * n) * q * (q * q - 1))
    value = QuadraticSurd(
        Fraction(5 * n * n + 4 * n) / denominator,
        Fraction(-(8 * n + 16)) / denominator,
        n,
    )
    if value.is_rational:
        value = QuadraticSurd(value.as_fraction(), Fraction(0), n)
    if value.sign() <= 0:
        logging.info(
            "c(q=%d, delta=%d) = %s is not positive: bounds are vacuous", q, place.delta, value
        )
    return value


def gamma0_index(place: PlaceData, ideal: IdealFactorization) -> int:
    """[Γ(1):Γ0(𝔫)] = |𝔫|_∞ · Π_{𝔭|𝔫} (1 + |𝔭|_∞⁻¹)."""
    q = place.q
    index = Fraction(ideal.norm(q))
    for d, _ in ideal.factors:
        index *= 1 + Fraction(1, q**d)
    if index.denominator != 1:
        raise GonalityError(f"Index {index} is not an integer")
    return index.numerator


def gonality_lower_bound_index(place: PlaceData, index: int) -> QuadraticSurd:
    """c_{q,δ}·[Γ(1):Γ]; vacuous when c_{q,δ} ≤ 0."""
    if index < 1:
        raise InvalidInputError("The index must be a positive integer")
    return c_q_delta(place).scale(index)


def modular_degree_lower_bound(place: PlaceData, ideal: IdealFactorization) -> QuadraticSurd:
    """½·c_{q,δ}·[Γ(1):Γ0(𝔫)], a lower bound on the degree of a modular parametrisation."""
    return c_q_delta(place).scale(Fraction(gamma0_index(place, ideal), 2))


def cusp_ramification(q: int, d: int) -> Fraction:
    """(q^{d+1} − 2)/((q − 1)q^d), never above q/(q − 1)."""
    if d < 1:
        raise InvalidInputError("d must be at least 1")
    PlaceData(q=q)
    value = Fraction(q ** (d + 1) - 2, (q - 1) * q**d)
    if value > Fraction(q, q - 1):
        raise GonalityError(f"R_c = {value} exceeds q/(q-1)")
    return value


def principal_graph_size(q: int, d: int, index: int) -> Fraction:
    """(2q^{d+1} − q − 1)/(q^{d+1}(q² − 1)(q − 1)) · [Γ(1):Γ(𝔫)] for deg 𝔫 = d."""
    if index < 0 or d < 1:
        raise InvalidInputError("Need d >= 1 and a nonnegative index")
    PlaceData(q=q)
    return Fraction(2 * q ** (d + 1) - q - 1, q ** (d + 1) * (q * q - 1) * (q - 1)) * index


def vertex_count_lower_bound(q: int, index: int) -> Fraction:
    """[Γ(1):Γ]/(q(q² − 1)) vertices at least in the quotient graph."""
    if index < 0:
        raise InvalidInputError("The index must be nonnegative")
    PlaceData(q=q)
    return Fraction(index, q * (q * q - 1))
