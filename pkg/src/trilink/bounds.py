"""Exact evaluation of the crossing-number and polytopality bounds.

Polytopality ``p(T)`` is never computed; it is bracketed according to the
available certificate:

* polytopal (convex 4D witness):   p = n
* shellable (verified shelling):   n <= p <= 7n
* nothing:                         n <= p < 2^(200 n^2)

Crossing number bounds for a link of ``k`` edges in ``T`` with ``n`` tetrahedra:

* polytopal:  Cr < 4 n^2
* shellable:  Cr < 10^9 n^4
* general:    Cr < 2^(810 n^2)
* from p:     Cr < (k + 512 p^2 + 869 p + 376)^2

and the expansion distance satisfies ``p/(3n) - 5/3 - n < d <= 512 p^2 + 869 p + 376``.
"""

from __future__ import annotations

import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Union

POLYTOPAL = "polytopal"
SHELLABLE = "shellable"
STRAIGHT_LINE = "straight_line"
NONE = "none"
CERTIFICATES = (POLYTOPAL, SHELLABLE, STRAIGHT_LINE, NONE)


class BoundsError(ValueError):
    pass


@contextmanager
def unlimited_int_digits():
    """Lift the interpreter's int/str conversion limit for exact big integers."""
    getter = getattr(sys, "get_int_max_str_digits", None)
    if getter is None:
        yield
        return
    old = getter()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(old)


def decimal_digits(x: int) -> int:
    """Number of decimal digits of ``|x|`` without converting to a string."""
    x = abs(x)
    if x == 0:
        return 1
    guess = int(x.bit_length() * math.log10(2)) + 1
    while guess > 1 and 10 ** (guess - 1) > x:
        guess -= 1
    while 10**guess <= x:
        guess += 1
    return guess


@dataclass(frozen=True)
class Power:
    """``base ** exponent + offset``, expanded only on demand."""

    base: int
    exponent: int
    offset: int = 0

    def value(self) -> int:
        return self.base**self.exponent + self.offset

    def log2_floor(self) -> int:
        """A lower bound on log2 of the value (exact for base 2, offset >= -1)."""
        if self.base == 2 and self.offset >= -1:
            return self.exponent - (self.offset < 0)
        return self.value().bit_length() - 1

    def digits(self) -> int:
        if self.exponent * math.log2(self.base) < 200_000:
            return decimal_digits(self.value())
        # base**exponent is never a power of ten here, so a small offset cannot change
        # the digit count; 40 guard digits make the floor of the logarithm exact
        with localcontext() as ctx:
            ctx.prec = len(str(self.exponent)) + 40
            return int(Decimal(self.exponent) * Decimal(self.base).log10()) + 1

    def __int__(self):
        return self.value()

    def to_json_obj(self) -> dict:
        return {"base": self.base, "exponent": self.exponent, "offset": self.offset,
                "digits": self.digits()}

    @classmethod
    def from_json_obj(cls, obj) -> "Power":
        return cls(int(obj["base"]), int(obj["exponent"]), int(obj.get("offset", 0)))

    def __str__(self):
        tail = f" {'+' if self.offset > 0 else '-'} {abs(self.offset)}" if self.offset else ""
        return f"{self.base}^{self.exponent}{tail}"


@dataclass(frozen=True)
class ExpansionSquare:
    """``(k + 512 p^2 + 869 p + 376)^2`` for a symbolic ``p``, expanded on demand."""

    k: int
    p: Power

    def value(self) -> int:
        return (self.k + expansion_count_bound(self.p.value())) ** 2

    def log2_floor(self) -> int:
        return 2 * (9 + 2 * self.p.log2_floor())

    def to_json_obj(self) -> dict:
        return {"formula": "(k + 512*p^2 + 869*p + 376)^2", "k": self.k, "p": self.p.to_json_obj()}

    @classmethod
    def from_json_obj(cls, obj) -> "ExpansionSquare":
        return cls(int(obj["k"]), Power.from_json_obj(obj["p"]))

    def __str__(self):
        return f"({self.k} + 512*p^2 + 869*p + 376)^2 with p = {self.p}"


BigInt = Union[int, Power, ExpansionSquare]


def as_int(x: BigInt) -> int:
    return x.value() if isinstance(x, (Power, ExpansionSquare)) else int(x)


def is_below(x: int, bound: BigInt) -> bool:
    """``x < bound``, without expanding symbolic bounds that are obviously larger."""
    if isinstance(bound, (Power, ExpansionSquare)) and x.bit_length() <= bound.log2_floor():
        return True
    return x < as_int(bound)


def p_interval(n: int, certificate: str) -> tuple[int, BigInt]:
    if n < 5:
        raise BoundsError(f"a simplicial 3-sphere has at least 5 tetrahedra, got n = {n}")
    if certificate == POLYTOPAL:
        return n, n
    if certificate == SHELLABLE:
        return n, 7 * n
    if certificate in (NONE, STRAIGHT_LINE):
        return n, Power(2, 200 * n * n, -1)
    raise BoundsError(f"unknown certificate {certificate!r}")


def expansion_count_bound(p: int) -> int:
    """Upper bound on the number of expansions to a polytopal triangulation."""
    return 512 * p * p + 869 * p + 376


def cr_bound_from_p(k: int, p_hi: BigInt) -> BigInt:
    """Exact bound; kept symbolic when ``p_hi`` itself is a symbolic power."""
    if k < 3:
        raise BoundsError(f"a link has at least 3 edges, got k = {k}")
    if isinstance(p_hi, Power):
        return ExpansionSquare(k, p_hi)
    return (k + expansion_count_bound(p_hi)) ** 2


def shellable_display(n: int) -> int:
    """The inner polynomial for k = 2n, p = 7n, in closed form."""
    return 25088 * n * n + 6085 * n + 376


def shellable_inequality_holds(n: int) -> bool:
    return shellable_display(n) ** 2 < 10**9 * n**4


def general_inequality_holds(n: int) -> bool:
    inner = 512 * 2 ** (400 * n * n) + 869 * 2 ** (200 * n * n) + 2 * n + 376
    return inner * inner < 2 ** (810 * n * n)


def cr_bounds_all(n: int, k: int) -> dict:
    """The four crossing-number bounds at ``(n, k)`` plus the two displayed-inequality checks.

    ``thm_3_2`` here uses the general polytopality bound; see :func:`report`
    for the certificate-specific value.
    """
    if n < 5:
        raise BoundsError(f"n must be at least 5, got {n}")
    if k > 2 * n:
        raise BoundsError(f"k = {k} exceeds 2n = {2 * n}: a triangulation has at most 2n edges")
    if k < 3:
        raise BoundsError(f"a link has at least 3 edges, got k = {k}")
    return {
        "thm_1_1_1": 4 * n * n,
        "thm_1_1_2": 10**9 * n**4,
        "thm_1_1_3": Power(2, 810 * n * n),
        "thm_3_2": cr_bound_from_p(k, p_interval(n, NONE)[1]),
        "shellable_inequality": shellable_inequality_holds(n),
        "general_inequality": general_inequality_holds(n),
    }


def d_interval(n: int, p_lo: int, p_hi: BigInt) -> tuple[Fraction, BigInt]:
    """(exclusive lower bound, inclusive upper bound) on the expansion distance."""
    if n < 5:
        raise BoundsError(f"n must be at least 5, got {n}")
    lower = Fraction(p_lo, 3 * n) - Fraction(5, 3) - n
    return lower, expansion_distance_upper(p_hi)


def expansion_distance_upper(p_hi: BigInt) -> BigInt:
    return expansion_count_bound(p_hi) if isinstance(p_hi, int) else _SymbolicDistance(p_hi)


@dataclass(frozen=True)
class _SymbolicDistance:
    p: Power

    def value(self) -> int:
        return expansion_count_bound(self.p.value())

    def log2_floor(self) -> int:
        return 9 + 2 * self.p.log2_floor()

    def to_json_obj(self) -> dict:
        return {"formula": "512*p^2 + 869*p + 376", "p": self.p.to_json_obj()}


APPLICABLE = {
    POLYTOPAL: ("straight_line_k2", "thm_1_1_1", "thm_1_1_2", "thm_1_1_3", "thm_3_2"),
    SHELLABLE: ("thm_1_1_2", "thm_1_1_3", "thm_3_2"),
    STRAIGHT_LINE: ("straight_line_k2", "thm_1_1_3"),
    NONE: ("thm_1_1_3",),
}


@dataclass
class BoundReport:
    n: int
    k: int
    certificate: str
    p_interval: tuple[int, BigInt]
    d_interval: tuple[Fraction, BigInt]
    cr_bounds: dict
    applicable: tuple[str, ...]
    achieved: int | None = None
    s3_status: str = "3-manifold certified, S^3 assumed"
    notes: list = field(default_factory=list)

    def check(self) -> None:
        lo, hi = self.p_interval
        if not (self.n <= lo and (lo <= hi if isinstance(hi, int) else is_below(lo - 1, hi))):
            raise BoundsError("inconsistent polytopality interval")
        if self.achieved is not None:
            for key in self.applicable:
                if not is_below(self.achieved, self.cr_bounds[key]):
                    raise BoundsError(f"achieved crossing count {self.achieved} violates {key}")

    def to_json_obj(self) -> dict:
        with unlimited_int_digits():
            def enc(x):
                if hasattr(x, "to_json_obj"):
                    return x.to_json_obj()
                if isinstance(x, Fraction):
                    return f"{x.numerator}/{x.denominator}"
                return str(x)

            return {
                "n": self.n,
                "k": self.k,
                "certificate": self.certificate,
                "s3_status": self.s3_status,
                "p_interval": [enc(x) for x in self.p_interval],
                "d_interval": {"lower_exclusive": enc(self.d_interval[0]),
                               "upper": enc(self.d_interval[1])},
                "cr_bounds": {key: enc(v) for key, v in self.cr_bounds.items()},
                "applicable": list(self.applicable),
                "achieved": self.achieved,
                "notes": list(self.notes),
            }

    @classmethod
    def from_json_obj(cls, obj: dict) -> "BoundReport":
        def dec(x):
            if isinstance(x, dict) and "formula" in x:
                p = Power.from_json_obj(x["p"])
                return ExpansionSquare(int(x["k"]), p) if "k" in x else _SymbolicDistance(p)
            if isinstance(x, dict):
                return Power.from_json_obj(x)
            if "/" in x:
                return Fraction(x)
            return int(x)

        with unlimited_int_digits():
            return cls(
                n=obj["n"],
                k=obj["k"],
                certificate=obj["certificate"],
                p_interval=tuple(dec(x) for x in obj["p_interval"]),
                d_interval=(dec(obj["d_interval"]["lower_exclusive"]), dec(obj["d_interval"]["upper"])),
                cr_bounds={key: dec(v) for key, v in obj["cr_bounds"].items()},
                applicable=tuple(obj["applicable"]),
                achieved=obj["achieved"],
                s3_status=obj["s3_status"],
                notes=list(obj.get("notes", [])),
            )


def build_report(n: int, k: int, certificate: str, achieved: int | None = None,
                 generated: bool = False, straight_line: bool = False) -> BoundReport:
    """Assemble a report from an already-verified certificate."""
    if k > 2 * n:
        raise BoundsError(f"k = {k} exceeds 2n = {2 * n}: a triangulation has at most 2n edges")
    p_lo, p_hi = p_interval(n, certificate)
    d_lo, d_hi = d_interval(n, p_lo, p_hi)
    bounds = {
        "straight_line_k2": k * k,
        "thm_1_1_1": 4 * n * n,
        "thm_1_1_2": 10**9 * n**4,
        "thm_1_1_3": Power(2, 810 * n * n),
        "thm_3_2": cr_bound_from_p(k, p_hi),
    }
    applicable = APPLICABLE[certificate]
    if straight_line and "straight_line_k2" not in applicable:
        applicable = ("straight_line_k2",) + applicable
    rep = BoundReport(n, k, certificate, (p_lo, p_hi), (d_lo, d_hi), bounds, applicable, achieved)
    if generated:
        rep.s3_status = "S^3 by construction"
    if d_lo < 0:
        rep.notes.append("lower bound on expansion distance is vacuous (distance is nonnegative)")
    rep.check()
    return rep


def report(t, l, realization=None, shelling_order=None, diagram=None,
           generated: bool = False) -> BoundReport:
    """Pick the strongest verified certificate from the evidence and build the report.

    A realization carrying 4D coordinates is checked to be a convex polytope
    boundary; one without them only certifies a straight-line embedding.
    A shelling order that fails verification is an error.
    """
    from .realize import check_polytopal, verify_embedding
    from .shelling import verify_shelling

    certificate = NONE
    straight = False
    notes = []
    if shelling_order is not None:
        check = verify_shelling(t, shelling_order)
        if not check:
            raise BoundsError(f"shelling order fails at position {check.failed_at}: {check.reason}")
        certificate = SHELLABLE
    if realization is not None:
        if realization.host != t:
            raise BoundsError("realization belongs to a different triangulation")
        emb = verify_embedding(realization)
        if not emb:
            raise BoundsError(f"realization is not an embedding: {emb.describe()}")
        straight = True
        if realization.coords4 is not None:
            check_polytopal(t, realization.coords4)
            certificate = POLYTOPAL
        elif certificate == NONE:
            certificate = STRAIGHT_LINE
            notes.append("straight-line embedding without 4D witness: polytopal bounds not licensed")
        else:
            notes.append("straight-line embedding also verified")
    if l.host != t:
        raise BoundsError("link belongs to a different triangulation")
    achieved = None
    if diagram is not None:
        if tuple(diagram.components) != tuple(l.components):
            raise BoundsError("diagram is of a different link")
        achieved = len(diagram.crossings)
    rep = build_report(t.n, l.k, certificate, achieved, generated, straight)
    rep.notes.extend(notes)
    return rep
