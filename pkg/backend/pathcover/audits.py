"""Cotas comprobables del analisis, en aritmetica entera.

r = (15 + sqrt(505)) / 20 is the positive root of 10 r^2 - 15 r - 7 = 0. Every
comparison against r clears denominators and squares once with the sign guarded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from pathcover.components import CRITICAL_DEN, CRITICAL_NUM


@dataclass(frozen=True)
class RatioConstants:
    """r = (base + sqrt(disc)) / den."""

    base: int = 15
    disc: int = 505
    den: int = 20

    @property
    def approx(self) -> float:
        return (self.base + math.sqrt(self.disc)) / self.den

    def at_most(self, num: int, den: int) -> bool:
        """num/den <= r."""
        if den <= 0:
            raise ValueError("denominator must be positive")
        lhs = self.den * num - self.base * den
        return lhs <= 0 or lhs * lhs <= self.disc * den * den

    def greater_than_scaled(self, a: int, b: int, scale: Fraction) -> bool:
        """a/b > scale * r, con b > 0."""
        # a/b > (p/q) r  <=>  q*den*a - p*base*b > p*b*sqrt(disc)
        p, q = scale.numerator, scale.denominator
        t = q * self.den * a - p * self.base * b
        return t > 0 and t * t > self.disc * (p * b) ** 2


RATIO = RatioConstants()
BRANCH_SCALE = Fraction(5, 7)


def ratio_ok(opt: int, alg: int) -> bool:
    """opt <= r * alg."""
    if alg == 0:
        return opt == 0
    return RATIO.at_most(opt, alg)


def output_branch(a: int, b: int) -> bool:
    """True si se emiten las componentes: B = 0 o A/B > (5/7) r."""
    if b == 0:
        return True
    return RATIO.greater_than_scaled(a, b, BRANCH_SCALE)


def matching_bound_ok(matched_vertices: int, opt: int) -> bool:
    return 5 * matched_vertices >= 4 * opt


def mc_bound_ok(mc_vertices: int, opt: int) -> bool:
    return 5 * mc_vertices >= 4 * opt


def recursion_bound_ok(opt_g: int, opt_gc: int, a: int) -> bool:
    return opt_g <= opt_gc + 7 * a


def noncritical_ratio_ok(opt: int, alg: int) -> bool:
    return 22 * opt < 35 * alg or opt == 0


# (s, opt) caps per census class: s <= a and opt >= b for at least one listed pair
CLASS_BOUNDS: dict[str, tuple[tuple[int, int], ...]] = {
    "1c": ((8, 5), (10, 7)),
    "1": ((6, 5), (8, 7), (10, 8), (12, 10), (14, 12), (16, 13)),
    "2c": ((16, 12), (18, 13), (14, 11)),
    "2": ((12, 10), (14, 12), (16, 13), (18, 15)),
    "3": ((18, 15), (20, 17), (12, 11)),
    "4": ((22, 20),),
    "5": ((24, 25),),
}
# s/opt caps checked as ratios rather than as dominated pairs
CLASS_RATIO_CAPS: dict[str, Fraction] = {
    "2": Fraction(6, 6),  # two responsible 1-anchors
}


class ClassEntry(NamedTuple):
    kid: int
    i: int
    critical: bool
    s: int
    opt: int
    # critical and responsible, rescued by its improved solution
    downgraded: bool = False


def census_class_label(i: int, critical: bool) -> str:
    return f"{i}c" if critical and i in (1, 2) else str(i)


def below_critical_ratio(s: int, opt: int) -> bool:
    """s/opt < 14/11."""
    return CRITICAL_DEN * s < CRITICAL_NUM * opt


def class_bound_violations(entries: Iterable[ClassEntry]) -> list[str]:
    problems: list[str] = []
    for e in entries:
        if e.i == 0 or e.downgraded:
            if not below_critical_ratio(e.s, e.opt):
                where = "class 0" if e.i == 0 else f"class {e.i} (improved)"
                problems.append(f"component {e.kid} in {where} has s/opt = {e.s}/{e.opt} >= 14/11")
            continue
        label = census_class_label(e.i, e.critical)
        bounds = CLASS_BOUNDS.get(label)
        if bounds is None:
            problems.append(f"component {e.kid}: no bounds for class {label}")
            continue
        if any(e.s <= a and e.opt >= b for a, b in bounds):
            continue
        cap = CLASS_RATIO_CAPS.get(label)
        if cap is not None and e.opt > 0 and Fraction(e.s, e.opt) <= cap:
            continue
        problems.append(f"component {e.kid} in class {label} has s/opt = {e.s}/{e.opt}")
    return problems
