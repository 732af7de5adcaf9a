"""Periodic-orbit closure equations and their exhaustive case analysis.

A periodic orbit meets the switching lines at corner ordinates whose zone
energies must match, because each zone's Hamiltonian is constant along its
arc.  For two zones the corners are (0, y0), (0, y1) with y1 < y0; for three
zones they are (1, y0), (1, y1) on the right line (y1 < y0) and (-1, y2),
(-1, y3) on the left line (y2 < y3), traversed R-arc, C-arc, L-arc, C-arc.

The matching conditions are polynomial in the ordinates.  Eliminating the
outer ordinates (y0 in terms of y1, y2 in terms of y3) when the outer b
coefficients are nonzero reduces the three-zone system to two conics in the
(y1, y3) plane that share the quadratic part, hence to one quadratic and one
linear equation with at most two intersection points.  The solution set is
invariant under swapping both corner pairs, so at most one intersection
survives the strict orderings y1 < y0, y2 < y3: the system either has no
admissible solution, a unique candidate, or a continuum (never two isolated
candidates).  The degenerate coefficient patterns are enumerated explicitly
below and classified as no-solution or continuum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

from .model import PiecewiseSystem, is_continuous, iter_coefficients

# A coefficient (or derived combination) counts as zero for branch dispatch
# below DISPATCH_TOL times the coefficient scale of the system.
DISPATCH_TOL = 1e-10

# Negative discriminants above -CLAMP_TOL * scale are clamped to zero
# (tangency counts as a double root and is then rejected by strict ordering).
CLAMP_TOL = 1e-12


class OuterZoneDegenerate(ValueError):
    """An outer zone has b = 0; the elimination step does not apply."""


class InnerZoneDegenerate(ValueError):
    """The inner zone has b = 0; the conic reduction does not apply."""


@dataclass(frozen=True)
class ClosureResiduals:
    """Left-hand sides of the energy-matching equations at trial ordinates."""

    values: tuple[float, ...]

    def max_abs(self) -> float:
        return max(abs(v) for v in self.values)


@dataclass(frozen=True)
class HyperbolaCoefficients:
    """Coefficients of the two reduced conics in the (y1, y3) plane.

    Both conics have the form (y1 - h)^2 / K - (y3 - k)^2 / K - C = 0 with
    the shared K = 2 / b_C and offset C; the first has centre offsets (A, B),
    the second (D, E).  The first equals the upper C-arc matching equation
    after eliminating y0, the second is the negated lower C-arc matching
    equation after eliminating y2.
    """

    K: float
    A: float
    B: float
    C: float
    D: float
    E: float


@dataclass(frozen=True)
class NoSolution:
    """The closure equations admit no ordered corner tuple."""

    reason: str


@dataclass(frozen=True)
class UniqueCycleCandidate:
    """The single ordered corner tuple solving the closure equations."""

    y0: float
    y1: float
    y2: float
    y3: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.y0, self.y1, self.y2, self.y3)


@dataclass(frozen=True)
class Continuum:
    """A non-isolated family of periodic-orbit candidates.

    ``parametrization`` maps y1 to the companion ordinates ((y0,) for two
    zones, (y0, y2, y3) for three) where an explicit family is available;
    branches established only by a dimension count carry None.
    """

    description: str
    parametrization: Callable[[float], tuple[float, ...]] | None = None


ClosureOutcome = NoSolution | UniqueCycleCandidate | Continuum


def residuals_two_zone(
    system: PiecewiseSystem, y0: float, y1: float
) -> ClosureResiduals:
    """Energy mismatches of the R and L zones between (0, y0) and (0, y1)."""
    lf, rf = system.fields
    gap = y0 - y1
    return ClosureResiduals(
        (
            -0.5 * gap * (rf.b * (y0 + y1) + 2.0 * rf.alpha),
            0.5 * gap * (lf.b * (y0 + y1) + 2.0 * lf.alpha),
        )
    )


def residuals_three_zone(
    system: PiecewiseSystem, y0: float, y1: float, y2: float, y3: float
) -> ClosureResiduals:
    """Energy mismatches of the four arcs R, C-upper, L, C-lower in order."""
    lf, cf, rf = system.fields
    return ClosureResiduals(
        (
            0.5 * (y1 - y0) * (rf.b * (y0 + y1) + 2.0 * (rf.a + rf.alpha)),
            0.5 * (y0 - y3) * (cf.b * (y0 + y3) + 2.0 * cf.alpha)
            - 2.0 * cf.beta
            + cf.a * (y0 + y3),
            0.5 * (y3 - y2) * (lf.b * (y2 + y3) - 2.0 * (lf.a - lf.alpha)),
            0.5 * (y2 - y1) * (cf.b * (y1 + y2) + 2.0 * cf.alpha)
            + 2.0 * cf.beta
            - cf.a * (y1 + y2),
        )
    )


def _dispatch_tol(system: PiecewiseSystem) -> float:
    return DISPATCH_TOL * (1.0 + max(abs(v) for v in iter_coefficients(system)))


def eliminate_outer(
    system: PiecewiseSystem,
) -> tuple[Callable[[float], float], Callable[[float], float]]:
    """Express y0 through y1 (R-zone arc) and y2 through y3 (L-zone arc).

    The outer matching equations factor as (corner gap) times an affine
    function of the corner sum; with b != 0 the second factor pins the sum.
    """
    lf, cf, rf = _three_fields(system)
    tol = _dispatch_tol(system)
    if abs(rf.b) <= tol or abs(lf.b) <= tol:
        raise OuterZoneDegenerate(
            "outer elimination needs b_R != 0 and b_L != 0"
        )

    def y0_of_y1(y1: float) -> float:
        return (-rf.b * y1 - 2.0 * (rf.a + rf.alpha)) / rf.b

    def y2_of_y3(y3: float) -> float:
        return (-lf.b * y3 - 2.0 * (lf.alpha - lf.a)) / lf.b

    return (y0_of_y1, y2_of_y3)


def hyperbola_coefficients(system: PiecewiseSystem) -> HyperbolaCoefficients:
    """Conic coefficients of the reduced (y1, y3) system."""
    lf, cf, rf = _three_fields(system)
    tol = _dispatch_tol(system)
    if abs(cf.b) <= tol:
        raise InnerZoneDegenerate("conic reduction needs b_C != 0")
    if abs(rf.b) <= tol or abs(lf.b) <= tol:
        raise OuterZoneDegenerate(
            "conic reduction needs b_R != 0 and b_L != 0"
        )
    return HyperbolaCoefficients(
        K=2.0 / cf.b,
        A=(rf.b * (cf.a + cf.alpha) - 2.0 * cf.b * (rf.a + rf.alpha))
        / (cf.b * rf.b),
        B=(cf.a - cf.alpha) / cf.b,
        C=2.0 * (cf.a * cf.alpha + cf.b * cf.beta) / cf.b,
        D=-(cf.a + cf.alpha) / cf.b,
        E=(lf.b * (cf.alpha - cf.a) - 2.0 * cf.b * (lf.alpha - lf.a))
        / (cf.b * lf.b),
    )


# Sign relating each conic to the corresponding reduced matching equation:
# conic1(y1, y3) = +residual2(y0(y1), y3), conic2(y1, y3) = -residual4(y1, y2(y3)).
CONIC_RESIDUAL_FACTORS = (1.0, -1.0)


def _three_fields(system: PiecewiseSystem):
    if system.layout.n_zones != 3:
        raise ValueError("expected a three-zone system")
    return system.fields


def solve_two_zone(system: PiecewiseSystem) -> ClosureOutcome:
    """Classify the two-zone closure equations; never a unique candidate.

    Both matching equations share the factor (y0 - y1), so with y1 < y0 each
    reduces to an affine condition on y0 + y1.  The two conditions are either
    inconsistent (no solution) or compatible, in which case a full line of
    (y0, y1) pairs solves the system (a continuum).  An isolated periodic
    orbit is therefore impossible.
    """
    if system.layout.n_zones != 2:
        raise ValueError("expected a two-zone system")
    lf, rf = system.fields
    tol = _dispatch_tol(system)
    b_l_zero = abs(lf.b) <= tol
    b_r_zero = abs(rf.b) <= tol

    if b_r_zero and abs(rf.alpha) > tol:
        return NoSolution("b_R = 0 with alpha_R != 0: R-zone equation is unsolvable")
    if b_l_zero and abs(lf.alpha) > tol:
        return NoSolution("b_L = 0 with alpha_L != 0: L-zone equation is unsolvable")
    if b_r_zero and b_l_zero:
        return Continuum(
            "both matching equations vanish identically: every ordered pair "
            "(y0, y1) closes"
        )
    if b_r_zero or b_l_zero:
        f = lf if b_r_zero else rf
        side = "L" if b_r_zero else "R"
        return Continuum(
            f"only the {side}-zone equation constrains the pair: "
            "y0 + y1 is pinned, y1 free",
            _chord_family(f.b, f.alpha),
        )

    # Both b nonzero: the two conditions pin y0 + y1 to -2 alpha / b on each
    # side; they are compatible exactly when the (b, alpha) pairs are
    # proportional.  Compare via the ratios alpha / b, parametrize with the
    # better-conditioned (larger |b|) pair.
    ratio_l = lf.alpha / lf.b
    ratio_r = rf.alpha / rf.b
    if abs(ratio_l - ratio_r) > DISPATCH_TOL * (
        1.0 + max(abs(ratio_l), abs(ratio_r))
    ):
        return NoSolution(
            "incompatible chord sums: alpha_L / b_L != alpha_R / b_R"
        )
    f = lf if abs(lf.b) >= abs(rf.b) else rf
    return Continuum(
        "compatible chord sums: y0 = -(b y1 + 2 alpha) / b with y1 free",
        _chord_family(f.b, f.alpha),
    )


def _chord_family(b: float, alpha: float) -> Callable[[float], tuple[float]]:
    def family(y1: float) -> tuple[float]:
        return ((-b * y1 - 2.0 * alpha) / b,)

    return family


def solve_three_zone(system: PiecewiseSystem) -> ClosureOutcome:
    """Exhaustive classification of the three-zone closure equations.

    Continuous systems never support an isolated solution: with b != 0 the
    full system is solved by an explicit one-parameter family, and with
    b = 0 the ordered system is unsolvable.  Discontinuous systems dispatch
    on which of b_L, b_C, b_R (and the paired affine combinations) vanish;
    the all-nonzero branch intersects the two reduced conics and keeps the
    at most one intersection that respects both strict corner orderings.
    """
    lf, cf, rf = _three_fields(system)
    tol = _dispatch_tol(system)

    continuous, _ = is_continuous(system)
    if continuous:
        if abs(cf.b) <= tol:
            return NoSolution(
                "continuous with b = 0: the ordered matching equations are "
                "unsolvable"
            )
        return Continuum(
            "continuous with b != 0: explicit one-parameter family of "
            "closed orbits",
            _continuous_family(system),
        )

    b_r_zero = abs(rf.b) <= tol
    b_l_zero = abs(lf.b) <= tol
    b_c_zero = abs(cf.b) <= tol
    g_r_zero = abs(rf.a + rf.alpha) <= tol
    g_l_zero = abs(lf.a - lf.alpha) <= tol
    g_c_zero = abs(cf.alpha - cf.a) <= tol

    if b_r_zero and not g_r_zero:
        return NoSolution("b_R = 0 with a_R + alpha_R != 0")
    if b_l_zero and not g_l_zero:
        return NoSolution("b_L = 0 with a_L - alpha_L != 0")

    if b_r_zero and b_l_zero:
        if b_c_zero:
            if g_c_zero:
                return NoSolution(
                    "all of b_R, a_R + alpha_R, b_L, a_L - alpha_L, b_C, "
                    "alpha_C - a_C vanish: corners collapse"
                )
            return Continuum(
                "outer equations vanish, degenerate inner equations leave "
                "free ordinates"
            )
        return Continuum("outer equations vanish identically, b_C != 0")

    if b_r_zero:  # b_L != 0, a_R + alpha_R = 0
        if b_c_zero:
            if g_c_zero:
                return NoSolution(
                    "b_R = a_R + alpha_R = b_C = alpha_C - a_C = 0 with "
                    "b_L != 0: corners collapse"
                )
            return Continuum(
                "R-zone equation vanishes, inner equations affine in the "
                "free ordinates"
            )
        return Continuum("R-zone equation vanishes identically, b_L b_C != 0")

    if b_l_zero:  # b_R != 0, a_L - alpha_L = 0
        if b_c_zero:
            if g_c_zero:
                return NoSolution(
                    "b_L = a_L - alpha_L = b_C = alpha_C - a_C = 0 with "
                    "b_R != 0: corners collapse"
                )
            return Continuum(
                "L-zone equation vanishes, inner equations affine in the "
                "free ordinates"
            )
        return Continuum("L-zone equation vanishes identically, b_R b_C != 0")

    if b_c_zero:  # b_R b_L != 0
        mixed = (
            rf.b * cf.alpha * (lf.a - lf.alpha)
            + cf.a * rf.b * (lf.alpha - lf.a)
            + lf.b * (rf.a + rf.alpha) * (cf.a + cf.alpha)
            + 2.0 * lf.b * rf.b * cf.beta
        )
        # Mixed combination is quadratic in the coefficients; scale its
        # zero test accordingly.
        scale = 1.0 + max(abs(v) for v in iter_coefficients(system)) ** 2
        if abs(mixed) <= DISPATCH_TOL * scale:
            return Continuum(
                "b_C = 0 with compatible affine inner equations: eliminated "
                "system degenerates to a family"
            )
        return NoSolution(
            "b_C = 0 with incompatible affine inner equations (mixed "
            "combination nonzero)"
        )

    return _solve_generic(system)


def _continuous_family(
    system: PiecewiseSystem,
) -> Callable[[float], tuple[float, float, float]]:
    """Explicit closed-orbit family of a continuous system with b != 0.

    y0 balances the R-arc equation; the left-line pair solves the two C-arc
    equations, with a radicand that is a shifted square in b*y1 (real for
    |b y1 + a + alpha| large enough).
    """
    cf = system.fields[1]
    a, b, alpha = cf.a, cf.b, cf.alpha
    beta_c = cf.beta

    def family(y1: float) -> tuple[float, float, float]:
        radicand = (
            a * a
            + 2.0 * a * (b * y1 - alpha)
            + (b * y1 + alpha) ** 2
            - 4.0 * b * beta_c
        )
        if radicand < 0.0:
            raise ValueError(
                f"no real companion ordinates at y1 = {y1:g} "
                f"(radicand {radicand:g})"
            )
        root = math.sqrt(radicand)
        y0 = (-b * y1 - 2.0 * (a + alpha)) / b
        y2 = (a - alpha + root) / b
        y3 = (a - alpha - root) / b
        return (y0, y2, y3)

    return family


def conic_intersections(
    conics: HyperbolaCoefficients,
) -> Optional[list[tuple[float, float]]]:
    """All real intersection points of the two reduced conics.

    Subtracting the conics (they share the quadratic part) leaves a line;
    substituting the line into either conic leaves one quadratic, hence at
    most two points.  Returns None when the system degenerates to infinitely
    many common points (coincident conics, or the difference line lying
    inside the shared conic).
    """
    K, A, B, C, D, E = conics.K, conics.A, conics.B, conics.C, conics.D, conics.E
    conic_scale = 1.0 + max(abs(A), abs(B), abs(D), abs(E))
    if (
        abs(A - D) <= DISPATCH_TOL * conic_scale
        and abs(B - E) <= DISPATCH_TOL * conic_scale
    ):
        return None

    # Difference line p*y1 + q*y3 + r = 0; first conic expanded as
    # y1^2 - 2A y1 + A^2 - y3^2 + 2B y3 - B^2 - K C = 0.
    p = 2.0 * (A - D)
    q = 2.0 * (E - B)
    r = D * D - E * E + B * B - A * A

    if abs(p) >= abs(q):
        m, k = -q / p, -r / p  # y1 = m*y3 + k
        qa = m * m - 1.0
        qb = 2.0 * m * k - 2.0 * A * m + 2.0 * B
        qc = k * k - 2.0 * A * k + A * A - B * B - K * C
        roots = _conic_roots(qa, qb, qc)
        points = [(m * y3 + k, y3) for y3 in roots]
    else:
        m, k = -p / q, -r / q  # y3 = m*y1 + k
        qa = 1.0 - m * m
        qb = -2.0 * A - 2.0 * m * k + 2.0 * B * m
        qc = A * A - k * k + 2.0 * B * k - B * B - K * C
        roots = _conic_roots(qa, qb, qc)
        points = [(y1, m * y1 + k) for y1 in roots]
    if roots is DEGENERATE_LINE:
        return None
    return points


def _solve_generic(system: PiecewiseSystem) -> ClosureOutcome:
    """Intersect the two reduced conics (all three b coefficients nonzero)."""
    points = conic_intersections(hyperbola_coefficients(system))
    if points is None:
        return Continuum(
            "the two reduced conics coincide or share a line: every common "
            "point closes"
        )

    y0_of_y1, y2_of_y3 = eliminate_outer(system)
    admissible = []
    for y1, y3 in points:
        y0 = y0_of_y1(y1)
        y2 = y2_of_y3(y3)
        if y1 < y0 and y2 < y3:
            admissible.append(UniqueCycleCandidate(y0, y1, y2, y3))
    if not admissible:
        if points:
            return NoSolution(
                "conic intersections violate the corner orderings "
                "y1 < y0, y2 < y3"
            )
        return NoSolution("the two reduced conics do not intersect")
    # The swap symmetry guarantees at most one ordered candidate; prefer the
    # wider-margin one should rounding ever let both through.
    best = max(
        admissible,
        key=lambda s: min(s.y0 - s.y1, s.y3 - s.y2),
    )
    return best


# Sentinel list identity: _conic_roots returns it when the substituted
# quadratic vanishes identically (the whole line solves the conic).
DEGENERATE_LINE: list[float] = []


def _conic_roots(qa: float, qb: float, qc: float) -> list[float]:
    """Real roots of the substituted quadratic, with tangency clamping."""
    scale = max(abs(qa), abs(qb), abs(qc))
    if scale == 0.0 or scale <= CLAMP_TOL:
        return DEGENERATE_LINE
    if abs(qa) <= CLAMP_TOL * scale:
        if abs(qb) <= CLAMP_TOL * scale:
            return DEGENERATE_LINE if abs(qc) <= CLAMP_TOL * scale else []
        return [-qc / qb]
    disc = qb * qb - 4.0 * qa * qc
    disc_scale = qb * qb + abs(4.0 * qa * qc)
    if disc < 0.0:
        if disc >= -CLAMP_TOL * disc_scale:
            disc = 0.0  # tangency: double root
        else:
            return []
    sq = math.sqrt(disc)
    q = -0.5 * (qb + math.copysign(sq, qb)) if qb != 0.0 else -0.5 * sq
    if q == 0.0:
        return [0.0]
    r1, r2 = q / qa, qc / q
    if abs(r1 - r2) <= 1e-12 * (1.0 + abs(r1) + abs(r2)):
        return [r1]
    return [r1, r2]


def swap_solution(
    y0: float, y1: float, y2: float, y3: float
) -> tuple[float, float, float, float]:
    """The companion solution with both corner pairs exchanged."""
    return (y1, y0, y3, y2)
