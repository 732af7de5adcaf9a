"""Closed-form zone flows, boundary-contact classification and flight times.

With M = [[a, b], [c, -a]] and p* the singular point, a zone orbit is

    p(t) = p* + E(t) (p(0) - p*),

where M^2 = (a^2 + b*c) I collapses the matrix exponential to

    E(t) = cos(w t) I + sin(w t)/w M      (center, w^2 = -(a^2 + b*c))
    E(t) = cosh(l t) I + sinh(l t)/l M    (saddle, l^2 = a^2 + b*c).

Because the switching lines are vertical, the contact of a zone field with a
line is governed by the first field component alone: boundary points are
classified by the signs of the two one-sided x-velocities, and flight times
between lines reduce to scalar trigonometric (center) or exponential
(saddle) equations that we solve in closed form and cross-check with a
bracketed bisection on x(t) - target.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Literal

from .model import (
    LinearHamiltonianField,
    PiecewiseSystem,
    Point,
    classify_singularity,
    vector_field_value,
)

# |x-velocity| at or below this is a tangential contact.
TANGENCY_TOL = 1e-10

# Bisection window width for the flight-time cross-check.
REFINE_TOL = 1e-12

# Agreement required between the closed-form flight time and its refinement.
CROSS_CHECK_TOL = 1e-9


class NeverReaches(ValueError):
    """No admissible positive time carries the orbit to the target line."""


class TangentialContact(ValueError):
    """The first arrival at the target line has zero x-velocity."""


class NotOnSwitchingLine(ValueError):
    """The queried point does not lie on the named switching line."""


@dataclass(frozen=True)
class FlowState:
    """A point on an orbit, its flow time and the zone it belongs to."""

    point: Point
    time: float
    zone: str


@dataclass(frozen=True)
class CrossingClassification:
    """Contact type of a switching-line point with its two adjacent fields.

    ``derivative_minus``/``derivative_plus`` are the x-velocities of the
    fields on the x < line and x > line sides.  The orbit crosses when their
    product is positive; it slides (both push toward the line) or escapes
    (both push away) when the product is negative; a vanishing one-sided
    velocity is a tangency.
    """

    label: Literal["crossing", "sliding", "escaping", "tangency"]
    derivative_minus: float
    derivative_plus: float

    @property
    def product(self) -> float:
        return self.derivative_minus * self.derivative_plus


def flow_closed_form(field: LinearHamiltonianField, p0: Point, t: float) -> Point:
    """Exact zone flow of p0 by time t (t may be negative)."""
    if t == 0.0:
        return p0
    info = classify_singularity(field)
    px, py = info.location
    dx, dy = p0[0] - px, p0[1] - py
    m = info.modulus
    if info.kind == "center":
        cw = math.cos(m * t)
        sw = math.sin(m * t) / m
    else:
        cw = math.cosh(m * t)
        sw = math.sinh(m * t) / m
    return (
        px + cw * dx + sw * (field.a * dx + field.b * dy),
        py + cw * dy + sw * (field.c * dx - field.a * dy),
    )


def orbit_samples(
    field: LinearHamiltonianField, p0: Point, t_end: float, n: int
) -> list[Point]:
    """n flow points at equally spaced times in [0, t_end]; starts at p0."""
    if n < 2:
        raise ValueError("need at least two samples")
    if t_end <= 0.0:
        raise ValueError("t_end must be positive")
    step = t_end / (n - 1)
    return [p0] + [flow_closed_form(field, p0, k * step) for k in range(1, n)]


def classify_boundary_point(
    system: PiecewiseSystem, p: Point, line_id: str
) -> CrossingClassification:
    """Classify a switching-line point by its one-sided x-velocities."""
    line_x = system.layout.line_position(line_id)
    if abs(p[0] - line_x) > 1e-9:
        raise NotOnSwitchingLine(
            f"point x = {p[0]:g} is not on line {line_id} (x = {line_x:g})"
        )
    minus_zone, plus_zone = system.layout.zones_beside(line_id)
    d_minus = vector_field_value(system.field(minus_zone), p)[0]
    d_plus = vector_field_value(system.field(plus_zone), p)[0]
    if abs(d_minus) <= TANGENCY_TOL or abs(d_plus) <= TANGENCY_TOL:
        label = "tangency"
    elif d_minus * d_plus > 0.0:
        label = "crossing"
    elif d_minus > 0.0:
        label = "sliding"
    else:
        label = "escaping"
    return CrossingClassification(label, d_minus, d_plus)


def _x_velocity(field: LinearHamiltonianField, p: Point) -> float:
    return field.a * p[0] + field.b * p[1] + field.alpha


def _required_arrival_sign(
    field: LinearHamiltonianField, p0: Point, s0: float, s1: float
) -> float:
    """Sign of x-velocity at an arrival that exits across the target line.

    Travelling to a different line continues in the direction of travel;
    returning to the starting line reverses the departure direction.
    """
    if s0 != s1:
        return math.copysign(1.0, s1 - s0)
    v0 = _x_velocity(field, p0)
    if abs(v0) <= TANGENCY_TOL:
        raise TangentialContact(
            "departure x-velocity vanishes; cannot orient the arc"
        )
    return -math.copysign(1.0, v0)


def _center_flight_time(
    field: LinearHamiltonianField, p0: Point, s1: float, required_sign: float
) -> float:
    """Smallest positive root of x(t) = s1 with the required x-velocity sign.

    Writing x(t) = px + R cos(w t - phi), roots come in the two families
    w t - phi = +/- acos(d / R) (mod 2 pi); the family with +acos has
    x'(t) <= 0 and the other x'(t) >= 0, so the required sign selects one
    family and the smallest positive representative is the answer.
    """
    info = classify_singularity(field)
    px, py = info.location
    w = info.modulus
    dx, dy = p0[0] - px, p0[1] - py
    u = dx
    v = (field.a * dx + field.b * dy) / w
    radius = math.hypot(u, v)
    d = s1 - px
    if radius <= TANGENCY_TOL or abs(d) > radius * (1.0 + 1e-14) + TANGENCY_TOL:
        raise NeverReaches(f"orbit x-range misses the line x = {s1:g}")
    cos_arg = max(-1.0, min(1.0, d / radius))
    psi = math.acos(cos_arg)
    if math.sin(psi) * radius * w <= TANGENCY_TOL:
        # |d| = R: the orbit only grazes the line.
        raise TangentialContact(f"orbit is tangent to the line x = {s1:g}")
    phi = math.atan2(v, u)
    theta = psi if required_sign < 0.0 else -psi
    angle = math.fmod(phi + theta, 2.0 * math.pi)
    if angle < 0.0:
        angle += 2.0 * math.pi
    if angle <= 1e-12:
        angle += 2.0 * math.pi
    return angle / w


def _saddle_flight_time(
    field: LinearHamiltonianField,
    p0: Point,
    s0: float,
    s1: float,
    required_sign: float,
) -> float:
    """Saddle-zone analogue via the substitution w = exp(l t).

    x(t) - s1 = 0 becomes the quadratic (u+v) w^2 - 2 d w + (u-v) = 0 with
    u, v the cosh/sinh coefficients and d = s1 - px.  Admissible roots have
    w > 1 (t > 0); when the start already sits on the target line, w = 1 is
    a root and is deflated out exactly.
    """
    info = classify_singularity(field)
    px, py = info.location
    lam = info.modulus
    dx, dy = p0[0] - px, p0[1] - py
    u = dx
    v = (field.a * dx + field.b * dy) / lam
    d = s1 - px

    roots: list[float]
    if s0 == s1 and p0[0] == s1:
        # Factor out the t = 0 root: remaining root (u+v) w = (u-v).
        roots = [] if u + v == 0.0 else [(u - v) / (u + v)]
    else:
        roots = _real_quadratic_roots(u + v, -2.0 * d, u - v)

    times = sorted(math.log(w) / lam for w in roots if w > 1.0 + 1e-13)
    if not times:
        raise NeverReaches(f"saddle arc never reaches the line x = {s1:g}")
    for t in times:
        vx = _x_velocity(field, flow_closed_form(field, p0, t))
        if abs(vx) <= TANGENCY_TOL:
            raise TangentialContact(f"arrival at x = {s1:g} is tangential")
        if vx * required_sign > 0.0:
            return t
    raise NeverReaches(
        f"no arrival at x = {s1:g} with the required crossing direction"
    )


def _real_quadratic_roots(a: float, b: float, c: float) -> list[float]:
    """Real roots of a w^2 + b w + c, numerically stable, tiny-a aware."""
    scale = max(abs(a), abs(b), abs(c))
    if scale == 0.0:
        return []
    if abs(a) <= 1e-15 * scale:
        return [] if abs(b) <= 1e-15 * scale else [-c / b]
    disc = b * b - 4.0 * a * c
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    q = -0.5 * (b + math.copysign(sq, b)) if b != 0.0 else -0.5 * sq
    if q == 0.0:
        return [0.0]
    r1, r2 = q / a, c / q
    return [r1] if r1 == r2 else [r1, r2]


def flight_time(
    field: LinearHamiltonianField, p0: Point, target_x: float
) -> float:
    """Time for the zone orbit from p0 (on a switching line) to reach x = target_x.

    Returns the smallest t > 0 at which x(t) equals the target abscissa with
    a transversal crossing oriented out of the strip being traversed.  The
    closed-form answer is validated against a bracketed bisection on
    g(t) = x(t) - target_x before being returned.
    """
    s0, s1 = p0[0], float(target_x)
    required_sign = _required_arrival_sign(field, p0, s0, s1)
    if field.linear_determinant() < 0.0:
        t = _center_flight_time(field, p0, s1, required_sign)
    else:
        t = _saddle_flight_time(field, p0, s0, s1, required_sign)
    t_refined = refine_flight_time(field, p0, s1, t)
    if abs(t - t_refined) > CROSS_CHECK_TOL * (1.0 + abs(t)):
        raise ArithmeticError(
            f"flight-time cross-check failed: closed form {t!r} vs "
            f"bisection {t_refined!r}"
        )
    return t


def refine_flight_time(
    field: LinearHamiltonianField, p0: Point, target_x: float, t_approx: float
) -> float:
    """Bisect g(t) = x(t) - target_x inside a bracket around t_approx."""

    def g(t: float) -> float:
        return flow_closed_form(field, p0, t)[0] - target_x

    lo, hi = _bracket_root(g, t_approx)
    glo = g(lo)
    for _ in range(200):
        if hi - lo <= REFINE_TOL:
            break
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if glo * gm <= 0.0:
            hi = mid
        else:
            lo, glo = mid, gm
    return 0.5 * (lo + hi)


def _bracket_root(g: Callable[[float], float], t0: float) -> tuple[float, float]:
    """Expand a sign-change bracket around t0; the root is transversal."""
    for delta in (1e-9, 1e-7, 1e-5, 1e-3, 1e-2, 1e-1):
        lo = max(t0 - delta, 0.25 * t0)  # stay clear of the t = 0 root
        hi = t0 + delta
        if g(lo) * g(hi) < 0.0:
            return (lo, hi)
    raise ArithmeticError(f"could not bracket the arrival time near t = {t0!r}")
