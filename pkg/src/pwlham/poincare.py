"""Numerical return-map oracle, independent of the closed-form pipeline.

Orbits are integrated with the classical fixed-step fourth-order Runge-Kutta
scheme, one zone at a time.  A step that would cross a switching line is
halved until the crossing is confined to a short step, then the crossing
time is localized by bisection on x(t) - line inside that step; the orbit is
handed to the adjacent zone only when the contact classifies as a crossing.
The first return to the right line with rightward motion defines the return
map on that line, and a sign-changing bracket of the displacement
return_map(y) - y is bisected to locate fixed points, i.e. periodic orbits.

Everything here deliberately avoids the closed-form flow and flight-time
machinery so that agreement between the two routes is meaningful evidence.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, IO, Optional

from .flow import FlowState, classify_boundary_point, CrossingClassification
from .model import PiecewiseSystem, Point

DEFAULT_TOL = 1e-9
DEFAULT_T_MAX = 100.0

# Event bisection runs until the residual |x - line| falls below this.
EVENT_TOL = 1e-12

# Hard floor on the step size; reaching it means the stepper is stuck.
MIN_STEP = 1e-13


class SlidingEncountered(RuntimeError):
    """The orbit reached a switching-line segment it cannot cross."""

    def __init__(self, message: str, trajectory: "Trajectory") -> None:
        super().__init__(message)
        self.trajectory = trajectory


class StepUnderflow(RuntimeError):
    """Step-size control collapsed below the representable floor."""


class NoReturn(RuntimeError):
    """The orbit did not return to the section within the time budget."""


class BadBracket(ValueError):
    """The displacement does not change sign over the given bracket."""


@dataclass(frozen=True)
class SwitchEvent:
    time: float
    point: Point
    line: str
    classification: CrossingClassification


@dataclass(frozen=True)
class Trajectory:
    states: tuple[FlowState, ...]
    events: tuple[SwitchEvent, ...]


def _rk4_step(field, p: Point, h: float) -> Point:
    a, b, c, alpha, beta = field.a, field.b, field.c, field.alpha, field.beta
    x, y = p
    k1x = a * x + b * y + alpha
    k1y = c * x - a * y + beta
    x2, y2 = x + 0.5 * h * k1x, y + 0.5 * h * k1y
    k2x = a * x2 + b * y2 + alpha
    k2y = c * x2 - a * y2 + beta
    x3, y3 = x + 0.5 * h * k2x, y + 0.5 * h * k2y
    k3x = a * x3 + b * y3 + alpha
    k3y = c * x3 - a * y3 + beta
    x4, y4 = x + h * k3x, y + h * k3y
    k4x = a * x4 + b * y4 + alpha
    k4y = c * x4 - a * y4 + beta
    return (
        x + h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x),
        y + h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y),
    )


def _base_step(system: PiecewiseSystem, tol: float) -> float:
    """Step size targeting a global error near tol for the RK4 scheme.

    Global RK4 error scales like h^4, so h ~ tol^(1/4); the cap keeps the
    per-step rotation/growth angle modest in stiff-ish zones.
    """
    fastest = max(
        math.sqrt(abs(f.linear_determinant())) for f in system.fields
    )
    return min(0.5 * tol ** 0.25, 0.2 / max(fastest, 1e-6))


def _initial_zone(system: PiecewiseSystem, p: Point) -> str:
    """Zone owning the start point; points on a line must cross into a zone."""
    layout = system.layout
    for line_id, line_x in layout.switching_lines:
        if p[0] == line_x:
            cls = classify_boundary_point(system, p, line_id)
            if cls.label != "crossing":
                raise SlidingEncountered(
                    f"start point {p} on line {line_id} is {cls.label}",
                    Trajectory((), ()),
                )
            minus_zone, plus_zone = layout.zones_beside(line_id)
            return plus_zone if cls.derivative_plus > 0.0 else minus_zone
    for zone_id in layout.zone_ids:
        lo, hi = layout.zone_interval(zone_id)
        if lo < p[0] < hi:
            return zone_id
    raise ValueError(f"point {p} belongs to no zone")


def _zone_lines(system: PiecewiseSystem, zone_id: str) -> list[tuple[str, float]]:
    lo, hi = system.layout.zone_interval(zone_id)
    return [
        (line_id, x)
        for line_id, x in system.layout.switching_lines
        if x in (lo, hi)
    ]


def integrate_numeric(
    system: PiecewiseSystem,
    x0: Point,
    t_max: float,
    tol: float = DEFAULT_TOL,
    stop_event: Optional[Callable[[SwitchEvent], bool]] = None,
    record_states: bool = True,
) -> Trajectory:
    """Integrate the piecewise orbit from x0 for up to t_max time units.

    Switching-line crossings are localized to EVENT_TOL and recorded in
    order; a crossing hands the orbit to the neighbouring zone, while a
    sliding/escaping/tangential contact raises SlidingEncountered (with the
    partial trajectory attached).  ``stop_event`` may end the run at a
    recorded event, e.g. to realize a return map.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    zone = _initial_zone(system, x0)
    h_base = _base_step(system, tol)
    h_event = h_base / 64.0

    t = 0.0
    p = x0
    states: list[FlowState] = [FlowState(p, t, zone)]
    events: list[SwitchEvent] = []

    while t < t_max:
        field = system.field(zone)
        lines = _zone_lines(system, zone)
        h = min(h_base, t_max - t)
        if t + h == t:
            break  # remaining budget is below the float resolution of t
        crossing_line = None
        while True:
            p_next = _rk4_step(field, p, h)
            crossing_line = None
            for line_id, line_x in lines:
                g_end = p_next[0] - line_x
                # g_end == 0 exactly: the step lands on the line; localize
                # it as an event rather than silently stepping past.
                if (p[0] - line_x) * g_end < 0.0 or g_end == 0.0:
                    crossing_line = (line_id, line_x)
                    break
            if crossing_line is None or h <= h_event:
                break
            h *= 0.5  # shrink toward the line before bisecting the event
            if h < MIN_STEP:
                raise StepUnderflow(f"step collapsed to {h:g} at t = {t:g}")

        if crossing_line is None:
            t += h
            p = p_next
            if record_states:
                states.append(FlowState(p, t, zone))
            continue

        line_id, line_x = crossing_line
        tau = _bisect_event(field, p, h, line_x)
        p_hit = _rk4_step(field, p, tau)
        p_event: Point = (line_x, p_hit[1])  # snap onto the line
        t += tau
        cls = classify_boundary_point(system, p_event, line_id)
        event = SwitchEvent(t, p_event, line_id, cls)
        events.append(event)
        if record_states:
            states.append(FlowState(p_event, t, zone))
        if cls.label != "crossing":
            raise SlidingEncountered(
                f"{cls.label} contact at {p_event} on line {line_id} "
                f"(t = {t:g})",
                Trajectory(tuple(states), tuple(events)),
            )
        minus_zone, plus_zone = system.layout.zones_beside(line_id)
        zone = plus_zone if cls.derivative_plus > 0.0 else minus_zone
        p = p_event
        if stop_event is not None and stop_event(event):
            return Trajectory(tuple(states), tuple(events))

    return Trajectory(tuple(states), tuple(events))


def _bisect_event(field, p: Point, h: float, line_x: float) -> float:
    """Earliest time in (0, h] at which the step from p crosses line_x."""
    g0 = p[0] - line_x
    lo, hi = 0.0, h
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = _rk4_step(field, p, mid)[0] - line_x
        if abs(gm) <= EVENT_TOL and hi - lo <= 1e-10 * max(h, 1.0):
            return mid
        if g0 * gm > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def first_return(
    system: PiecewiseSystem,
    y: float,
    t_max: float = DEFAULT_T_MAX,
    tol: float = DEFAULT_TOL,
) -> tuple[float, float]:
    """Return ordinate and return time of the orbit started at (1, y).

    The start point must cross rightward into the outer right zone; the
    orbit is followed through zone handoffs until it crosses the right line
    moving rightward again.
    """
    line_id, line_x = system.layout.switching_lines[-1]
    start: Point = (line_x, y)

    def is_return(event: SwitchEvent) -> bool:
        return (
            event.line == line_id
            and event.time > 0.0
            and event.classification.derivative_plus > 0.0
        )

    trajectory = integrate_numeric(
        system, start, t_max, tol, stop_event=is_return, record_states=False
    )
    for event in reversed(trajectory.events):
        if is_return(event):
            return (event.point[1], event.time)
    raise NoReturn(f"no rightward return to x = {line_x:g} within t = {t_max:g}")


def return_map(
    system: PiecewiseSystem,
    y: float,
    t_max: float = DEFAULT_T_MAX,
    tol: float = DEFAULT_TOL,
) -> float:
    """Ordinate of the first rightward return to the right switching line."""
    return first_return(system, y, t_max, tol)[0]


def fixed_point(
    system: PiecewiseSystem,
    bracket: tuple[float, float],
    t_max: float = DEFAULT_T_MAX,
    tol: float = DEFAULT_TOL,
    y_tol: float = 1e-10,
) -> float:
    """Bisect the displacement return_map(y) - y to a fixed point.

    The displacement must change sign across the bracket; its zero is the
    ordinate of a periodic orbit through the right switching line.
    """
    y_lo, y_hi = bracket
    if not y_lo < y_hi:
        raise BadBracket(f"empty bracket {bracket}")
    d_lo = return_map(system, y_lo, t_max, tol) - y_lo
    d_hi = return_map(system, y_hi, t_max, tol) - y_hi
    if d_lo == 0.0:
        return y_lo
    if d_hi == 0.0:
        return y_hi
    if math.copysign(1.0, d_lo) == math.copysign(1.0, d_hi):
        raise BadBracket(
            f"displacement has the same sign at both ends of {bracket}: "
            f"{d_lo:g} vs {d_hi:g}"
        )
    while y_hi - y_lo > y_tol:
        mid = 0.5 * (y_lo + y_hi)
        d_mid = return_map(system, mid, t_max, tol) - mid
        if d_mid == 0.0:
            return mid
        if math.copysign(1.0, d_mid) == math.copysign(1.0, d_lo):
            y_lo, d_lo = mid, d_mid
        else:
            y_hi = mid
    return 0.5 * (y_lo + y_hi)


def trajectory_to_csv(trajectory: Trajectory, stream: IO[str]) -> None:
    """Write the sampled states as rows t, x, y, zone."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["t", "x", "y", "zone"])
    for state in trajectory.states:
        writer.writerow(
            [repr(state.time), repr(state.point[0]), repr(state.point[1]), state.zone]
        )
