"""Planar piecewise linear Hamiltonian vector fields split by vertical lines.

A system is a family of affine fields

    X(x, y) = (a*x + b*y + alpha, c*x - a*y + beta),

one per vertical strip, glued along one switching line (x = 0, two zones)
or two switching lines (x = -1 and x = 1, three zones).  Each zone field is
the symplectic gradient of the quadratic energy

    H(x, y) = (b/2)*y**2 - (c/2)*x**2 + a*x*y + alpha*y - beta*x,

so H is constant along that zone's orbits.  The trace of the linear part is
zero and its determinant is -(a**2 + b*c); we require a**2 + b*c != 0, which
makes the zone singularity an isolated center (a**2 + b*c < 0) or saddle
(a**2 + b*c > 0).

The switching lines are fixed at these abscissae.  A system split by other
parallel vertical lines is expected to be normalized by an affine change of
coordinates before construction; everything downstream works in the
normalized frame.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Literal

Point = tuple[float, float]

# Determinant magnitude below this is treated as a degenerate (non-isolated)
# singularity; closed-form flows divide by sqrt(|a**2 + b*c|).
NONDEGENERACY_TOL = 1e-12

# Componentwise tolerance for matching fields across a switching line.
CONTINUITY_TOL = 1e-12


class DegenerateField(ValueError):
    """The linear part has a**2 + b*c = 0: no isolated singular point."""


class LayoutError(ValueError):
    """Zone count and layout disagree."""


@dataclass(frozen=True)
class LinearHamiltonianField:
    """One zone's affine field (a*x + b*y + alpha, c*x - a*y + beta)."""

    a: float
    b: float
    c: float
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if abs(self.linear_determinant()) <= NONDEGENERACY_TOL:
            raise DegenerateField(
                f"a^2 + b*c = {self.linear_determinant():g} is too close to zero"
            )

    def linear_determinant(self) -> float:
        """a**2 + b*c, the negated determinant of the linear part."""
        return self.a * self.a + self.b * self.c

    def coefficients(self) -> tuple[float, float, float, float, float]:
        return (self.a, self.b, self.c, self.alpha, self.beta)


@dataclass(frozen=True)
class ZoneLayout:
    """Vertical-strip decomposition of the plane.

    Two zones:   L = {x < 0}, R = {x > 0}, one line "C" at x = 0.
    Three zones: L = {x < -1}, C = {-1 < x < 1}, R = {x > 1},
                 lines "L" at x = -1 and "R" at x = 1.
    """

    n_zones: int

    def __post_init__(self) -> None:
        if self.n_zones not in (2, 3):
            raise LayoutError(f"unsupported zone count {self.n_zones}")

    @property
    def zone_ids(self) -> tuple[str, ...]:
        return ("L", "R") if self.n_zones == 2 else ("L", "C", "R")

    @property
    def switching_lines(self) -> tuple[tuple[str, float], ...]:
        """Ordered (line id, abscissa) pairs."""
        if self.n_zones == 2:
            return (("C", 0.0),)
        return (("L", -1.0), ("R", 1.0))

    def line_position(self, line_id: str) -> float:
        for lid, x in self.switching_lines:
            if lid == line_id:
                return x
        raise LayoutError(f"no switching line {line_id!r} in this layout")

    def zones_beside(self, line_id: str) -> tuple[str, str]:
        """Zone ids on the (x < line, x > line) sides of a switching line."""
        if self.n_zones == 2:
            if line_id != "C":
                raise LayoutError(f"no switching line {line_id!r} in this layout")
            return ("L", "R")
        if line_id == "L":
            return ("L", "C")
        if line_id == "R":
            return ("C", "R")
        raise LayoutError(f"no switching line {line_id!r} in this layout")

    def zone_interval(self, zone_id: str) -> tuple[float, float]:
        """Open x-interval of a zone's strip."""
        inf = float("inf")
        if self.n_zones == 2:
            intervals = {"L": (-inf, 0.0), "R": (0.0, inf)}
        else:
            intervals = {"L": (-inf, -1.0), "C": (-1.0, 1.0), "R": (1.0, inf)}
        try:
            return intervals[zone_id]
        except KeyError:
            raise LayoutError(f"no zone {zone_id!r} in this layout") from None


TWO_ZONE = ZoneLayout(2)
THREE_ZONE = ZoneLayout(3)


@dataclass(frozen=True)
class PiecewiseSystem:
    """Zone layout plus one nondegenerate field per zone, ordered L(, C), R."""

    layout: ZoneLayout
    fields: tuple[LinearHamiltonianField, ...]

    def __post_init__(self) -> None:
        if len(self.fields) != self.layout.n_zones:
            raise LayoutError(
                f"{self.layout.n_zones} zones but {len(self.fields)} fields"
            )

    @classmethod
    def two_zone(
        cls, left: LinearHamiltonianField, right: LinearHamiltonianField
    ) -> "PiecewiseSystem":
        return cls(TWO_ZONE, (left, right))

    @classmethod
    def three_zone(
        cls,
        left: LinearHamiltonianField,
        center: LinearHamiltonianField,
        right: LinearHamiltonianField,
    ) -> "PiecewiseSystem":
        return cls(THREE_ZONE, (left, center, right))

    def field(self, zone_id: str) -> LinearHamiltonianField:
        return self.fields[self.layout.zone_ids.index(zone_id)]

    def coefficient_scale(self) -> float:
        """Largest coefficient magnitude; used for scale-aware tolerances."""
        return max(abs(v) for f in self.fields for v in f.coefficients())


@dataclass(frozen=True)
class SingularKind:
    """Type, eigenvalue modulus and location of a zone field's singularity.

    A center has eigenvalues +/- modulus*i, a saddle +/- modulus, with
    modulus**2 = |a**2 + b*c|.
    """

    kind: Literal["center", "saddle"]
    modulus: float
    location: Point


def hamiltonian_value(field: LinearHamiltonianField, p: Point) -> float:
    """Energy (b/2)y^2 - (c/2)x^2 + a*x*y + alpha*y - beta*x at p."""
    x, y = p
    return (
        0.5 * field.b * y * y
        - 0.5 * field.c * x * x
        + field.a * x * y
        + field.alpha * y
        - field.beta * x
    )


def vector_field_value(field: LinearHamiltonianField, p: Point) -> Point:
    """Field value (a*x + b*y + alpha, c*x - a*y + beta) at p."""
    x, y = p
    return (
        field.a * x + field.b * y + field.alpha,
        field.c * x - field.a * y + field.beta,
    )


def classify_singularity(field: LinearHamiltonianField) -> SingularKind:
    """Classify the unique singular point of a zone field.

    The linear part M = [[a, b], [c, -a]] satisfies M^2 = (a^2 + b*c) I, so
    the eigenvalues are +/- sqrt(a^2 + b*c): imaginary pair (center) when the
    quantity is negative, real pair (saddle) when positive.  The singular
    point solves M p = -(alpha, beta).
    """
    det = field.linear_determinant()
    if abs(det) <= NONDEGENERACY_TOL:
        raise DegenerateField("cannot classify a degenerate field")
    px = (-field.a * field.alpha - field.b * field.beta) / det
    py = (-field.c * field.alpha + field.a * field.beta) / det
    if det < 0.0:
        return SingularKind("center", math.sqrt(-det), (px, py))
    return SingularKind("saddle", math.sqrt(det), (px, py))


def is_continuous(system: PiecewiseSystem) -> tuple[bool, list[str]]:
    """Whether adjacent zone fields agree on every switching-line point.

    Matching X values for all y on a vertical line pins a, b and alpha across
    the zones; the second components additionally couple beta with c through
    the line abscissa.  Returns the flag and a description of each violated
    constraint.
    """
    violations: list[str] = []

    def check(value: float, description: str) -> None:
        if abs(value) > CONTINUITY_TOL:
            violations.append(f"{description} = {value:g}")

    if system.layout.n_zones == 2:
        lf, rf = system.fields
        check(rf.a - lf.a, "a_R - a_L")
        check(rf.b - lf.b, "b_R - b_L")
        check(rf.alpha - lf.alpha, "alpha_R - alpha_L")
        check(rf.beta - lf.beta, "beta_R - beta_L")
    else:
        lf, cf, rf = system.fields
        check(rf.a - cf.a, "a_R - a_C")
        check(lf.a - cf.a, "a_L - a_C")
        check(rf.b - cf.b, "b_R - b_C")
        check(lf.b - cf.b, "b_L - b_C")
        check(rf.alpha - cf.alpha, "alpha_R - alpha_C")
        check(lf.alpha - cf.alpha, "alpha_L - alpha_C")
        check(rf.beta - cf.beta - cf.c + rf.c, "beta_R - beta_C - c_C + c_R")
        check(lf.beta - cf.beta - lf.c + cf.c, "beta_L - beta_C - c_L + c_C")
    return (not violations, violations)


def singular_points_in_zone(
    system: PiecewiseSystem,
) -> list[tuple[str, SingularKind, bool]]:
    """Per zone: the singularity and whether it sits strictly inside the strip.

    Diagnostic only; the closure analysis does not depend on where the
    singular points sit.  A point exactly on a switching line counts as
    outside (strict inequalities).
    """
    report = []
    for zone_id in system.layout.zone_ids:
        info = classify_singularity(system.field(zone_id))
        lo, hi = system.layout.zone_interval(zone_id)
        inside = lo < info.location[0] < hi
        report.append((zone_id, info, inside))
    return report


# --- JSON system definitions -------------------------------------------------
#
# {"layout": "two"|"three", "zones": [{"a": .., "b": .., "c": ..,
#  "alpha": .., "beta": ..}, ...]} with zones ordered L(, C), R.  Numbers may
# be strings "p/q" for exact rational entry.

_COEF_KEYS = ("a", "b", "c", "alpha", "beta")


class SystemFormatError(ValueError):
    """A system-definition document does not match the expected schema."""


def coefficient_from_json(value: object, where: str = "coefficient") -> float:
    """Parse a number or an exact rational string "p/q" into a float."""
    if isinstance(value, bool):
        raise SystemFormatError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, (int, float)):
        return float(value)
    if isinstance(value, str):
        try:
            return float(Fraction(value))
        except (ValueError, ZeroDivisionError) as exc:
            raise SystemFormatError(f"{where}: bad rational {value!r}") from exc
    raise SystemFormatError(f"{where}: expected a number, got {type(value).__name__}")


def system_from_json_dict(doc: object) -> PiecewiseSystem:
    if not isinstance(doc, dict):
        raise SystemFormatError("document root must be an object")
    layout_name = doc.get("layout")
    if layout_name not in ("two", "three"):
        raise SystemFormatError(f"layout must be 'two' or 'three', got {layout_name!r}")
    layout = TWO_ZONE if layout_name == "two" else THREE_ZONE
    zones = doc.get("zones")
    if not isinstance(zones, list) or len(zones) != layout.n_zones:
        raise SystemFormatError(
            f"'zones' must be a list of {layout.n_zones} objects for layout "
            f"{layout_name!r}"
        )
    fields = []
    for zone_id, zone in zip(layout.zone_ids, zones):
        if not isinstance(zone, dict):
            raise SystemFormatError(f"zone {zone_id}: expected an object")
        unknown = set(zone) - set(_COEF_KEYS)
        if unknown:
            raise SystemFormatError(f"zone {zone_id}: unknown keys {sorted(unknown)}")
        missing = [k for k in _COEF_KEYS if k not in zone]
        if missing:
            raise SystemFormatError(f"zone {zone_id}: missing keys {missing}")
        coefs = {
            k: coefficient_from_json(zone[k], where=f"zone {zone_id}, field {k!r}")
            for k in _COEF_KEYS
        }
        try:
            fields.append(LinearHamiltonianField(**coefs))
        except DegenerateField as exc:
            raise SystemFormatError(f"zone {zone_id}: {exc}") from exc
    return PiecewiseSystem(layout, tuple(fields))


def system_to_json_dict(system: PiecewiseSystem) -> dict:
    return {
        "layout": "two" if system.layout.n_zones == 2 else "three",
        "zones": [
            {k: getattr(f, k) for k in _COEF_KEYS} for f in system.fields
        ],
    }


def load_system(path: str) -> PiecewiseSystem:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SystemFormatError(f"{path}:{exc.lineno}: {exc.msg}") from exc
    return system_from_json_dict(doc)


def iter_coefficients(system: PiecewiseSystem) -> Iterable[float]:
    for f in system.fields:
        yield from f.coefficients()
