"""Command-line front end: classify, solve, certify, cross-check and plot.

Commands read a system-definition JSON document (coefficients may be exact
rational strings such as "11/4"), run the requested analysis and emit JSON
(2-space indent, sorted keys), CSV trajectories or deterministic SVG 1.1
phase portraits.  Exit status: 0 for a completed analysis (including "no
limit cycle", which is an answer, not a failure), 1 for a verification
mismatch, 2 for unusable input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional, Sequence

from . import closure, cycle, poincare
from .cycle import CycleCertificate
from .model import (
    PiecewiseSystem,
    SystemFormatError,
    is_continuous,
    load_system,
    singular_points_in_zone,
    system_from_json_dict,
)
from .poincare import Trajectory

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2

FIXTURE_NAMES = ("CCC", "SCC", "SCS", "CSC", "SSS", "SSC")

CANVAS_WIDTH = 800
CANVAS_HEIGHT = 600
CANVAS_MARGIN = 60.0

ORACLE_AGREEMENT_TOL = 1e-6


@dataclass
class RunConfig:
    """One CLI invocation: the command plus its inputs, outputs and knobs."""

    command: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    certificate_path: Optional[str] = None
    trajectory_csv: Optional[str] = None
    tol: float = 1e-9
    samples: int = 256
    window: Optional[tuple[float, float, float, float]] = None

    def __post_init__(self) -> None:
        if self.tol <= 0.0:
            raise ValueError("tolerance must be positive")
        if self.samples < 2:
            raise ValueError("sample count must be at least 2")
        if self.window is not None:
            x0, x1, y0, y1 = self.window
            if not (x0 < x1 and y0 < y1):
                raise ValueError(f"empty plot window {self.window}")


def bundle_examples() -> list[tuple[str, PiecewiseSystem]]:
    """The six bundled three-zone systems with one limit cycle each.

    Names encode the zone singularity types in L, C, R order (C center,
    S saddle).  Coefficients are stored as exact rational strings.
    """
    out = []
    for name in FIXTURE_NAMES:
        doc = json.loads(fixture_text(name))
        out.append((name, system_from_json_dict(doc)))
    return out


def fixture_text(name: str) -> str:
    """Raw JSON text of a bundled system definition."""
    if name.upper() not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; have {FIXTURE_NAMES}")
    return (
        resources.files(__package__)
        .joinpath("fixtures", f"{name.lower()}.json")
        .read_text(encoding="utf-8")
    )


# --- SVG rendering -----------------------------------------------------------


def render_svg(
    source: CycleCertificate | Trajectory,
    window: Optional[tuple[float, float, float, float]],
    path: str | Path,
    system: Optional[PiecewiseSystem] = None,
) -> None:
    """Write a deterministic 800x600 SVG phase portrait.

    Switching lines are dashed and labelled, a certificate's orbit becomes a
    closed path with labelled corner dots, a trajectory becomes an open
    path.  Identical inputs produce byte-identical files.
    """
    if isinstance(source, CycleCertificate):
        polyline = list(source.polyline)
        corners = list(source.corners)
        closed = True
    else:
        polyline = [state.point for state in source.states]
        corners = []
        closed = False
    if not polyline:
        raise ValueError("nothing to plot: empty polyline")

    if system is not None:
        lines = list(system.layout.switching_lines)
        singular = [info.location for _, info, _ in singular_points_in_zone(system)]
    else:
        lines = [("L", -1.0), ("R", 1.0)]
        singular = []

    if window is None:
        window = _default_window(polyline, [x for _, x in lines])
    x_lo, x_hi, y_lo, y_hi = window
    if not (x_lo < x_hi and y_lo < y_hi):
        raise ValueError(f"empty plot window {window}")

    span_x = x_hi - x_lo
    span_y = y_hi - y_lo
    draw_w = CANVAS_WIDTH - 2.0 * CANVAS_MARGIN
    draw_h = CANVAS_HEIGHT - 2.0 * CANVAS_MARGIN

    def px(x: float) -> float:
        return CANVAS_MARGIN + (x - x_lo) / span_x * draw_w

    def py(y: float) -> float:
        return CANVAS_HEIGHT - CANVAS_MARGIN - (y - y_lo) / span_y * draw_h

    parts: list[str] = []
    parts.append('<?xml version="1.0" encoding="UTF-8"?>')
    parts.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{CANVAS_WIDTH}" height="{CANVAS_HEIGHT}" '
        f'viewBox="0 0 {CANVAS_WIDTH} {CANVAS_HEIGHT}">'
    )
    parts.append(
        f'<rect x="0" y="0" width="{CANVAS_WIDTH}" height="{CANVAS_HEIGHT}" '
        f'fill="white"/>'
    )

    for line_id, line_x in lines:
        if not (x_lo <= line_x <= x_hi):
            continue
        x_pix = px(line_x)
        parts.append(
            f'<line x1="{x_pix:.3f}" y1="{CANVAS_MARGIN:.3f}" '
            f'x2="{x_pix:.3f}" y2="{CANVAS_HEIGHT - CANVAS_MARGIN:.3f}" '
            f'stroke="#555555" stroke-width="1" stroke-dasharray="6,4"/>'
        )
        label = "Σ_" + line_id
        parts.append(
            f'<text x="{x_pix + 6.0:.3f}" y="{CANVAS_MARGIN - 8.0:.3f}" '
            f'font-family="sans-serif" font-size="16" fill="#555555">'
            f"{label}</text>"
        )

    points = " L ".join(f"{px(x):.3f} {py(y):.3f}" for x, y in polyline)
    suffix = " Z" if closed else ""
    parts.append(
        f'<path d="M {points}{suffix}" fill="none" stroke="#1f5fbf" '
        f'stroke-width="1.5"/>'
    )

    for sx, sy in singular:
        if x_lo <= sx <= x_hi and y_lo <= sy <= y_hi:
            parts.append(
                f'<circle cx="{px(sx):.3f}" cy="{py(sy):.3f}" r="3.5" '
                f'fill="white" stroke="#b03030" stroke-width="1.2"/>'
            )

    corner_names = ("(1, y0)", "(1, y1)", "(-1, y2)", "(-1, y3)")
    for (cx, cy), name in zip(corners, corner_names):
        parts.append(
            f'<circle cx="{px(cx):.3f}" cy="{py(cy):.3f}" r="3" '
            f'fill="#1f5fbf"/>'
        )
        anchor_dx = 8.0 if cx >= 0 else -8.0
        anchor = "start" if cx >= 0 else "end"
        parts.append(
            f'<text x="{px(cx) + anchor_dx:.3f}" y="{py(cy) - 6.0:.3f}" '
            f'font-family="sans-serif" font-size="13" fill="#202020" '
            f'text-anchor="{anchor}">{name}</text>'
        )

    parts.append("</svg>")
    Path(path).write_text("\n".join(parts) + "\n", encoding="utf-8")


def _default_window(
    polyline: Sequence[tuple[float, float]],
    line_positions: Sequence[float],
) -> tuple[float, float, float, float]:
    """Frame the orbit and the switching lines; singular points may fall
    outside and are then simply not drawn."""
    xs = [p[0] for p in polyline] + list(line_positions)
    ys = [p[1] for p in polyline]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)
    pad_x = 0.12 * (x_hi - x_lo) + 1e-6
    pad_y = 0.12 * (y_hi - y_lo) + 1e-6
    return (x_lo - pad_x, x_hi + pad_x, y_lo - pad_y, y_hi + pad_y)


# --- commands ----------------------------------------------------------------


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    try:
        handler = _COMMANDS[config.command]
    except KeyError:
        raise ValueError(f"unknown command {config.command!r}") from None
    try:
        return handler(config)
    except (SystemFormatError, FileNotFoundError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def _load_input(config: RunConfig) -> PiecewiseSystem:
    if config.input_path is None:
        raise SystemFormatError("an --input system definition is required")
    return load_system(config.input_path)


def _emit_json(config: RunConfig, payload: dict) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _cmd_classify(config: RunConfig) -> int:
    system = _load_input(config)
    continuous, violations = is_continuous(system)
    zones = []
    for zone_id, info, inside in singular_points_in_zone(system):
        zones.append(
            {
                "zone": zone_id,
                "kind": info.kind,
                "modulus": info.modulus,
                "singular_point": list(info.location),
                "inside_zone": inside,
            }
        )
    _emit_json(
        config,
        {
            "layout": "two" if system.layout.n_zones == 2 else "three",
            "continuous": continuous,
            "continuity_violations": violations,
            "zones": zones,
        },
    )
    return EXIT_OK


def _outcome_payload(outcome: closure.ClosureOutcome) -> dict:
    if isinstance(outcome, closure.UniqueCycleCandidate):
        return {
            "outcome": "unique_candidate",
            "corners": {
                "y0": outcome.y0,
                "y1": outcome.y1,
                "y2": outcome.y2,
                "y3": outcome.y3,
            },
        }
    if isinstance(outcome, closure.NoSolution):
        return {"outcome": "no_solution", "reason": outcome.reason}
    return {
        "outcome": "continuum",
        "description": outcome.description,
        "has_parametrization": outcome.parametrization is not None,
    }


def _solve(system: PiecewiseSystem) -> closure.ClosureOutcome:
    if system.layout.n_zones == 2:
        return closure.solve_two_zone(system)
    return closure.solve_three_zone(system)


def _cmd_solve(config: RunConfig) -> int:
    system = _load_input(config)
    _emit_json(config, _outcome_payload(_solve(system)))
    return EXIT_OK


def _cmd_cycle(config: RunConfig) -> int:
    system = _load_input(config)
    result = cycle.certify(system, samples_per_arc=config.samples)
    if result.certificate is None:
        _emit_json(
            config,
            {
                "limit_cycle": False,
                "report": result.reason,
                "closure": _outcome_payload(result.outcome),
            },
        )
        return EXIT_OK
    payload = cycle.certificate_to_json_dict(result.certificate)
    payload["limit_cycle"] = True
    _emit_json(config, payload)
    return EXIT_OK


def _cmd_oracle(config: RunConfig) -> int:
    system = _load_input(config)
    result = cycle.certify(system)
    if result.certificate is None:
        _emit_json(
            config,
            {"limit_cycle": False, "report": result.reason},
        )
        return EXIT_OK
    cert = result.certificate
    y0 = cert.corners[0][1]
    bracket, d_lo, d_hi = _displacement_bracket(system, y0, config.tol)
    numeric_y0 = poincare.fixed_point(system, bracket, tol=config.tol)
    _, return_time = poincare.first_return(system, numeric_y0, tol=config.tol)
    y_gap = abs(numeric_y0 - y0)
    t_gap = abs(return_time - cert.period)
    agrees = y_gap <= ORACLE_AGREEMENT_TOL and t_gap <= ORACLE_AGREEMENT_TOL
    if config.trajectory_csv:
        trajectory = poincare.integrate_numeric(
            system, (1.0, y0), t_max=cert.period * 1.0001, tol=config.tol
        )
        with open(config.trajectory_csv, "w", encoding="utf-8") as fh:
            poincare.trajectory_to_csv(trajectory, fh)
    _emit_json(
        config,
        {
            "analytic": {"y0": y0, "period": cert.period},
            "numeric": {"fixed_point": numeric_y0, "return_time": return_time},
            "difference": {"y0": y_gap, "period": t_gap},
            "displacement_slope_sign": 1.0 if d_hi > d_lo else -1.0,
            "tolerance": ORACLE_AGREEMENT_TOL,
            "agrees": agrees,
        },
    )
    return EXIT_OK if agrees else EXIT_VERIFICATION_FAILED


def _displacement_bracket(
    system: PiecewiseSystem, y_center: float, tol: float
) -> tuple[tuple[float, float], float, float]:
    """Widest bracket around y_center on which the displacement flips sign.

    Nearby orbits can run into sliding segments, where the return map is
    undefined; shrink until both endpoint displacements exist and disagree
    in sign.  Returns the bracket and its endpoint displacements (their
    slope sign is a stability diagnostic: positive means nearby orbits move
    away from the cycle).
    """
    last_error: Exception | None = None
    for width in (5e-2, 2e-2, 1e-2, 5e-3, 2e-3, 1e-3, 5e-4):
        lo, hi = y_center - width, y_center + width
        try:
            d_lo = poincare.return_map(system, lo, tol=tol) - lo
            d_hi = poincare.return_map(system, hi, tol=tol) - hi
        except (poincare.SlidingEncountered, poincare.NoReturn) as exc:
            last_error = exc
            continue
        if d_lo * d_hi < 0.0:
            return ((lo, hi), d_lo, d_hi)
    raise ValueError(
        f"no sign-changing displacement bracket around y = {y_center:g}"
        + (f" (last failure: {last_error})" if last_error else "")
    )


def _cmd_plot(config: RunConfig) -> int:
    system = _load_input(config)
    result = cycle.certify(system, samples_per_arc=config.samples)
    output = config.output_path or "portrait.svg"
    if result.certificate is not None:
        render_svg(result.certificate, config.window, output, system=system)
    else:
        # No isolated cycle: plot a sample orbit for context.
        render_svg(
            _sample_trajectory(system, config.tol), config.window, output,
            system=system,
        )
    return EXIT_OK


def _sample_trajectory(
    system: PiecewiseSystem, tol: float
) -> Trajectory:
    """A representative orbit for systems without a certified cycle.

    Starts strictly inside the rightmost zone; an orbit that runs into a
    sliding segment is plotted up to that point.
    """
    x_start = system.layout.switching_lines[-1][1] + 0.5
    for y_start in (1.0, -1.0, 2.0, 0.5, 3.0):
        try:
            return poincare.integrate_numeric(
                system, (x_start, y_start), t_max=10.0, tol=tol
            )
        except poincare.SlidingEncountered as exc:
            if len(exc.trajectory.states) >= 2:
                return exc.trajectory
        except poincare.StepUnderflow:
            continue
    raise ValueError("could not sample a representative orbit for plotting")


def _cmd_verify(config: RunConfig) -> int:
    system = _load_input(config)
    if config.certificate_path:
        doc = json.loads(Path(config.certificate_path).read_text(encoding="utf-8"))
        certificate = cycle.certificate_from_json_dict(doc)
    else:
        certificate = cycle.find_limit_cycle(system, samples_per_arc=config.samples)
        if certificate is None:
            _emit_json(
                config,
                {"verified": False, "report": "no certificate to verify"},
            )
            return EXIT_OK
    report = cycle.verify_certificate(certificate, system)
    _emit_json(
        config,
        {
            "verified": report.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "measured": c.measured,
                    "limit": c.limit,
                }
                for c in report.checks
            ],
        },
    )
    return EXIT_OK if report.passed else EXIT_VERIFICATION_FAILED


_COMMANDS = {
    "classify": _cmd_classify,
    "solve": _cmd_solve,
    "cycle": _cmd_cycle,
    "oracle": _cmd_oracle,
    "plot": _cmd_plot,
    "verify": _cmd_verify,
}


def _parse_window(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window must be x0,x1,y0,y1")
    try:
        x0, x1, y0, y1 = (float(p) for p in parts)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad window {text!r}") from exc
    return (x0, x1, y0, y1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pwlham",
        description=(
            "Crossing limit cycles of planar piecewise linear Hamiltonian "
            "systems with vertical switching lines"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("classify", "per-zone singularity types and continuity report"),
        ("solve", "closure-equation outcome: none, unique candidate, continuum"),
        ("cycle", "certify the limit cycle (or report why there is none)"),
        ("oracle", "cross-check the cycle against numerical integration"),
        ("plot", "render an SVG phase portrait"),
        ("verify", "re-derive and check every certificate invariant"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--input", required=True, help="system definition JSON")
        cmd.add_argument("--output", help="output file (default: stdout)")
        cmd.add_argument("--tol", type=float, default=1e-9,
                         help="numerical tolerance (oracle integration)")
        cmd.add_argument("--samples", type=int, default=256,
                         help="polyline samples per arc")
        if name == "plot":
            cmd.add_argument("--window", type=_parse_window,
                             help="plot window x0,x1,y0,y1")
        if name == "oracle":
            cmd.add_argument("--trajectory-csv",
                             help="also dump the cycle trajectory as CSV")
        if name == "verify":
            cmd.add_argument("--certificate",
                             help="verify this saved certificate JSON instead "
                                  "of recomputing one")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = RunConfig(
            command=args.command,
            input_path=args.input,
            output_path=args.output,
            certificate_path=getattr(args, "certificate", None),
            trajectory_csv=getattr(args, "trajectory_csv", None),
            tol=args.tol,
            samples=args.samples,
            window=getattr(args, "window", None),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
