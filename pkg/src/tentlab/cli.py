"""Command-line front end: experiment subcommands, CSV/JSON artifacts,
run manifests, and optional SVG plots.

Every subcommand writes its artifacts plus a manifest.json into --out.
The manifest records the exact parameter strings, so feeding it back
through replay_manifest reproduces the CSV artifacts byte for byte.
Numeric flags that a backend interprets (--h, --x0, --sigma, ...) are
kept as strings all the way to Backend.parse, which is what lets
"--h 3/2 --backend rational" stay exact.

Exit codes: 0 success, 2 validation problem (bad flags or bad values),
1 internal failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

from . import __version__
from .backends import BackendError, make_backend
from .cycles import enumerate_cycles, onset_threshold
from .experiments import (
    DEFAULT_FLAT_TOL,
    DEFAULT_MIN_FLAT,
    SQRT2_SLOPE_DIGITS,
    NetSpec,
    chaotic_series,
    classify_outcome,
    detect_escape,
    sqrt2_experiment,
    sqrt2_reference,
    sweep,
)
from .fibonacci import (
    NEAR_STABLE_X1,
    PHI,
    decompose,
    first_crossing,
    predict_escape_index,
    recurrence,
)
from .stabilize import build_coefficients, classify_equilibria, companion_spectrum, stabilized_orbit
from .svgplot import TableFile, render_plot
from .tentmap import MapParams, orbit

DEFAULT_H = "1.5"
DEFAULT_K = 2
DEFAULT_SIGMA = "1.2"
DEFAULT_STEPS = 50
DEFAULT_TOL = 1e-3
DEFAULT_BACKEND = "binary64"

MANIFEST_SCHEMA = 1
MANIFEST_NAME = "manifest.json"


def _add_backend_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--backend",
        choices=("binary64", "rational", "decimal"),
        default=DEFAULT_BACKEND,
        help="number system for all map arithmetic",
    )
    p.add_argument(
        "--precision",
        type=int,
        default=None,
        help="significant digits (decimal backend only)",
    )


def _add_out_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--out",
        default=".",
        help="directory receiving artifacts and manifest.json",
    )


def _add_plot_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--plot",
        choices=("line", "scatter"),
        default=None,
        help="also render the CSV as an SVG in this style",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tentlab",
        description="Tent-map orbits, cycle algebra, six-tap stabilization, "
        "and escape experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="iterate T^k from a start point")
    p.add_argument("--h", default=DEFAULT_H, help="map slope, e.g. 1.5 or 3/2")
    p.add_argument("--k", type=int, default=DEFAULT_K, help="iterate power")
    p.add_argument("--x0", default="0.5", help="start point in [0,1]")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    _add_backend_flags(p)
    _add_plot_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("cycles", help="enumerate the period-n cycles at h")
    p.add_argument("--h", default=DEFAULT_H)
    p.add_argument("--period", type=int, default=2)
    p.add_argument(
        "--onset",
        action="store_true",
        help="also report the onset threshold for the period",
    )
    _add_backend_flags(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_cycles)

    p = sub.add_parser(
        "stabilize", help="run the six-tap averaged recursion from x0"
    )
    p.add_argument("--h", default=DEFAULT_H)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--sigma", default=DEFAULT_SIGMA)
    p.add_argument("--x0", default="0.5")
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    _add_backend_flags(p)
    _add_plot_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_stabilize)

    p = sub.add_parser(
        "sweep", help="classify stabilized runs from every net point"
    )
    p.add_argument(
        "--net",
        default="uniform:1000",
        help="start-point net, uniform:N or triadic:M",
    )
    p.add_argument("--h", default=DEFAULT_H)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--sigma", default=DEFAULT_SIGMA)
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument(
        "--threads",
        type=int,
        default=None,
        help="worker count; 0 = one per CPU (default: TENTLAB_THREADS or 1)",
    )
    _add_backend_flags(p)
    _add_plot_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser(
        "escape", help="find the flat-then-jump event in a stabilized run"
    )
    p.add_argument("--h", default=DEFAULT_H)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--sigma", default=DEFAULT_SIGMA)
    p.add_argument("--x0", default="0.4")
    p.add_argument("--steps", type=int, default=300)
    p.add_argument("--flat-tol", type=float, default=DEFAULT_FLAT_TOL)
    p.add_argument("--jump-tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--min-flat", type=int, default=DEFAULT_MIN_FLAT)
    _add_backend_flags(p)
    _add_plot_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_escape)

    p = sub.add_parser("series", help="plain chaotic orbit of 1/2 under T")
    p.add_argument("--h", default=DEFAULT_H)
    p.add_argument("--steps", type=int, default=DEFAULT_STEPS)
    _add_backend_flags(p)
    _add_plot_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_series)

    p = sub.add_parser(
        "sqrt2", help="high-precision orbit pinned near 2 - sqrt(2)"
    )
    p.add_argument(
        "--h-digits",
        default=SQRT2_SLOPE_DIGITS,
        help="decimal digit string for the slope",
    )
    p.add_argument("--precision", type=int, default=70)
    p.add_argument("--steps", type=int, default=600)
    p.add_argument("--flat-tol", type=float, default=DEFAULT_FLAT_TOL)
    p.add_argument("--jump-tol", type=float, default=1e-2)
    p.add_argument("--min-flat", type=int, default=DEFAULT_MIN_FLAT)
    _add_plot_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_sqrt2)

    p = sub.add_parser(
        "fib", help="additive recurrence with eigen-decomposition"
    )
    p.add_argument("--x0", default="1")
    p.add_argument("--x1", default=NEAR_STABLE_X1)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--threshold", type=float, default=1.0)
    p.add_argument(
        "--phase",
        action="store_true",
        help="also emit consecutive-pair coordinates and manifold slopes",
    )
    _add_backend_flags(p)
    _add_plot_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_fib)

    p = sub.add_parser(
        "spectrum", help="companion-map spectral radii for cell slopes mu"
    )
    p.add_argument("--h", default=DEFAULT_H)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--sigma", default=DEFAULT_SIGMA)
    p.add_argument(
        "--mu",
        type=float,
        nargs="+",
        default=None,
        help="explicit slopes; default derives them from the equilibria",
    )
    _add_backend_flags(p)
    _add_plot_flag(p)
    _add_out_flag(p)
    p.set_defaults(func=_cmd_spectrum)

    return parser


def _ensure_out(ns: argparse.Namespace) -> Path:
    out = Path(ns.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_csv(path: Path, header: tuple[str, ...], rows) -> str:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path.name


def _write_json(path: Path, doc) -> str:
    path.write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    return path.name


def _maybe_plot(ns: argparse.Namespace, csv_path: Path) -> list[str]:
    if getattr(ns, "plot", None) is None:
        return []
    table = TableFile.read(csv_path)
    svg = render_plot(table, ns.plot, csv_path.with_suffix(".svg"))
    return [svg.name]


def _write_manifest(
    out: Path, command: str, parameters: dict, artifacts: list[str], t0: float
) -> None:
    doc = {
        "schema": MANIFEST_SCHEMA,
        "command": command,
        "parameters": parameters,
        "artifacts": sorted(artifacts + [MANIFEST_NAME]),
        "tool_version": __version__,
        "wall_time_seconds": round(time.perf_counter() - t0, 6),
    }
    _write_json(out / MANIFEST_NAME, doc)


def _backend_params(ns: argparse.Namespace) -> dict:
    return {
        "backend": ns.backend,
        "precision": None if ns.precision is None else str(ns.precision),
    }


def _plot_param(ns: argparse.Namespace) -> dict:
    return {"plot": ns.plot}


def _make_backend(ns: argparse.Namespace):
    return make_backend(ns.backend, ns.precision)


def _cmd_simulate(ns: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    b = _make_backend(ns)
    params = MapParams.parse(ns.h, b)
    x0 = b.parse(ns.x0)
    run = orbit(x0, params, k=ns.k, steps=ns.steps)
    out = _ensure_out(ns)
    rows = [(str(i), b.serialize(x)) for i, x in enumerate(run.points)]
    artifacts = [_write_csv(out / "orbit.csv", ("n", "x"), rows)]
    artifacts += _maybe_plot(ns, out / "orbit.csv")
    parameters = {
        "h": ns.h,
        "k": str(ns.k),
        "x0": ns.x0,
        "steps": str(ns.steps),
        **_backend_params(ns),
        **_plot_param(ns),
    }
    _write_manifest(out, "simulate", parameters, artifacts, t0)
    return 0


def _cmd_cycles(ns: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    b = _make_backend(ns)
    params = MapParams.parse(ns.h, b)
    found = enumerate_cycles(params, ns.period)
    out = _ensure_out(ns)
    doc = {
        "h": b.serialize(params.h),
        "period": ns.period,
        "count": len(found),
        "cycles": [
            {
                "points": [b.serialize(x) for x in c.points],
                "itinerary": c.itinerary,
                "multiplier": b.serialize(c.multiplier),
            }
            for c in found
        ],
    }
    if ns.onset:
        record = onset_threshold(ns.period)
        doc["onset"] = {
            "threshold": record.threshold,
            "polynomial": list(record.polynomial),
        }
    artifacts = [_write_json(out / "cycles.json", doc)]
    rows = [
        (str(i), str(j), b.serialize(x), c.itinerary, b.serialize(c.multiplier))
        for i, c in enumerate(found)
        for j, x in enumerate(c.points)
    ]
    artifacts.append(
        _write_csv(
            out / "cycles.csv",
            ("cycle", "index", "point", "itinerary", "multiplier"),
            rows,
        )
    )
    parameters = {
        "h": ns.h,
        "period": str(ns.period),
        "onset": ns.onset,
        **_backend_params(ns),
    }
    _write_manifest(out, "cycles", parameters, artifacts, t0)
    return 0


def _cmd_stabilize(ns: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    b = _make_backend(ns)
    params = MapParams.parse(ns.h, b)
    coeffs = build_coefficients(b.parse(ns.sigma))
    run = stabilized_orbit(b.parse(ns.x0), params, ns.k, coeffs, ns.steps)
    outcome = classify_outcome(run, params, ns.tol)
    out = _ensure_out(ns)
    rows = [(str(i), b.serialize(x)) for i, x in enumerate(run.starred)]
    artifacts = [_write_csv(out / "stabilize.csv", ("n", "x_star"), rows)]
    summary = {
        "x0": b.serialize(run.x0),
        "sigma": b.serialize(coeffs.sigma),
        "coefficients": [b.serialize(a) for a in coeffs.a],
        "final_value": b.serialize(run.starred[-1]),
        "classified_target": outcome.variant.value,
        "distance": outcome.distance,
    }
    artifacts.append(_write_json(out / "stabilize.json", summary))
    artifacts += _maybe_plot(ns, out / "stabilize.csv")
    parameters = {
        "h": ns.h,
        "k": str(ns.k),
        "sigma": ns.sigma,
        "x0": ns.x0,
        "steps": str(ns.steps),
        "tol": repr(ns.tol),
        **_backend_params(ns),
        **_plot_param(ns),
    }
    _write_manifest(out, "stabilize", parameters, artifacts, t0)
    return 0


def _cmd_sweep(ns: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    b = _make_backend(ns)
    params = MapParams.parse(ns.h, b)
    coeffs = build_coefficients(b.parse(ns.sigma))
    spec = NetSpec.parse(ns.net)
    result = sweep(
        spec, params, ns.k, coeffs, ns.steps, ns.tol, threads=ns.threads
    )
    out = _ensure_out(ns)
    rows = [
        (
            b.serialize(x0),
            oc.variant.value,
            b.serialize(oc.final_value),
            repr(oc.distance),
        )
        for x0, oc in zip(result.points, result.outcomes)
    ]
    artifacts = [
        _write_csv(
            out / "sweep.csv", ("x0", "outcome", "final", "distance"), rows
        )
    ]
    summary = {
        "net": str(spec),
        "size": len(result.points),
        "steps": result.steps,
        "tolerance": result.tolerance,
        "counts": {kind.value: n for kind, n in sorted(
            result.counts.items(), key=lambda item: item[0].value
        )},
    }
    artifacts.append(_write_json(out / "sweep.json", summary))
    artifacts += _maybe_plot(ns, out / "sweep.csv")
    parameters = {
        "net": ns.net,
        "h": ns.h,
        "k": str(ns.k),
        "sigma": ns.sigma,
        "steps": str(ns.steps),
        "tol": repr(ns.tol),
        "threads": None if ns.threads is None else str(ns.threads),
        **_backend_params(ns),
        **_plot_param(ns),
    }
    _write_manifest(out, "sweep", parameters, artifacts, t0)
    return 0


def _cmd_escape(ns: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    b = _make_backend(ns)
    params = MapParams.parse(ns.h, b)
    coeffs = build_coefficients(b.parse(ns.sigma))
    run = stabilized_orbit(b.parse(ns.x0), params, ns.k, coeffs, ns.steps)
    series = run.to_floats()
    event = detect_escape(
        series,
        flat_tol=ns.flat_tol,
        jump_tol=ns.jump_tol,
        min_flat=ns.min_flat,
    )
    out = _ensure_out(ns)
    rows = [(str(i), b.serialize(x)) for i, x in enumerate(run.starred)]
    artifacts = [_write_csv(out / "escape.csv", ("n", "x_star"), rows)]
    doc = {
        "x0": b.serialize(run.x0),
        "steps": ns.steps,
        "event": None
        if event is None
        else {
            "flat_value": event.flat_value,
            "flat_start": event.flat_start,
            "escape_index": event.escape_index,
            "terminal_value": event.terminal_value,
        },
    }
    artifacts.append(_write_json(out / "escape.json", doc))
    artifacts += _maybe_plot(ns, out / "escape.csv")
    parameters = {
        "h": ns.h,
        "k": str(ns.k),
        "sigma": ns.sigma,
        "x0": ns.x0,
        "steps": str(ns.steps),
        "flat-tol": repr(ns.flat_tol),
        "jump-tol": repr(ns.jump_tol),
        "min-flat": str(ns.min_flat),
        **_backend_params(ns),
        **_plot_param(ns),
    }
    _write_manifest(out, "escape", parameters, artifacts, t0)
    return 0


def _cmd_series(ns: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    b = _make_backend(ns)
    params = MapParams.parse(ns.h, b)
    run = chaotic_series(params, ns.steps)
    out = _ensure_out(ns)
    rows = [(str(i), b.serialize(x)) for i, x in enumerate(run.points)]
    artifacts = [_write_csv(out / "series.csv", ("n", "x"), rows)]
    artifacts += _maybe_plot(ns, out / "series.csv")
    parameters = {
        "h": ns.h,
        "steps": str(ns.steps),
        **_backend_params(ns),
        **_plot_param(ns),
    }
    _write_manifest(out, "series", parameters, artifacts, t0)
    return 0


def _cmd_sqrt2(ns: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    run, event = sqrt2_experiment(
        h_digits=ns.h_digits,
        precision=ns.precision,
        steps=ns.steps,
        flat_tol=ns.flat_tol,
        jump_tol=ns.jump_tol,
        min_flat=ns.min_flat,
    )
    reference = sqrt2_reference(ns.precision)
    b = run.params.backend
    out = _ensure_out(ns)
    rows = [
        (str(i), repr(abs(float(x - reference))))
        for i, x in enumerate(run.points)
    ]
    artifacts = [_write_csv(out / "sqrt2.csv", ("n", "deviation"), rows)]
    doc = {
        "precision": ns.precision,
        "steps": ns.steps,
        "reference": str(reference),
        "final_value": b.serialize(run.points[-1]),
        "event": None
        if event is None
        else {
            "flat_value": b.serialize(event.flat_value),
            "flat_start": event.flat_start,
            "escape_index": event.escape_index,
            "terminal_value": b.serialize(event.terminal_value),
        },
    }
    artifacts.append(_write_json(out / "sqrt2.json", doc))
    artifacts += _maybe_plot(ns, out / "sqrt2.csv")
    parameters = {
        "h-digits": ns.h_digits,
        "precision": str(ns.precision),
        "steps": str(ns.steps),
        "flat-tol": repr(ns.flat_tol),
        "jump-tol": repr(ns.jump_tol),
        "min-flat": str(ns.min_flat),
        **_plot_param(ns),
    }
    _write_manifest(out, "sqrt2", parameters, artifacts, t0)
    return 0


def _cmd_fib(ns: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    b = _make_backend(ns)
    x0 = b.parse(ns.x0)
    x1 = b.parse(ns.x1)
    run = recurrence(x0, x1, ns.steps, b)
    data = decompose(b.to_float(x0), b.to_float(x1))
    predicted = predict_escape_index(
        b.to_float(x0), b.to_float(x1), ns.threshold
    )
    observed = first_crossing(run, ns.threshold)
    out = _ensure_out(ns)
    rows = [(str(i), b.serialize(x)) for i, x in enumerate(run.seq)]
    artifacts = [_write_csv(out / "fib.csv", ("n", "x"), rows)]
    doc = {
        "a_u": data.a_u,
        "a_s": data.a_s,
        "threshold": ns.threshold,
        "predicted_escape": predicted,
        "observed_escape": observed,
    }
    if ns.phase:
        pairs = [
            (b.serialize(run.seq[i]), b.serialize(run.seq[i + 1]))
            for i in range(len(run.seq) - 1)
        ]
        artifacts.append(
            _write_csv(out / "phase.csv", ("x", "x_next"), pairs)
        )
        doc["unstable_slope"] = PHI
        doc["stable_slope"] = -1.0 / PHI
    artifacts.append(_write_json(out / "fib.json", doc))
    artifacts += _maybe_plot(ns, out / "fib.csv")
    parameters = {
        "x0": ns.x0,
        "x1": ns.x1,
        "steps": str(ns.steps),
        "threshold": repr(ns.threshold),
        "phase": ns.phase,
        **_backend_params(ns),
        **_plot_param(ns),
    }
    _write_manifest(out, "fib", parameters, artifacts, t0)
    return 0


def _cmd_spectrum(ns: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    b = _make_backend(ns)
    params = MapParams.parse(ns.h, b)
    coeffs = build_coefficients(b.parse(ns.sigma))
    entries = []
    if ns.mu is None:
        reports = classify_equilibria(params, ns.k, coeffs)
        for report in reports:
            entries.append(
                {
                    "mu": b.to_float(report.slope),
                    "radius": report.spectral_radius,
                    "point": b.serialize(report.point),
                    "stable": report.stable,
                }
            )
    else:
        for mu in ns.mu:
            _, radius = companion_spectrum(mu, coeffs)
            entries.append(
                {"mu": mu, "radius": radius, "point": None, "stable": radius < 1.0}
            )
    out = _ensure_out(ns)
    rows = [(repr(e["mu"]), repr(e["radius"])) for e in entries]
    artifacts = [_write_csv(out / "spectrum.csv", ("mu", "radius"), rows)]
    doc = {"sigma": ns.sigma, "entries": entries}
    artifacts.append(_write_json(out / "spectrum.json", doc))
    artifacts += _maybe_plot(ns, out / "spectrum.csv")
    parameters = {
        "h": ns.h,
        "k": str(ns.k),
        "sigma": ns.sigma,
        "mu": None if ns.mu is None else [repr(m) for m in ns.mu],
        **_backend_params(ns),
        **_plot_param(ns),
    }
    _write_manifest(out, "spectrum", parameters, artifacts, t0)
    return 0


def run_command(argv: list[str]) -> int:
    """Parse argv, run the subcommand, write artifacts; return exit status."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code in (0, None):
            return 0
        return 2
    try:
        return ns.func(ns)
    except BackendError as exc:
        print(f"tentlab: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive catch-all
        print(f"tentlab: internal error: {exc}", file=sys.stderr)
        return 1


def replay_manifest(manifest_path: str | Path, out_dir: str | Path) -> int:
    """Re-run a recorded invocation, directing artifacts to out_dir.

    Reconstructs argv from the manifest's parameter strings; CSV artifacts
    of the replay are byte-identical to the originals.
    """
    doc = json.loads(Path(manifest_path).read_text(encoding="utf-8"))
    if doc.get("schema") != MANIFEST_SCHEMA:
        print(
            f"tentlab: error: unsupported manifest schema {doc.get('schema')!r}",
            file=sys.stderr,
        )
        return 2
    argv: list[str] = [doc["command"]]
    for key, value in doc["parameters"].items():
        if value is None or value is False:
            continue
        if value is True:
            argv.append(f"--{key}")
        elif isinstance(value, list):
            argv.append(f"--{key}")
            argv.extend(str(v) for v in value)
        else:
            argv.extend([f"--{key}", str(value)])
    argv.extend(["--out", str(out_dir)])
    return run_command(argv)


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
