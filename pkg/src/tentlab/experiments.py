"""Initial-condition sweeps, outcome classification, and escape detection.

The experiments here contrast exact and rounded arithmetic on the same
dynamics: sweeps classify where stabilized runs land on uniform or triadic
grids of starting points, detect_escape finds the flat-then-jump signature
of a run that sat near an exactly-invariant value until accumulated
roundoff expelled it, and the fixed-precision experiment reproduces that
signature with a slope that agrees with sqrt(2) to 57 decimal digits.

Binary64 sweeps run on numpy arrays in fixed-size chunks.  Chunk
boundaries depend only on chunk_size, never on the worker count, and every
elementwise operation mirrors the scalar recursion's order, so sweep output
is bit-identical across thread counts, including a plain serial run.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from decimal import Decimal

import numpy as np

from .backends import Backend, DomainError, FixedDecimal, ParseError, Scalar
from .cycles import fixed_point, two_cycle
from .stabilize import TAPS, Coefficients, StabRun, stabilized_orbit
from .tentmap import MapParams, Orbit, orbit

MAX_NET_SIZE = 10**7

DEFAULT_FLAT_TOL = 1e-9
DEFAULT_JUMP_TOL = 1e-3
DEFAULT_MIN_FLAT = 30

THREADS_ENV_VAR = "TENTLAB_THREADS"
DEFAULT_CHUNK_SIZE = 4096

# slope agreeing with sqrt(2) through 57 fractional digits
SQRT2_SLOPE_DIGITS = (
    "1.414213562373095048801688724209698078569671875376948073176"
)


class OutcomeKind(enum.Enum):
    CYCLE_LOW = "cycle_low"
    CYCLE_HIGH = "cycle_high"
    FIXED_POINT = "fixed_point"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class NetSpec:
    """A grid of starting points: uniform(N) is i/N, triadic(m) is i/(5*3^m)."""

    kind: str
    parameter: int

    def __post_init__(self):
        if self.kind not in ("uniform", "triadic"):
            raise DomainError(f"unknown net kind {self.kind!r}")
        if self.parameter < 1:
            raise DomainError(f"net parameter must be positive, got {self.parameter}")

    @classmethod
    def uniform(cls, n: int) -> "NetSpec":
        return cls(kind="uniform", parameter=n)

    @classmethod
    def triadic(cls, m: int) -> "NetSpec":
        return cls(kind="triadic", parameter=m)

    @classmethod
    def parse(cls, text: str) -> "NetSpec":
        kind, sep, num = text.partition(":")
        if not sep or kind not in ("uniform", "triadic") or not num.isdigit():
            raise ParseError(
                f"expected 'uniform:N' or 'triadic:M', got {text!r}"
            )
        return cls(kind=kind, parameter=int(num))

    @property
    def denominator(self) -> int:
        if self.kind == "uniform":
            return self.parameter
        return 5 * 3**self.parameter

    @property
    def size(self) -> int:
        return self.denominator + 1

    def __str__(self) -> str:
        return f"{self.kind}:{self.parameter}"


@dataclass(frozen=True)
class Outcome:
    """Where one stabilized run landed, against the three cycle targets."""

    variant: OutcomeKind
    final_value: Scalar
    distance: float


@dataclass(frozen=True)
class SweepResult:
    net: NetSpec
    steps: int
    tolerance: float
    points: tuple[Scalar, ...]
    outcomes: tuple[Outcome, ...]
    counts: dict

    def count(self, variant: OutcomeKind) -> int:
        return self.counts.get(variant, 0)


@dataclass(frozen=True)
class EscapeEvent:
    """A flat stretch and the index where the series finally left it."""

    flat_value: Scalar
    flat_start: int
    escape_index: int
    terminal_value: Scalar


def build_net(spec: NetSpec, backend: Backend) -> list[Scalar]:
    """All grid points of the net, endpoints included, in index order."""
    denom = spec.denominator
    if spec.size > MAX_NET_SIZE:
        raise DomainError(
            f"net of {spec.size} points exceeds the cap of {MAX_NET_SIZE}"
        )
    if backend.kind == "binary64":
        d = float(denom)
        return [i / d for i in range(denom + 1)]
    den = backend.from_int(denom)
    return [backend.div(backend.from_int(i), den) for i in range(denom + 1)]


def classify_outcome(
    run: StabRun, params: MapParams, tolerance: float
) -> Outcome:
    """Match the final starred value against the 2-cycle and fixed point.

    The nearest target wins when strictly inside the tolerance; exact
    distance ties prefer the cycle points over the fixed point.
    """
    final = run.starred[-1]
    return _classify_value(
        params.backend.to_float(final), final, params, tolerance
    )


def _targets(params: MapParams) -> tuple[float, float, float]:
    lo, hi = two_cycle(params)
    fp = fixed_point(params)
    b = params.backend
    return b.to_float(lo), b.to_float(hi), b.to_float(fp)


def _classify_value(
    final_float: float,
    final: Scalar,
    params: MapParams,
    tolerance: float,
    targets: tuple[float, float, float] | None = None,
) -> Outcome:
    lo, hi, fp = targets if targets is not None else _targets(params)
    pairs = (
        (OutcomeKind.CYCLE_LOW, abs(final_float - lo)),
        (OutcomeKind.CYCLE_HIGH, abs(final_float - hi)),
        (OutcomeKind.FIXED_POINT, abs(final_float - fp)),
    )
    best_kind, best_dist = pairs[0]
    for kind, dist in pairs[1:]:
        if dist < best_dist:
            best_kind, best_dist = kind, dist
    if best_dist < tolerance:
        return Outcome(variant=best_kind, final_value=final, distance=best_dist)
    return Outcome(
        variant=OutcomeKind.UNRESOLVED, final_value=final, distance=best_dist
    )


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV_VAR, "1")
        try:
            threads = int(raw)
        except ValueError:
            raise DomainError(
                f"{THREADS_ENV_VAR} must be an integer, got {raw!r}"
            )
    if threads == 0:
        threads = os.cpu_count() or 1
    if threads < 0:
        raise DomainError(f"thread count must be nonnegative, got {threads}")
    return threads


def _tent_power_array(x: np.ndarray, h: float, k: int) -> np.ndarray:
    for _ in range(k):
        x = np.where(x <= 0.5, h * x, -h * x + h)
        x = np.clip(x, 0.0, 1.0)
    return x


def _sweep_chunk_binary64(
    x0s: np.ndarray, h: float, k: int, a: tuple[float, ...], steps: int
) -> np.ndarray:
    """Final starred values for one chunk, mirroring the scalar recursion."""
    window = [x0s.astype(np.float64, copy=True)]
    for _ in range(TAPS - 1):
        window.append(_tent_power_array(window[-1], h, k))
    fvals = [_tent_power_array(w, h, k) for w in window]
    current = window[-1]
    for _ in range(TAPS, steps + 1):
        acc = a[0] * fvals[-1]
        for i in range(2, TAPS + 1):
            acc = acc + a[i - 1] * fvals[-i]
        current = acc
        fvals.pop(0)
        fvals.append(_tent_power_array(current, h, k))
    return current


def sweep(
    spec: NetSpec,
    params: MapParams,
    k: int,
    coeffs: Coefficients,
    steps: int,
    tolerance: float,
    threads: int | None = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> SweepResult:
    """Classify a stabilized run from every net point.

    Output is ordered by net index and is bit-identical for any thread
    count; threads default to the TENTLAB_THREADS environment variable
    (0 means one per CPU).
    """
    if steps < TAPS:
        raise DomainError(f"sweep needs at least {TAPS} steps, got {steps}")
    if not tolerance > 0:
        raise DomainError(f"tolerance must be positive, got {tolerance}")
    if chunk_size < 1:
        raise DomainError(f"chunk size must be positive, got {chunk_size}")
    b = params.backend
    nworkers = _resolve_threads(threads)
    points = build_net(spec, b)

    if b.kind == "binary64":
        grid = np.array(points, dtype=np.float64)
        h = float(params.h)
        a = tuple(float(v) for v in coeffs.a)
        chunks = [
            grid[lo : lo + chunk_size] for lo in range(0, len(grid), chunk_size)
        ]
        if nworkers > 1 and len(chunks) > 1:
            with ThreadPoolExecutor(max_workers=nworkers) as pool:
                finals_parts = list(
                    pool.map(
                        lambda c: _sweep_chunk_binary64(c, h, k, a, steps), chunks
                    )
                )
        else:
            finals_parts = [
                _sweep_chunk_binary64(c, h, k, a, steps) for c in chunks
            ]
        finals = np.concatenate(finals_parts)
        targets = _targets(params)
        outcomes = tuple(
            _classify_value(float(f), float(f), params, tolerance, targets)
            for f in finals
        )
    else:
        outcomes = tuple(
            classify_outcome(
                stabilized_orbit(x0, params, k, coeffs, steps), params, tolerance
            )
            for x0 in points
        )

    counts: dict = {}
    for oc in outcomes:
        counts[oc.variant] = counts.get(oc.variant, 0) + 1
    return SweepResult(
        net=spec,
        steps=steps,
        tolerance=tolerance,
        points=tuple(points),
        outcomes=outcomes,
        counts=counts,
    )


def detect_escape(
    series,
    flat_tol: float = DEFAULT_FLAT_TOL,
    jump_tol: float = DEFAULT_JUMP_TOL,
    min_flat: int = DEFAULT_MIN_FLAT,
) -> EscapeEvent | None:
    """Longest flat stretch that the series later leaves by >= jump_tol.

    A stretch is flat when every value stays within flat_tol of its first
    value.  A stretch qualifies when it is at least min_flat long and some
    later position deviates from the stretch's first value by jump_tol or
    more; a gradual ramp between the two is allowed.  Among qualifying
    stretches the longest wins, ties going to the earliest.  Returns None
    when the series never settles, or settles and never leaves: a stretch
    that runs to the end of the series (a converged tail, say) never
    qualifies, because nothing after it jumps.
    """
    values = [float(x) for x in series]
    n = len(values)
    if n < min_flat:
        return None

    best: tuple[int, int, int] | None = None  # (length, -start, escape)
    for i in range(n):
        anchor = values[i]
        j = i + 1
        while j < n and abs(values[j] - anchor) <= flat_tol:
            j += 1
        run = j - i
        if run < min_flat:
            continue
        if best is not None and run < best[0]:
            continue
        escape = next(
            (m for m in range(j, n) if abs(values[m] - anchor) >= jump_tol),
            None,
        )
        if escape is None:
            continue
        if best is None or run > best[0]:
            best = (run, -i, escape)
    if best is None:
        return None

    run, neg_start, escape = best
    start = -neg_start
    return EscapeEvent(
        flat_value=series[start],
        flat_start=start,
        escape_index=escape,
        terminal_value=series[-1],
    )


def chaotic_series(params: MapParams, steps: int) -> Orbit:
    """The plain orbit of 1/2, the aperiodic sequence the figures plot."""
    half = params.backend.parse("0.5")
    return orbit(half, params, k=1, steps=steps)


def sqrt2_reference(precision: int) -> Decimal:
    """2 - sqrt(2) to `precision` fractional digits via integer square root.

    isqrt(2 * 10^(2p)) truncates sqrt(2) * 10^p to an integer, so the
    construction never touches any floating or library constant.
    """
    if precision < 1:
        raise DomainError(f"precision must be positive, got {precision}")
    root = math.isqrt(2 * 10 ** (2 * precision))
    return Decimal(f"{2 * 10**precision - root}E-{precision}")


def sqrt2_experiment(
    h_digits: str = SQRT2_SLOPE_DIGITS,
    precision: int = 70,
    steps: int = 600,
    flat_tol: float = DEFAULT_FLAT_TOL,
    jump_tol: float = 1e-2,
    min_flat: int = DEFAULT_MIN_FLAT,
) -> tuple[Orbit, EscapeEvent | None]:
    """Orbit of 1/2 under a slope one whisker under sqrt(2), plus its escape.

    With h = sqrt(2) exactly, 1/2 maps in three steps onto the fixed point
    2 - sqrt(2).  A slope that merely agrees with sqrt(2) to 57 digits
    parks the orbit within ~1e-57 of that value, and the gap then grows by
    a factor h per step until the orbit visibly leaves: the same
    flat-then-jump signature as binary64, at a much smaller scale.
    """
    digit_count = len(Decimal(h_digits).as_tuple().digits)
    if precision < digit_count:
        raise DomainError(
            f"precision {precision} cannot hold the {digit_count}-digit slope"
        )
    backend = FixedDecimal(precision)
    params = MapParams(backend.parse(h_digits), backend)
    run = orbit(backend.parse("0.5"), params, k=1, steps=steps)
    event = detect_escape(
        run.points, flat_tol=flat_tol, jump_tol=jump_tol, min_flat=min_flat
    )
    return run, event
