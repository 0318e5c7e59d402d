"""Point evaluation of every scheme and deterministic grid sweeps to CSV."""

from __future__ import annotations

import io
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

from . import analytic, bs_scheme, ndpa
from .errors import DomainError, InvalidParameter, PhotonAddError
from .witnesses import WitnessKind, WitnessResult, q1_opt, q2, sign

AXIS_NAMES = ("alpha", "nbar_inv", "reflectance", "eta", "ps")

SCHEMES = {
    "pure-sacs": (("alpha",), ("q1", "q2")),
    "pure-sats": (("nbar_inv",), ("q2",)),
    "bs-coherent": (("alpha", "reflectance", "eta", "ps"), ("q1", "q2", "pnd")),
    "bs-thermal": (("nbar_inv", "reflectance", "eta", "ps"), ("q2", "pnd")),
    "ndpa-coherent": (("alpha", "eta"), ("q1", "q2")),
    "ndpa-thermal": (("nbar_inv", "eta"), ("q2",)),
}

MAX_ORDER = 8
CSV_HEADER = "axis1,axis2,m,witness,value,p_nd,defined,sign"


class PointResult(NamedTuple):
    m: int
    q1: Optional[WitnessResult]
    q2: Optional[WitnessResult]
    p_nd: Optional[float]


def _undefined(kind):
    return WitnessResult(math.nan, math.nan, math.nan, False, kind)


def check_params(scheme: str, params: dict) -> None:
    """Raise :class:`InvalidParameter` naming the first violated range."""
    if scheme not in SCHEMES:
        raise InvalidParameter(f"unknown scheme {scheme!r}; choose from {', '.join(SCHEMES)}")
    needed, _ = SCHEMES[scheme]
    extra = set(params) - set(needed)
    if extra:
        raise InvalidParameter(f"parameter(s) {', '.join(sorted(extra))} not used by scheme {scheme}")
    missing = [n for n in needed if n not in params]
    if missing:
        raise InvalidParameter(f"scheme {scheme} needs parameter(s): {', '.join(missing)}")
    for name, v in params.items():
        if not math.isfinite(v):
            raise InvalidParameter(f"{name} must be finite, got {v}")
    if "alpha" in params and params["alpha"] < 0:
        raise InvalidParameter(f"alpha must be >= 0, got {params['alpha']}")
    if "nbar_inv" in params and not params["nbar_inv"] > 0:
        raise InvalidParameter(f"nbar_inv = 1/nbar must be > 0, got {params['nbar_inv']}")
    for name in ("reflectance", "ps"):
        if name in params and not 0.0 <= params[name] <= 1.0:
            raise InvalidParameter(f"{name} must lie in [0, 1], got {params[name]}")
    if "eta" in params:
        lo_open = scheme.startswith("ndpa")
        eta = params["eta"]
        if not ((0.0 < eta if lo_open else 0.0 <= eta) and eta <= 1.0):
            rng = "(0, 1]" if lo_open else "[0, 1]"
            raise InvalidParameter(f"eta must lie in {rng} for {scheme}, got {eta}")


def check_orders(orders: Sequence[int]) -> tuple:
    if not orders:
        raise InvalidParameter("at least one order m is required")
    for m in orders:
        if int(m) != m or not 1 <= m <= MAX_ORDER:
            raise InvalidParameter(f"orders must be integers in 1..{MAX_ORDER}, got {m}")
    return tuple(int(m) for m in orders)


def evaluate_point(scheme: str, params: dict, orders: Sequence[int]) -> list[PointResult]:
    """All witnesses a scheme offers, for each order, at one parameter point.

    Witnesses that are undefined at the point (0/0 forms, or a probability too
    small to condition on) come back with ``defined = False``.
    """
    check_params(scheme, params)
    orders = check_orders(orders)
    nbar = 1.0 / params["nbar_inv"] if "nbar_inv" in params else None
    out = []
    if scheme == "pure-sacs":
        p = analytic.SacsParams(params["alpha"])
        for m in orders:
            ms = analytic.sacs_moment_set(p, m)
            out.append(PointResult(m, q1_opt(ms), _q2_or_undefined(ms, p.alpha, m), None))
    elif scheme == "pure-sats":
        p = analytic.SatsParams(nbar)
        out = [PointResult(m, None, q2(analytic.sats_moment_set(p, m)), None) for m in orders]
    elif scheme == "bs-coherent":
        p = bs_scheme.BsParams.coherent(params["alpha"], params["reflectance"], params["eta"], params["ps"])
        out = [PointResult(r.m, r.q1, r.q2, r.p_nd) for r in bs_scheme.bs_witnesses_coherent(p, orders)]
    elif scheme == "bs-thermal":
        p = bs_scheme.BsParams.thermal(nbar, params["reflectance"], params["eta"], params["ps"])
        try:
            out = [PointResult(r.m, None, r.q2, r.p_nd) for r in bs_scheme.bs_witnesses_thermal(p, orders)]
        except PhotonAddError:
            # only reachable at R = 1, where the oracle fallback may not fit in memory
            out = [PointResult(m, None, _undefined(WitnessKind.Q2), math.nan) for m in orders]
    elif scheme == "ndpa-coherent":
        p = ndpa.NdpaParams.coherent(params["alpha"], params["eta"])
        for m in orders:
            try:
                w2 = ndpa.ndpa_q2(p, m)
            except DomainError:
                w2 = _undefined(WitnessKind.Q2)
            out.append(PointResult(m, ndpa.ndpa_q1(p, m), w2, None))
    elif scheme == "ndpa-thermal":
        p = ndpa.NdpaParams.thermal(nbar, params["eta"])
        out = [PointResult(m, None, ndpa.ndpa_q2(p, m), None) for m in orders]
    return out


def _q2_or_undefined(ms, alpha, m):
    if alpha == 0 and m >= 2:
        return _undefined(WitnessKind.Q2)
    return q2(ms)


# ---------------------------------------------------------------------------
# grids


class Axis(NamedTuple):
    name: str
    start: float
    stop: float
    step: float

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """Parse ``name=start:stop:step``."""
        try:
            name, rng = text.split("=", 1)
            start, stop, step = (float(v) for v in rng.split(":"))
        except ValueError:
            raise InvalidParameter(f"axis must look like name=start:stop:step, got {text!r}") from None
        return cls(name.strip(), start, stop, step)

    def values(self) -> list[float]:
        """Grid points ``start + k * step``; the last one lies within ``step / 2`` of ``stop``."""
        count = int(math.floor((self.stop - self.start) / self.step + 0.5))
        return [round(self.start + k * self.step, 12) for k in range(count + 1)]

    def __str__(self):
        return f"{self.name}={self.start:g}:{self.stop:g}:{self.step:g}"


@dataclass(frozen=True)
class SweepSpec:
    scheme: str
    witness: str
    orders: tuple
    axis1: Axis
    axis2: Optional[Axis] = None
    fixed: dict = field(default_factory=dict)
    output_path: Optional[str] = None

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise InvalidParameter(f"unknown scheme {self.scheme!r}; choose from {', '.join(SCHEMES)}")
        needed, witnesses = SCHEMES[self.scheme]
        if self.witness not in witnesses:
            raise InvalidParameter(
                f"witness {self.witness!r} is not available for {self.scheme}; choose from {', '.join(witnesses)}"
            )
        check_orders(self.orders)
        axes = [a for a in (self.axis1, self.axis2) if a is not None]
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise InvalidParameter("axis1 and axis2 must name different parameters")
        for a in axes:
            if a.name not in AXIS_NAMES:
                raise InvalidParameter(f"axis name {a.name!r} not in {', '.join(AXIS_NAMES)}")
            if a.name not in needed:
                raise InvalidParameter(f"axis {a.name!r} is not a parameter of {self.scheme}")
            if not a.step > 0:
                raise InvalidParameter(f"axis {a.name}: step must be > 0, got {a.step}")
            if not a.stop > a.start:
                raise InvalidParameter(f"axis {a.name}: stop must exceed start ({a.start} >= {a.stop})")
        overlap = set(names) & set(self.fixed)
        if overlap:
            raise InvalidParameter(f"{', '.join(sorted(overlap))} given both as an axis and a fixed value")
        # validates names, completeness and ranges of every corner of the grid
        for a1 in (self.axis1.values()[0], self.axis1.values()[-1]):
            a2s = (None,) if self.axis2 is None else (self.axis2.values()[0], self.axis2.values()[-1])
            for a2 in a2s:
                check_params(self.scheme, self.point_params(a1, a2))

    def point_params(self, v1, v2=None) -> dict:
        params = dict(self.fixed)
        params[self.axis1.name] = v1
        if self.axis2 is not None:
            params[self.axis2.name] = v2
        return params

    def points(self) -> list[tuple]:
        xs = self.axis1.values()
        ys = [math.nan] if self.axis2 is None else self.axis2.values()
        return [(x, y) for x in xs for y in ys]


class GridRow(NamedTuple):
    axis1_value: float
    axis2_value: float
    m: int
    witness: str
    witness_value: float
    p_nd: float
    defined: int
    sign: int

    def to_csv(self) -> str:
        return ",".join(
            [
                _fmt(self.axis1_value),
                _fmt(self.axis2_value),
                str(self.m),
                self.witness,
                _fmt(self.witness_value),
                _fmt(self.p_nd),
                str(self.defined),
                str(self.sign),
            ]
        )


def _fmt(x: float) -> str:
    return "nan" if math.isnan(x) else format(x, ".17g")


def _rows_for_point(args):
    spec, (x, y) = args
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        results = evaluate_point(spec.scheme, spec.point_params(x, None if spec.axis2 is None else y), spec.orders)
    rows = []
    if spec.witness == "pnd":
        p = results[0].p_nd
        p = math.nan if p is None else p
        ok = not math.isnan(p)
        return [GridRow(x, y, 0, "pnd", p, p, int(ok), sign(p) if ok else 0)]
    for r in results:
        w = r.q1 if spec.witness == "q1" else r.q2
        p = math.nan if r.p_nd is None else r.p_nd
        value = w.value if w.defined else math.nan
        rows.append(GridRow(x, y, r.m, spec.witness, value, p, int(w.defined), sign(value)))
    return rows


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[GridRow]:
    """Evaluate the grid in row-major order (axis1 outer, axis2, then order m).

    With ``workers > 1`` points are farmed out to a process pool; results are
    gathered in grid order, so the output does not depend on ``workers``.
    """
    spec.validate()
    jobs = [(spec, pt) for pt in spec.points()]
    if workers > 1 and len(jobs) > 1:
        chunk = max(1, len(jobs) // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_rows_for_point, jobs, chunksize=chunk))
    else:
        chunks = [_rows_for_point(job) for job in jobs]
    return [row for rows in chunks for row in rows]


def format_csv(rows: Sequence[GridRow]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for row in rows:
        buf.write(row.to_csv() + "\n")
    return buf.getvalue()


def write_csv(rows: Sequence[GridRow], path: str) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(format_csv(rows))
