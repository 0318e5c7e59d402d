"""Closed-form versus brute-force cross-checks.

Each suite yields ``(label, error)`` pairs, where ``error`` is a relative
difference between a closed form and the truncated Fock-space pipeline, or a
violation margin for inequality checks (0 when the inequality holds). A suite
passes when every error is within the tolerance.
"""

from __future__ import annotations

import math
from typing import Callable, Iterator, NamedTuple

import numpy as np

from . import analytic, bs_scheme, fock, ndpa
from .witnesses import q1_opt, q2

Check = tuple  # (label, error)


def rel_err(a: complex, b: complex) -> float:
    """``|a - b| / max(|a|, |b|)``; 0 when both vanish."""
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def _grid(start, stop, step):
    n = int(round((stop - start) / step))
    return [round(start + k * step, 12) for k in range(n + 1)]


SACS_ALPHAS = _grid(0.1, 6.0, 0.1)
SATS_NBARS = _grid(0.05, 5.0, 0.05)
BS_ALPHAS = (0.5, 1.0, 1.5, 2.5, 3.5)
BS_NBARS = (0.25, 0.5, 1.0, 1.5, 2.0)
BS_REFLECTANCES = (0.1, 0.3, 0.5, 0.7, 0.9)
BS_ETAS = (0.3, 0.6, 1.0)
BS_PS = (0.3, 0.7, 1.0)
NDPA_ETAS = (0.1, 0.3, 0.62, 1.0)
NDPA_ALPHAS = (0.5, 1.0, 1.5, 2.0, 3.0)
NDPA_NBARS = (0.25, 0.5, 1.0, 2.0)
CLASSICAL_ALPHAS = _grid(0.0, 6.0, 0.5)
CLASSICAL_NBARS = (0.05, 0.1, 0.5, 1.0, 2.0, 5.0)
ORDERS = range(1, 6)


def sacs_oracle(alpha: float) -> fock.FockDensity:
    return fock.photon_add(fock.coherent_state(alpha, fock.TruncationPolicy.for_coherent(alpha, extra=1)))


def sats_oracle(nbar: float) -> fock.FockDensity:
    return fock.photon_add(fock.thermal_state(nbar, fock.TruncationPolicy.for_thermal(nbar, extra=1)))


def suite_sacs_moments(seed: int) -> Iterator[Check]:
    for alpha in SACS_ALPHAS:
        rho = sacs_oracle(alpha)
        p = analytic.SacsParams(alpha)
        for m in ORDERS:
            yield f"alpha={alpha:g} m={m} <a^m>", rel_err(analytic.sacs_moment_a(p, m), fock.normal_moment(rho, 0, m))
            yield f"alpha={alpha:g} m={m} <a^dag^m a^m>", rel_err(
                analytic.sacs_moment_nm(p, m), fock.normal_moment(rho, m, m)
            )


def suite_sats_moments(seed: int) -> Iterator[Check]:
    for nbar in SATS_NBARS:
        rho = sats_oracle(nbar)
        p = analytic.SatsParams(nbar)
        for m in ORDERS:
            yield f"nbar={nbar:g} m={m} <a^dag^m a^m>", rel_err(
                analytic.sats_moment_nm(p, m), fock.normal_moment(rho, m, m)
            )


def suite_sats_phase_symmetry(seed: int) -> Iterator[Check]:
    for nbar in SATS_NBARS[::10]:
        rho = sats_oracle(nbar)
        for m in ORDERS:
            yield f"nbar={nbar:g} m={m} |<a^m>|", abs(fock.normal_moment(rho, 0, m))


def suite_bs_coherent(seed: int) -> Iterator[Check]:
    for alpha in BS_ALPHAS:
        rho_in = fock.coherent_state(alpha)
        for R in BS_REFLECTANCES:
            for eta in BS_ETAS:
                for ps in BS_PS:
                    p = bs_scheme.BsParams.coherent(alpha, R, eta, ps)
                    rho, p_nd = fock.herald_no_click(rho_in, ps, p.theta, eta)
                    tag = f"alpha={alpha:g} R={R:g} eta={eta:g} ps={ps:g}"
                    yield f"{tag} P_nd", rel_err(bs_scheme.bs_pnd_coherent(p), p_nd)
                    for m in range(1, 5):
                        yield f"{tag} m={m} <a^m>", rel_err(bs_scheme.bs_moment_a(p, m), fock.normal_moment(rho, 0, m))
                        yield f"{tag} m={m} <a^dag^m a^m>", rel_err(
                            bs_scheme.bs_moment_nm(p, m), fock.normal_moment(rho, m, m)
                        )


def suite_bs_thermal(seed: int) -> Iterator[Check]:
    for nbar in BS_NBARS:
        rho_in = fock.thermal_state(nbar)
        for R in BS_REFLECTANCES:
            for eta in BS_ETAS:
                for ps in BS_PS:
                    p = bs_scheme.BsParams.thermal(nbar, R, eta, ps)
                    rho, p_nd = fock.herald_no_click(rho_in, ps, p.theta, eta)
                    tag = f"nbar={nbar:g} R={R:g} eta={eta:g} ps={ps:g}"
                    d0 = bs_scheme.bs_thermal_dm(p, 0)
                    yield f"{tag} D_0", rel_err(d0, p_nd)
                    for m in range(1, 5):
                        yield f"{tag} m={m} D_m/D_0", rel_err(bs_scheme.bs_thermal_dm(p, m) / d0, fock.normal_moment(rho, m, m))


def suite_bs_reduction(seed: int) -> Iterator[Check]:
    """At unit efficiency and purity the scheme is ideal addition to ``|alpha sqrt(T)>``."""
    for alpha in BS_ALPHAS:
        for R in BS_REFLECTANCES:
            p = bs_scheme.BsParams.coherent(alpha, R, 1.0, 1.0)
            ideal = analytic.SacsParams(alpha * math.sqrt(1 - R))
            for m in range(1, 6):
                tag = f"alpha={alpha:g} R={R:g} m={m}"
                yield f"{tag} <a^m>", rel_err(bs_scheme.bs_moment_a(p, m), analytic.sacs_moment_a(ideal, m))
                yield f"{tag} <a^dag^m a^m>", rel_err(bs_scheme.bs_moment_nm(p, m), analytic.sacs_moment_nm(ideal, m))


def suite_bs_thermal_reduction(seed: int) -> Iterator[Check]:
    """At unit efficiency and purity the thermal scheme is ideal addition to a
    thermal state of mean ``T nbar / (1 + R nbar)`` (the no-click also cools the input)."""
    for nbar in BS_NBARS:
        for R in BS_REFLECTANCES:
            p = bs_scheme.BsParams.thermal(nbar, R, 1.0, 1.0)
            ideal = analytic.SatsParams((1 - R) * nbar / (1 + R * nbar))
            for m in range(1, 6):
                ms = bs_scheme.bs_thermal_moment_set(p, m)
                tag = f"nbar={nbar:g} R={R:g} m={m}"
                yield f"{tag} <a^dag^m a^m>", rel_err(ms.n_m, analytic.sats_moment_nm(ideal, m))
                yield f"{tag} <a^dag^2m a^2m>", rel_err(ms.n_2m, analytic.sats_moment_nm(ideal, 2 * m))


_NDPA_FIELDS = ("a_m", "a2m", "n_m", "n_2m", "anti_m")


def _ndpa_cases():
    for alpha in NDPA_ALPHAS:
        yield ndpa.COHERENT, alpha, sacs_oracle(alpha)
    for nbar in NDPA_NBARS:
        yield ndpa.THERMAL, nbar, sats_oracle(nbar)


def suite_ndpa_moments(seed: int) -> Iterator[Check]:
    for kind, amp, ideal in _ndpa_cases():
        for eta in NDPA_ETAS:
            lossy = fock.loss_channel(ideal, eta)
            params = ndpa.NdpaParams(kind, amp, eta)
            for m in ORDERS:
                closed = ndpa.ndpa_moment_set(params, m)
                oracle = fock.moment_set(lossy, m)
                for name in _NDPA_FIELDS:
                    tag = f"{kind} {amp:g} eta={eta:g} m={m} {name}"
                    yield tag, rel_err(getattr(closed, name), getattr(oracle, name))


def suite_ndpa_q2_invariance(seed: int) -> Iterator[Check]:
    """Absolute spread of Q2 over efficiencies, on the closed-form and oracle paths."""
    for kind, amp, ideal in _ndpa_cases():
        for m in ORDERS:
            analytic_vals = [ndpa.ndpa_q2(ndpa.NdpaParams(kind, amp, eta), m).value for eta in NDPA_ETAS]
            oracle_vals = [q2(fock.moment_set(fock.loss_channel(ideal, eta), m)).value for eta in NDPA_ETAS]
            yield f"{kind} {amp:g} m={m} analytic", max(analytic_vals) - min(analytic_vals)
            yield f"{kind} {amp:g} m={m} oracle", max(oracle_vals) - min(oracle_vals)


def random_ensemble(seed: int, count: int = 500, max_dim: int = 16):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        dim = int(rng.integers(2, max_dim + 1))
        yield dim, fock.random_pure_state(dim, rng)


def suite_reorder_identity(seed: int) -> Iterator[Check]:
    for k, (dim, rho) in enumerate(random_ensemble(seed)):
        for m in range(1, 5):
            ladder = [fock.normal_moment(rho, p, p).real for p in range(m + 1)]
            yield f"state#{k} dim={dim} m={m}", rel_err(
                fock.antinormal_from_normal(ladder, m), fock.antinormal_moment(rho, m)
            )


def suite_witness_floors(seed: int) -> Iterator[Check]:
    for k, (dim, rho) in enumerate(random_ensemble(seed)):
        for m in range(1, 5):
            ms = fock.moment_set(rho, m)
            yield f"state#{k} dim={dim} m={m} Q1", max(0.0, -1.0 - q1_opt(ms).value)
            w = q2(ms)
            if w.defined:
                yield f"state#{k} dim={dim} m={m} Q2", max(0.0, -1.0 - w.value)


def suite_classical_nonnegativity(seed: int) -> Iterator[Check]:
    states = [(f"coherent alpha={a:g}", fock.coherent_state(a)) for a in CLASSICAL_ALPHAS]
    states += [(f"thermal nbar={n:g}", fock.thermal_state(n)) for n in CLASSICAL_NBARS]
    for tag, rho in states:
        for m in ORDERS:
            ms = fock.moment_set(rho, m)
            yield f"{tag} m={m} Q1", max(0.0, -q1_opt(ms).value)
            w = q2(ms)
            if w.defined:
                yield f"{tag} m={m} Q2", max(0.0, -w.value)


class Suite(NamedTuple):
    name: str
    run: Callable[[int], Iterator[Check]]


SUITES = (
    Suite("sacs-moments", suite_sacs_moments),
    Suite("sats-moments", suite_sats_moments),
    Suite("sats-phase-symmetry", suite_sats_phase_symmetry),
    Suite("bs-coherent-oracle", suite_bs_coherent),
    Suite("bs-thermal-oracle", suite_bs_thermal),
    Suite("bs-ideal-reduction", suite_bs_reduction),
    Suite("bs-thermal-ideal-reduction", suite_bs_thermal_reduction),
    Suite("ndpa-moments", suite_ndpa_moments),
    Suite("ndpa-q2-invariance", suite_ndpa_q2_invariance),
    Suite("reorder-identity", suite_reorder_identity),
    Suite("witness-floors", suite_witness_floors),
    Suite("classical-nonnegativity", suite_classical_nonnegativity),
)


class SuiteReport(NamedTuple):
    name: str
    checks: int
    max_error: float
    failures: list

    @property
    def passed(self) -> bool:
        return not self.failures


def run_suite(suite: Suite, tolerance: float, seed: int) -> SuiteReport:
    count, worst, failures = 0, 0.0, []
    for label, err in suite.run(seed):
        count += 1
        worst = max(worst, err)
        if not err <= tolerance:
            failures.append((label, err))
    return SuiteReport(suite.name, count, worst, failures)


def run_all(tolerance: float = 1e-9, seed: int = 0, suites=None) -> list[SuiteReport]:
    return [run_suite(s, tolerance, seed) for s in (SUITES if suites is None else suites)]


def format_report(reports, tolerance: float, seed: int, max_listed: int = 25) -> str:
    lines = [f"verification: tolerance={tolerance:.3e} seed={seed}"]
    width = max(len(r.name) for r in reports)
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"[{status}] {r.name:<{width}}  checks={r.checks:<6d} max_err={r.max_error:.3e}")
    failed = [r for r in reports if not r.passed]
    for r in failed:
        lines.append(f"failures in {r.name} ({len(r.failures)}):")
        for label, err in r.failures[:max_listed]:
            lines.append(f"  {label}: err={err:.3e}")
        if len(r.failures) > max_listed:
            lines.append(f"  ... and {len(r.failures) - max_listed} more")
    ok = len(reports) - len(failed)
    lines.append(f"result: {'PASS' if not failed else 'FAIL'} ({ok}/{len(reports)} suites)")
    return "\n".join(lines) + "\n"
