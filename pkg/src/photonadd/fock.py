"""Truncated Fock-space engine.

Dense single- and two-mode states in the number basis, ladder-operator moments,
the beam-splitter unitary, the inefficient-detector no-click POVM and the
pure-loss channel. Everything here works directly with matrices, which makes
it the brute-force reference for the closed forms elsewhere in the package.

Conventions
-----------
The beam splitter acts in the Heisenberg picture as::

    b1 =  cos(theta) a1 + sin(theta) a2
    b2 = -sin(theta) a1 + cos(theta) a2

and is generated by ``theta (a1^dag a2 - a1 a2^dag)``. Reflectance is
``R = sin(theta)^2``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Sequence, Union

import numpy as np
from scipy.linalg import expm
from scipy.stats import poisson

from .errors import (
    DimensionCapExceeded,
    InvalidParameter,
    MissingMoment,
    OrderTooLarge,
    TruncationOverflow,
    ZeroProbability,
)
from .witnesses import MomentSet

DEFAULT_TAIL_TOL = 1e-12
MAX_ORDER = 12
#: Joint dimension cap for dense two-mode density matrices.
TWO_MODE_CAP = 4096
#: Joint dimension cap for the ket-ensemble heralding pipeline, which never
#: stores a joint density matrix.
PIPELINE_CAP = 32768

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
EIGEN_FLOOR = -1e-10
P_ND_FLOOR = 1e-15


@dataclass(frozen=True)
class TruncationPolicy:
    max_dim: int
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        if int(self.max_dim) != self.max_dim or self.max_dim < 2:
            raise InvalidParameter(f"max_dim must be an integer >= 2, got {self.max_dim}")
        if not 0.0 <= self.tail_tol < 1.0:
            raise InvalidParameter(f"tail_tol must lie in [0, 1), got {self.tail_tol}")
        object.__setattr__(self, "max_dim", int(self.max_dim))

    @classmethod
    def for_coherent(cls, alpha: complex, tail_tol: float = DEFAULT_TAIL_TOL, extra: int = 0):
        r = abs(alpha)
        return cls(max(32, math.ceil(r * r + 8 * r + 20)) + extra, tail_tol)

    @classmethod
    def for_thermal(cls, nbar: float, tail_tol: float = DEFAULT_TAIL_TOL, extra: int = 0):
        return cls(max(32, math.ceil(40 * (nbar + 1))) + extra, tail_tol)

    def widened(self, extra: int) -> "TruncationPolicy":
        return TruncationPolicy(self.max_dim + extra, self.tail_tol)


def _frozen(arr):
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class FockVector:
    amplitudes: np.ndarray
    policy: TruncationPolicy

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.shape != (self.policy.max_dim,):
            raise ValueError(f"expected {self.policy.max_dim} amplitudes, got shape {amps.shape}")
        norm2 = float(np.vdot(amps, amps).real)
        if not (1.0 - self.policy.tail_tol - TRACE_TOL <= norm2 <= 1.0 + TRACE_TOL):
            raise TruncationOverflow(
                f"squared norm {norm2!r} outside [1 - tail_tol, 1] for tail_tol={self.policy.tail_tol}"
            )
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        return self.policy.max_dim

    def normalized(self) -> "FockVector":
        return FockVector(self.amplitudes / np.linalg.norm(self.amplitudes), self.policy)

    def to_density(self) -> "FockDensity":
        v = self.amplitudes / np.linalg.norm(self.amplitudes)
        return FockDensity(np.outer(v, v.conj()), self.policy)


@dataclass(frozen=True, eq=False)
class FockDensity:
    """Normalised single-mode density matrix in a truncated number basis.

    Construction checks Hermiticity, unit trace and the eigenvalue floor.
    """

    matrix: np.ndarray
    policy: TruncationPolicy

    def __post_init__(self):
        rho = _frozen(self.matrix)
        n = self.policy.max_dim
        if rho.shape != (n, n):
            raise ValueError(f"expected a {n}x{n} matrix, got shape {rho.shape}")
        _check_density(rho)
        object.__setattr__(self, "matrix", rho)

    @property
    def dim(self) -> int:
        return self.policy.max_dim

    def populations(self) -> np.ndarray:
        return self.matrix.diagonal().real.copy()

    def mean_photon_number(self) -> float:
        return float(normal_moment(self, 1, 1).real)

    def embedded(self, dim: int) -> "FockDensity":
        """Same state in a larger basis (zero-padded)."""
        if dim < self.dim:
            raise ValueError("embedding can only enlarge the basis")
        out = np.zeros((dim, dim), dtype=complex)
        out[: self.dim, : self.dim] = self.matrix
        return FockDensity(out, TruncationPolicy(dim, self.policy.tail_tol))


def _check_density(rho):
    herm = np.max(np.abs(rho - rho.conj().T)) if rho.size else 0.0
    if herm > HERMITIAN_TOL:
        raise ValueError(f"density matrix not Hermitian (max deviation {herm:.3e})")
    tr = rho.trace().real
    if abs(tr - 1.0) > TRACE_TOL:
        raise ValueError(f"density matrix trace {tr!r} differs from 1")
    low = np.linalg.eigvalsh(rho).min()
    if low < EIGEN_FLOOR:
        raise ValueError(f"density matrix has eigenvalue {low:.3e} below floor")


def _normalize(rho):
    rho = 0.5 * (rho + rho.conj().T)
    return rho / rho.trace().real


# ---------------------------------------------------------------------------
# state builders


def coherent_state(alpha: complex, policy: TruncationPolicy | None = None) -> FockVector:
    """``|alpha>`` with amplitudes proportional to ``alpha^n / sqrt(n!)``.

    The vector is renormalised over the truncated basis. Raises
    :class:`TruncationOverflow` when the Poisson tail beyond the basis exceeds
    ``policy.tail_tol``.
    """
    if policy is None:
        policy = TruncationPolicy.for_coherent(alpha)
    n = policy.max_dim
    mean = abs(alpha) ** 2
    tail = float(poisson.sf(n - 1, mean)) if mean > 0 else 0.0
    if tail > policy.tail_tol:
        raise TruncationOverflow(
            f"coherent state |alpha|^2={mean:g} leaves tail mass {tail:.3e} above N={n}"
        )
    amps = np.empty(n, dtype=complex)
    amps[0] = 1.0
    for k in range(1, n):
        amps[k] = amps[k - 1] * alpha / math.sqrt(k)
    amps /= np.linalg.norm(amps)
    return FockVector(amps, policy)


def fock_state(n: int, policy: TruncationPolicy) -> FockVector:
    if not 0 <= n < policy.max_dim:
        raise TruncationOverflow(f"|{n}> does not fit in a basis of size {policy.max_dim}")
    amps = np.zeros(policy.max_dim, dtype=complex)
    amps[n] = 1.0
    return FockVector(amps, policy)


def thermal_state(nbar: float, policy: TruncationPolicy | None = None) -> FockDensity:
    """Diagonal thermal state with populations ``nbar^n / (1 + nbar)^(n+1)``."""
    if nbar < 0:
        raise InvalidParameter(f"nbar must be nonnegative, got {nbar}")
    if policy is None:
        policy = TruncationPolicy.for_thermal(nbar)
    n = policy.max_dim
    ratio = nbar / (1.0 + nbar)
    tail = ratio ** n
    if tail > policy.tail_tol:
        raise TruncationOverflow(f"thermal nbar={nbar:g} leaves tail mass {tail:.3e} above N={n}")
    pops = (1.0 - ratio) * ratio ** np.arange(n)
    pops /= pops.sum()
    return FockDensity(np.diag(pops).astype(complex), policy)


def source_state(p_s: float, policy: TruncationPolicy) -> FockDensity:
    """Imperfect single-photon source ``p_s |1><1| + (1 - p_s) |0><0|``."""
    if not 0.0 <= p_s <= 1.0:
        raise InvalidParameter(f"p_s must lie in [0, 1], got {p_s}")
    pops = np.zeros(policy.max_dim)
    pops[0], pops[1] = 1.0 - p_s, p_s
    return FockDensity(np.diag(pops).astype(complex), policy)


def random_pure_state(dim: int, rng: np.random.Generator, basis: int | None = None) -> FockDensity:
    """Haar-like random pure state supported on ``|0>..|dim-1>``."""
    basis = dim if basis is None else basis
    v = np.zeros(basis, dtype=complex)
    v[:dim] = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    v /= np.linalg.norm(v)
    return FockDensity(np.outer(v, v.conj()), TruncationPolicy(basis, 0.0))


def _as_density(rho) -> FockDensity:
    return rho.to_density() if isinstance(rho, FockVector) else rho


# ---------------------------------------------------------------------------
# ladder operators and moments


def annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def _falling(n, k):
    """``n! / (n - k)!`` elementwise for integer array ``n >= k``."""
    out = np.ones(n.shape, dtype=float)
    for j in range(k):
        out *= n - j
    return out


def photon_add(rho) -> FockDensity:
    """``a^dag rho a`` renormalised.

    The basis is kept; the shift pushes the top level out of it, so that
    level's share of ``Tr[a^dag rho a]`` must stay within ``tail_tol``.
    """
    rho = _as_density(rho)
    n = rho.dim
    top = n * rho.matrix[n - 1, n - 1].real
    total = normal_moment(rho, 1, 1).real + 1.0
    if top / total > rho.policy.tail_tol:
        raise TruncationOverflow(
            f"photon addition pushes {top / total:.3e} of the weight above N={n}; widen the basis"
        )
    adag = annihilation(n).T
    out = adag @ rho.matrix @ adag.T
    return FockDensity(_normalize(out), rho.policy)


def normal_moment(rho, p: int, q: int) -> complex:
    """``<a^{dag p} a^q> = Tr[rho a^{dag p} a^q]`` evaluated in the number basis."""
    if p < 0 or q < 0:
        raise ValueError("moment orders must be nonnegative")
    if p > MAX_ORDER or q > MAX_ORDER:
        raise OrderTooLarge(f"orders (p={p}, q={q}) exceed the guard {MAX_ORDER}")
    rho = _as_density(rho)
    dim = rho.dim
    # <n-q+p| ... a^{dag p} a^q |n>: coefficient sqrt(n!/(n-q)!) * sqrt((n-q+p)!/(n-q)!)
    lo = max(q, q - p)
    hi = min(dim, dim + q - p)
    if lo >= hi:
        return 0j
    n = np.arange(lo, hi)
    k = n - q + p
    coef = np.sqrt(_falling(n, q) * _falling(k, p))
    return complex(np.sum(rho.matrix[n, k] * coef))


def antinormal_moment(rho, m: int) -> float:
    """``<a^m a^{dag m}>`` by direct trace; ``a^m a^{dag m}`` is diagonal."""
    if m > MAX_ORDER:
        raise OrderTooLarge(f"order {m} exceeds the guard {MAX_ORDER}")
    rho = _as_density(rho)
    n = np.arange(rho.dim)
    return float(np.sum(rho.matrix.diagonal().real * _falling(n + m, m)))


def reorder_coefficients(m: int) -> list[float]:
    """Weights ``(m!)^2 / ((m-p)! (p!)^2)`` of ``<a^{dag p} a^p>`` in ``<a^m a^{dag m}>``."""
    fm = math.factorial(m)
    return [fm * fm / (math.factorial(m - p) * math.factorial(p) ** 2) for p in range(m + 1)]


def antinormal_from_normal(normal_moments: Union[Mapping, Sequence], m: int) -> float:
    """``<a^m a^{dag m}>`` from the normally ordered ``<a^{dag p} a^p>``, p = 0..m.

    ``normal_moments`` may be a sequence indexed by ``p`` or a mapping keyed by
    either ``p`` or ``(p, p)``.
    """
    total = 0.0
    for p, w in enumerate(reorder_coefficients(m)):
        total += w * _lookup(normal_moments, p)
    return total


def _lookup(moments, p):
    if isinstance(moments, Mapping):
        for key in ((p, p), p):
            if key in moments:
                return float(np.real(moments[key]))
        raise MissingMoment(f"<a^dag^{p} a^{p}> not supplied")
    try:
        return float(np.real(moments[p]))
    except IndexError:
        raise MissingMoment(f"<a^dag^{p} a^{p}> not supplied") from None


def _real(z, what):
    if abs(z.imag) > 1e-10 * max(1.0, abs(z.real)):
        raise ValueError(f"{what} should be real, imaginary part {z.imag:.3e}")
    return float(z.real)


def moment_set(rho, m: int) -> MomentSet:
    """Extract the :class:`MomentSet` of order ``m`` by direct traces."""
    rho = _as_density(rho)
    ladder = tuple(_real(normal_moment(rho, p, p), f"<a^dag^{p} a^{p}>") for p in range(m + 1))
    return MomentSet(
        m=m,
        a_m=normal_moment(rho, 0, m),
        a2m=normal_moment(rho, 0, 2 * m),
        n_m=ladder[m],
        n_2m=_real(normal_moment(rho, 2 * m, 2 * m), f"<a^dag^{2 * m} a^{2 * m}>"),
        anti_m=antinormal_moment(rho, m),
        ladder=ladder,
    )


def fidelity(rho: FockDensity, sigma: FockDensity) -> float:
    """Uhlmann fidelity, computed as the squared nuclear norm of ``sqrt(rho) sqrt(sigma)``."""
    dim = max(rho.dim, sigma.dim)
    a = _psd_sqrt(rho.embedded(dim).matrix)
    b = _psd_sqrt(sigma.embedded(dim).matrix)
    return float(np.linalg.svd(a @ b, compute_uv=False).sum() ** 2)


def _psd_sqrt(m):
    w, v = np.linalg.eigh(m)
    return (v * np.sqrt(np.clip(w, 0, None))) @ v.conj().T


# ---------------------------------------------------------------------------
# loss


def loss_channel(rho, eta: float) -> FockDensity:
    """Pure loss of transmissivity ``eta`` (vacuum in the idle port).

    Uses the Kraus operators ``E_k = sum_n sqrt(C(n,k) eta^(n-k) (1-eta)^k) |n-k><n|``.
    """
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameter(f"eta must lie in [0, 1], got {eta}")
    rho = _as_density(rho)
    dim = rho.dim
    n = np.arange(dim)
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        nk = n[k:]
        binom = np.array([math.comb(int(x), k) for x in nk], dtype=float)
        amp = np.sqrt(binom * eta ** (nk - k) * (1.0 - eta) ** k)
        # E_k rho E_k^dag restricted to the block that survives k losses
        block = rho.matrix[k:, k:] * np.outer(amp, amp)
        out[: dim - k, : dim - k] += block
    return FockDensity(_normalize(out), rho.policy)


# ---------------------------------------------------------------------------
# two modes


@dataclass(frozen=True, eq=False)
class TwoModeDensity:
    """Dense two-mode density matrix in the basis ``|n1> (x) |n2>``."""

    matrix: np.ndarray
    policies: tuple

    def __post_init__(self):
        n1, n2 = (p.max_dim for p in self.policies)
        if n1 * n2 > TWO_MODE_CAP:
            raise DimensionCapExceeded(
                f"joint dimension {n1}x{n2}={n1 * n2} exceeds the cap {TWO_MODE_CAP}"
            )
        rho = _frozen(self.matrix)
        if rho.shape != (n1 * n2, n1 * n2):
            raise ValueError(f"expected a {n1 * n2}x{n1 * n2} matrix, got shape {rho.shape}")
        _check_density(rho)
        object.__setattr__(self, "matrix", rho)

    @property
    def dims(self) -> tuple[int, int]:
        return tuple(p.max_dim for p in self.policies)

    def reduced(self, mode: int) -> FockDensity:
        """Partial trace keeping ``mode`` (1 or 2)."""
        n1, n2 = self.dims
        t = self.matrix.reshape(n1, n2, n1, n2)
        if mode == 1:
            return FockDensity(_normalize(np.einsum("ajbj->ab", t)), self.policies[0])
        if mode == 2:
            return FockDensity(_normalize(np.einsum("jajb->ab", t)), self.policies[1])
        raise ValueError("mode must be 1 or 2")


def tensor(rho1, rho2) -> TwoModeDensity:
    rho1, rho2 = _as_density(rho1), _as_density(rho2)
    return TwoModeDensity(np.kron(rho1.matrix, rho2.matrix), (rho1.policy, rho2.policy))


@dataclass(frozen=True, eq=False)
class BeamSplitter:
    """``exp(theta (a1^dag a2 - a1 a2^dag))`` on a truncated two-mode basis.

    The truncated generator conserves ``n1 + n2``, so its exponential is
    computed exactly, one total-photon-number block at a time.
    """

    theta: float
    dims: tuple
    blocks: tuple

    def matrix(self) -> np.ndarray:
        n1, n2 = self.dims
        u = np.zeros((n1 * n2, n1 * n2))
        for idx, ub in self.blocks:
            u[np.ix_(idx, idx)] = ub
        return u

    def apply_kets(self, kets: np.ndarray) -> np.ndarray:
        """Apply to the columns of ``kets`` (shape ``(n1*n2, K)``)."""
        out = np.empty_like(kets, dtype=complex)
        for idx, ub in self.blocks:
            out[idx] = ub @ kets[idx]
        return out

    def columns(self, n1: np.ndarray, n2: np.ndarray) -> np.ndarray:
        """Images of the basis kets ``|n1[j], n2[j]>`` as columns."""
        _, d2 = self.dims
        out = np.zeros((self.dims[0] * d2, len(n1)))
        for j, total in enumerate(np.asarray(n1) + np.asarray(n2)):
            idx, ub = self.blocks[total]
            out[idx, j] = ub[:, n1[j] - (idx[0] // d2)]
        return out


@lru_cache(maxsize=16)
def beam_splitter(theta: float, dims: tuple[int, int]) -> BeamSplitter:
    """Build (and memoise) the truncated beam-splitter unitary."""
    n1, n2 = dims
    blocks = []
    for total in range(n1 + n2 - 1):
        lo, hi = max(0, total - n2 + 1), min(total, n1 - 1)
        k1 = np.arange(lo, hi + 1)
        k2 = total - k1
        idx = k1 * n2 + k2
        size = len(k1)
        g = np.zeros((size, size))
        # a1^dag a2 |k1, k2> = sqrt((k1+1) k2) |k1+1, k2-1>; the minus term is its transpose
        up = np.sqrt((k1[:-1] + 1.0) * k2[:-1])
        g[np.arange(1, size), np.arange(size - 1)] = up
        g -= g.T
        ub = expm(theta * g)
        idx.setflags(write=False)
        ub.setflags(write=False)
        blocks.append((idx, ub))
    return BeamSplitter(float(theta), (n1, n2), tuple(blocks))


def beam_splitter_apply(rho12: TwoModeDensity, theta: float) -> TwoModeDensity:
    u = beam_splitter(float(theta), rho12.dims).matrix()
    out = u @ rho12.matrix @ u.T
    return TwoModeDensity(_normalize(out), rho12.policies)


def no_click_povm(eta: float, dim: int) -> np.ndarray:
    """Diagonal of ``sum_n (1 - eta)^n |n><n|``."""
    if not 0.0 <= eta <= 1.0:
        raise InvalidParameter(f"eta must lie in [0, 1], got {eta}")
    return (1.0 - eta) ** np.arange(dim, dtype=float)


def condition_no_click(rho12: TwoModeDensity, eta: float) -> tuple[FockDensity, float]:
    """Herald mode 1 on a no-click of an efficiency-``eta`` detector on mode 2.

    Returns the conditional mode-1 state and the no-click probability.
    """
    n1, n2 = rho12.dims
    pi = no_click_povm(eta, n2)
    t = rho12.matrix.reshape(n1, n2, n1, n2)
    unnorm = np.einsum("ajbj,j->ab", t, pi)
    p_nd = 1.0 if eta == 0 else float(unnorm.trace().real)
    if p_nd < P_ND_FLOOR:
        raise ZeroProbability(f"no-click probability {p_nd:.3e} is too small to condition on")
    return FockDensity(_normalize(unnorm), rho12.policies[0]), p_nd


def _is_diagonal(m):
    return not np.any(m - np.diag(m.diagonal()))


def _ensemble(rho: FockDensity, cutoff: float = 1e-300):
    """Weights and kets (columns) with ``rho = sum_j w_j |v_j><v_j|``."""
    m = rho.matrix
    if _is_diagonal(m):
        w = m.diagonal().real
        keep = np.nonzero(w > cutoff)[0]
        kets = np.zeros((rho.dim, len(keep)), dtype=complex)
        kets[keep, np.arange(len(keep))] = 1.0
        return w[keep], kets
    w, v = np.linalg.eigh(m)
    keep = w > cutoff
    return w[keep], v[:, keep]


def herald_no_click(rho_in, p_s: float, theta: float, eta: float,
                    dim2: int | None = None) -> tuple[FockDensity, float]:
    """Brute-force beam-splitter photon addition.

    ``rho_in`` enters port 1, the source ``p_s |1><1| + (1 - p_s)|0><0|`` port 2,
    the beam splitter acts, and port 2 is heralded on a no-click. The result is
    the same as ``condition_no_click(beam_splitter_apply(tensor(...)))`` but the
    joint state is carried as an ensemble of kets, so no joint density matrix is
    formed.
    """
    rho_in = _as_density(rho_in)
    n1 = rho_in.dim
    n2 = n1 if dim2 is None else dim2
    if n1 * n2 > PIPELINE_CAP:
        raise DimensionCapExceeded(
            f"joint dimension {n1}x{n2}={n1 * n2} exceeds the pipeline cap {PIPELINE_CAP}"
        )
    top = rho_in.matrix[n1 - 1, n1 - 1].real
    if top > rho_in.policy.tail_tol:
        raise TruncationOverflow(f"input occupies the top level with mass {top:.3e}; widen the basis")
    src = source_state(p_s, TruncationPolicy(n2, rho_in.policy.tail_tol))
    bs = beam_splitter(float(theta), (n1, n2))
    w2, k2 = _ensemble(src)
    if _is_diagonal(rho_in.matrix):
        pops = rho_in.matrix.diagonal().real
        occ1 = np.nonzero(pops > 0)[0]
        occ2 = np.nonzero(k2.any(axis=1))[0]
        g1, g2 = np.meshgrid(occ1, occ2, indexing="ij")
        weights = np.outer(pops[occ1], src.matrix.diagonal().real[occ2]).ravel()
        out = bs.columns(g1.ravel(), g2.ravel())
    else:
        w1, k1 = _ensemble(rho_in)
        weights = np.outer(w1, w2).ravel()
        kets = np.einsum("ai,bj->abij", k1, k2).reshape(n1 * n2, -1)
        out = bs.apply_kets(kets)
    pi = no_click_povm(eta, n2)
    x = out.reshape(n1, n2, -1) * np.sqrt(pi)[None, :, None] * np.sqrt(weights)[None, None, :]
    y = x.reshape(n1, -1)
    unnorm = y @ y.conj().T
    p_nd = 1.0 if eta == 0 else float(unnorm.trace().real)
    if p_nd < P_ND_FLOOR:
        raise ZeroProbability(f"no-click probability {p_nd:.3e} is too small to condition on")
    return FockDensity(_normalize(unnorm), rho_in.policy), p_nd
