"""Monte Carlo simulation of the upper triangular Gaussian model of T.

T_N is strictly upper triangular with independent standard complex Gaussian
entries of variance 1/N; D_N = diag((i - 1/2)/N) plays the role of D0.  Sample
i draws from ``PCG64(SeedSequence(seed, spawn_key=(i,)))``, so any sample can
be regenerated on its own and results do not depend on scheduling.

S_k = k ((T^k)* T^k)^{1/k} is formed from the singular value decomposition of
T^k: its eigenvectors are the right singular vectors and its eigenvalues are
k s^{2/k}.  Working with s instead of s^2 keeps the k-th root accurate for the
many tiny singular values of T^k.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from . import quadrature, speclaw
from .errors import DomainError, LinearAlgebraError
from .report import VerificationReport

COVARIANCE_TOL = 0.02
RESOLUTION_FACTOR = 64


@dataclass(frozen=True)
class EnsembleConfig:
    N: int
    samples: int = 1
    seed: int = 0
    k_max: int = 2

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise DomainError("N must be an integer >= 2")
        if int(self.samples) != self.samples or self.samples < 1:
            raise DomainError("samples must be a positive integer")
        if int(self.seed) != self.seed or not 0 <= self.seed < 2**64:
            raise DomainError("seed must be a 64-bit unsigned integer")
        if int(self.k_max) != self.k_max or self.k_max < 1:
            raise DomainError("k_max must be a positive integer")
        if self.k_max * math.log2(self.N) > self.N:
            raise DomainError("k_max * log2(N) must not exceed N")


@dataclass
class SampleSpectrum:
    index: int
    tstar_eigs: np.ndarray
    sk_eigs: dict[int, np.ndarray] = field(default_factory=dict)
    opnorms: dict[int, float] = field(default_factory=dict)
    fsk: dict[int, float] = field(default_factory=dict)


def substream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=(int(index),))))


def sample_T(N: int, rng) -> np.ndarray:
    """Strictly upper triangular N x N matrix with CN(0, 1/N) entries.

    ``rng`` is a Generator or an integer seed for a fresh PCG64 stream.
    """
    if int(N) != N or N < 2:
        raise DomainError("N must be an integer >= 2")
    if not isinstance(rng, np.random.Generator):
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(rng))))
    scale = 1.0 / math.sqrt(2.0 * N)
    re = rng.standard_normal((N, N))
    im = rng.standard_normal((N, N))
    return np.triu((re + 1j * im) * scale, 1)


def diag_D(N: int) -> np.ndarray:
    return (np.arange(1, N + 1) - 0.5) / N


def _svd(A: np.ndarray):
    try:
        return np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise LinearAlgebraError(str(exc)) from exc


def _fsk_distance(lam: np.ndarray, V: np.ndarray, d: np.ndarray) -> float:
    """(1/sqrt N) ||F(S) - D||_HS for S = V diag(lam) V*."""
    f = np.asarray(speclaw.cdf_F(np.clip(lam, 0.0, math.e)))
    diag_fs = (np.abs(V) ** 2) @ f
    sq = f @ f - 2.0 * d @ diag_fs + d @ d
    return math.sqrt(max(sq, 0.0) / len(d))


def _sample_spectrum(cfg: EnsembleConfig, index: int, ks: Sequence[int], want_fsk: bool) -> SampleSpectrum:
    T = sample_T(cfg.N, substream(cfg.seed, index))
    d = diag_D(cfg.N)
    out = SampleSpectrum(index=index, tstar_eigs=np.empty(0))
    ks = sorted(set(ks) | {1})
    Tk = None
    for k in range(1, max(ks) + 1):
        Tk = T if Tk is None else Tk @ T
        if k not in ks:
            continue
        if want_fsk:
            _, s, Vh = _svd(Tk)
        else:
            try:
                s = np.linalg.svd(Tk, compute_uv=False)
            except np.linalg.LinAlgError as exc:  # pragma: no cover
                raise LinearAlgebraError(str(exc)) from exc
        lam = k * s ** (2.0 / k)
        out.sk_eigs[k] = np.sort(lam)
        out.opnorms[k] = float(s.max())
        if want_fsk:
            out.fsk[k] = _fsk_distance(lam, Vh.conj().T, d)
    out.tstar_eigs = out.sk_eigs[1]
    return out


def _workers(n_tasks: int) -> int:
    cap = os.environ.get("DTLAB_THREADS")
    limit = os.cpu_count() or 1
    if cap:
        try:
            limit = max(1, int(cap))
        except ValueError:
            pass
    return max(1, min(limit, n_tasks))


def _map_samples(fn: Callable[[int], object], n: int) -> list:
    """Run fn over sample indices, returning results in index order."""
    workers = _workers(n)
    if workers == 1:
        return [fn(i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n)))


def spectrum_suite(cfg: EnsembleConfig, with_fsk: bool = False) -> list[SampleSpectrum]:
    """Eigen-data of T*T and S_1..S_{k_max} for every sample."""
    ks = range(1, cfg.k_max + 1)
    return _map_samples(lambda i: _sample_spectrum(cfg, i, ks, with_fsk), cfg.samples)


def resolution_floor(N: int, k: int, opnorm: float) -> float:
    """Smallest eigenvalue of S_k that double precision resolves.

    A backward stable SVD of T^k carries absolute errors of order N eps ||T^k||,
    so singular values below RESOLUTION_FACTOR times that are noise.  mu puts
    mass about 1/log(1/y) below y, so these are not negligible at any N.
    """
    s_c = RESOLUTION_FACTOR * N * np.finfo(float).eps * opnorm
    return k * s_c ** (2.0 / k)


def ks_distance(eigs: np.ndarray, floor: float = 0.0) -> float:
    """Kolmogorov-Smirnov distance between the empirical law of eigs and mu.

    With ``floor > 0`` the supremum runs over y >= floor only; eigenvalues below
    it still count towards the empirical CDF, so the mass under the floor is
    compared through the jump at y = floor.
    """
    e = np.sort(np.clip(np.asarray(eigs, dtype=float), 0.0, math.e))
    if floor <= 0.0:
        return float(stats.kstest(e, speclaw.cdf_F).statistic)
    n = e.size
    below = int(np.searchsorted(e, floor, side="left"))
    rest = e[below:]
    gap = abs(below / n - float(speclaw.cdf_F(floor)))
    if rest.size:
        F = np.asarray(speclaw.cdf_F(rest))
        i = np.arange(below, n)
        gap = max(gap, float(np.max((i + 1) / n - F)), float(np.max(F - i / n)))
    return gap


def resolved_ks(spec: SampleSpectrum, k: int) -> float:
    """KS distance of S_k eigenvalues above the double precision floor."""
    lam = spec.sk_eigs[k]
    return ks_distance(lam, resolution_floor(lam.size, k, spec.opnorms[k]))


def norm_target(k: int) -> float:
    return (math.e / k) ** (k / 2.0)


def fsk_vs_diag(cfg: EnsembleConfig, k: int) -> float:
    """Sample mean of (1/sqrt N) ||F(S_k) - D_N||_HS."""
    if int(k) != k or not 1 <= k <= cfg.k_max:
        raise DomainError("need 1 <= k <= k_max")
    res = _map_samples(lambda i: _sample_spectrum(cfg, i, [k], True).fsk[k], cfg.samples)
    return float(np.mean(res))


def trace_moments(cfg: EnsembleConfig, n_max: int = 4) -> tuple[np.ndarray, np.ndarray]:
    """Sample means and standard errors of (1/N) tr((T*T)^n), n = 1..n_max."""

    def one(i):
        T = sample_T(cfg.N, substream(cfg.seed, i))
        s = np.linalg.svd(T, compute_uv=False)
        e = s * s
        return [float(np.mean(e**n)) for n in range(1, n_max + 1)]

    vals = np.array(_map_samples(one, cfg.samples))
    mean = vals.mean(axis=0)
    se = vals.std(axis=0, ddof=1) / math.sqrt(cfg.samples) if cfg.samples > 1 else np.full(n_max, np.inf)
    return mean, se


# -- diagonal covariance identities ------------------------------------------------


def _as_function(f) -> Callable[[np.ndarray], np.ndarray]:
    if callable(f):
        return lambda x: np.broadcast_to(np.asarray(f(x), dtype=float), np.shape(x))
    xs, ys = (np.asarray(a, dtype=float) for a in f)
    if xs.ndim != 1 or xs.shape != ys.shape or xs.size < 2:
        raise DomainError("a tabulated f needs matching 1-D x and y arrays")
    return lambda x: np.interp(x, xs, ys)


def primitive_gh(f, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """g(x) = int_x^1 f and h(x) = int_0^x f at sorted points x."""
    fn = _as_function(f)
    pts = np.concatenate([[0.0], np.asarray(x, dtype=float), [1.0]])
    pieces = np.array([quadrature.fixed(fn, a, b) for a, b in zip(pts[:-1], pts[1:])])
    cum = np.cumsum(pieces)
    h = cum[:-1]
    total = cum[-1]
    return total - h, h


def covariance_check(f, cfg: EnsembleConfig, tol: float = COVARIANCE_TOL) -> VerificationReport:
    """Monte Carlo diagonals of E[T f T*], E[T* f T], E[T f T], E[T] against g, h, 0, 0."""
    N = cfg.N
    x = diag_D(N)
    fvals = _as_function(f)(x)

    def one(i):
        T = sample_T(N, substream(cfg.seed, i))
        a2 = np.abs(T) ** 2
        return np.stack(
            [
                a2 @ fvals,  # diag of T diag(f) T*
                fvals @ a2,  # diag of T* diag(f) T
                np.real(np.einsum("ij,j,ji->i", T, fvals, T)),  # diag of T diag(f) T
                np.real(np.diag(T)),
            ]
        )

    acc = np.mean(np.array(_map_samples(one, cfg.samples)), axis=0)
    g, h = primitive_gh(f, x)
    rms = lambda r: float(np.sqrt(np.mean(r * r)))
    rep = VerificationReport()
    rep.add("diag_T_f_Tstar_vs_g", rms(acc[0] - g), tol)
    rep.add("diag_Tstar_f_T_vs_h", rms(acc[1] - h), tol)
    rep.add("diag_T_f_T_vs_0", rms(acc[2]), tol)
    rep.add("diag_T_vs_0", rms(acc[3]), tol)
    return rep


# -- decay profile ----------------------------------------------------------------------


def decay_profile(t: float, cfg: EnsembleConfig, k_probe: int) -> np.ndarray:
    """Sample mean of (k/e) ||T^k xi||^{2/k}, k = 1..k_probe.

    xi is the normalised indicator of the first ceil(t N) coordinates, a vector
    in the T-invariant subspace spanned by e_1, ..., e_{ceil(tN)}.
    """
    if not np.isfinite(t) or not 0 < t <= 1:
        raise DomainError("t must lie in (0, 1]")
    if int(k_probe) != k_probe or k_probe < 1 or k_probe > cfg.N / 4:
        raise DomainError("need 1 <= k_probe <= N/4")
    m = math.ceil(t * cfg.N)
    ks = np.arange(1, k_probe + 1)

    def one(i):
        T = sample_T(cfg.N, substream(cfg.seed, i))
        xi = np.zeros(cfg.N, dtype=complex)
        xi[:m] = 1.0 / math.sqrt(m)
        prof = np.empty(k_probe)
        for k in ks:
            xi = T @ xi
            prof[k - 1] = k / math.e * np.linalg.norm(xi) ** (2.0 / k)
        return prof

    return np.mean(np.array(_map_samples(one, cfg.samples)), axis=0)
