"""Seeded multistart Nelder-Mead and the Hermitian-generator chart of U(n)."""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache

import numpy as np
from scipy.linalg import schur
from scipy.optimize import minimize

from .linalg import expi_hermitian


@lru_cache(maxsize=None)
def _triu(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, 1)


def n_params(n: int) -> int:
    return n * n


def params_to_hermitian(theta, n: int) -> np.ndarray:
    """Hermitian generator from ``n`` diagonal reals, then the real and
    imaginary parts of the strict upper triangle (row-major)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (n * n,):
        raise ValueError(f"expected {n * n} parameters for n={n}, got {theta.shape}")
    iu, ju = _triu(n)
    k = len(iu)
    g = np.zeros((n, n), dtype=np.complex128)
    g[iu, ju] = theta[n : n + k] + 1j * theta[n + k :]
    g = g + g.conj().T
    g[np.diag_indices(n)] = theta[:n]
    return g


def hermitian_to_params(g) -> np.ndarray:
    g = np.asarray(g)
    iu, ju = _triu(g.shape[0])
    up = g[iu, ju]
    return np.concatenate([np.diag(g).real, up.real, up.imag])


def params_to_unitary(theta, n: int) -> np.ndarray:
    return expi_hermitian(params_to_hermitian(theta, n))


def unitary_to_params(u) -> np.ndarray:
    """Generator coordinates of ``u`` (eigenphases taken in ``(-pi, pi]``)."""
    t, z = schur(np.asarray(u, dtype=np.complex128), output="complex")
    phases = np.angle(np.diag(t))
    return hermitian_to_params((z * phases) @ z.conj().T)


@dataclass
class MinimizerConfig:
    restarts: int = 64
    max_iters: int = 2000
    scale: float = 0.5
    eps: float = 1e-9
    seed: int = 42
    start_std: float = 1.0
    workers: int = 1

    def __post_init__(self):
        if self.restarts < 1 or self.max_iters < 1:
            raise ValueError("restarts and max_iters must be positive")
        if self.scale <= 0 or self.eps <= 0 or self.start_std <= 0:
            raise ValueError("scale, eps and start_std must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")


@dataclass
class SearchReport:
    best_value: float
    best_params: np.ndarray
    restarts_summary: list[float]
    seed: int
    iterations: list[int] = field(default_factory=list)
    evaluations: list[int] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    per_gate: list[tuple[str, float]] = field(default_factory=list)
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        out = asdict(self)
        out["best_params"] = [float(x) for x in self.best_params]
        out["per_gate"] = [[name, float(f)] for name, f in self.per_gate]
        return out


class _NonFinite(Exception):
    pass


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for restart ``index``; does not depend on run order."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def nelder_mead(f, x0, cfg: MinimizerConfig):
    """One Nelder-Mead descent with standard coefficients (1, 2, 0.5, 0.5)."""
    x0 = np.asarray(x0, dtype=float)
    simplex = np.vstack([x0, x0 + cfg.scale * np.eye(x0.size)])

    def checked(x):
        v = f(x)
        if not np.isfinite(v):
            raise _NonFinite(f"objective returned {v!r}")
        return v

    return minimize(
        checked,
        x0,
        method="Nelder-Mead",
        options={
            "maxiter": cfg.max_iters,
            "xatol": cfg.eps,
            "fatol": cfg.eps,
            "initial_simplex": simplex,
            "adaptive": False,
        },
    )


def multistart_minimize(f, dim: int, cfg: MinimizerConfig, starts=()) -> SearchReport:
    """Minimize ``f`` from ``cfg.restarts`` seeded Gaussian points plus ``starts``.

    Restart ``i`` draws its starting point from its own stream, so the report
    is identical for any ``cfg.workers``. Extra ``starts`` run after the
    random ones, in order.
    """
    t0 = time.perf_counter()
    points = [restart_rng(cfg.seed, i).normal(scale=cfg.start_std, size=dim) for i in range(cfg.restarts)]
    for s in starts:
        s = np.asarray(s, dtype=float)
        if s.shape != (dim,):
            raise ValueError(f"warm start has shape {s.shape}, expected ({dim},)")
        points.append(s)

    def run(x0):
        try:
            res = nelder_mead(f, x0, cfg)
        except _NonFinite as exc:
            return np.inf, x0, 0, 0, str(exc)
        return float(res.fun), np.asarray(res.x), int(res.nit), int(res.nfev), ""

    if cfg.workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(run, points))
    else:
        results = [run(p) for p in points]

    values = [r[0] for r in results]
    best = int(np.argmin(values))
    return SearchReport(
        best_value=values[best],
        best_params=results[best][1],
        restarts_summary=values,
        seed=cfg.seed,
        iterations=[r[2] for r in results],
        evaluations=[r[3] for r in results],
        failures=[f"restart {i}: {r[4]}" for i, r in enumerate(results) if r[4]],
        wall_time=time.perf_counter() - t0,
    )
