"""Fredholm determinants and first minors of truncated kernels, by two routes:
the classical power series (its multi-dimensional integrals evaluated through
the trace recursion on the collocation matrix) and a direct matrix determinant
det(I - lambda*A).  Characteristic values are located as determinant zeros by
Newton iteration seeded on a lattice.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import BudgetExceededError
from .kernels import KernelSpec, TruncationScheme, subkernel_eval
from .quadrature import Discretization, NystromMatrix, nystrom_matrix

DEFAULT_NODE_CEILING = 4096

# Below this, det is treated as numerically zero and lambda as characteristic.
NEAR_ZERO_COEFF = 1e-10


@dataclass(frozen=True)
class DetResult:
    """A determinant value with provenance.

    tail_bound is the Hadamard estimate of the dropped series tail (series
    path only; zero for the matrix path).
    """

    value: complex
    path: str
    terms_used: int
    tail_bound: float = 0.0


@dataclass(frozen=True, eq=False)
class CharScanResult:
    """Deduplicated determinant zeros found inside a rectangular region."""

    zeros: tuple
    search_region: tuple
    grid_density: float
    zero_tol: float = 1e-8
    seeds_tried: int = 0
    seeds_converged: int = 0


def is_characteristic(det_value: complex, lam: complex) -> bool:
    return abs(det_value) < NEAR_ZERO_COEFF * (1.0 + abs(lam))


def det_from_lu(lu: np.ndarray, piv: np.ndarray) -> complex:
    swaps = int(np.sum(piv != np.arange(len(piv))))
    return complex((-1.0) ** swaps * np.prod(np.diag(lu)))


def fredholm_coefficients(a: np.ndarray, m_max: int) -> np.ndarray:
    """Coefficients c_m with det(I - lambda*A) = sum_m (-lambda)^m c_m, via the
    trace recursion c_m = (1/m) sum_k (-1)^{k-1} tr(A^k) c_{m-k}.

    c_m equals the m-dimensional symmetrized quadrature of the determinant
    series divided by m!, so partial sums over m reproduce the series route.
    """
    traces = np.empty(m_max + 1, dtype=complex)
    power = np.eye(a.shape[0], dtype=complex)
    for kk in range(1, m_max + 1):
        power = power @ a
        traces[kk] = np.trace(power)
    c = np.zeros(m_max + 1, dtype=complex)
    c[0] = 1.0
    for m in range(1, m_max + 1):
        acc = 0.0 + 0.0j
        for kk in range(1, m + 1):
            acc += (-1.0) ** (kk - 1) * traces[kk] * c[m - kk]
        c[m] = acc / m
    return c


def _hadamard_tail(lam: complex, sup_k: float, vol: float, m_max: int) -> float:
    """Sum of Hadamard bounds |lambda|^m m^{m/2} (sup|K| vol)^m / m! over m > m_max."""
    base = abs(lam) * sup_k * vol
    if base == 0.0:
        return 0.0
    log_base = math.log(base)
    total = 0.0
    for m in range(m_max + 1, m_max + 2000):
        log_term = m * log_base + 0.5 * m * math.log(m) - math.lgamma(m + 1)
        if log_term < -700.0:
            if m > 2 * (math.e * base) ** 2 + m_max:
                break
            continue
        total += math.exp(log_term)
    return total


def _series_matrix(k, trunc, n, grid, node_ceiling):
    if len(grid.nodes) > node_ceiling:
        raise BudgetExceededError(
            f"grid has {len(grid.nodes)} nodes, exceeding the ceiling {node_ceiling}"
        )
    x = grid.nodes
    kvals = np.asarray(subkernel_eval(k, trunc, n, "plain", x[:, None], x[None, :]))
    return kvals, kvals * grid.weights[None, :]


def det_series(
    k: KernelSpec,
    trunc: TruncationScheme,
    n: int,
    lam: complex,
    grid: Discretization,
    m_max: int,
    node_ceiling: int = DEFAULT_NODE_CEILING,
) -> DetResult:
    """Partial sum of the determinant series through order m_max, with a
    Hadamard bound on the dropped tail."""
    if not 1 <= m_max <= 8:
        raise ValueError("m_max must lie in [1, 8]")
    kvals, a = _series_matrix(k, trunc, n, grid, node_ceiling)
    c = fredholm_coefficients(a, m_max)
    lam = complex(lam)
    powers = (-lam) ** np.arange(m_max + 1)
    value = complex(np.sum(powers * c))
    sup_k = float(np.max(np.abs(kvals)))
    tail = _hadamard_tail(lam, sup_k, 2.0 * trunc.tau(n), m_max)
    return DetResult(value=value, path="series", terms_used=m_max, tail_bound=tail)


def minor_series(
    k: KernelSpec,
    trunc: TruncationScheme,
    n: int,
    lam: complex,
    s: float,
    t: float,
    grid: Discretization,
    m_max: int,
    node_ceiling: int = DEFAULT_NODE_CEILING,
) -> complex:
    """Partial sum of the first-minor series at (s, t) through order m_max.

    Uses the classical recursion for the minor coefficients b_m(s,t):
        b_0 = K_n(s,t),   b_m = c_m K_n(s,t) - (K_n o b_{m-1})(s,t),
    which reproduces the (m+1)-dimensional determinant integrals after
    symmetrized quadrature.
    """
    if not 1 <= m_max <= 8:
        raise ValueError("m_max must lie in [1, 8]")
    _, a = _series_matrix(k, trunc, n, grid, node_ceiling)
    c = fredholm_coefficients(a, m_max)
    x = grid.nodes
    w = grid.weights
    lam = complex(lam)

    k_st = complex(subkernel_eval(k, trunc, n, "plain", s, t))
    col = np.asarray(subkernel_eval(k, trunc, n, "plain", x, t), dtype=complex)
    row_w = np.asarray(subkernel_eval(k, trunc, n, "plain", s, x), dtype=complex) * w

    b_scalar = k_st
    b_col = col.copy()
    total = b_scalar
    for m in range(1, m_max + 1):
        b_scalar = c[m] * k_st - complex(row_w @ b_col)
        b_col = c[m] * col - a @ b_col
        total += (-lam) ** m * b_scalar
    return complex(total)


def det_matrix(m: NystromMatrix, lam: complex) -> DetResult:
    """det(I - lambda*A) by pivoted LU factorization."""
    dim = m.entries.shape[0]
    lam = complex(lam)
    lu, piv = lu_factor(np.eye(dim, dtype=complex) - lam * m.entries)
    return DetResult(value=det_from_lu(lu, piv), path="matrix", terms_used=0)


def _newton_refine(a: np.ndarray, seed: complex, budget: int):
    """Newton iteration on det(I - lambda*A), with the logarithmic derivative
    d/dlambda log det = -tr((I - lambda*A)^{-1} A).  Returns None for seeds
    that escape or fail to converge (zero-free determinants send the iterate
    to infinity)."""
    dim = a.shape[0]
    eye = np.eye(dim, dtype=complex)
    lam = complex(seed)
    for _ in range(budget):
        if abs(lam) > 1e9:
            return None
        try:
            with warnings.catch_warnings(), np.errstate(all="ignore"):
                warnings.simplefilter("ignore")
                lu_piv = lu_factor(eye - lam * a)
                resolvent_a = lu_solve(lu_piv, a)
        except Exception:
            return None
        tr = complex(np.trace(resolvent_a))
        if not np.isfinite(tr.real) or not np.isfinite(tr.imag) or tr == 0:
            return None
        step = 1.0 / tr
        lam = lam + step
        if abs(step) <= 1e-12 * (1.0 + abs(lam)):
            return lam
    return None


def char_scan(
    k: KernelSpec,
    trunc: TruncationScheme,
    n: int,
    region: tuple,
    density: float,
    grid: Discretization,
    newton_budget: int = 50,
    dedup_tol: float = 1e-6,
    variant: str = "plain",
) -> CharScanResult:
    """Locate determinant zeros in region = (re0, re1, im0, im1).

    Newton is seeded on a lattice with `density` seeds per unit length; seeds
    that do not converge are dropped silently, converged roots outside the
    region or with |det| above tolerance are discarded, and survivors are
    deduplicated within dedup_tol.  The one-sided and two-sided truncations
    share their determinant, so `variant` does not change the zero set.
    """
    re0, re1, im0, im1 = (float(v) for v in region)
    if not (re1 >= re0 and im1 >= im0):
        raise ValueError("region must satisfy re0 <= re1 and im0 <= im1")
    if density <= 0:
        raise ValueError("density must be > 0")
    a = nystrom_matrix(k, trunc, n, variant, grid).entries

    res = np.linspace(re0, re1, max(2, int(math.ceil((re1 - re0) * density)) + 1))
    ims = np.linspace(im0, im1, max(2, int(math.ceil((im1 - im0) * density)) + 1))
    if im1 == im0:
        ims = np.array([im0])
    if re1 == re0:
        res = np.array([re0])

    margin = 1e-9 + dedup_tol
    zeros = []
    tried = 0
    converged = 0
    for re in res:
        for im in ims:
            tried += 1
            root = _newton_refine(a, complex(re, im), newton_budget)
            if root is None:
                continue
            converged += 1
            if not (re0 - margin <= root.real <= re1 + margin):
                continue
            if not (im0 - margin <= root.imag <= im1 + margin):
                continue
            dim = a.shape[0]
            lu, piv = lu_factor(np.eye(dim, dtype=complex) - root * a)
            dval = det_from_lu(lu, piv)
            if abs(dval) >= 1e-8 * (1.0 + abs(root)):
                continue
            if all(abs(root - z) > dedup_tol for z in zeros):
                zeros.append(root)
    zeros.sort(key=lambda z: (z.real, z.imag))
    return CharScanResult(
        zeros=tuple(zeros),
        search_region=(re0, re1, im0, im1),
        grid_density=float(density),
        zero_tol=1e-8,
        seeds_tried=tried,
        seeds_converged=converged,
    )
