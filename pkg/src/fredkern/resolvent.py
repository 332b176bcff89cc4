"""Resolvent kernels for truncated kernels and, through the Neumann series,
for the full kernel inside its disk of convergence.

A handle built at (kernel, n, lambda) evaluates the resolvent kernel anywhere
via the collocation extension
    R(s,t) = K_n(s,t) + lambda * (K_n(s,.) W) (I - lambda*A)^{-1} K_n(.,t),
which is an O(node^2) evaluation once (I - lambda*A) has been factorized.
The minor/determinant quotient route lives in `fredholm` and is kept for
cross-validation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import CharacteristicValueError, NeumannDivergenceError
from .fredholm import DetResult, det_from_lu, is_characteristic
from .kernels import KernelSpec, TruncationScheme, eval_kernel, subkernel_eval
from .quadrature import (
    Discretization,
    NystromMatrix,
    full_matrix,
    matrix_norm_estimate,
    nystrom_matrix,
)

PROBE_SHIFTS = (-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0)


@dataclass(frozen=True, eq=False)
class ResolventHandle:
    """Factorized resolvent of a truncated kernel at a regular lambda.

    det_scale = 1 is the genuine resolvent; other values emulate a perturbed
    determinant in the minor/det quotient (negative-control diagnostics only).
    """

    kernel: KernelSpec
    trunc: TruncationScheme
    n: int
    lam: complex
    det: DetResult
    matrix: NystromMatrix
    lu: tuple
    variant: str
    path: str
    opnorm: float
    det_scale: float = 1.0

    @property
    def grid(self) -> Discretization:
        return self.matrix.grid

    def with_det_scaled(self, factor: float) -> "ResolventHandle":
        """Negative control: evaluations behave as if det were scaled by factor."""
        return replace(self, det_scale=self.det_scale * factor)

    # -- internal application helpers -------------------------------------

    def _solve(self, rhs: np.ndarray) -> np.ndarray:
        """(I - lambda*A)^{-1} rhs, by LU or by Neumann iteration per path."""
        if self.path == "fredholm":
            return lu_solve(self.lu, rhs)
        rate = abs(self.lam) * self.opnorm
        n_iter = 60
        if 0 < rate < 1:
            n_iter = min(20000, max(60, int(math.ceil(math.log(1e-16) / math.log(rate)))))
        x = np.array(rhs, dtype=complex)
        a = self.matrix.entries
        for _ in range(n_iter):
            x = rhs + self.lam * (a @ x)
        return x

    def columns_at(self, t) -> np.ndarray:
        """Resolvent kernel at (nodes, t): the solution of the second-kind
        system with right-hand side K_n(., t).  Shape (N,) or (N, len(t))."""
        x = self.grid.nodes
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        rhs = np.asarray(
            subkernel_eval(self.kernel, self.trunc, self.n, "plain", x[:, None], t_arr[None, :]),
            dtype=complex,
        )
        sol = self._solve(rhs)
        if np.isscalar(t) or np.asarray(t).ndim == 0:
            return sol[:, 0]
        return sol

    def eval_grid_matrix(self, s_pts, t_pts) -> np.ndarray:
        """Resolvent kernel values on the product grid s_pts x t_pts."""
        s_arr = np.atleast_1d(np.asarray(s_pts, dtype=float))
        t_arr = np.atleast_1d(np.asarray(t_pts, dtype=float))
        x = self.grid.nodes
        w = self.grid.weights
        rows = np.asarray(
            subkernel_eval(self.kernel, self.trunc, self.n, "plain", s_arr[:, None], x[None, :]),
            dtype=complex,
        )
        base = np.asarray(
            subkernel_eval(
                self.kernel, self.trunc, self.n, "plain", s_arr[:, None], t_arr[None, :]
            ),
            dtype=complex,
        )
        cols = self.columns_at(t_arr)
        vals = base + self.lam * ((rows * w[None, :]) @ cols)
        vals = vals / self.det_scale
        if self.variant == "tilde":
            vals = vals * self.trunc.chi(self.n, t_arr)[None, :]
        return vals

    def apply(self, g: np.ndarray) -> np.ndarray:
        """Resolvent operator applied to a function sampled on the handle grid.

        The tilde resolvent kernel is the plain one masked in its second
        variable, so as an operator it is the plain resolvent composed with
        the projection onto (-tau_n, tau_n).
        """
        g = np.asarray(g, dtype=complex)
        if self.variant == "tilde":
            g = g * self.trunc.chi(self.n, self.grid.nodes)
        u = self._solve(g)
        return (self.matrix.entries @ u) / self.det_scale


def _variant_entries(h: ResolventHandle) -> np.ndarray:
    if h.variant == "plain":
        return h.matrix.entries
    chi = h.trunc.chi(h.n, h.grid.nodes)
    return h.matrix.entries * chi[None, :]


def make_resolvent(
    k: KernelSpec,
    trunc: TruncationScheme,
    n: int,
    lam: complex,
    grid: Discretization,
    variant: str = "plain",
    path: str = "fredholm",
) -> ResolventHandle:
    """Build a resolvent handle; lambda must not be numerically characteristic,
    and the neumann path additionally requires |lambda|*||T_n|| < 1."""
    if variant not in ("plain", "tilde"):
        raise ValueError(f"variant must be 'plain' or 'tilde', got {variant!r}")
    if path not in ("fredholm", "neumann"):
        raise ValueError(f"path must be 'fredholm' or 'neumann', got {path!r}")
    lam = complex(lam)
    m = nystrom_matrix(k, trunc, n, "plain", grid)
    dim = m.entries.shape[0]
    lu_piv = lu_factor(np.eye(dim, dtype=complex) - lam * m.entries)
    det = DetResult(value=det_from_lu(*lu_piv), path="matrix", terms_used=0)
    if is_characteristic(det.value, lam):
        raise CharacteristicValueError(lam, det.value)
    opn = matrix_norm_estimate(m.entries, grid.weights)
    if path == "neumann" and abs(lam) * opn >= 1.0:
        raise NeumannDivergenceError(lam, opn)
    return ResolventHandle(
        kernel=k,
        trunc=trunc,
        n=n,
        lam=lam,
        det=det,
        matrix=m,
        lu=lu_piv,
        variant=variant,
        path=path,
        opnorm=opn,
    )


def resolvent_eval(h: ResolventHandle, s: float, t: float) -> complex:
    """Resolvent kernel value at one point; vanishes identically for
    |s| >= tau_n, and the tilde variant also for |t| >= tau_n."""
    return complex(h.eval_grid_matrix(np.array([s]), np.array([t]))[0, 0])


@dataclass(frozen=True, eq=False)
class ResolventCarleman:
    """One row or column function of a resolvent kernel, sampled on a grid.

    direction "row" holds conj(R(anchor, .)); "column" holds R(., anchor).
    """

    direction: str
    anchor: float
    samples: np.ndarray
    grid: Discretization


def resolvent_carleman(
    h: ResolventHandle, direction: str, anchor: float, grid: Discretization
) -> ResolventCarleman:
    if direction not in ("row", "column"):
        raise ValueError(f"direction must be 'row' or 'column', got {direction!r}")
    if direction == "row":
        samples = np.conj(h.eval_grid_matrix(np.array([anchor]), grid.nodes)[0, :])
    else:
        samples = h.eval_grid_matrix(grid.nodes, np.array([anchor]))[:, 0]
    return ResolventCarleman(direction=direction, anchor=float(anchor), samples=samples, grid=grid)


def residual_check(h: ResolventHandle, grid_eval: Discretization):
    """Sup-norm residuals of the two defining second-kind kernel equations,
    evaluated over grid_eval x grid_eval with the handle's own quadrature:

        r_left  = sup |R(s,t) - lambda (T_n o R)(s,t) - T_n(s,t)|
        r_right = sup |R(s,t) - lambda (R o T_n)(s,t) - T_n(s,t)|
    """
    e = grid_eval.nodes
    x = h.grid.nodes
    w = h.grid.weights
    k, trunc, n, lam = h.kernel, h.trunc, h.n, h.lam
    variant = h.variant

    r_ee = h.eval_grid_matrix(e, e)
    r_xe = h.eval_grid_matrix(x, e)
    r_ex = h.eval_grid_matrix(e, x)

    base = np.asarray(subkernel_eval(k, trunc, n, variant, e[:, None], e[None, :]), dtype=complex)
    t_ex = np.asarray(subkernel_eval(k, trunc, n, variant, e[:, None], x[None, :]), dtype=complex)
    t_xe = np.asarray(subkernel_eval(k, trunc, n, variant, x[:, None], e[None, :]), dtype=complex)

    left = r_ee - lam * (t_ex * w[None, :]) @ r_xe - base
    right = r_ee - lam * (r_ex * w[None, :]) @ t_xe - base
    return float(np.max(np.abs(left))), float(np.max(np.abs(right)))


def solve_equation(h: ResolventHandle, g: np.ndarray, grid: Discretization | None = None):
    """Solve f - lambda*T_n f = g for g sampled on the handle's grid, through
    the resolvent representation f = g + lambda * (resolvent applied to g)."""
    g = np.asarray(g, dtype=complex)
    if grid is not None and not np.array_equal(grid.nodes, h.grid.nodes):
        raise ValueError("grid must match the handle's quadrature grid")
    if g.shape != h.grid.nodes.shape:
        raise ValueError("g must be sampled on the handle's grid")
    return g + h.lam * h.apply(g)


def second_resolvent_residual(ha: ResolventHandle, hb: ResolventHandle) -> float:
    """Residual of the two-operator resolvent identity
        R_a - R_b = (I + lambda R_a)(T_a - T_b)(I + lambda R_b)
    applied to a fixed probe basis of sampled Gaussians; both handles must
    share lambda and grid."""
    if ha.lam != hb.lam:
        raise ValueError("handles must share lambda")
    if not np.array_equal(ha.grid.nodes, hb.grid.nodes):
        raise ValueError("handles must share the quadrature grid")
    x = ha.grid.nodes
    w = ha.grid.weights
    lam = ha.lam
    ta = _variant_entries(ha)
    tb = _variant_entries(hb)
    worst = 0.0
    for shift in PROBE_SHIFTS:
        g = np.exp(-((x - shift) ** 2)).astype(complex)
        lhs = ha.apply(g) - hb.apply(g)
        v = g + lam * hb.apply(g)
        v = (ta - tb) @ v
        rhs = v + lam * ha.apply(v)
        worst = max(worst, float(np.sqrt(np.sum(w * np.abs(lhs - rhs) ** 2).real)))
    return worst


@dataclass(frozen=True)
class NeumannValue:
    value: complex
    tail_bound: float
    terms: int


def _carleman_sup_norms(k: KernelSpec, disc: Discretization):
    x = disc.nodes
    w = disc.weights
    kv = np.asarray(eval_kernel(k, x[:, None], x[None, :]))
    row = float(np.max(np.sqrt(np.sum(w[None, :] * np.abs(kv) ** 2, axis=1).real)))
    col = float(np.max(np.sqrt(np.sum(w[:, None] * np.abs(kv) ** 2, axis=0).real)))
    return row, col


def neumann_full(
    k: KernelSpec, lam: complex, s: float, t: float, disc: Discretization, n_terms: int
) -> NeumannValue:
    """Partial Neumann series sum_{j=1..n_terms} lambda^{j-1} K^{[j]}(s,t) of the
    full (untruncated) resolvent kernel, with the geometric tail bound
    sup_tau' * sup_tau * (|lambda| ||T||)^{n_terms-1} / (1 - |lambda| ||T||).

    Requires |lambda| * ||T|| < 1.
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    lam = complex(lam)
    a = full_matrix(k, disc)
    norm_t = matrix_norm_estimate(a, disc.weights)
    rate = abs(lam) * norm_t
    if rate >= 1.0:
        raise NeumannDivergenceError(lam, norm_t)
    x = disc.nodes
    w = disc.weights
    row_w = np.asarray(eval_kernel(k, s, x), dtype=complex) * w
    col = np.asarray(eval_kernel(k, x, t), dtype=complex)
    total = complex(eval_kernel(k, s, t))
    vec = col
    for j in range(2, n_terms + 1):
        total += lam ** (j - 1) * complex(row_w @ vec)
        vec = a @ vec
    sup_row, sup_col = _carleman_sup_norms(k, disc)
    tail = sup_row * sup_col * rate ** (n_terms - 1) / (1.0 - rate)
    return NeumannValue(value=total, tail_bound=float(tail), terms=n_terms)


def neumann_kernel_matrix(
    k: KernelSpec,
    lam: complex,
    s_pts,
    t_pts,
    disc: Discretization,
    n_terms: int,
    _matrix: np.ndarray | None = None,
) -> np.ndarray:
    """Vectorized partial Neumann series on the product grid s_pts x t_pts.

    _matrix optionally reuses a precomputed full-kernel collocation matrix on
    the same disc (with its validity already checked by the caller).
    """
    if n_terms < 1:
        raise ValueError("n_terms must be >= 1")
    lam = complex(lam)
    if _matrix is None:
        a = full_matrix(k, disc)
        norm_t = matrix_norm_estimate(a, disc.weights)
        if abs(lam) * norm_t >= 1.0:
            raise NeumannDivergenceError(lam, norm_t)
    else:
        a = _matrix
    s_arr = np.atleast_1d(np.asarray(s_pts, dtype=float))
    t_arr = np.atleast_1d(np.asarray(t_pts, dtype=float))
    x = disc.nodes
    w = disc.weights
    rows_w = np.asarray(eval_kernel(k, s_arr[:, None], x[None, :]), dtype=complex) * w[None, :]
    cols = np.asarray(eval_kernel(k, x[:, None], t_arr[None, :]), dtype=complex)
    total = np.asarray(eval_kernel(k, s_arr[:, None], t_arr[None, :]), dtype=complex)
    # Accumulate the iterated-kernel terms from the smaller side of the
    # product grid; both orderings sum the same series.
    if len(s_arr) <= len(t_arr):
        u = rows_w
        for j in range(2, n_terms + 1):
            total = total + lam ** (j - 1) * (u @ cols)
            if j < n_terms:
                u = u @ a
    else:
        v = cols
        for j in range(2, n_terms + 1):
            total = total + lam ** (j - 1) * (rows_w @ v)
            if j < n_terms:
                v = a @ v
    return total
