"""Kernel definitions: smooth decaying two-variable kernels on the real line,
their row/column norm functions, truncated subkernels, and iterated kernels.

A kernel here is a continuous complex function K(s,t) on R^2 that decays at
infinity fast enough that every row K(s,.) and column K(.,t) is square
integrable.  The built-in families are a separable sum over a small basis
library (closed-form integrals available for testing) and one non-separable
Gaussian/Cauchy product family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

SEPARABLE_SUM = "separable_sum"
GAUSS_CAUCHY = "gauss_cauchy"
CUSTOM_TABULATED = "custom_tabulated"

_FAMILIES = (SEPARABLE_SUM, GAUSS_CAUCHY, CUSTOM_TABULATED)
_BASIS_KINDS = ("gauss", "x_gauss", "sech")


@dataclass(frozen=True)
class BasisFn:
    """One-dimensional bounded square-integrable factor u(x) = base(scale*(x - shift)).

    kind: "gauss" (e^{-x^2}), "x_gauss" (x e^{-x^2}) or "sech" (1/cosh x).
    """

    kind: str
    scale: float = 1.0
    shift: float = 0.0

    def __post_init__(self):
        if self.kind not in _BASIS_KINDS:
            raise ConfigError("kind", f"unknown basis kind {self.kind!r}")
        if not (math.isfinite(self.scale) and self.scale > 0):
            raise ConfigError("scale", "scale must be finite and > 0")
        if not math.isfinite(self.shift):
            raise ConfigError("shift", "shift must be finite")

    def __call__(self, x):
        y = (np.asarray(x, dtype=float) - self.shift) * self.scale
        if self.kind == "gauss":
            return np.exp(-y * y)
        if self.kind == "x_gauss":
            return y * np.exp(-y * y)
        return 1.0 / np.cosh(y)


@dataclass(frozen=True, eq=False)
class KernelSpec:
    """A kernel K(s,t), either a separable sum, the Gaussian/Cauchy family, or
    a tabulated kernel interpolated bilinearly.

    terms: for the separable family, a tuple of (coefficient, left, right)
    giving K(s,t) = sum_j coeff_j * left_j(s) * right_j(t).
    """

    family: str
    terms: tuple = ()
    hermitian: bool = False
    label: str = ""
    table_radius: float = 0.0
    table_values: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ConfigError("family", f"unknown kernel family {self.family!r}")
        if self.family == SEPARABLE_SUM:
            for j, term in enumerate(self.terms):
                coeff, left, right = term
                c = complex(coeff)
                if not (math.isfinite(c.real) and math.isfinite(c.imag)):
                    raise ConfigError(f"terms[{j}].coefficient", "must be finite")
                if not isinstance(left, BasisFn) or not isinstance(right, BasisFn):
                    raise ConfigError(f"terms[{j}]", "left/right must be BasisFn")
        if self.family == CUSTOM_TABULATED:
            if self.table_values is None or self.table_radius <= 0:
                raise ConfigError(
                    "table", "custom_tabulated needs table_radius > 0 and table_values"
                )
            vals = np.asarray(self.table_values, dtype=complex)
            if vals.ndim != 2 or vals.shape[0] != vals.shape[1] or vals.shape[0] < 2:
                raise ConfigError("table.values", "must be a square matrix, size >= 2")
            if not np.all(np.isfinite(vals.real)) or not np.all(np.isfinite(vals.imag)):
                raise ConfigError("table.values", "must be finite")
            object.__setattr__(self, "table_values", vals)

    @property
    def is_oracle_backed(self) -> bool:
        """Tabulated kernels are interpolated and excluded from exact oracles."""
        return self.family != CUSTOM_TABULATED

    def tail_radius(self) -> float:
        """Radius beyond which the kernel tail is below the double-precision
        floor (~1e-14); whole-line integrals are truncated here.

        Gaussian factors reach the floor by 8/scale, the slower sech factor
        by 33/scale; shifts push the radius outward.  Tabulated kernels are
        zero outside their table by definition.
        """
        if self.family == SEPARABLE_SUM:
            factors = {"gauss": 8.0, "x_gauss": 8.0, "sech": 33.0}
            radius = 1.0
            for _, left, right in self.terms:
                for fn in (left, right):
                    radius = max(radius, factors[fn.kind] / fn.scale + abs(fn.shift))
            return radius
        if self.family == GAUSS_CAUCHY:
            return 8.0
        return float(self.table_radius)


@dataclass(frozen=True)
class TruncationScheme:
    """Strictly increasing truncation radii tau_n and the induced indicator
    chi_n of the interval (-tau_n, tau_n) and projection P_n (multiplication
    by chi_n)."""

    tau0: float = 1.0
    growth: str = "arithmetic"
    step: float = 0.5
    ratio: float = 1.5

    def __post_init__(self):
        if not (math.isfinite(self.tau0) and self.tau0 > 0):
            raise ConfigError("truncation.tau0", "tau0 must be finite and > 0")
        if self.growth not in ("arithmetic", "geometric"):
            raise ConfigError("truncation.growth", f"unknown growth {self.growth!r}")
        if self.growth == "arithmetic" and not self.step > 0:
            raise ConfigError("truncation.step", "step must be > 0")
        if self.growth == "geometric" and not self.ratio > 1:
            raise ConfigError("truncation.ratio", "ratio must be > 1")

    def tau(self, n: int) -> float:
        if n < 1:
            raise ValueError("truncation index n must be >= 1")
        if self.growth == "arithmetic":
            return self.tau0 + self.step * n
        return self.tau0 * self.ratio**n

    def chi(self, n: int, x):
        """Indicator of the open interval (-tau_n, tau_n), vectorized."""
        return (np.abs(np.asarray(x, dtype=float)) < self.tau(n)).astype(float)

    def project(self, n: int, nodes, values):
        """P_n applied to a sampled function: zero outside (-tau_n, tau_n)."""
        return self.chi(n, nodes) * np.asarray(values)


def eval_kernel(k: KernelSpec, s, t):
    """Evaluate K(s,t); accepts scalars or broadcastable arrays."""
    s = np.asarray(s, dtype=float)
    t = np.asarray(t, dtype=float)
    if k.family == SEPARABLE_SUM:
        out = np.zeros(np.broadcast_shapes(s.shape, t.shape), dtype=complex)
        for coeff, left, right in k.terms:
            out = out + complex(coeff) * left(s) * right(t)
    elif k.family == GAUSS_CAUCHY:
        out = np.exp(-(s * s + t * t)) / (1.0 + (s - t) ** 2) + 0j
    else:
        out = _eval_tabulated(k, s, t)
    if out.ndim == 0:
        return complex(out)
    return out


def _eval_tabulated(k, s, t):
    from scipy.interpolate import RegularGridInterpolator

    npts = k.table_values.shape[0]
    axis = np.linspace(-k.table_radius, k.table_radius, npts)
    interp = RegularGridInterpolator(
        (axis, axis), k.table_values, method="linear", bounds_error=False, fill_value=0.0
    )
    ss, tt = np.broadcast_arrays(s, t)
    pts = np.stack([ss.ravel(), tt.ravel()], axis=-1)
    return interp(pts).reshape(ss.shape).astype(complex)


def carleman_norm(k: KernelSpec, s: float, disc, side: str = "row") -> float:
    """L^2 norm of the row K(s,.) (side="row") or column K(.,s) (side="column"),
    computed by quadrature on the given grid.  Row and column coincide for
    hermitian kernels."""
    if side not in ("row", "column"):
        raise ValueError(f"side must be 'row' or 'column', got {side!r}")
    if side == "row":
        vals = eval_kernel(k, s, disc.nodes)
    else:
        vals = eval_kernel(k, disc.nodes, s)
    return float(np.sqrt(np.sum(disc.weights * np.abs(vals) ** 2).real))


def subkernel_eval(k: KernelSpec, trunc: TruncationScheme, n: int, variant: str, s, t):
    """Truncated kernel: "plain" masks the first variable by chi_n, "tilde"
    masks both.  Equals eval_kernel inside the mask, zero outside."""
    if n < 1:
        raise ValueError("subkernel index n must be >= 1")
    if variant not in ("plain", "tilde"):
        raise ValueError(f"variant must be 'plain' or 'tilde', got {variant!r}")
    out = np.asarray(eval_kernel(k, s, t)) * trunc.chi(n, s)
    if variant == "tilde":
        out = out * trunc.chi(n, t)
    if out.ndim == 0:
        return complex(out)
    return out


def iterant_eval(k: KernelSpec, m: int, s: float, t: float, disc) -> complex:
    """m-th iterated kernel, the (m-1)-fold convolution of K with itself,
    by quadrature on the given grid.  For a rank-1 kernel K = u x v it equals
    c^{m-1} K(s,t) with c the overlap integral of u and v."""
    if m < 2:
        raise ValueError("iterant order m must be >= 2")
    x = disc.nodes
    w = disc.weights
    a = np.asarray(eval_kernel(k, x[:, None], x[None, :])) * w[None, :]
    vec = np.asarray(eval_kernel(k, x, t), dtype=complex)
    for _ in range(m - 2):
        vec = a @ vec
    row = np.asarray(eval_kernel(k, s, x), dtype=complex)
    return complex(np.sum(row * w * vec))


# Built-in kernels used throughout docs, demos, and verification.


def gauss_rank1() -> KernelSpec:
    """K(s,t) = e^{-s^2 - t^2}; hermitian, rank one."""
    g = BasisFn("gauss")
    return KernelSpec(SEPARABLE_SUM, ((1.0, g, g),), hermitian=True, label="gauss-rank1")


def odd_rank1() -> KernelSpec:
    """K(s,t) = e^{-s^2} * t e^{-t^2}; rank one with zero self-overlap, so the
    induced operator squares to zero."""
    return KernelSpec(
        SEPARABLE_SUM,
        ((1.0, BasisFn("gauss"), BasisFn("x_gauss")),),
        hermitian=False,
        label="odd-rank1",
    )


def rank2_orthogonal() -> KernelSpec:
    """K(s,t) = e^{-s^2}e^{-t^2} + 0.5 (s e^{-s^2})(t e^{-t^2}); hermitian,
    rank two with orthogonal components."""
    g = BasisFn("gauss")
    xg = BasisFn("x_gauss")
    return KernelSpec(
        SEPARABLE_SUM, ((1.0, g, g), (0.5, xg, xg)), hermitian=True, label="rank2-orth"
    )


def gauss_cauchy() -> KernelSpec:
    """K(s,t) = e^{-(s^2+t^2)} / (1 + (s-t)^2); hermitian, non-separable."""
    return KernelSpec(GAUSS_CAUCHY, hermitian=True, label="gauss-cauchy")


def zero_kernel() -> KernelSpec:
    g = BasisFn("gauss")
    return KernelSpec(SEPARABLE_SUM, ((0.0, g, g),), hermitian=True, label="zero")


BUILTIN_KERNELS = {
    "gauss_rank1": gauss_rank1,
    "odd_rank1": odd_rank1,
    "rank2_orthogonal": rank2_orthogonal,
    "gauss_cauchy": gauss_cauchy,
    "zero": zero_kernel,
}
