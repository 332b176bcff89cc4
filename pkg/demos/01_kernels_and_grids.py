"""Tour of the kernel layer: built-in kernels, their row/column norm
functions, truncated subkernels, composite quadrature grids, and discrete
operator norms.

Run:  python demos/01_kernels_and_grids.py
"""

import numpy as np

import fredkern as fk

print("=" * 70)
print("Built-in kernels")
print("=" * 70)
kernels = {
    "gauss_rank1     ": fk.gauss_rank1(),
    "odd_rank1       ": fk.odd_rank1(),
    "rank2_orthogonal": fk.rank2_orthogonal(),
    "gauss_cauchy    ": fk.gauss_cauchy(),
}
for name, k in kernels.items():
    v00 = fk.eval_kernel(k, 0.0, 0.0)
    v11 = fk.eval_kernel(k, 1.0, -1.0)
    print(f"{name}  hermitian={str(k.hermitian):5}  K(0,0)={v00.real:+.6f}  "
          f"K(1,-1)={v11.real:+.6f}")

print()
print("Row norm function s -> ||K(s,.)|| decays at infinity:")
disc = fk.grid_on_interval(-8.0, 8.0, 4, 8)
k = fk.rank2_orthogonal()
for s in (0.0, 1.0, 2.0, 4.0, 6.0):
    print(f"  s={s:4.1f}   row={fk.carleman_norm(k, s, disc, 'row'):10.3e}   "
          f"column={fk.carleman_norm(k, s, disc, 'column'):10.3e}")

print()
print("=" * 70)
print("Truncated subkernels: one-sided (plain) and two-sided (tilde) masks")
print("=" * 70)
trunc = fk.TruncationScheme()  # tau_n = 1 + n/2
k = fk.gauss_rank1()
print(f"truncation radii: {[trunc.tau(n) for n in range(1, 6)]}")
n = 2  # tau = 2
for (s, t) in ((1.0, 1.0), (3.0, 0.0), (1.0, 3.0)):
    plain = fk.subkernel_eval(k, trunc, n, "plain", s, t)
    tilde = fk.subkernel_eval(k, trunc, n, "tilde", s, t)
    print(f"  (s,t)=({s:4.1f},{t:4.1f})   K={fk.eval_kernel(k, s, t).real:9.3e}   "
          f"plain={plain.real:9.3e}   tilde={tilde.real:9.3e}")

print()
print("Uniform convergence of the subkernels to the kernel:")
pts = np.linspace(-9, 9, 121)
full = np.asarray(fk.eval_kernel(k, pts[:, None], pts[None, :]))
for n in (2, 6, 10, 14):
    sub = np.asarray(fk.subkernel_eval(k, trunc, n, "plain", pts[:, None], pts[None, :]))
    print(f"  tau_{n:<2} = {trunc.tau(n):4.1f}   max|K_n - K| = {np.max(np.abs(sub - full)):.3e}")

print()
print("=" * 70)
print("Composite Gauss-Legendre grids and collocation matrices")
print("=" * 70)
grid = fk.build_grid(trunc, 6, 4, 8)  # (-4, 4)
print(f"grid on (-4, 4): {len(grid.nodes)} nodes, {grid.panel_count} panels, "
      f"order {grid.order}, sum of weights = {grid.weights.sum():.12f}")

m = fk.nystrom_matrix(k, trunc, 6, "plain", grid)
print(f"operator norm of the rank-1 kernel:   {fk.operator_norm_estimate(m):.10f}")
print(f"  (exact value sqrt(pi/2)           = {np.sqrt(np.pi / 2):.10f})")

m2 = fk.nystrom_matrix(fk.odd_rank1(), trunc, 6, "plain", grid)
print(f"operator norm of the odd kernel:      {fk.operator_norm_estimate(m2):.10f}")
print(f"  (exact ||u||*||v||                = "
      f"{(np.pi / 2) ** 0.25 * (0.25 * np.sqrt(np.pi / 2)) ** 0.5:.10f})")

print()
print("Iterated kernels of the rank-1 built-in scale by the overlap integral:")
c = np.sqrt(np.pi / 2)
for m_ord in (2, 3, 4):
    val = fk.iterant_eval(k, m_ord, 0.0, 0.0, disc)
    print(f"  T^[{m_ord}](0,0) = {val.real:.10f}   (c^{m_ord - 1} = {c ** (m_ord - 1):.10f})")
