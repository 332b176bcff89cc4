"""Fredholm determinants by two routes, first minors, and characteristic
values located as determinant zeros.

Run:  python demos/02_determinants_and_zeros.py
"""

import numpy as np

import fredkern as fk

trunc = fk.TruncationScheme()
grid = fk.build_grid(trunc, 6, 4, 8)  # tau = 4

print("=" * 70)
print("Determinant of I - lambda*T_n: series route vs matrix route")
print("=" * 70)
k = fk.gauss_rank1()
m = fk.nystrom_matrix(k, trunc, 6, "plain", grid)
c = np.sqrt(np.pi / 2)
print(f"{'lambda':>12} {'series':>22} {'matrix':>22} {'1 - lambda*c':>22}")
for lam in (0.0, 0.3, 0.5, 0.5 + 0.2j):
    ds = fk.det_series(k, trunc, 6, lam, grid, 6)
    dm = fk.det_matrix(m, lam)
    print(f"{str(lam):>12} {ds.value.real:22.15f} {dm.value.real:22.15f} "
          f"{(1 - lam * c).real:22.15f}")

print()
print("The minor/determinant quotient recovers the resolvent kernel;")
print("for a rank-1 kernel the minor collapses to the kernel itself:")
for lam in (0.3, 0.7):
    minor = fk.minor_series(k, trunc, 6, lam, 0.0, 0.0, grid, 6)
    det = fk.det_series(k, trunc, 6, lam, grid, 6).value
    print(f"  lambda={lam}:  minor(0,0)={minor.real:.12f}   "
          f"quotient={(minor / det).real:.12f}   1/(1-lambda*c)={1 / (1 - lam * c):.12f}")

print()
print("=" * 70)
print("Characteristic values = zeros of the determinant")
print("=" * 70)
scan_grid = fk.build_grid(trunc, 6, 2, 8)
res = fk.char_scan(k, trunc, 6, (0.0, 2.0, -0.5, 0.5), 4.0, scan_grid)
print(f"rank-1 kernel, region [0,2]x[-0.5,0.5]: zeros = "
      f"{[f'{z.real:.7f}{z.imag:+.1e}j' for z in res.zeros]}")
print(f"  (exact sqrt(2/pi) = {np.sqrt(2 / np.pi):.7f})")

k2 = fk.rank2_orthogonal()
res2 = fk.char_scan(k2, trunc, 6, (0.0, 8.0, -1.0, 1.0), 2.0, scan_grid)
print(f"rank-2 kernel, region [0,8]x[-1,1]:     zeros = "
      f"{[f'{z.real:.5f}' for z in res2.zeros]}")
print("  (both real: the kernel is hermitian)")

kn = fk.odd_rank1()
res3 = fk.char_scan(kn, trunc, 6, (-2.0, 2.0, -1.0, 1.0), 3.0, scan_grid)
print(f"odd rank-1 kernel (squares to zero):    zeros = {list(res3.zeros)} "
      "(determinant is identically 1)")

print()
print("Attempting a resolvent AT a characteristic value is refused:")
try:
    fk.make_resolvent(k, trunc, 6, 1.0 / c, grid)
except fk.CharacteristicValueError as err:
    print(f"  CharacteristicValueError: {err}")
