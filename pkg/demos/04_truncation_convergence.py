"""Convergence of truncated resolvent kernels to the full-kernel limit:
shifted spectral parameters, boundedness probes, composite tail norms, and
the uniform-in-lambda sweep.

Run:  python demos/04_truncation_convergence.py
"""

import numpy as np

import fredkern as fk

k = fk.gauss_rank1()
trunc = fk.TruncationScheme()
n_list = range(2, 11)  # tau in {2, 2.5, ..., 6}
egrid = fk.grid_on_interval(-6.5, 6.5, 1, 8)

print("=" * 70)
print("Distances from truncated resolvents to the full-kernel reference")
print("(lambda = 0.3, unshifted schedule, series reference)")
print("=" * 70)
rep = fk.resolvent_convergence_diagnostic(
    k, trunc, 0.3, fk.ShiftSchedule("zero"), n_list, egrid, "neumann_disk", n_terms=60
)
print(f"{'n':>3} {'tau_n':>6} {'sup kernel diff':>16} {'sup row dist':>14} {'sup col dist':>14}")
for n, dt, dr, dc in zip(rep.n_values, rep.sup_T_diff, rep.sup_row_diff, rep.sup_col_diff):
    print(f"{n:>3} {trunc.tau(n):>6.2f} {dt:>16.3e} {dr:>14.3e} {dc:>14.3e}")

print()
print("A decaying shift beta_n = 1/n moves the spectral parameter to")
print("lambda/(1 - beta_n*lambda); the sequence still converges:")
sched = fk.ShiftSchedule("harmonic", 1.0)
rep_h = fk.resolvent_convergence_diagnostic(k, trunc, 0.3, sched, n_list, egrid, "largest_n")
print(f"{'n':>3} {'lambda_n':>10} {'sup kernel diff vs top index':>30}")
for n, dt in zip(rep_h.n_values, rep_h.sup_T_diff):
    print(f"{n:>3} {fk.lambda_shift(0.3, sched, n).real:>10.6f} {dt:>30.3e}")

print()
print("=" * 70)
print("Boundedness probe for the shifted truncated operators")
print("=" * 70)
for zeta in (0.3, 0.75, 1.0 / np.sqrt(np.pi / 2)):
    probe = fk.boundedness_probe(k, trunc, zeta, fk.ShiftSchedule("zero"), n_list)
    m_str = f"{probe.M:.3e}" if np.isfinite(probe.M) else "inf"
    print(f"  zeta = {zeta:.7f}: bounded={str(probe.bounded):5}  max norm = {m_str}")
print("  (the last zeta is the limiting characteristic value)")

print()
print("=" * 70)
print("Composite tail norms ||(T - T_n) T_n||: the strong-convergence test")
print("=" * 70)
disc = fk.grid_on_interval(-8.0, 8.0, 4, 8)
tails = fk.tail_condition_report(k, trunc, 1, n_list, disc)
tails_tilde = fk.tail_condition_report(k, trunc, 1, n_list, disc, variant="tilde")
print(f"{'n':>3} {'tau_n':>6} {'plain':>12} {'tilde':>12}")
for n, tp, tt in zip(sorted(n_list), tails, tails_tilde):
    print(f"{n:>3} {trunc.tau(n):>6.2f} {tp:>12.3e} {tt:>12.3e}")

print()
print("=" * 70)
print("Uniform-in-lambda envelope over several regular values")
print("=" * 70)
sweep = fk.compact_sweep(k, trunc, [0.1, 0.3, 0.5, 0.3 + 0.2j], n_list, egrid, n_terms=70)
print(f"lambdas kept: {[str(l) for l in sweep.lambdas]}")
print(f"{'n':>3} {'envelope kernel':>16} {'envelope row':>14} {'envelope col':>14}")
for i, n in enumerate(sweep.n_values):
    print(f"{n:>3} {sweep.envelope_T[i]:>16.3e} {sweep.envelope_row[i]:>14.3e} "
          f"{sweep.envelope_col[i]:>14.3e}")
