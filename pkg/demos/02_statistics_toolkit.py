"""Tour of the statistics kit: ranks, correlation, t-tests, intervals.

Run: python3 demos/02_statistics_toolkit.py
"""

import random

from solmetrics import (
    correlation_matrix,
    mean_confidence_interval,
    paired_t_test,
    rank,
    spearman,
    student_t_cdf,
    welch_t_test,
)

# --- average ranks handle ties -------------------------------------------
print("ranks of [7, 2, 7, 9]:", rank([7, 2, 7, 9]).ranks)

# --- Spearman correlation is rank-based ----------------------------------
x = [1, 2, 3, 4, 5]
y = [2, 1, 4, 3, 5]
r = spearman(x, y)
print(f"\nspearman({x}, {y}):")
print(f"  rho = {r.rho}  p = {r.p_value:.4f}  strength = {r.strength}")

squared = [v * v for v in x]  # a monotone transform changes nothing
print("  rho after squaring x:", spearman(squared, y).rho)

# --- paired and Welch t-tests ---------------------------------------------
before = [12.1, 14.3, 11.8, 15.0, 13.3, 12.9]
after = [11.2, 13.1, 11.9, 13.8, 12.0, 12.2]
paired = paired_t_test(before, after)
print(f"\npaired t-test: t = {paired.t_statistic:.3f}, p = {paired.p_value:.4f}")

gen = random.Random(1)
group_a = [gen.gauss(10, 2) for _ in range(40)]
group_b = [gen.gauss(11, 3) for _ in range(25)]
welch = welch_t_test(group_a, group_b)
print(f"welch t-test:  t = {welch.t_statistic:.3f}, df = {welch.degrees_of_freedom:.1f}")

# --- confidence intervals --------------------------------------------------
ci = mean_confidence_interval([1, 2, 3, 4, 5], 0.95)
print(f"\n95% CI of 1..5: [{ci.lower:.3f}, {ci.upper:.3f}] around mean {ci.mean}")

# --- the t distribution underneath -----------------------------------------
print(f"\nStudent-t CDF at t=1, df=1 (Cauchy): {student_t_cdf(1.0, 1)}")
print(f"Student-t CDF at t=2, df=100:        {student_t_cdf(2.0, 100):.6f}")

# --- all-pairs correlation matrices ----------------------------------------
rng = random.Random(7)
base = [rng.random() * 10 for _ in range(30)]
columns = [
    ("base", base),
    ("noisy_copy", [v + rng.random() for v in base]),
    ("independent", [rng.random() * 10 for _ in range(30)]),
    ("constant", [4.0] * 30),
]
matrix = correlation_matrix(columns)
print("\ncorrelation matrix (rho):")
header = "".join(f"{name:>14}" for name in matrix.metric_ids)
print(" " * 14 + header)
for name, row in zip(matrix.metric_ids, matrix.entries):
    cells = "".join(
        f"{'undef':>14}" if c is None else f"{c.rho:>14.3f}" for c in row
    )
    print(f"{name:>14}{cells}")
print("(the constant column is flagged undefined, not an error)")
