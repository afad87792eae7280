#!/usr/bin/env python3
"""Pulse-count economics: what each suppression order costs.

Full four-block concatenation needs ~4^m pulses for order m+1.  Replacing
its innermost blocks by Uhrig schedules cuts that to m 2^m + a_m (one
exponential factor becomes linear), and the polynomial-timed double layer
brings the cost down to the quartic m(m+1)^3 + m, which wins once
(m+1)^3 <= 2^m.
"""

from ddforge import a_n, cdd_full, count_compare, crossover

print("== exact counts at matched suppression order ==")
print(f"{'m':>3} {'order':>6} {'concat 4^m':>11} {'uhrig-concat':>13} {'double-layer':>13}")
for row in count_compare(14):
    winner = min(("cdd", "cudd", "udd2"), key=lambda k: row[k])
    mark = {"cdd": "", "cudd": "  <- concat-Uhrig wins", "udd2": "  <- double layer wins"}[winner]
    print(f"{row['m']:>3} {row['claimed_order']:>6} {row['cdd']:>11} {row['cudd']:>13} {row['udd2']:>13}{mark}")

n_star = crossover()
print(f"\ncrossover: (n+1)^3 <= 2^n first holds at n = {n_star} "
      f"({(n_star+1)**3} <= {2**n_star}; at n = {n_star-1}: {n_star**3} > {2**(n_star-1)})")

print("\n== surviving X pulses of the two-block recursion ==")
print("level:", list(range(9)))
print("a_n:  ", [a_n(n) for n in range(9)])
print("(closed form (2/3)(2^n - (-1)^n), cross-checked against the recursion)")

print("\n== post-cancellation counts of the full four-block recursion ==")
counts = [cdd_full(m).pulse_count for m in range(8)]
print("counts:", counts)
ratios = [round(counts[m + 1] / counts[m], 4) for m in range(1, 7)]
print("ratios:", ratios, "-> growth factor tends to 4 (oscillating around it)")
