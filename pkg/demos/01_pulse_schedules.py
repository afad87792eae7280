#!/usr/bin/env python3
"""Tour of the schedule families: timing, axis counts, commensurability.

Every schedule lives on the unit interval as fractions of its total
duration.  Constructions that are rational by nature (CPMG, PDD, iterated
CPMG, the concatenated families, the polynomial-timed double layer) carry
exact Fraction instants; Uhrig spacings for n >= 3 are irrational and
stored as floats.
"""

from ddforge import (
    PauliAxis,
    cdd_full,
    cdd_xx,
    commensurate_grid,
    cpmg,
    cudd,
    icpmg,
    pdd,
    schedule_to_json,
    udd2_approx,
    udd_sequence,
)


def show(seq):
    marks = " ".join(f"{p.axis.value}@{p.instant}" for p in seq.pulses[:12])
    more = " ..." if seq.pulse_count > 12 else ""
    grid = commensurate_grid(seq)
    grid_note = f"grid 1/{grid}" if grid is not None else "not commensurate"
    print(f"{seq.label:>16} | {seq.pulse_count:4d} pulses | {grid_note:>18} | {marks}{more}")


print("== classic families ==")
show(udd_sequence(1))
show(cpmg())
show(pdd(3))
show(icpmg(2))

print("\n== Uhrig spacing becomes irrational at n = 3 ==")
show(udd_sequence(2))
show(udd_sequence(3))

print("\n== concatenated families (junction pulses at block starts) ==")
show(cdd_xx(1))
show(cdd_xx(2))  # reproduces CPMG after X.X cancellation
show(cdd_full(1))
show(cdd_full(2))  # Y pulses appear where X meets Z at a junction
show(cudd(2, 1))

print("\n== polynomial-timed double layer restores a rational grid ==")
show(udd2_approx(1))
outer = udd2_approx(5).filter_axis(PauliAxis.X)
print(f"outer X layer of UDD2-5: instants {[str(p.instant) for p in outer.pulses]}")
print(f"outer grid: 1/{commensurate_grid(outer)} (divides 1/216 cell grid)")

print("\n== schedules serialize losslessly ==")
print(schedule_to_json(cpmg(2.0)))
