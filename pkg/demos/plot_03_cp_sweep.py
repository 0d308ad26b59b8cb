"""
Longer cyclic prefixes are easier to detect
===========================================

Each prefix sample repeats a sample ``n_fft`` later, and the lag-``n_fft``
correlation is what the cyclostationary detectors pick up. More prefix means
more correlated pairs per frame. The energy detector sees the same power
either way.
"""

from fractions import Fraction

from cyclosense import DetectorSettings, ExperimentPlan, run_pd_experiment

cps = (Fraction(1, 32), Fraction(1, 16), Fraction(1, 8), Fraction(1, 4))
plan = ExperimentPlan(
    trials=500,
    snr_grid_db=(-10.0,),
    delta_db_grid=(1.0,),
    cp_ratios=cps,
    detectors=DetectorSettings(names=("multi5", "single1", "energy")),
)
rows = run_pd_experiment(plan)

for name in plan.detectors.names:
    series = [r.estimate for r in rows if r.detector == name]
    print(f"{name:>8}: " + "  ".join(f"{cp}: {e.p_hat:.3f}" for cp, e in zip(cps, series)))
