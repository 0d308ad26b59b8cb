"""
Observation length and the SNR wall
===================================

Doubling the number of OFDM symbols roughly doubles the mean of the
cyclostationary statistic under a signal. The energy detector cannot use the
extra samples because its error is set by the unknown noise power.
"""

from cyclosense import DetectorSettings, ExperimentPlan, run_pd_experiment

counts = (16, 32, 64)
plan = ExperimentPlan(
    trials=300,
    snr_grid_db=(-10.0,),
    delta_db_grid=(0.5, 1.0),
    n_ofdm_grid=counts,
    detectors=DetectorSettings(names=("multi5", "energy")),
)
for r in run_pd_experiment(plan):
    p = r.point
    print(f"delta {p.delta_db:3g} dB  symbols {p.n_ofdm:4d}  {r.detector:>7}  Pd {r.estimate.p_hat:.3f}"
          f"  [{r.estimate.ci_low:.3f}, {r.estimate.ci_high:.3f}]")
