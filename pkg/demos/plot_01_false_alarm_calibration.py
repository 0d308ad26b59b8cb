"""
False-alarm calibration of the ratio statistic
==============================================

Under noise only, the multi-cycle statistic is a ratio of two independent
squared complex Gaussians with equal variance, so ``P(T >= lam) = 1/(lam + 1)``
whatever the noise power is. Here we check that on simulated noise.
"""

import numpy as np

from cyclosense import ExperimentPlan, DetectorSettings, run_pf_experiment, pf_of_threshold

###############################################################################
# 1152 noise samples, lags 128 and 126, cyclic frequencies k/144 for k = -2..2.
# Noise power is irrelevant to the statistic, so no uncertainty is needed.

plan = ExperimentPlan(
    trials=4000,
    n_fft=128,
    n_ofdm_grid=(8,),
    n_samples=1152,
    delta_db_grid=(0.0,),
    detectors=DetectorSettings(names=("multi5", "single1")),
)
thresholds = [0.5, 1, 2, 3, 5, 9, 19, 49]
table = run_pf_experiment(plan, thresholds)

print(f"{'lambda':>7} {'theory':>8} {'K=1':>8} {'K=5':>8}")
for lam in thresholds:
    print(f"{lam:7g} {pf_of_threshold(lam):8.4f} {table['single1'][lam].p_hat:8.4f} {table['multi5'][lam].p_hat:8.4f}")

###############################################################################
# Plot on log axes if matplotlib is around.

try:
    import matplotlib.pyplot as plt
except ImportError:
    plt = None

if plt is not None:
    lam = np.logspace(-0.5, 2, 100)
    fig, ax = plt.subplots()
    ax.loglog(lam, 1 / (lam + 1), "k-", label="1/(lambda+1)")
    for name, marker in (("single1", "o"), ("multi5", "x")):
        ax.loglog(thresholds, [table[name][t].p_hat for t in thresholds], marker, label=name)
    ax.set_xlabel("threshold")
    ax.set_ylabel("false-alarm rate")
    ax.legend()
    fig.savefig("false_alarm_calibration.png", dpi=120)
