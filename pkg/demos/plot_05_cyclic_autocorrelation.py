"""
Cyclic autocorrelation of an OFDM frame
=======================================

The prefix makes the lag-``n_fft`` autocorrelation periodic with period
``n_fft + n_cp``. Its Fourier coefficients at ``k / (n_fft + n_cp)`` are the
cyclic features. Noise has none, so its estimate sits near zero.
"""

import numpy as np

from cyclosense import NoiseUncertaintyModel, OfdmParams, synthesize_observation
from cyclosense.cac import cac_estimate, ofdm_cyclic_frequencies, weight_table

rng = np.random.default_rng(0)
params = OfdmParams(n_ofdm_symbols=32)
period = params.symbol_length

sig = synthesize_observation("H1", params, 10.0, NoiseUncertaintyModel(), rng).samples
noise = synthesize_observation("H0", params, 10.0, NoiseUncertaintyModel(), rng).samples

print(f"{'k':>3} {'|R| frame':>10} {'|R| noise':>10}")
for k in range(-3, 4):
    alpha = k / period
    print(f"{k:3d} {abs(cac_estimate(sig, alpha, params.n_fft)):10.4f} {abs(cac_estimate(noise, alpha, params.n_fft)):10.4f}")

###############################################################################
# The five-cycle weight ``sum_k exp(-j 2 pi k n / P)`` normalized to unit
# modulus. Over the prefix region it is flat, which is why it matches the
# plain zero-cycle weighting there.

table = weight_table(ofdm_cyclic_frequencies(params.n_fft, params.n_cp, range(-2, 3)), period)
w = table.phase_weights()
print("weight phase over the first prefix (deg):", np.round(np.degrees(np.angle(w[: params.n_cp : 8])), 1))
print("weight phase mid-symbol (deg):", np.round(np.degrees(np.angle(w[200:264:8])), 1))
