"""Slow, literal reference implementations shared by the test modules."""

import math


def literal_statistic(x, alphas, tau, tau_bar, beta, floor=1e-6):
    """Double-loop evaluation straight from the defining ratio."""
    x = [complex(v) for v in x]
    n_total = len(x)
    num = 0j
    n_inc = 0
    for n in range(n_total - tau):
        phasor = 0j
        cos_sum = 0.0
        sin_sum = 0.0
        for a in alphas:
            phasor += complex(math.cos(2 * math.pi * a * n), -math.sin(2 * math.pi * a * n))
            cos_sum += math.cos(2 * math.pi * a * n)
            sin_sum += math.sin(2 * math.pi * a * n)
        eta = math.sqrt(cos_sum**2 + sin_sum**2)
        if eta < floor:
            continue
        n_inc += 1
        num += x[n] * x[n + tau].conjugate() * phasor / eta
    den = 0j
    for n in range(n_total - tau_bar):
        den += x[n] * x[n + tau_bar].conjugate() * complex(
            math.cos(2 * math.pi * beta * n), -math.sin(2 * math.pi * beta * n)
        )
    return (abs(num) ** 2 / n_inc) / (abs(den) ** 2 / (n_total - tau_bar))
