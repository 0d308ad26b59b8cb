"""Multi-cycle cyclostationary spectrum sensing for CP-OFDM signals under noise uncertainty."""

from .cac import (
    CyclicFrequencySet,
    LagPair,
    WeightTable,
    cac_estimate,
    ofdm_cyclic_frequencies,
    weight_table,
)
from .detectors import (
    BaselineRatioDetector,
    DegenerateInputError,
    DetectorDecision,
    DetectorSettings,
    EnergyDetector,
    MultiCycleConfig,
    MultiCycleDetector,
    baseline_ratio_statistic,
    build_detectors,
    decide,
    energy_statistic,
    multicycle_statistic,
    singlecycle_statistic,
)
from .montecarlo import (
    ExperimentPlan,
    MonteCarloEstimate,
    run_pd_experiment,
    run_pf_experiment,
    simulate_statistics,
    trial_stream,
    wilson_interval,
)
from .signals import (
    Hypothesis,
    ModulationScheme,
    NoiseUncertaintyModel,
    Observation,
    OfdmParams,
    draw_noise_variance,
    generate_ofdm_frame,
    map_bits_to_symbols,
    remove_mean,
    synthesize_observation,
)
from .theory import (
    FDistParams,
    energy_threshold,
    f_cdf,
    pf_of_threshold,
    regularized_incomplete_beta,
    threshold_for_pf,
)

__version__ = "0.1.0"
