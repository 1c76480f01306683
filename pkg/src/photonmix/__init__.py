"""Photon statistics of a heralded single photon mixed with a weak coherent state.

Three mutually cross-checking computation paths:

* :mod:`photonmix.analytic`   closed-form g2(0) models and the Gaussian
  overlap-vs-delay law;
* :mod:`photonmix.oracle`     exact truncated-Fock-space evaluation, the
  ground truth the other paths are validated against;
* :mod:`photonmix.montecarlo` pulse-by-pulse coincidence counting through a
  simulated HBT interferometer, with :mod:`photonmix.estimators` turning the
  tallies back into g2 and overlap values.

The ``photonmix`` command line (see :mod:`photonmix.cli`) exposes parameter
sweeps and canonical figure presets on top of these.
"""

from .analytic import (
    DelayModel,
    SourceParams,
    g2_distinguishable,
    g2_full_eta,
    g2_indistinguishable_full,
    g2_partial,
    g2_weakfield_k1,
    k_of_delay,
    transition_boundary,
)
from .estimators import (
    G2Estimate,
    GaussianFit,
    KEstimate,
    UndefinedEstimateError,
    estimate_g2,
    estimate_k,
    fit_gaussian,
)
from .fock import (
    CutoffError,
    DensityMatrix,
    FockVector,
    HilbertSpace,
    annihilate,
    coherent_state,
    create,
    mix,
    normally_ordered_moment,
    number_state,
    pure_moment,
    vacuum,
)
from .montecarlo import (
    CountRecord,
    DetectorConfig,
    RunConfig,
    child_seed,
    click_probabilities,
    run_delay_scan,
    run_hbt,
)
from .oracle import (
    PartialStateSpec,
    build_mixed_state,
    bunching_coefficient,
    g2_of_density,
    g2_oracle,
    photon_number_distribution,
)

__version__ = "0.1.0"
