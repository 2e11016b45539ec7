"""Fractal measures on the line, their Fourier extension transforms, and
numerical checks of multilinear extension estimates."""

__version__ = "0.1.0"

from .errors import InfeasibleParametersError, ResourceLimitError
from .measures import (
    DiscreteMeasure,
    PowerDensity,
    SimilarityIFS,
    build_self_similar,
    check_separation,
    discretize_power_density,
    pushforward_scale,
)
from .transform import (
    FrequencyGrid,
    bspline_hatK,
    extension_transform,
    lq_freq_norm,
    multilinear_ratio,
)
from .dimensions import (
    DecayFit,
    box_counts,
    energy_integral,
    fourier_decay_fit,
    frostman_fit,
    lq_dimension_homogeneous,
)
from .convolution import (
    DensityEstimate,
    check_transfer_hypotheses,
    convolution_exponent,
    convolve_grid,
    density_lp_norm,
    verify_transfer_bound,
)
from .knapp import (
    KnappFamily,
    KnappParams,
    PhiSpec,
    build_family,
    build_family_single_scale,
    choose_profiles,
    is_mli,
    knapp_indicator,
    mli_set,
    psi_sequence,
    validate_family,
)
from .counting import (
    SumHistogram,
    cs_lower_bound,
    count_solutions,
    g_histogram,
    gamma_bound,
    norm_identity_check,
    sumset_cardinality,
)
from .regions import RegionBoundary, evaluate_boundary, region_report, region_svg
