"""Small-divisor laboratory.

Exact Diophantine analysis of linear flows on the 2-torus: continued
fractions and certified approximation witnesses, the small-divisor gap and
its decay exponent, the cohomological equation in Fourier space, a time
family of exactly solvable coefficients whose primitives blow up, and the
graded dimension identity for truncated product complexes.
"""

from .cohomology import (
    CohomologyReport,
    PrimitiveSolution,
    obstruction,
    resonant_count,
    solve_primitive,
    truncated_cohomology,
)
from .config import RunConfig, resolve_config
from .counterexample import (
    BlowupReport,
    BumpSpec,
    FamilySample,
    FamilySpec,
    SmoothnessCertificate,
    blowup_profile,
    build_family,
    family_coefficient,
    family_from_json,
    family_series,
    family_to_json,
    solve_family,
    verify_smoothness,
)
from .diophantine import (
    ApproximationWitness,
    Convergent,
    Divisor,
    EnclosureSlope,
    ExponentFit,
    GOLDEN,
    LiouvilleSlope,
    QuadraticSlope,
    RationalSlope,
    Slope,
    SmallDivisorGap,
    cf_expand,
    convergents,
    divisor,
    estimate_exponent,
    find_family_pairs,
    find_witness_definition,
    gap,
    parse_slope,
)
from .errors import (
    BoundViolated,
    IrrationalRequired,
    NotFound,
    NotLiouvilleEvidence,
    Obstructed,
    PrecisionExhausted,
    Resonant,
    ResonantSlope,
    SmallDivisorError,
)
from .exact import Interval, QuadSurd, render_fraction
from .fourier import (
    DecayProfile,
    FourierSeries2D,
    TorusPoint,
    apply_X,
    decay_profile,
    evaluate,
    series_from_json,
    series_to_json,
)
from .kunneth import (
    KoszulModeData,
    ProductFoliation,
    TruncatedComplexReport,
    koszul_matrices,
    kunneth_check,
    mode_cohomology,
    truncated_betti,
)

__version__ = "0.1.0"
