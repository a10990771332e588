"""Classification and blow-up differential geometry of corank-1 map-germs
(R^2, 0) -> (R^3, 0): A-simple class recognition, curvature series over the
singularity, distance-squared function singularities and versality, focal
loci, and wave-front/caustic type predictions.
"""

from .blowup import (
    BlowupContext,
    CurvatureSeries,
    FormSeries,
    NormalSeries,
    PointType,
    RidgeReport,
    build_context,
    curvature_series,
    extended_normal,
    fundamental_forms,
    principal_direction_lifts,
    ridge_report,
    theta_grid,
)
from .closed_forms import crosscheck_closed_forms
from .distance import (
    Branch,
    DistSing,
    DistanceVerdict,
    FocalKind,
    FocalLocus,
    ProbePoint,
    SingularPointType,
    classify_distance,
    distance_jet,
    focal_locus,
    geometric_verdict,
    singular_point_type,
    versality_rank_test,
)
from .front import (
    FrontType,
    FrontVerdict,
    Mesh,
    WavefrontSpec,
    focal_sheet_mesh,
    front_verdict,
    surface_mesh,
    wavefront_mesh,
)
from .germ_io import (
    GermSpec,
    emit_mesh,
    emit_report,
    expand_germ,
    load_germ,
    parse_polynomial,
    print_polynomial,
)
from .jets import EXACT, FLOAT, GermJets, Jet2, invert_series_1d
from .mond import (
    BkRecursionTrace,
    MondClass,
    MondTag,
    bk_recursion,
    classify,
    verify_by_substitution,
)
from .normal_form import (
    NormalFormCoeffs,
    TransformLog,
    TwoJetClass,
    corank_at_origin,
    reduce_to_normal_form,
    two_jet_class,
)
from .oracle import (
    K_EQUIV,
    R_PLUS,
    SingularityType,
    split_and_type,
    versality_rank_oracle,
)
from .pipeline import ClassificationOutcome, classify_germ, classify_spec

__version__ = "0.1.0"
