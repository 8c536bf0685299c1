"""Exact verification of splitting types of bundles on rational curves in hypersurfaces."""

from .bundles import FreeGradedModule, GradedMap, SplittingType, oracle_splitting, splitting_type, syzygy_kernel
from .example import (
    build_example,
    comb_hypotheses,
    example_configuration,
    hilbert_ideal,
    hilbert_structure,
    verify_example,
)
from .experiments import TrialConfig, TrialStats, sample_hypersurface_containing, section_lift_check, very_free_search
from .field import FieldSpec
from .forms import BinaryForm, MultiForm, ProjectivePoint
from .geometry import (
    Hypersurface,
    RationalCurve,
    is_typical,
    is_very_free,
    normal_bundle,
    normal_bundle_splitting,
    pullback_tangent_splitting,
)

__all__ = [
    "BinaryForm", "FieldSpec", "FreeGradedModule", "GradedMap", "Hypersurface", "MultiForm",
    "ProjectivePoint", "RationalCurve", "SplittingType", "TrialConfig", "TrialStats",
    "build_example", "comb_hypotheses", "example_configuration", "hilbert_ideal", "hilbert_structure", "is_typical",
    "is_very_free", "normal_bundle", "normal_bundle_splitting", "oracle_splitting",
    "pullback_tangent_splitting", "sample_hypersurface_containing",
    "section_lift_check", "splitting_type", "syzygy_kernel", "verify_example", "very_free_search",
]
