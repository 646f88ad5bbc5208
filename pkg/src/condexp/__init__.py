"""Weighted conditional expectation operators on finite measure spaces.

Closed-form norm, polar decomposition, Aluthge transform, operator-class
membership and spectra of T = M_w E M_u, each cross-validated against a
dense numerical linear algebra oracle on the weighted L2 space.
"""

from .measure_space import (
    FiniteMeasureSpace,
    IndexSet,
    MeasurableFunction,
    SubSigmaAlgebra,
    conditional_expectation,
    ess_range,
    ess_sup_norm,
    is_algebra_measurable,
    level_set,
    support,
    weighted_inner,
    weighted_norm,
)
from .operator_algebra import (
    EigenSystem,
    PolarParts,
    SolverError,
    WeightedOperator,
    adjoint,
    aluthge_numeric,
    apply,
    compose,
    eigenvalues,
    expectation_operator,
    fractional_power,
    is_hermitian,
    is_normal,
    is_partial_isometry,
    kernel,
    loewner_geq,
    modulus,
    multiplication_operator,
    operator_norm,
    polar_decompose_numeric,
    singular_values,
)
from .wce_operator import (
    AdjointParts,
    WCEOperator,
    adjoint_parts_closed_form,
    adjoint_wce,
    aluthge_closed_form,
    build_wce,
    norm_closed_form,
    polar_closed_form,
    t_tstar_power,
    to_matrix,
    tstar_t_power,
)
from .operator_classes import (
    ClassVerdict,
    NormalityReport,
    a_class_criterion,
    a_class_pointwise,
    cauchy_schwarz_gap,
    is_a_class_definitional,
    is_quasi_star_a_definitional,
    is_star_a_definitional,
    normality_equivalence,
    quasi_star_a_criteria,
    star_a_criteria,
)
from .spectral_analysis import (
    JointSpectrumRangeReport,
    EMuPointSpectrumReport,
    JointSpectrumReport,
    SpectrumReport,
    joint_spectrum_range_check,
    em_u_point_spectrum,
    hausdorff_distance,
    iterated_aluthge,
    joint_point_spectrum,
    point_spectrum_closed_form,
    sigma_p_equals_sigma_jp_check,
    spectral_radius_closed_form,
    spectrum_closed_form,
    spectrum_report,
)
from .instance_factory import (
    Instance,
    as_wce,
    fingerprint,
    product_space_example,
    proportional_instance,
    random_instance,
    symmetric_interval_example,
)

__version__ = "0.1.0"
