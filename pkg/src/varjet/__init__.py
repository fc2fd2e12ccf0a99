"""varjet: exact variational calculus on jet coordinates.

Polynomial expressions over jet variables with rational coefficients,
bigraded differential forms with the horizontal and vertical differentials,
Euler and higher Euler derivatives, the interior Euler operator and delta_V,
Helmholtz residuals, and the jet-order filtration with its graded projections
and decomposition of functional forms.  All arithmetic is exact; every
identity is decidable by normalisation to zero.
"""

from .jetcore import (
    Expr,
    JetContext,
    MultiIndex,
    is_zero,
    mi_binom,
    multi_indices,
    multi_indices_upto,
    partial_jet,
    partial_x,
    total_derivative,
    total_derivative_mi,
)
from .forms import (
    ContactFactor,
    Form,
    WedgeMonomial,
    contact_weight_split,
    contract,
    d_h,
    d_v,
    dx,
    lie_total,
    lie_total_mi,
    nu,
    nu_contracted,
    omega0_monomials,
    scalar_form,
    theta,
    wedge,
)
from .euler import (
    SourceForm,
    delta_v,
    delta_v_unchecked,
    euler,
    helmholtz_residuals,
    higher_euler,
    interior_euler,
    is_functional,
    variation_boundary,
)
from .filtration import (
    GammaDecomposition,
    GradedClass,
    b_op,
    class_from_l1_family,
    class_from_s2_coeffs,
    filtration_level,
    gamma_decompose,
    gr_top,
    ibar,
    ibar_s2,
    l1_apply,
    l1_matrix,
    l1_membership,
    mu_component,
    s2_in_image,
    s2_in_kernel,
    zero_class,
)
from .parser import (
    ParseError,
    RepeatedFactorWarning,
    expr_to_str,
    form_to_str,
    parse_expr,
    parse_form,
)
from .jsonio import form_from_obj, form_to_obj

__version__ = "0.1.0"

__all__ = [
    "ContactFactor",
    "Expr",
    "Form",
    "GammaDecomposition",
    "GradedClass",
    "JetContext",
    "MultiIndex",
    "ParseError",
    "RepeatedFactorWarning",
    "SourceForm",
    "WedgeMonomial",
    "b_op",
    "class_from_l1_family",
    "class_from_s2_coeffs",
    "contact_weight_split",
    "contract",
    "d_h",
    "d_v",
    "delta_v",
    "delta_v_unchecked",
    "dx",
    "euler",
    "expr_to_str",
    "filtration_level",
    "form_from_obj",
    "form_to_obj",
    "form_to_str",
    "gamma_decompose",
    "gr_top",
    "helmholtz_residuals",
    "higher_euler",
    "ibar",
    "ibar_s2",
    "interior_euler",
    "is_functional",
    "is_zero",
    "l1_apply",
    "l1_matrix",
    "l1_membership",
    "lie_total",
    "lie_total_mi",
    "mi_binom",
    "mu_component",
    "multi_indices",
    "multi_indices_upto",
    "nu",
    "nu_contracted",
    "omega0_monomials",
    "parse_expr",
    "parse_form",
    "partial_jet",
    "partial_x",
    "s2_in_image",
    "s2_in_kernel",
    "scalar_form",
    "theta",
    "total_derivative",
    "total_derivative_mi",
    "variation_boundary",
    "wedge",
    "zero_class",
]
