"""Numerical laboratory for projected composition operators on weighted
Bergman spaces over the unit disc.

The package builds radial weights and their moment tables, Gauss-Legendre
rules on the disc, the orthonormal monomial basis with its projection
constants, a polynomial dbar calculus with the correction operator M,
quasiconformal radial symbols, truncated matrices of f -> P(f o phi), and
sufficient-condition certificates for invertibility of those operators.
"""

from .basis import (
    BasisTable,
    basis_table,
    beta_infty,
    d_lp,
    d_p,
    eval_basis,
    kernel_diag,
    project_coeffs,
    reconstruct,
)
from .bipoly import (
    BiPoly,
    analytic_projection,
    complement_projection,
    estimate_d_m,
    estimate_d_m_direct,
    inner_product,
    m_apply,
    norm,
)
from .certificates import (
    CertificateReport,
    ConstantsLedger,
    Gammas,
    assemble_ledger,
    check_example_thresholds,
    check_prop41,
    check_theorem31,
    gamma_constants,
    margin_radii,
    stretch_exponent_threshold,
    symbol_ledger_entries,
)
from .errors import (
    AliasingError,
    BergopError,
    ConditioningError,
    DegenerateDerivativeError,
    DegenerateSymbolError,
    DomainError,
    IncompleteLedgerError,
    ParameterError,
    QuadratureError,
    TuningError,
)
from .operators import (
    CompositionBound,
    OperatorMatrix,
    SpectralDiagnostics,
    assemble_K,
    c_phi_norm_bound,
    carleson_profile,
    carleson_ratio,
    composed_gram,
    default_carleson_probes,
    rule_for_symbol,
    spectral_diagnostics,
)
from .provenance import ConstantEstimate
from .quadrature import DiscRule, angular_fourier_profile, disc_rule, integrate_disc
from .symbols import (
    MobiusSymbol,
    RadialProfileSymbol,
    SymbolSpec,
    beltrami,
    jacobian,
    make_example3,
    make_identity,
    make_mobius,
    make_poly_twist,
    make_radial_stretch,
    make_radial_twist,
    parse_symbol,
    step_profile_integral,
    tune_example3,
    validate,
)
from .weights import (
    Weight,
    exponential_weight,
    moment,
    moment_table,
    parse_weight,
    radial_integrals,
    standard_weight,
)

__version__ = "0.1.0"

__all__ = [
    "AliasingError",
    "BasisTable",
    "BergopError",
    "BiPoly",
    "CertificateReport",
    "CompositionBound",
    "ConditioningError",
    "ConstantEstimate",
    "ConstantsLedger",
    "DegenerateDerivativeError",
    "DegenerateSymbolError",
    "DiscRule",
    "DomainError",
    "Gammas",
    "IncompleteLedgerError",
    "MobiusSymbol",
    "OperatorMatrix",
    "ParameterError",
    "QuadratureError",
    "RadialProfileSymbol",
    "SpectralDiagnostics",
    "SymbolSpec",
    "TuningError",
    "Weight",
    "analytic_projection",
    "angular_fourier_profile",
    "assemble_K",
    "assemble_ledger",
    "basis_table",
    "beltrami",
    "beta_infty",
    "c_phi_norm_bound",
    "carleson_profile",
    "carleson_ratio",
    "check_example_thresholds",
    "check_prop41",
    "check_theorem31",
    "complement_projection",
    "composed_gram",
    "d_lp",
    "d_p",
    "default_carleson_probes",
    "disc_rule",
    "estimate_d_m",
    "estimate_d_m_direct",
    "eval_basis",
    "exponential_weight",
    "gamma_constants",
    "inner_product",
    "integrate_disc",
    "jacobian",
    "kernel_diag",
    "m_apply",
    "make_example3",
    "make_identity",
    "make_mobius",
    "make_poly_twist",
    "make_radial_stretch",
    "make_radial_twist",
    "margin_radii",
    "moment",
    "moment_table",
    "norm",
    "parse_symbol",
    "parse_weight",
    "project_coeffs",
    "radial_integrals",
    "reconstruct",
    "rule_for_symbol",
    "spectral_diagnostics",
    "standard_weight",
    "step_profile_integral",
    "stretch_exponent_threshold",
    "symbol_ledger_entries",
    "tune_example3",
    "validate",
]
