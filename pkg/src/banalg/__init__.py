"""banalg: a workbench for finite-dimensional commutative Banach algebras.

Constructs semidirect and phi-Lau product algebras, computes character
spaces, (left) multiplier algebras, and BSE norms, and machine-checks the
structural identities tying them together at desk scale.
"""

__version__ = "0.1.0"

from .algebra import (
    Algebra,
    Element,
    LinearMap,
    ValidationReport,
    dual_norm,
    left_mult_operator,
    multiply,
    norm,
    operator_norm,
    validate,
)
from .constructions import (
    PhiIsomorphism,
    ProductDescriptor,
    SemidirectSpec,
    check_homomorphism,
    direct_sum,
    finite_abelian_group_algebra,
    lau_product,
    phi_isomorphism,
    semidirect,
    split_algebra,
)
from .spectra import (
    Character,
    CharacterSet,
    characters_lau,
    characters_numerical,
    characters_semidirect,
    gelfand,
    is_semisimple,
    psi_of,
)
from .multipliers import (
    BlockDecomposition,
    MultiplierBasis,
    decompose_left_multiplier,
    hat,
    left_multiplier_space,
    module_hom_space,
    multiplier_space,
    recompose,
)
from .bse import (
    BaiCertificate,
    BSEFunction,
    bse_norm_dual,
    bse_norm_primal,
    check_bse_property,
    delta_weak_bai,
    join_tau_rho,
    phi_tilde,
    sigma_extension,
    split_sigma,
    theta,
    verify_product_bse,
)
from .verify import Report, RunConfig, run_verify

__all__ = [
    "Algebra",
    "Element",
    "LinearMap",
    "ValidationReport",
    "dual_norm",
    "left_mult_operator",
    "multiply",
    "norm",
    "operator_norm",
    "validate",
    "PhiIsomorphism",
    "ProductDescriptor",
    "SemidirectSpec",
    "check_homomorphism",
    "direct_sum",
    "finite_abelian_group_algebra",
    "lau_product",
    "phi_isomorphism",
    "semidirect",
    "split_algebra",
    "Character",
    "CharacterSet",
    "characters_lau",
    "characters_numerical",
    "characters_semidirect",
    "gelfand",
    "is_semisimple",
    "psi_of",
    "BlockDecomposition",
    "MultiplierBasis",
    "decompose_left_multiplier",
    "hat",
    "left_multiplier_space",
    "module_hom_space",
    "multiplier_space",
    "recompose",
    "BaiCertificate",
    "BSEFunction",
    "bse_norm_dual",
    "bse_norm_primal",
    "check_bse_property",
    "delta_weak_bai",
    "join_tau_rho",
    "phi_tilde",
    "sigma_extension",
    "split_sigma",
    "theta",
    "verify_product_bse",
    "Report",
    "RunConfig",
    "run_verify",
]
