"""Exact sum-of-squares certificates on the hypercube [-1, 1]^n."""

from .bounds import (
    BoundInputs,
    LowerBoundReport,
    choose_q,
    epsilon_bound,
    fact_diagnostics,
    lower_bound_excluded_degree,
    putinar_degree,
    schmudgen_degree,
)
from .certificates import (
    GeneratorSet,
    PreorderCertificate,
    QModCertificate,
    SosExpression,
    VerifyReport,
    certificate_from_json,
    expand_sos,
    restrict_certificate,
    verify_preorder,
    verify_qmod,
)
from .chebyshev import ChebyshevPolynomial, cheb_scaled_value, chebyshev
from .identities import (
    ShiftParams,
    build_fq,
    cert_box_in_lnorm,
    cert_lnorm_in_cube,
    cert_pow2_recurrence,
    cert_univariate_shift,
    select_eta,
)
from .lifting import QModElement, lift_preorder_to_cube, qmod_multiply, shift_preorder_single, shift_qmod
from .polycore import NEG_INF, Polynomial, PolynomialSyntaxError, parse

__version__ = "0.1.0"
