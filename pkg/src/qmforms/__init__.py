"""Exact computer algebra for renormalized iterated primitives and
meromorphic quasimodular forms over the rationals."""

from .errors import (
    BolViolation,
    DivisionByZero,
    InsufficientPrecision,
    NoSolution,
    NotConstantDifference,
    NotHolomorphic,
    NotHomogeneous,
    ParseError,
    QMError,
    SingularSystem,
    SystemInconsistent,
    UnknownName,
    UnsupportedPoint,
    ValenceViolation,
    WeightMismatch,
    ZeroInverse,
)
from .rational import QQ, qq
from .series import ORDER_INF, AElement, TruncatedLaurent, render_terms
from .bivariate import AEpsElement, BiLaurent
from .integrals import (
    BirkhoffSplit,
    RenormEngine,
    ShuffleReport,
    birkhoff,
    ibp_constants,
    iter_eps,
    iter_primitive,
    iter_primitive_holo,
    primitive_I,
    qt_free,
    r_fold_primitive,
    required_input_order,
    verify_shuffle,
)
from .polyq import Poly, poly_gcd, rational_roots, squarefree_decomposition
from .modular import (
    DELTA_FORM,
    E4_FORM,
    E6_FORM,
    J_FORM,
    Divisor,
    MeroModForm,
    Point,
    basis_mk_d,
    dim_M,
    dim_S,
    g_for_divisor,
    generator_series,
    hol_basis,
    lemma_construction_i,
    lemma_construction_ii,
    u_for_point,
)
from .quasi import (
    QMForm,
    QuotientClass,
    bol_split,
    coefficient_functions,
    decompose_complement,
    delta_power_bol,
    depth_reduce,
    dim_tildeM,
    independence_check,
    qm_delta,
    qm_expand,
    serre_derivative,
    tilde_membership,
)
from .words import (
    Letter,
    LetterRegistry,
    LyndonPolynomial,
    ShuffleElement,
    Word,
    eval_words,
    is_lyndon,
    lyndon_factorization,
    lyndon_words,
    radford_decompose,
    shuffle_product,
)

__version__ = "0.1.0"
