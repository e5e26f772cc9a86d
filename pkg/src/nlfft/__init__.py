"""SU(2) nonlinear Fourier transform: forward and inverse transforms,
complementary polynomials, QSP/GQSP phase factors and diagnostics."""

from .complement import (
    Outerness,
    RootMultiset,
    complete_b_outer,
    complement_roots,
    counting_N,
    enumerate_complements,
    flip_to_antiouter,
    is_outer_poly,
)
from .config import DEFAULT, NumericsConfig
from .errors import InvalidInput, NLFTError, NumericalFailure
from .inverse import GivensRotor, StripState, givens_apply, inlfft, invert, layer_strip, layer_strip_general
from .laurent import LaurentPoly, lp_add, lp_eval_circle, lp_mul, lp_scale, lp_shift, lp_star, lp_sub
from .nlft import (
    ComplexSequence,
    NlftPair,
    TransferPair,
    eta_of,
    forward_nlft_fast,
    forward_nlft_naive,
    pair_check,
    shift_support,
)
from .qsp import (
    PhaseFactorSet,
    TargetPoly,
    chebyshev_to_b,
    gqsp_evaluate,
    gqsp_phases_from_gamma,
    qsp_evaluate,
    qsp_phases_from_gamma,
    solve_gqsp,
    solve_qsp,
)

__version__ = "0.1.0"
