"""legasym: uniform Bessel-type asymptotic evaluation of associated Legendre
and Ferrers functions of large degree, with coefficient recursions, an
implicit-equation point mapping, and an independent high-precision oracle."""

from .bessel import BesselKind, cyl
from .errors import LegasymError
from .lgcoeff import CoeffEval, CoeffTable, eval_ab, eval_ab_near_turning
from .legendre import (EvalResult, coeff_table_for, ferrers_p, ferrers_q,
                       legendre_p_cut, legendre_q_bold)
from .mapping import (LegendreParams, MapPoint, Region, beta_hat_series_check,
                      resolve)
from .numerics import DEFAULT_CTX, Bracket, PrecisionCtx, log_gamma, solve_root
from .laurent import LaurentPoly, VarTag
from .oracle import (ErrorRow, envelope_m, omega_error, oracle_ferrers_p,
                     oracle_ferrers_q, oracle_p_cut)

__version__ = "0.1.0"

__all__ = [
    "BesselKind", "Bracket", "CoeffEval", "CoeffTable", "DEFAULT_CTX",
    "ErrorRow", "EvalResult", "LaurentPoly", "LegasymError", "LegendreParams",
    "MapPoint", "PrecisionCtx", "Region", "VarTag", "beta_hat_series_check",
    "coeff_table_for", "cyl", "envelope_m", "eval_ab", "eval_ab_near_turning",
    "ferrers_p", "ferrers_q", "legendre_p_cut", "legendre_q_bold",
    "log_gamma", "omega_error", "oracle_ferrers_p", "oracle_ferrers_q",
    "oracle_p_cut", "resolve", "solve_root",
]
