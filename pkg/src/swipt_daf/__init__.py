"""Performance analysis and simulation of a SWIPT-based differential
amplify-and-forward relay link with a direct branch."""

__version__ = "0.1.0"

from .model import (SystemParams, DerivedConstants, Scheme, ValidationError,
                    DegenerateSplitError, derive_constants, two_hop_snr,
                    reference_params, db_to_linear, linear_to_db)
from .mcsim import EhMode, McConfig, McResult, run_monte_carlo, diff_encode
from .analytic import (Method, AberPoint, aber_th_exact, aber_lc_exact,
                       aber_th_asymptotic, aber_lc_asymptotic,
                       aber_th_asymptotic_quad, aber_lc_asymptotic_quad,
                       aber_direct_only, pdf_two_hop_exact,
                       pdf_two_hop_asymptotic, reconcile_printed_forms)

__all__ = [
    "__version__",
    "SystemParams", "DerivedConstants", "Scheme", "ValidationError",
    "DegenerateSplitError", "derive_constants", "two_hop_snr",
    "reference_params", "db_to_linear", "linear_to_db",
    "EhMode", "McConfig", "McResult", "run_monte_carlo", "diff_encode",
    "Method", "AberPoint", "aber_th_exact", "aber_lc_exact",
    "aber_th_asymptotic", "aber_lc_asymptotic", "aber_th_asymptotic_quad",
    "aber_lc_asymptotic_quad", "aber_direct_only", "pdf_two_hop_exact",
    "pdf_two_hop_asymptotic", "reconcile_printed_forms",
]
