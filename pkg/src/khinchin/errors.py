"""Exception hierarchy shared by all modules.

Every error carries a machine-parseable ``error_code`` so the CLI can emit
stable diagnostics on stderr.
"""


class KhinchinError(Exception):
    error_code = "error"


class DomainError(KhinchinError):
    """Argument outside the permitted domain (e.g. t >= radius)."""

    error_code = "domain"


class BudgetExceededError(KhinchinError):
    """Term or degree budget exhausted before the tolerance was certified."""

    error_code = "budget"


class TailTooHeavyError(KhinchinError):
    """Distribution tail too heavy for the requested moment order."""

    error_code = "tail-too-heavy"


class UnsupportedModelError(KhinchinError):
    """No analytic fulcrum route exists for this model."""

    error_code = "unsupported-model"


class GridError(KhinchinError):
    """Diagnostic grid too short or badly shaped."""

    error_code = "grid"


class ModelSpecError(KhinchinError):
    """Model mini-language string failed to parse or validate."""

    error_code = "model-spec"


class QuadratureError(KhinchinError):
    """Adaptive quadrature failed to converge."""

    error_code = "quadrature"
