"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the CLI puts in
its error JSON.
"""


class VekuaError(Exception):
    code = "error"


class ZeroDivisor(VekuaError, ZeroDivisionError):
    code = "zero_divisor"


class NoConvergence(VekuaError):
    code = "no_convergence"


class InvalidPotential(VekuaError, ValueError):
    code = "invalid_potential"


class VanishingF(VekuaError):
    code = "vanishing_f"


class MissingProfile(VekuaError, KeyError):
    code = "missing_profile"

    def __str__(self):
        return Exception.__str__(self)


class QuadratureFailure(VekuaError):
    code = "quadrature_failure"


class DegreeOutOfRange(VekuaError, IndexError):
    code = "degree_out_of_range"


class OutsideDomain(VekuaError, ValueError):
    code = "outside_domain"


class GridTooCoarse(VekuaError, ValueError):
    code = "grid_too_coarse"


class NonFinite(VekuaError, FloatingPointError):
    code = "non_finite"


class InvalidConfig(VekuaError, ValueError):
    code = "invalid_config"
