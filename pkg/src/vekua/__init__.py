"""Bicomplex radial formal powers for the radial main Vekua equation."""

from .bergman import (
    DiskQuadrature,
    KernelTruncation,
    build_kernel,
    gram_matrix,
    kernel_eval,
    l2_inner,
    project,
    radial_norms,
    reproduce,
)
from .bicomplex import (
    J,
    ONE,
    P_MINUS,
    P_PLUS,
    Bicomplex,
    BicomplexPolynomial,
    bexp,
    conj_bar,
    conj_dagger,
    hat_pow,
    inner,
    inverse,
    mul,
    norm,
)
from .config import RunConfig
from .errors import (
    DegreeOutOfRange,
    GridTooCoarse,
    InvalidConfig,
    InvalidPotential,
    MissingProfile,
    NoConvergence,
    NonFinite,
    OutsideDomain,
    QuadratureFailure,
    VanishingF,
    VekuaError,
    ZeroDivisor,
)
from .formal_powers import (
    FormalPolynomial,
    FormalPowerBasis,
    build_basis,
    eval_basic,
    eval_formal_power,
    load_basis,
    save_basis,
    taylor_coefficients,
    transmute_polynomial,
)
from .panels import PanelGrid
from .radial import PotentialSpec, RadialProfile, build_f, darboux_potential, regular_profile
from .residuals import BicomplexField, PolarGrid, cr_system_residual, schrodinger_residual, vekua_residual
from .transmutation import (
    DarbouxVariant,
    HarmonicPolynomial,
    TransmutedFunction,
    check_transmutation_relations,
    darboux_D,
    t_inv_f_integral,
    transmute,
)

__version__ = "0.1.0"
