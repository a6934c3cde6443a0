"""Self-adjoint realizations of the planar magnetic flux-line Hamiltonian:
resolvents, spectra, generalized eigenfunctions and scattering."""

__version__ = "0.1.0"

from .errors import ConsistencyError, ConvergenceError, NearEigenvalueError
from .extension import (
    DeficiencyElement,
    ExtensionClass,
    ExtensionKind,
    ExtensionParams,
    FluxAlpha,
    UMatrix,
    build_u_matrix,
    canonical_params,
    classify,
    deficiency_radial,
    l2_norm_deficiency,
    p_channel_norm,
    s_channel_norm,
    u_matrix_params,
)
from .krein import (
    REFERENCE_K,
    AMatrix,
    AnalyticBasisElement,
    CCoeffs,
    PMatrix,
    a_matrix,
    ab_resolvent_kernel,
    analytic_basis,
    d_coeffs,
    d_of_k,
    full_resolvent_kernel,
    p_at_i,
    p_of_k,
)
from .scattering import (
    FORWARD_EPSILON,
    Amplitude,
    ChannelMixing,
    PlaneWaveChannel,
    amplitude_ab,
    amplitude_u,
    channel_mixing,
    cross_section,
    extract_amplitude,
    psi_ab,
    psi_u,
)
from .specfun import (
    Order,
    UpperHalfK,
    bessel_j,
    bessel_k,
    bessel_y,
    branch_power,
    gamma_fn,
    hankel1,
)
from .spectrum import (
    BoundState,
    RotInvariantForm,
    RotInvariantRoots,
    SpectralReport,
    SpectralSummary,
    bound_states,
    rot_invariant_equations,
    spectral_report,
)

__all__ = [
    "__version__",
    "ConsistencyError",
    "ConvergenceError",
    "NearEigenvalueError",
    "DeficiencyElement",
    "ExtensionClass",
    "ExtensionKind",
    "ExtensionParams",
    "FluxAlpha",
    "UMatrix",
    "build_u_matrix",
    "canonical_params",
    "classify",
    "deficiency_radial",
    "l2_norm_deficiency",
    "p_channel_norm",
    "s_channel_norm",
    "u_matrix_params",
    "REFERENCE_K",
    "AMatrix",
    "AnalyticBasisElement",
    "CCoeffs",
    "PMatrix",
    "a_matrix",
    "ab_resolvent_kernel",
    "analytic_basis",
    "d_coeffs",
    "d_of_k",
    "full_resolvent_kernel",
    "p_at_i",
    "p_of_k",
    "FORWARD_EPSILON",
    "Amplitude",
    "ChannelMixing",
    "PlaneWaveChannel",
    "amplitude_ab",
    "amplitude_u",
    "channel_mixing",
    "cross_section",
    "extract_amplitude",
    "psi_ab",
    "psi_u",
    "Order",
    "UpperHalfK",
    "bessel_j",
    "bessel_k",
    "bessel_y",
    "branch_power",
    "gamma_fn",
    "hankel1",
    "BoundState",
    "RotInvariantForm",
    "RotInvariantRoots",
    "SpectralReport",
    "SpectralSummary",
    "bound_states",
    "rot_invariant_equations",
    "spectral_report",
]
