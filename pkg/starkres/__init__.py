from .__version__ import (  # noqa: F401  imported but unused
    __name__,
    __about__,
    __url__,
    __version_info__,
    __version__,
    __author__,
    __author_email__,
    __maintainer__,
    __license__,
    __copyright__,
)
from .branchcut import SpectralPoint, branch_power, branch_power_array, log_branch  # noqa: F401  imported but unused
from .airy import (  # noqa: F401  imported but unused
    AiryValue,
    ScaledAiry,
    airy_eval,
    ai_scaled,
    airy_outgoing,
    airy_incoming,
    airy_asymptotic_square,
)
from .potential import Potential, SmoothPart, fourier_half, condition_c_fit, gamma_integral_check  # noqa: F401
from .determinant import NystromGrid, BirmanSchwinger, bs_matrix, fredholm_det, converged_det, y_operator  # noqa: F401
from .smatrix import (  # noqa: F401  imported but unused
    SMatrixSample,
    a0,
    a1,
    big_x,
    xi,
    s_matrix,
    small_angle_expansion,
    forbidden_domain_scan,
)
from .roots import (  # noqa: F401  imported but unused
    ModelParams,
    Perturbation,
    ResonanceRecord,
    map_lambda_z,
    map_z_lambda,
    f_model,
    model_roots,
    brute_force_roots,
    find_resonances,
    model_census,
)
from .asympt import (  # noqa: F401  imported but unused
    AsymptoticConstants,
    predicted_resonance,
    predicted_model_root,
    counting_prediction,
    zworski_count,
    compare_sequences,
)
from .config import RunConfig, PotentialConfig, GridConfig, SolverConfig  # noqa: F401  imported but unused
from .sync_solver import Solver  # noqa: F401  imported but unused
from .async_solver import AsyncSolver  # noqa: F401  imported but unused
from .excs import (  # noqa: F401  imported but unused
    StarkError,
    DomainError,
    BoundaryZeroError,
    ConfigError,
    AccuracyError,
    ConvergenceError,
    RegimeError,
    FitError,
    SingularOperatorError,
)
