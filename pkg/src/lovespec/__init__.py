"""Forward and inverse spectral solver for Love-wave media.

The package maps a depth profile of the shear modulus to a half-line
Schrodinger problem with Robin boundary condition, extracts its spectral
data (eigenvalues, resonances, norming constants, jump function, Weyl
function), and reconstructs the potential and the shear modulus back from
that data through a Gelfand-Levitan equation.
"""

from .errors import (
    BackendInconsistencyError,
    ConfigurationError,
    ConvergenceError,
    DataInconsistencyError,
    DomainError,
    ExtractionError,
    IncompleteSearchError,
    IngestionError,
    LoveSpecError,
    PoleError,
    ProximityError,
    QuadratureResolutionError,
    ResolutionError,
    SingularRecoveryError,
    SolvabilityError,
    StageError,
    TruncationError,
)
from .medium import (
    MediumConfig,
    PotentialGrid,
    ShearProfile,
    quasi_momentum,
    read_potential,
    read_profile,
    schrodinger_from_love,
    shear_from_two_potentials,
    write_potential,
    write_profile,
)
from .forward import (
    RobinProblem,
    WaveSolution,
    jost_function,
    jost_function_derivative,
    jost_solution,
    psi_function,
    regular_solution,
    theta_solution,
    weyl_function_forward,
    weyl_solution,
)
from .glevitan import (
    GLRow,
    Kernel2D,
    WeylData,
    build_g,
    check_solvability,
    extract_potential,
    j_function,
    kernel_direct,
    regular_solution_from_kernel,
    solve_gl,
    solve_gl_diagonal,
)
from .spectrum import (
    JostEvaluator,
    JumpSource,
    SpectrumData,
    WeylClassReport,
    WeylEvaluator,
    direct_jost_evaluator,
    find_eigenvalues,
    find_resonances,
    forward_weyl_evaluator,
    jost_from_zeros,
    jump_function,
    norming_constants,
    representation_weyl_evaluator,
    sample_jump_function,
    scattering_function,
    validate_weyl_class,
    weyl_from_spectral_data,
)

from .pipeline import (
    JobConfig,
    extract_spectrum,
    invariant_suite,
    reconstruct_potential,
    run_forward,
    run_inverse,
    run_roundtrip,
    run_spectrum,
    weyl_data_from_spectrum,
)
from . import profiles

__version__ = "0.1.0"
