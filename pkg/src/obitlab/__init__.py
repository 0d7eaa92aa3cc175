"""obitlab: orthogonal bits, two-level LTI evolution and a four-way Fourier lab."""

from obitlab.errors import (
    DimensionMismatchError,
    KindMismatchError,
    NonHermitianError,
    NormalizationError,
    ObitLabError,
    RangeError,
    SizeError,
    StepError,
    ZeroVectorError,
)
from obitlab.state import (
    ComplexAmplitudeState,
    MeasurementDistribution,
    OrthogonalGate,
    RealAmplitudeState,
    UnitaryGate,
    apply_gate,
    givens_rotation,
    measure_probabilities,
    new_obit,
    normalize,
    tensor,
)
from obitlab.signal import (
    EncodingConfig,
    SampledSignal,
    basis_signal,
    decode,
    encode,
    inner_product,
    verify_orthonormality,
)
from obitlab.lti import (
    CheckReport,
    Propagator,
    SystemUnderTest,
    TimeGrid,
    TwoLevelHamiltonian,
    TwoLevelState,
    check_causality,
    check_linearity,
    check_time_invariance,
    convolution_system,
    evolve_rk4,
    propagator_closed_form,
    schrodinger_system,
)
from obitlab.fourier import (
    ComplexityLedger,
    QftCircuit,
    StageFactorization,
    binary_fraction,
    complexity_report,
    dft_direct,
    fft_radix2,
    qft_apply,
    qft_build_circuit,
    stage_factorization,
    verify_factorization,
)

__version__ = "0.1.0"
