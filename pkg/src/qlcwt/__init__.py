"""Quaternion linear canonical wavelet transform (QLCWT) and its verification harness.

Quaternion arrays are real numpy arrays with a trailing axis of length 4
holding ``(q0, q1, q2, q3)``.  The main entry points are re-exported here.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    ConditioningWarning,
    DegenerateBranch,
    DomainError,
    FormatError,
    GeometryError,
    InterpolationWarning,
    MomentWarning,
    NotAdmissible,
    QLCWTError,
    ResolutionWarning,
    UnsupportedBranch,
)
from .quaternion import (  # noqa: E402
    Grid2D,
    QSignal2D,
    QSpectrum2D,
    Quaternion,
    l2_inner,
    l2_norm,
    qconj,
    qmul,
    qnorm,
)
from .qft import qft_direct, qft_forward, qft_inverse  # noqa: E402
from .qlct import (  # noqa: E402
    LCTMatrix,
    LCTPair,
    fractional_pair,
    fresnel_pair,
    parse_preset,
    preset_transform,
    qlct_direct,
    qlct_forward,
    qlct_inverse,
    qwt_pair,
)
from .convolution import convolution_theorem_residual, generalized_translate, lc_convolve  # noqa: E402
from .wavelets import (  # noqa: E402
    GroupGrid,
    GroupPoint,
    MotherWavelet,
    admissibility_constant,
    daughter_spectrum,
    daughter_wavelet,
    make_dog_wavelet,
)
from .transform import (  # noqa: E402
    QLCWTCoefficients,
    covariance_residuals,
    energy_residual,
    parseval_residual,
    qlcwt_forward,
    qlcwt_inverse,
    qlcwt_roundtrip,
    reproducing_kernel,
)
from .uncertainty import (  # noqa: E402
    UncertaintyReport,
    heisenberg_report,
    lemma41_residual,
    local_concentration_report,
    local_inequality_report,
    logarithmic_report,
)

__all__ = [
    name for name, obj in dict(globals()).items() if not name.startswith("_") and getattr(obj, "__module__", "").startswith("qlcwt")
]
