"""Single-dipole amplitude-based directional modulation simulator."""

from .errors import (
    CalibrationError,
    DomainError,
    PatternFormatError,
    QuadratureError,
    ValidationError,
)
from .fields import (
    ArmExcitation,
    CurrentDistribution,
    DipoleSpec,
    FarFieldPattern,
    ModeSplit,
    default_angles,
    excite_arms,
    far_field,
    halfwave_closed_form,
    mode_decompose,
    radiation_integral,
    sinusoidal_current,
)
from .modem import (
    ErrorMetrics,
    QamConstellation,
    SymbolStream,
    awgn,
    demodulate_hard,
    demodulate_labels,
    error_metrics,
    make_constellation,
    make_stream,
    modulate,
    prbs,
)
from .secure_link import (
    BerBelow,
    InformationBeam,
    LinkReport,
    LinkRow,
    RatioBelow,
    SweepConfig,
    amplitude_ratio,
    angle_sweep,
    calibrate_central,
    information_beam,
    ratio_threshold,
    transmit_at_angle,
)
from .switched import (
    DynamicPattern,
    SwitchingSchedule,
    asymmetry,
    assign_states,
    gain_at,
    mirrored_states,
)

__version__ = "0.1.0"
