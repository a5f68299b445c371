"""Gray-coded square QAM, PRBS payloads, hard decisions and error metrics."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .fields import wrap_phase

__all__ = [
    "PRBS_TAPS",
    "QamConstellation",
    "SymbolStream",
    "ErrorMetrics",
    "prbs",
    "gray_code",
    "make_constellation",
    "modulate",
    "demodulate_labels",
    "demodulate_hard",
    "make_stream",
    "error_metrics",
    "awgn",
]

# Fibonacci LFSR feedback taps (register positions, 1-based) per degree.
PRBS_TAPS = {
    7: (7, 6),
    9: (9, 5),
    11: (11, 9),
    15: (15, 14),
}
SUPPORTED_ORDERS = (4, 16, 64, 256, 1024)


def prbs(degree=11, length=None, seed=None):
    """Maximal-length pseudorandom bit sequence.

    The register holds ``s[1..degree]``; bit ``i - 1`` of the integer
    ``seed`` is ``s[i]``.  Every clock emits ``s[degree]``, shifts the
    register up by one and loads ``s[degree] ^ s[tap]`` into ``s[1]``.

    Parameters
    ----------
    degree : int
        Register length; see ``PRBS_TAPS`` for the supported values.
    length : int, optional
        Number of bits to return.  Defaults to one period, ``2**degree - 1``.
        Longer requests repeat the sequence.
    seed : int, optional
        Initial register contents, nonzero.  Defaults to all ones.

    Returns
    -------
    numpy.ndarray of uint8
    """
    if degree not in PRBS_TAPS:
        raise ValidationError(f"unsupported PRBS degree {degree!r}; choose from {sorted(PRBS_TAPS)}")
    mask = (1 << degree) - 1
    if seed is None:
        seed = mask
    if int(seed) != seed or not 0 < seed <= mask:
        raise ValidationError(f"seed must be a nonzero {degree}-bit integer, got {seed!r}")
    period = mask
    if length is None:
        length = period
    if int(length) != length or length < 0:
        raise ValidationError(f"length must be a non-negative integer, got {length!r}")
    return _prbs_period(degree, int(seed))[np.arange(int(length)) % period]


@lru_cache(maxsize=64)
def _prbs_period(degree, seed):
    mask = (1 << degree) - 1
    top, tap = (t - 1 for t in PRBS_TAPS[degree])
    reg = seed
    out = np.empty(mask, dtype=np.uint8)
    for i in range(mask):
        msb = (reg >> top) & 1
        out[i] = msb
        reg = ((reg << 1) | (msb ^ ((reg >> tap) & 1))) & mask
    out.setflags(write=False)
    return out


def gray_code(n):
    """Binary-reflected gray code of ``n`` (int or integer array)."""
    return n ^ (n >> 1)


@dataclass(frozen=True, eq=False)
class QamConstellation:
    """Square M-QAM with unit average energy.

    ``points[label]`` is the point carrying the integer ``label``; the high
    half of the label bits gray-codes the in-phase level and the low half the
    quadrature level.  ``bit_map[label]`` lists those bits MSB first.
    """

    order: int
    points: np.ndarray
    bit_map: np.ndarray
    scale: float

    @property
    def bits_per_symbol(self):
        return int(self.order).bit_length() - 1

    @property
    def side(self):
        """Number of amplitude levels per axis."""
        return int(round(np.sqrt(self.order)))

    @property
    def levels(self):
        """Unscaled odd integer levels, ascending."""
        m = self.side
        return np.arange(-(m - 1), m, 2)

    @property
    def thresholds(self):
        """Scaled decision boundaries between adjacent levels on one axis."""
        return self.scale * (self.levels[:-1] + 1.0)


@lru_cache(maxsize=None)
def make_constellation(order):
    """Build the gray-coded square QAM constellation of size ``order``."""
    if order not in SUPPORTED_ORDERS:
        raise ValidationError(
            f"order must be a square power of two in {SUPPORTED_ORDERS}, got {order!r}"
        )
    m = int(round(np.sqrt(order)))
    half = (order.bit_length() - 1) // 2
    levels = np.arange(-(m - 1), m, 2)
    # mean of odd squares 1..(m-1)^2 is (m^2 - 1)/3 per axis
    scale = 1.0 / np.sqrt(2.0 * (order - 1) / 3.0)
    idx = np.arange(m)
    i_idx, q_idx = np.meshgrid(idx, idx, indexing="ij")
    labels = (gray_code(i_idx) << half) | gray_code(q_idx)
    points = np.empty(order, dtype=complex)
    points[labels.ravel()] = scale * (levels[i_idx.ravel()] + 1j * levels[q_idx.ravel()])
    points.setflags(write=False)
    k = 2 * half
    bit_map = ((np.arange(order)[:, None] >> np.arange(k - 1, -1, -1)) & 1).astype(np.uint8)
    bit_map.setflags(write=False)
    return QamConstellation(order, points, bit_map, float(scale))


@dataclass(frozen=True, eq=False)
class SymbolStream:
    """Payload bits and the constellation points that carry them."""

    bits: np.ndarray
    symbols: np.ndarray
    constellation_order: int

    def __post_init__(self):
        k = int(self.constellation_order).bit_length() - 1
        if len(self.bits) != len(self.symbols) * k:
            raise ValidationError("bit count must equal symbol count times log2(M)")

    def __len__(self):
        return len(self.symbols)


def _labels_from_bits(bits, k):
    bits = np.asarray(bits)
    if bits.ndim != 1 or bits.size % k:
        raise ValidationError(f"bit count {bits.size} is not a multiple of {k}")
    if bits.size and (bits.min() < 0 or bits.max() > 1):
        raise ValidationError("bits must be 0 or 1")
    weights = 1 << np.arange(k - 1, -1, -1)
    return bits.reshape(-1, k).astype(np.int64) @ weights


def modulate(bits, constellation):
    """Map consecutive ``log2(M)``-bit groups (MSB first) to points."""
    return constellation.points[_labels_from_bits(bits, constellation.bits_per_symbol)]


def demodulate_labels(received, constellation):
    """Integer label of the nearest point to each received sample.

    On a square grid the nearest point is found axis by axis.  A sample
    sitting exactly on a boundary goes to the smaller level.
    """
    y = np.asarray(received, dtype=complex)
    thr = constellation.thresholds
    i_idx = np.searchsorted(thr, y.real, side="left")
    q_idx = np.searchsorted(thr, y.imag, side="left")
    half = constellation.bits_per_symbol // 2
    return (gray_code(i_idx) << half) | gray_code(q_idx)


def demodulate_hard(received, constellation):
    """Hard-decision bits (MSB first per symbol) for received samples."""
    labels = demodulate_labels(received, constellation)
    return constellation.bit_map[labels].reshape(-1)


def make_stream(n_bits, constellation, seed=None, degree=11):
    """PRBS payload of ``n_bits`` bits modulated onto ``constellation``."""
    k = constellation.bits_per_symbol
    if int(n_bits) != n_bits or n_bits < k or n_bits % k:
        raise ValidationError(f"n_bits must be a positive multiple of {k}, got {n_bits!r}")
    bits = prbs(degree, int(n_bits), seed)
    return SymbolStream(bits, modulate(bits, constellation), constellation.order)


@dataclass(frozen=True)
class ErrorMetrics:
    """Distortion and error rates of a received block.

    Magnitude error and EVM are relative to the rms reference amplitude;
    phase error is the mean absolute wrapped phase difference in radians.
    """

    magnitude_error_rms: float
    phase_error_mean: float
    evm_rms: float
    ber: float
    ser: float


def error_metrics(received, reference_symbols, reference_bits, constellation):
    y = np.asarray(received, dtype=complex)
    x = np.asarray(reference_symbols, dtype=complex)
    if y.size == 0:
        raise ValidationError("cannot compute metrics of an empty block")
    if y.shape != x.shape:
        raise ValidationError("received and reference symbols differ in length")
    ref_bits = np.asarray(reference_bits)
    if ref_bits.size != x.size * constellation.bits_per_symbol:
        raise ValidationError("reference bit count does not match the symbol count")
    ref_rms = np.sqrt(np.mean(np.abs(x) ** 2))
    mag_err = np.sqrt(np.mean((np.abs(y) - np.abs(x)) ** 2)) / ref_rms
    phase_err = np.mean(np.abs(wrap_phase(np.angle(y) - np.angle(x))))
    evm = np.sqrt(np.mean(np.abs(y - x) ** 2)) / ref_rms
    got = demodulate_labels(y, constellation)
    sent = _labels_from_bits(ref_bits, constellation.bits_per_symbol)
    bit_errors = np.count_nonzero(constellation.bit_map[got] != constellation.bit_map[sent])
    return ErrorMetrics(
        magnitude_error_rms=float(mag_err),
        phase_error_mean=float(phase_err),
        evm_rms=float(evm),
        ber=bit_errors / ref_bits.size,
        ser=float(np.count_nonzero(got != sent)) / x.size,
    )


def awgn(symbols, snr_db, rng):
    """Add circular complex Gaussian noise at ``snr_db`` below mean symbol energy.

    ``snr_db`` of ``None`` or ``+inf`` disables the noise.  ``rng`` is a
    :class:`numpy.random.Generator` (an integer seed is also accepted).
    """
    x = np.asarray(symbols, dtype=complex)
    if snr_db is None or snr_db == np.inf:
        return x.copy()
    if not np.isfinite(snr_db):
        raise ValidationError(f"snr_db must be finite or +inf, got {snr_db!r}")
    rng = np.random.default_rng(rng)
    power = np.mean(np.abs(x) ** 2) * 10.0 ** (-snr_db / 10.0)
    noise = rng.standard_normal(x.shape) + 1j * rng.standard_normal(x.shape)
    return x + np.sqrt(power / 2.0) * noise
