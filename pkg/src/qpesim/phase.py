"""Fixed-point phase arithmetic on the unit circle.

A phase is a W-bit binary fraction in [0, 1), stored as an unsigned
integer ``raw`` with value ``raw / 2**W``.  All structural operations
(doubling, bit extraction, correction subtraction) are exact integer
arithmetic modulo 2**W, so repeated doubling never accumulates rounding
drift.  Only the trigonometric probability formulas go through floats.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

DEFAULT_WIDTH = 64

# Configurations may not consume the lowest GUARD_BITS bits of the raw
# representation; estimator front-ends enforce this margin.
GUARD_BITS = 4

_BINARY_LITERAL = re.compile(r"^0\.([01]+)b$")
_RAW_LITERAL = re.compile(r"^(\d+)@(\d+)$")


class TestBasis(enum.Enum):
    """Measurement basis of a single-ancilla Hadamard test.

    COSINE is the plain test (no extra ancilla gate); SINE inserts the
    extra diag(1, i) gate before the controlled unitary, moving the
    interference fringe by a quarter turn.
    """

    COSINE = "cosine"
    SINE = "sine"


@dataclass(frozen=True)
class Phase:
    """Fraction of a full turn, stored as ``raw / 2**width``."""

    raw: int
    width: int = DEFAULT_WIDTH

    def __post_init__(self) -> None:
        if self.width < 1:
            raise ValueError("phase width must be positive")
        if not 0 <= self.raw < (1 << self.width):
            raise ValueError(f"raw value {self.raw} out of range for width {self.width}")

    @property
    def value(self) -> float:
        """Phase as a float in [0, 1] (the top of the range only via float rounding)."""
        return self.raw / (1 << self.width)

    def bit(self, i: int) -> int:
        """The i-th fractional bit (1-indexed, MSB first); bits past the width are 0."""
        if i < 1:
            raise ValueError("bit positions are 1-indexed")
        if i > self.width:
            return 0
        return (self.raw >> (self.width - i)) & 1

    def __str__(self) -> str:
        return f"{self.raw}/2^{self.width}"


@dataclass(frozen=True)
class BitString:
    """Binary-fraction digits x_1 x_2 ... x_L, most significant first."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError("bits must be 0 or 1")

    @classmethod
    def from_text(cls, text: str) -> "BitString":
        if not re.fullmatch(r"[01]*", text):
            raise ValueError(f"not a bit string: {text!r}")
        return cls(tuple(int(c) for c in text))

    def to_int(self) -> int:
        """The digits read as an unsigned integer (x_1 most significant)."""
        acc = 0
        for b in self.bits:
            acc = (acc << 1) | b
        return acc

    @property
    def value(self) -> float:
        """Value of 0.x_1 x_2 ... x_L as a float (exact when L <= 53)."""
        if not self.bits:
            return 0.0
        return self.to_int() / (1 << len(self.bits))

    def __len__(self) -> int:
        return len(self.bits)

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits)

    def __str__(self) -> str:
        return "".join(str(b) for b in self.bits)


def phase_from_bits(bits: BitString | Iterable[int], width: int = DEFAULT_WIDTH) -> Phase:
    """Exact conversion of a binary fraction to a Phase of the given width."""
    seq = tuple(bits)
    if len(seq) > width:
        raise ValueError("bit string longer than phase width")
    raw = 0
    for b in seq:
        if b not in (0, 1):
            raise ValueError("bits must be 0 or 1")
        raw = (raw << 1) | b
    return Phase(raw << (width - len(seq)), width)


def phase_from_fraction(value: Fraction, width: int = DEFAULT_WIDTH) -> Phase:
    """Round an exact rational in [0, 1) to the nearest W-bit phase, ties to even.

    A value that rounds up to 1 wraps to 0 (arithmetic is modulo 1).
    """
    if not 0 <= value < 1:
        raise ValueError("phase value must lie in [0, 1)")
    scaled = value * (1 << width)
    whole, rem = divmod(scaled.numerator, scaled.denominator)
    double_rem = 2 * rem
    if double_rem > scaled.denominator or (double_rem == scaled.denominator and whole % 2 == 1):
        whole += 1
    return Phase(whole % (1 << width), width)


def phase_from_float(value: float, width: int = DEFAULT_WIDTH) -> Phase:
    """Round a float in [0, 1) to the nearest W-bit phase, ties to even."""
    return phase_from_fraction(Fraction(value), width)


def parse_phase(text: str, width: int = DEFAULT_WIDTH) -> Phase:
    """Parse a phase literal.

    Three forms are accepted: a binary fraction with ``b`` suffix
    (``0.101101b``, exact), a raw/width pair (``181@8`` meaning 181/2**8,
    exact, width taken from the literal), or a decimal in [0, 1)
    (rounded to the nearest width-bit value, ties to even).
    """
    text = text.strip()
    m = _BINARY_LITERAL.match(text)
    if m:
        return phase_from_bits(BitString.from_text(m.group(1)), width)
    m = _RAW_LITERAL.match(text)
    if m:
        return Phase(int(m.group(1)), int(m.group(2)))
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a phase literal: {text!r}") from exc
    return phase_from_fraction(value, width)


def double_k(phi: Phase, k: int) -> Phase:
    """2**k * phi modulo 1, as an exact left shift of the raw value."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    mask = (1 << phi.width) - 1
    return Phase((phi.raw << k) & mask, phi.width)


def mod1_distance(a: Phase | float, b: Phase | float) -> float:
    """Distance on the unit circle, min(|a-b|, 1-|a-b|), in [0, 1/2].

    Exact (integer arithmetic) when both operands are phases of equal
    width; otherwise computed on float values.
    """
    if isinstance(a, Phase) and isinstance(b, Phase) and a.width == b.width:
        span = 1 << a.width
        d = (a.raw - b.raw) % span
        return min(d, span - d) / span
    av = a.value if isinstance(a, Phase) else float(a)
    bv = b.value if isinstance(b, Phase) else float(b)
    d = abs(av - bv) % 1.0
    return min(d, 1.0 - d)


def hadamard_probs(phi_k: Phase, basis: TestBasis) -> tuple[float, float]:
    """Outcome probabilities (p0, p1) of a Hadamard test at phase phi_k.

    COSINE: p0 = (1 + cos 2*pi*phi_k)/2.  SINE: p1 = (1 + sin 2*pi*phi_k)/2.
    The pair always sums to 1 up to one ulp.
    """
    angle = 2.0 * math.pi * phi_k.value
    if basis is TestBasis.COSINE:
        c = math.cos(angle)
        return (1.0 + c) / 2.0, (1.0 - c) / 2.0
    s = math.sin(angle)
    return (1.0 - s) / 2.0, (1.0 + s) / 2.0


def corrected_residual(phi_k: Phase, prior_bits: Iterable[int]) -> Phase:
    """Subtract the phase corrections driven by already-known lower bits.

    ``prior_bits`` lists the lower-significance bits nearest first; bit l
    (1-indexed) removes l+1 positions below the leading bit, i.e. the
    phase contribution 2**-(l+1).  With the true bits supplied, the
    result is 0.x 0...0 tail with the leading bit intact and the next
    ``len(prior_bits)`` positions cleared.
    """
    raw = phi_k.raw
    for offset, b in enumerate(prior_bits, start=2):
        if b not in (0, 1):
            raise ValueError("bits must be 0 or 1")
        if offset > phi_k.width:
            raise ValueError("correction finer than phase width")
        if b:
            raw -= 1 << (phi_k.width - offset)
    return Phase(raw % (1 << phi_k.width), phi_k.width)


def post_h_prob_one(residual: Phase) -> float:
    """Probability of measuring 1 after the final Hadamard, sin^2(pi * residual)."""
    return math.sin(math.pi * residual.value) ** 2
