"""Pulse-program text format.

One statement per line, whitespace separated::

    # sequence: oracle-01
    pulse -x 90 q1      # axis in {x, y, -x, -y}, angle in degrees, target q1|q2|all
    delay 1/(2J)        # seconds, or the symbolic half-period of the J coupling

Pulse durations are not written: a pulse of flip angle theta lasts
theta/omega1 once compiled against a parameter set.
"""

from dataclasses import dataclass
import math
import re

from .model import PhysicalParams

AXES = ("x", "y", "-x", "-y")
TARGETS = {"q1": frozenset({1}), "q2": frozenset({2}), "all": frozenset({1, 2})}
HALF_J_PERIOD = "1/(2J)"
BASIS_LABELS = ("00", "01", "10", "11")

_NAME_RE = re.compile(r"^#\s*sequence:\s*(\S.*?)\s*$")


class DSLError(ValueError):
    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = f"line {line}" + (f", column {column}" if column is not None else "")
        super().__init__(f"{where}: {message}" if line is not None else message)


class UnknownTokenError(DSLError):
    pass


class NegativeAngleError(DSLError):
    pass


class MissingFieldError(DSLError):
    pass


@dataclass(frozen=True)
class PulseSegment:
    """A hard pulse or a free-evolution delay.

    ``angle_deg`` keeps the flip angle exactly as written so that text
    round trips are lossless; :attr:`flip_angle` gives radians.
    """

    kind: str
    axis: str = None
    angle_deg: float = None
    targets: frozenset = frozenset()
    delay: object = None  # seconds, or HALF_J_PERIOD

    def __post_init__(self):
        if self.kind == "pulse":
            if self.axis not in AXES:
                raise ValueError(f"unknown pulse axis {self.axis!r}")
            if not (self.angle_deg > 0 and math.isfinite(self.angle_deg)):
                raise ValueError("flip angle must be positive and finite")
            object.__setattr__(self, "targets", frozenset(self.targets))
            if not self.targets or not self.targets <= {1, 2}:
                raise ValueError(f"bad target set {set(self.targets)!r}")
        elif self.kind == "delay":
            if self.delay != HALF_J_PERIOD and not (
                    isinstance(self.delay, (int, float)) and self.delay >= 0
                    and math.isfinite(self.delay)):
                raise ValueError(f"bad delay {self.delay!r}")
        else:
            raise ValueError(f"unknown segment kind {self.kind!r}")

    @classmethod
    def pulse(cls, axis, angle_deg, targets):
        return cls("pulse", axis=axis, angle_deg=float(angle_deg), targets=frozenset(targets))

    @classmethod
    def wait(cls, seconds):
        return cls("delay", delay=seconds if seconds == HALF_J_PERIOD else float(seconds))

    @property
    def flip_angle(self):
        return math.radians(self.angle_deg)

    def duration(self, p: PhysicalParams):
        """Compiled duration in seconds."""
        if self.kind == "pulse":
            if p.omega1 <= 0:
                raise ValueError("pulses need omega1 > 0")
            return self.flip_angle / p.omega1
        if self.delay == HALF_J_PERIOD:
            if p.j_coupling <= 0:
                raise ValueError("1/(2J) needs j_coupling > 0")
            return 1.0 / (2.0 * p.j_coupling)
        return self.delay


@dataclass(frozen=True)
class PulseSequence:
    segments: tuple
    name: str = "sequence"

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not self.segments:
            raise ValueError("a pulse sequence needs at least one segment")

    def __iter__(self):
        return iter(self.segments)

    def __len__(self):
        return len(self.segments)

    def total_pulse_time(self, p):
        return sum(s.duration(p) for s in self.segments if s.kind == "pulse")


def _number(token, line, column, what):
    try:
        value = float(token)
    except ValueError:
        raise UnknownTokenError(f"expected {what}, got {token!r}", line, column) from None
    if not math.isfinite(value):
        raise UnknownTokenError(f"{what} must be finite, got {token!r}", line, column)
    return value


def _tokens(line):
    body = line.split("#", 1)[0]
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", body)]


def parse(text, name=None):
    """Parse program text into a :class:`PulseSequence`.

    Raises :class:`UnknownTokenError`, :class:`NegativeAngleError` or
    :class:`MissingFieldError` with the offending line and column.
    """
    segments = []
    found_name = None
    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        if found_name is None and not segments:
            m = _NAME_RE.match(raw.strip())
            if m:
                found_name = m.group(1)
        toks = _tokens(raw)
        if not toks:
            continue
        keyword, col = toks[0]
        if keyword == "pulse":
            fields = ("axis", "angle", "target")
            if len(toks) < 4:
                missing = fields[len(toks) - 1]
                raise MissingFieldError(f"pulse is missing its {missing}",
                                        lineno, len(raw.split("#", 1)[0].rstrip()) + 1)
            (axis, acol), (angle, ncol), (target, tcol) = toks[1:4]
            if axis not in AXES:
                raise UnknownTokenError(f"unknown axis {axis!r}", lineno, acol)
            deg = _number(angle, lineno, ncol, "an angle in degrees")
            if deg <= 0:
                raise NegativeAngleError(f"flip angle must be positive, got {angle}",
                                         lineno, ncol)
            if target not in TARGETS:
                raise UnknownTokenError(f"unknown target {target!r}", lineno, tcol)
            extra = toks[4:]
            segments.append(PulseSegment.pulse(axis, deg, TARGETS[target]))
        elif keyword == "delay":
            if len(toks) < 2:
                raise MissingFieldError("delay is missing its duration", lineno,
                                        len(raw.split("#", 1)[0].rstrip()) + 1)
            value, vcol = toks[1]
            if value == HALF_J_PERIOD:
                seconds = HALF_J_PERIOD
            else:
                seconds = _number(value, lineno, vcol, "seconds or 1/(2J)")
                if seconds < 0:
                    raise NegativeAngleError(f"delay must be >= 0, got {value}",
                                             lineno, vcol)
            extra = toks[2:]
            segments.append(PulseSegment.wait(seconds))
        else:
            raise UnknownTokenError(f"unknown statement {keyword!r}", lineno, col)
        if extra:
            tok, tcol = extra[0]
            raise UnknownTokenError(f"unexpected token {tok!r}", lineno, tcol)
    if not segments:
        raise MissingFieldError("program contains no statements")
    return PulseSequence(segments, name or found_name or "sequence")


def _target_token(targets):
    for token, qs in TARGETS.items():
        if qs == targets:
            return token
    raise ValueError(f"no token for targets {set(targets)!r}")


def to_text(seq: PulseSequence):
    """Render a sequence so that ``parse(to_text(seq)) == seq``."""
    if not isinstance(seq, PulseSequence) or not seq.segments:
        raise ValueError("cannot print an empty sequence")
    out = [f"# sequence: {seq.name}"]
    for s in seq:
        if s.kind == "pulse":
            out.append(f"pulse {s.axis} {s.angle_deg!r} {_target_token(s.targets)}")
        else:
            out.append(f"delay {s.delay if s.delay == HALF_J_PERIOD else repr(s.delay)}")
    return "\n".join(out) + "\n"


def _z_rotation(qubit, angle):
    """Rz(angle) as X(pi/2) Y(+-angle) X(-pi/2), listed in time order."""
    q = frozenset({qubit})
    y_axis = "y" if angle > 0 else "-y"
    return [PulseSegment.pulse("-x", 90.0, q),
            PulseSegment.pulse(y_axis, math.degrees(abs(angle)), q),
            PulseSegment.pulse("x", 90.0, q)]


def oracle_sequence(target):
    """Conditional sign flip on basis state ``target`` ('00' .. '11').

    The ideal phase pi * |t><t| expands as
    (pi/4) * (1 + t1 Z1 + t2 Z2 + t1 t2 Z1Z2) with t_k = +-1 the Z eigenvalue
    of the target bit. The J delay supplies exp(-i pi/4 Z1Z2); when
    t1 t2 = +1 the missing Z1Z2 phase is a product of local pi rotations, so
    it folds into the single-qubit angles.
    """
    if target not in BASIS_LABELS:
        raise ValueError(f"target must be one of {BASIS_LABELS}, got {target!r}")
    t = [1 if bit == "0" else -1 for bit in target]
    extra = math.pi / 2 if t[0] * t[1] == 1 else 0.0
    segments = []
    for qubit, tk in zip((1, 2), t):
        beta = math.pi / 4 * tk + extra
        # exp(i beta Z) = Rz(-2 beta), wrapped into (-pi, pi]
        angle = -2 * beta
        angle = math.remainder(angle, 2 * math.pi)
        if math.isclose(angle, -math.pi):
            angle = math.pi
        segments += _z_rotation(qubit, angle)
    segments.append(PulseSegment.wait(HALF_J_PERIOD))
    return PulseSequence(segments, f"oracle-{target}")
