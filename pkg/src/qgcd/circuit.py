"""Gate-list IR for the phase-estimation circuit, its text format, and cost counts.

Text format, one statement per line::

    qreg q[4]; wreg w[40];
    h q[0]
    cmodadd(35,40) q[0], w
    cp(-pi/2) q[0], q[1]
    swap q[0], q[3]
    measure q[0]

Angles are always printed as exact rational multiples of pi.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .numerics import DomainError, bit_width, ceil_log2, precompute_multiples
from .statevector import CMODADD, CP, SWAP, Gate, H, StateVector, apply_gate, init_state, iqft_gates


class TrivialInstanceError(DomainError):
    """x is a multiple of r: N = 1 and no circuit is needed."""


@dataclass(frozen=True)
class Measure:
    qubit: int


Op = Gate | Measure


@dataclass(frozen=True)
class Circuit:
    t: int
    r: int
    gates: tuple[Op, ...]
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        measured: set[int] = set()
        for g in self.gates:
            for q in _qubits(g):
                if not 0 <= q < self.t:
                    raise DomainError(f"qubit {q} out of range in {g!r}")
                if q in measured:
                    raise DomainError(f"qubit {q} used after its measurement")
            if isinstance(g, CMODADD) and g.modulus != self.r:
                raise DomainError(f"cmodadd modulus {g.modulus} != register size {self.r}")
            if isinstance(g, Measure):
                measured.add(g.qubit)

    @property
    def work_bits(self) -> int:
        return bit_width(self.r)


def _qubits(g: Op) -> tuple[int, ...]:
    if isinstance(g, (H, Measure)):
        return (g.qubit,)
    if isinstance(g, CP):
        return (g.control, g.target)
    if isinstance(g, CMODADD):
        return (g.control,)
    if isinstance(g, SWAP):
        return (g.a, g.b)
    raise TypeError(f"unknown gate {g!r}")


def build_iqft_circuit(t: int) -> Circuit:
    """Inverse QFT alone, on a placeholder work register of size 2."""
    return Circuit(t=t, r=2, gates=tuple(iqft_gates(t)), metadata={"t": t})


def build_qpe_circuit(x: int, r: int, t: int, epsilon: float | None = None) -> Circuit:
    """Hadamards, one controlled modular adder per control qubit, inverse QFT, measurements."""
    if r < 2:
        raise DomainError("r must be at least 2")
    if x % r == 0:
        raise TrivialInstanceError(f"x = {x} is a multiple of r = {r}; gcd is r and N = 1")
    gates: list[Op] = [H(q) for q in range(t)]
    gates += [CMODADD(j, c, r) for j, c in enumerate(precompute_multiples(x, r, t))]
    gates += iqft_gates(t)
    gates += [Measure(q) for q in range(t)]
    return Circuit(t=t, r=r, gates=tuple(gates), metadata={"x": x, "r": r, "t": t, "epsilon": epsilon})


def simulate(c: Circuit) -> StateVector:
    """Run a circuit through the state-vector kernel, stopping at the measurements."""
    state = init_state(c.t, c.r)
    for g in c.gates:
        if isinstance(g, Measure):
            continue
        apply_gate(state, g)
    return state


def format_angle(phase: Fraction) -> str:
    """``Fraction(-1, 8)`` -> ``"-pi/8"``."""
    phase = Fraction(phase)
    if phase == 0:
        return "0"
    sign = "-" if phase < 0 else ""
    num, den = abs(phase.numerator), phase.denominator
    head = "pi" if num == 1 else f"{num}*pi"
    return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"


_ANGLE = re.compile(r"^(-?)(?:(\d+)\*)?pi(?:/(\d+))?$")


def parse_angle(text: str) -> Fraction:
    text = text.strip()
    if text == "0":
        return Fraction(0)
    m = _ANGLE.match(text)
    if not m:
        raise ValueError(f"bad angle {text!r}")
    sign, num, den = m.groups()
    value = Fraction(int(num or 1), int(den or 1))
    return -value if sign else value


def emit_text(c: Circuit) -> str:
    lines = [f"qreg q[{c.t}]; wreg w[{c.r}];"]
    for g in c.gates:
        if isinstance(g, H):
            lines.append(f"h q[{g.qubit}]")
        elif isinstance(g, CP):
            lines.append(f"cp({format_angle(g.phase)}) q[{g.control}], q[{g.target}]")
        elif isinstance(g, CMODADD):
            lines.append(f"cmodadd({g.addend},{g.modulus}) q[{g.control}], w")
        elif isinstance(g, SWAP):
            lines.append(f"swap q[{g.a}], q[{g.b}]")
        elif isinstance(g, Measure):
            lines.append(f"measure q[{g.qubit}]")
        else:
            raise TypeError(f"unknown gate {g!r}")
    return "\n".join(lines) + "\n"


_HEADER = re.compile(r"^qreg q\[(\d+)\]; wreg w\[(\d+)\];$")
_LINE_PATTERNS = [
    (re.compile(r"^h q\[(\d+)\]$"), lambda m: H(int(m[1]))),
    (re.compile(r"^cp\(([^)]*)\) q\[(\d+)\], q\[(\d+)\]$"),
     lambda m: CP(int(m[2]), int(m[3]), parse_angle(m[1]))),
    (re.compile(r"^cmodadd\((\d+),(\d+)\) q\[(\d+)\], w$"),
     lambda m: CMODADD(int(m[3]), int(m[1]), int(m[2]))),
    (re.compile(r"^swap q\[(\d+)\], q\[(\d+)\]$"), lambda m: SWAP(int(m[1]), int(m[2]))),
    (re.compile(r"^measure q\[(\d+)\]$"), lambda m: Measure(int(m[1]))),
]


def parse_text(text: str) -> Circuit:
    """Inverse of emit_text. Blank lines and ``#`` comment lines are skipped."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty circuit text")
    head = _HEADER.match(lines[0].strip())
    if not head:
        raise ValueError(f"bad header {lines[0]!r}")
    gates: list[Op] = []
    for lineno, line in enumerate(lines[1:], start=2):
        line = line.strip()
        for pattern, make in _LINE_PATTERNS:
            m = pattern.match(line)
            if m:
                gates.append(make(m))
                break
        else:
            raise ValueError(f"line {lineno}: cannot parse {line!r}")
    return Circuit(t=int(head[1]), r=int(head[2]), gates=tuple(gates))


@dataclass(frozen=True)
class ResourceReport:
    t: int
    L: int
    t_this: int
    t_shor: int
    hadamards: int
    cphases: int
    swaps: int
    measurements: int
    modadd_macros: int
    modadd_elementary_estimate: int
    smallest_phase: Fraction  # multiple of pi

    @property
    def smallest_phase_angle(self) -> float:
        return math.pi * float(self.smallest_phase)

    def lines(self) -> list[str]:
        return [
            f"t = {self.t}",
            f"L = {self.L}",
            f"t_this = {self.t_this}",
            f"t_shor = {self.t_shor}",
            f"hadamards = {self.hadamards}",
            f"cphases = {self.cphases}",
            f"swaps = {self.swaps}",
            f"measurements = {self.measurements}",
            f"modadd macros = {self.modadd_macros}",
            f"modadd elementary gates (4L+2 per adder, per cited scheme) = {self.modadd_elementary_estimate}",
            f"smallest angle {format_angle(self.smallest_phase)}",
        ]


def register_sizes(L: int, epsilon) -> tuple[int, int]:
    """Control-register sizes (this algorithm, Shor order finding) for a failure bound epsilon."""
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    extra = ceil_log2(2 + 1 / (2 * eps))
    return L + 1 + extra, 2 * L + 1 + extra


def resource_report(c: Circuit, epsilon=0.25) -> ResourceReport:
    L = c.work_bits
    t_this, t_shor = register_sizes(L, epsilon)
    counts = {kind: 0 for kind in (H, CP, SWAP, Measure, CMODADD)}
    for g in c.gates:
        counts[type(g)] += 1
    macros = counts[CMODADD]
    return ResourceReport(
        t=c.t,
        L=L,
        t_this=t_this,
        t_shor=t_shor,
        hadamards=counts[H],
        cphases=counts[CP],
        swaps=counts[SWAP],
        measurements=counts[Measure],
        modadd_macros=macros,
        modadd_elementary_estimate=macros * (4 * L + 2),
        smallest_phase=Fraction(1, 1 << (c.t - 1)),
    )
