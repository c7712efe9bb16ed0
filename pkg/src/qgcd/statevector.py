"""Dense state-vector simulation of a t-qubit control register joined to an
r-dimensional work register.

Amplitudes are stored as a flat complex128 array indexed ``j * r + w``, where
``j`` is the control integer (control qubit ``q`` is bit ``q`` of ``j``) and
``w`` is the work value in ``[0, r)``. Gates mutate the buffer in place.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .numerics import MAX_T, DomainError

DEFAULT_MAX_DIM = 1 << 26


class ResourceError(RuntimeError):
    """The requested simulation would exceed the configured amplitude cap."""


def max_dim() -> int:
    """Amplitude cap, overridable through the ``QGCD_MAX_DIM`` environment variable."""
    raw = os.environ.get("QGCD_MAX_DIM")
    if raw is None:
        return DEFAULT_MAX_DIM
    return int(raw)


def check_dimensions(t: int, r: int) -> None:
    if t < 1:
        raise DomainError("t must be at least 1")
    if r < 2:
        raise DomainError("work register dimension must be at least 2")
    if t > MAX_T:
        raise ResourceError(f"t = {t} exceeds the supported maximum {MAX_T}")
    dim = (1 << t) * r
    cap = max_dim()
    if dim > cap:
        raise ResourceError(f"2**{t} * {r} = {dim} amplitudes exceeds the cap of {cap}")


# Gate kinds. CP stores its angle as an exact multiple of pi.


@dataclass(frozen=True)
class H:
    qubit: int


@dataclass(frozen=True)
class CP:
    control: int
    target: int
    phase: Fraction  # angle / pi

    @property
    def angle(self) -> float:
        return math.pi * float(self.phase)


@dataclass(frozen=True)
class CMODADD:
    control: int
    addend: int
    modulus: int


@dataclass(frozen=True)
class SWAP:
    a: int
    b: int


Gate = H | CP | CMODADD | SWAP


class StateVector:
    """Joint control/work register state."""

    def __init__(self, t: int, r: int, amps: np.ndarray):
        self.t = t
        self.r = r
        self.amps = amps

    @property
    def dim(self) -> int:
        return (1 << self.t) * self.r

    def grid(self) -> np.ndarray:
        """View of the amplitudes shaped ``(2**t, r)``."""
        return self.amps.reshape(1 << self.t, self.r)

    def norm(self) -> float:
        return float(np.sqrt(np.vdot(self.amps, self.amps).real))

    def copy(self) -> StateVector:
        return StateVector(self.t, self.r, self.amps.copy())

    def __repr__(self):
        return f"StateVector(t={self.t}, r={self.r})"


def init_state(t: int, r: int) -> StateVector:
    """|0>^t |0> as a fresh buffer."""
    check_dimensions(t, r)
    amps = np.zeros((1 << t) * r, dtype=np.complex128)
    amps[0] = 1.0
    return StateVector(t, r, amps)


def _bit_split(state: StateVector, q: int) -> np.ndarray:
    # axes: (high control bits, bit q, low control bits, work)
    return state.amps.reshape(1 << (state.t - q - 1), 2, 1 << q, state.r)


def _check_qubit(state: StateVector, q: int) -> None:
    if not 0 <= q < state.t:
        raise IndexError(f"control qubit {q} out of range for t={state.t}")


def apply_gate(state: StateVector, g: Gate) -> StateVector:
    """Apply one gate in place and return the same state."""
    if isinstance(g, H):
        _check_qubit(state, g.qubit)
        v = _bit_split(state, g.qubit)
        a0 = v[:, 0].copy()
        a1 = v[:, 1]
        s = 1.0 / math.sqrt(2.0)
        v[:, 0] = (a0 + a1) * s
        v[:, 1] = (a0 - a1) * s
    elif isinstance(g, CP):
        _check_qubit(state, g.control)
        _check_qubit(state, g.target)
        if not math.isfinite(g.angle):
            raise DomainError("phase angle must be finite")
        j = np.arange(1 << state.t)
        mask = ((j >> g.control) & 1).astype(bool) & ((j >> g.target) & 1).astype(bool)
        state.grid()[mask] *= np.exp(1j * g.angle)
    elif isinstance(g, CMODADD):
        _check_qubit(state, g.control)
        if g.modulus != state.r:
            raise DomainError(f"modulus {g.modulus} does not match work dimension {state.r}")
        if not 0 <= g.addend < g.modulus:
            raise DomainError(f"addend {g.addend} not in [0, {g.modulus})")
        if g.addend:
            v = _bit_split(state, g.control)
            # |w> -> |w + c mod r>: new[w] = old[w - c]
            v[:, 1] = np.roll(v[:, 1], g.addend, axis=-1)
    elif isinstance(g, SWAP):
        _check_qubit(state, g.a)
        _check_qubit(state, g.b)
        if g.a != g.b:
            j = np.arange(1 << state.t)
            ba = (j >> g.a) & 1
            bb = (j >> g.b) & 1
            src = j ^ ((ba ^ bb) << g.a) ^ ((ba ^ bb) << g.b)
            grid = state.grid()
            grid[:] = grid[src]
    else:
        raise TypeError(f"unknown gate {g!r}")
    return state


def iqft_gates(t: int) -> list[Gate]:
    """Inverse QFT on the control register as an explicit gate list.

    This is the textbook QFT circuit (most significant qubit first, with
    controlled phases pi/2**(d) from lower qubits, then bit-reversal swaps)
    run backwards with negated angles.
    """
    if t < 1:
        raise DomainError("t must be at least 1")
    forward: list[Gate] = []
    for q in range(t - 1, -1, -1):
        forward.append(H(q))
        for lower in range(q - 1, -1, -1):
            forward.append(CP(lower, q, Fraction(2, 1 << (q - lower + 1))))
    for i in range(t // 2):
        forward.append(SWAP(i, t - 1 - i))
    inverse: list[Gate] = []
    for g in reversed(forward):
        if isinstance(g, CP):
            g = CP(g.control, g.target, -g.phase)
        inverse.append(g)
    return inverse


def apply_inverse_qft(state: StateVector) -> StateVector:
    """F^dagger on the control qubits, with F|j> = 2**(-t/2) sum_k e^{2 pi i jk/2**t} |k>."""
    for g in iqft_gates(state.t):
        apply_gate(state, g)
    return state


def distribution(state: StateVector) -> np.ndarray:
    """Marginal outcome probabilities of the control register."""
    return np.sum(np.abs(state.grid()) ** 2, axis=1)


def sample(state_or_probs, rng: np.random.Generator, shots: int) -> np.ndarray:
    """Draw ``shots`` control outcomes by inverse CDF over ascending m.

    Accepts either a StateVector or an already computed probability array.
    """
    if shots < 1:
        raise DomainError("shots must be at least 1")
    probs = distribution(state_or_probs) if isinstance(state_or_probs, StateVector) else state_or_probs
    cdf = np.cumsum(probs)
    cdf /= cdf[-1]
    u = rng.random(shots)
    m = np.searchsorted(cdf, u, side="right")
    return np.minimum(m, len(probs) - 1)
