"""Phase estimation over the modular-addition unitary and GCD post-processing.

The unitary U adds x modulo r on the work register. Its eigenphases are
s/N with N = r / gcd(x, r), so estimating one phase and rounding it onto the
grid of multiples of 1/r exposes N, and with it gcd(x, r) = r / N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .numerics import (
    MAX_T,
    DomainError,
    ProblemInstance,
    Rational,
    bit_width,
    ceil_log2,
    precompute_multiples,
    reduce_fraction,
)
from .statevector import (
    CMODADD,
    H,
    ResourceError,
    StateVector,
    apply_gate,
    apply_inverse_qft,
    check_dimensions,
    distribution,
    init_state,
    sample,
)

DEFAULT_EPSILON = 0.25
MAX_REDRAWS = 3
METHODS = ("exact", "statevector", "kitaev")


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for ``seed`` (taken modulo 2**64), optionally split into a sub-stream."""
    return np.random.default_rng([seed & 0xFFFFFFFFFFFFFFFF, *stream])


# ---------------------------------------------------------------- eigenstates


def eigenstate(x: int, r: int, s: int, y: int = 0, *, sign: int = -1) -> np.ndarray:
    """Work-register eigenvector |u_s> of "add x mod r", with eigenvalue e^{2 pi i s/N}.

    ``sign`` flips the phase convention; it exists so fault-injection checks can
    build a deliberately wrong state.
    """
    inst = ProblemInstance(x, r)
    N = inst.N
    if not 0 <= s < N:
        raise DomainError(f"s must lie in [0, {N}), got {s}")
    if not 0 <= y < r:
        raise DomainError(f"y must lie in [0, {r}), got {y}")
    vec = np.zeros(r, dtype=np.complex128)
    k = np.arange(N)
    vec[(k * inst.addend + y) % r] = np.exp(sign * 2j * np.pi * s * k / N) / math.sqrt(N)
    return vec


# ----------------------------------------------------------- distributions


def _geometric_weight(c: int, nm: np.ndarray, T: int) -> np.ndarray:
    """|sum_{k<c} e^{-2 pi i k nm/T}|^2, elementwise over integer ``nm`` in [0, T)."""
    if c == 0:
        return np.zeros(nm.shape)
    out = np.empty(nm.shape)
    zero = nm == 0
    out[zero] = float(c * c)
    rest = ~zero
    numer = np.sin(np.pi * ((c * nm[rest]) % T) / T)
    denom = np.sin(np.pi * nm[rest] / T)
    out[rest] = (numer / denom) ** 2
    return out


def exact_distribution(x: int, r: int, t: int) -> np.ndarray:
    """Outcome probabilities of the control register, without a state vector.

    After the controlled adders, control values j with equal j mod N share a
    work value, so

        P(m) = 2**(-2t) * sum_a |sum_{j = a mod N} e^{-2 pi i j m / 2**t}|**2.

    Each inner sum is a geometric series with either q or q+1 terms
    (2**t = qN + rem), giving a closed form in O(2**t).
    """
    if t < 1 or t > MAX_T:
        raise DomainError(f"t must lie in [1, {MAX_T}]")
    N = ProblemInstance(x, r).N
    T = 1 << t
    q, rem = divmod(T, N)
    m = np.arange(T, dtype=np.int64)
    nm = (N * m) % T
    total = rem * _geometric_weight(q + 1, nm, T) + (N - rem) * _geometric_weight(q, nm, T)
    return total / float(T) ** 2


def qpe_state(x: int, r: int, t: int) -> StateVector:
    """State just before measurement: H on every control, controlled adders, inverse QFT."""
    check_dimensions(t, r)
    state = init_state(t, r)
    for q in range(t):
        apply_gate(state, H(q))
    for j, c in enumerate(precompute_multiples(x, r, t)):
        apply_gate(state, CMODADD(j, c, r))
    return apply_inverse_qft(state)


def statevector_distribution(x: int, r: int, t: int) -> np.ndarray:
    return distribution(qpe_state(x, r, t))


@lru_cache(maxsize=512)
def _cached_distribution(addend: int, r: int, t: int, method: str) -> np.ndarray:
    if method == "exact":
        probs = exact_distribution(addend or r, r, t)
    else:
        probs = statevector_distribution(addend, r, t)
    probs.setflags(write=False)
    return probs


# ----------------------------------------------------------- sampling runs


@dataclass(frozen=True)
class PhaseEstimate:
    m_out: int
    t: int
    b_defect: Fraction | None = None

    @property
    def b(self) -> Rational:
        return Rational(self.m_out, 1 << self.t)

    def with_defect(self, s: int, N: int) -> PhaseEstimate:
        """Attach the signed error s/N - b for a known eigenphase."""
        return PhaseEstimate(self.m_out, self.t, Fraction(s, N) - Fraction(self.m_out, 1 << self.t))


def run_statevector_qpe(x: int, r: int, t: int, shots: int, seed: int = 0) -> list[PhaseEstimate]:
    probs = statevector_distribution(x, r, t)
    outcomes = sample(probs, make_rng(seed), shots)
    return [PhaseEstimate(int(m), t) for m in outcomes]


def kitaev_feedback_schedule(t: int) -> list[tuple[int, int, Fraction]]:
    """Conditional rotations of the single-control-qubit run.

    Entry ``(round, bit, phase)`` means: in ``round`` (which measures bit
    ``round`` of m_out), if the earlier bit ``bit`` came out 1, apply
    diag(1, e^{-i pi phase}) to the control qubit before its Hadamard.
    """
    return [(i, j, Fraction(1, 1 << (i - j))) for i in range(t) for j in range(i)]


def _kitaev_chunk(addends: list[int], r: int, shots: int, rng: np.random.Generator) -> np.ndarray:
    t = len(addends)
    work = np.zeros((shots, r), dtype=np.complex128)
    work[:, 0] = 1.0
    bits = np.zeros((shots, t), dtype=bool)
    schedule = kitaev_feedback_schedule(t)
    for i in range(t):
        # round i applies U^(2^(t-1-i)); its phase has bit i of m_out as leading digit
        shifted = np.roll(work, addends[t - 1 - i], axis=1)
        phase = np.ones(shots, dtype=np.complex128)
        for rnd, j, ph in schedule:
            if rnd == i:
                phase[bits[:, j]] *= np.exp(-1j * math.pi * float(ph))
        shifted *= phase[:, None]
        out0 = 0.5 * (work + shifted)
        out1 = 0.5 * (work - shifted)
        p0 = np.sum(np.abs(out0) ** 2, axis=1)
        one = rng.random(shots) >= p0
        bits[:, i] = one
        chosen = np.where(one[:, None], out1, out0)
        norms = np.sqrt(np.where(one, 1.0 - p0, p0))
        work = chosen / np.maximum(norms, 1e-300)[:, None]
    weights = 1 << np.arange(t, dtype=np.int64)
    return bits.astype(np.int64) @ weights


def _kitaev_outcomes(x: int, r: int, t: int, shots: int, rng: np.random.Generator) -> np.ndarray:
    if t < 1 or t > MAX_T:
        raise ResourceError(f"t must lie in [1, {MAX_T}]")
    if r < 2:
        raise DomainError("r must be at least 2")
    addends = precompute_multiples(x, r, t)
    chunk = max(1, (1 << 22) // r)
    parts = [_kitaev_chunk(addends, r, min(chunk, shots - start), rng) for start in range(0, shots, chunk)]
    return np.concatenate(parts)


def run_kitaev_qpe(x: int, r: int, t: int, shots: int, seed: int = 0) -> list[PhaseEstimate]:
    """Semiclassical phase estimation with one control qubit, reset every round.

    Rounds apply U^(2^(t-1)), ..., U^2, U; each round first undoes the phase
    contributed by bits already measured, then measures in the X basis. The
    work register is carried across rounds and collapses with each
    measurement. Shots are simulated in vectorised batches.
    """
    if shots < 1:
        raise DomainError("shots must be at least 1")
    outcomes = _kitaev_outcomes(x, r, t, shots, make_rng(seed))
    return [PhaseEstimate(int(m), t) for m in outcomes]


def empirical_distribution(estimates: list[PhaseEstimate], t: int) -> np.ndarray:
    counts = np.bincount([e.m_out for e in estimates], minlength=1 << t)
    return counts / counts.sum()


# ----------------------------------------------------------------- recovery


def choose_t(r: int, epsilon=DEFAULT_EPSILON) -> tuple[int, int]:
    """Control-register size t and accuracy bits n for modulus r and failure bound epsilon."""
    eps = Fraction(epsilon)
    if not 0 < eps < 1:
        raise DomainError(f"epsilon must lie in (0, 1), got {epsilon}")
    n = bit_width(r) + 1
    return n + ceil_log2(2 + 1 / (2 * eps)), n


@dataclass(frozen=True)
class RecoveredFraction:
    """Rounded numerator ``p`` of ``b * r`` and the reduced ratio p/r.

    ``exact`` is False only when b*r sits exactly halfway between two
    integers, where the rounding rule has to break a tie.
    """

    p: int
    r: int
    exact: bool

    @property
    def reduced(self) -> Rational:
        return reduce_fraction(self.p, self.r)

    @property
    def s(self) -> int:
        return self.reduced.num

    @property
    def N(self) -> int:
        return self.reduced.den

    def matches_order(self, N: int) -> bool:
        """True when p/r is one of the eigenphases s/N."""
        return (self.p * N) % self.r == 0


def recover_fraction(m_out: int, t: int, r: int) -> RecoveredFraction:
    """p = ceil(b*r - 1/2) for b = m_out / 2**t, in exact integer arithmetic.

    p = r wraps to 0, since phases live modulo 1.
    """
    T = 1 << t
    if not 0 <= m_out < T:
        raise DomainError(f"m_out must lie in [0, {T})")
    if r < 1:
        raise DomainError("r must be positive")
    # b*r - 1/2 = (2*m_out*r - T) / (2T); ceil via negated floor division
    p = -((T - 2 * m_out * r) // (2 * T))
    twice = 2 * m_out * r
    tie = twice % T == 0 and (twice // T) % 2 == 1
    return RecoveredFraction(p % r, r, not tie)


# ---------------------------------------------------------------- protocols


@dataclass
class IterationStep:
    x_i: int
    r_i: int
    s_over_N: Rational | None = None
    candidate: int | None = None
    divides_x: bool = False
    divides_r: bool = False
    draws: list[int] = field(default_factory=list)
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "x": self.x_i,
            "r": self.r_i,
            "s_over_N": None if self.s_over_N is None else str(self.s_over_N),
            "candidate": self.candidate,
            "divides_x": self.divides_x,
            "divides_r": self.divides_r,
            "draws": list(self.draws),
            "note": self.note,
        }


@dataclass
class RunRecord:
    instance: ProblemInstance
    t: int
    epsilon: float
    shots: int
    seed: int
    protocol: str
    method: str = "statevector"
    reps: int = 1
    samples: list[PhaseEstimate] = field(default_factory=list)
    recoveries: list[RecoveredFraction] = field(default_factory=list)
    iterations: list[IterationStep] = field(default_factory=list)
    N_hat: int | None = None
    claimed_gcd: int | str = "failed"

    @property
    def success(self) -> bool:
        return self.claimed_gcd != "failed"

    def to_dict(self) -> dict:
        inst = self.instance
        return {
            "instance": {"x": inst.x, "r": inst.r, "L": inst.L, "N": inst.N},
            "config": {
                "t": self.t,
                "epsilon": self.epsilon,
                "shots": self.shots,
                "seed": self.seed,
                "protocol": self.protocol,
                "method": self.method,
                "reps": self.reps,
            },
            "samples": [{"m": s.m_out, "t": s.t} for s in self.samples],
            "recoveries": [
                {"p": rec.p, "r": rec.r, "s": rec.s, "N": rec.N, "exact": rec.exact}
                for rec in self.recoveries
            ],
            "iterations": [step.to_dict() for step in self.iterations],
            "N_hat": self.N_hat,
            "gcd": self.claimed_gcd,
        }


def _draw(addend: int, r: int, t: int, method: str, rng: np.random.Generator) -> int:
    if method not in METHODS:
        raise DomainError(f"unknown method {method!r}")
    if method == "kitaev":
        return int(_kitaev_outcomes(addend, r, t, 1, rng)[0])
    return int(sample(_cached_distribution(addend, r, t, method), rng, 1)[0])


def protocol_a(
    x: int,
    r: int,
    epsilon=DEFAULT_EPSILON,
    m_reps: int = 20,
    seed: int = 0,
    method: str = "statevector",
) -> RunRecord:
    """Repeat the estimation ``m_reps`` times and read N off the denominators.

    Each repetition draws one outcome from its own (seed, rep) stream and
    reduces p/r with Stein's algorithm. With exact recoveries every
    denominator divides N and the largest one is N. Off-peak draws can
    produce larger, spurious denominators, so candidates are first checked
    against N'x = 0 (mod r) and the least surviving one is taken. On exact
    data this is the same choice as the largest denominator.
    """
    if m_reps < 1:
        raise DomainError("m_reps must be at least 1")
    inst = ProblemInstance(x, r)
    t, _ = choose_t(r, epsilon)
    rec = RunRecord(inst, t, float(epsilon), 1, seed, "a", method, m_reps)
    if inst.trivial:
        rec.N_hat = 1
        rec.claimed_gcd = r
        return rec
    for rep in range(m_reps):
        m = _draw(inst.addend, r, t, method, make_rng(seed, rep))
        rec.samples.append(PhaseEstimate(m, t))
        rec.recoveries.append(recover_fraction(m, t, r))
    # N'x = 0 (mod r) holds exactly for multiples of the true N, so the least
    # verified denominator is N itself whenever any draw had s coprime to N.
    verified = [f.N for f in rec.recoveries if (f.N * x) % r == 0]
    if verified:
        N_hat = min(verified)
        rec.N_hat = N_hat
        g = r // N_hat
        if x % g == 0 and r % g == 0:
            rec.claimed_gcd = g
    else:
        rec.N_hat = max(f.N for f in rec.recoveries)
    return rec


def protocol_b(
    x: int,
    r: int,
    epsilon=DEFAULT_EPSILON,
    seed: int = 0,
    max_iters: int | None = None,
    method: str = "statevector",
) -> RunRecord:
    """Euclid-like iteration driven by phase estimation, no classical GCD reducer.

    Each round estimates s/N for the current pair (x_i, r_i) and forms the
    candidate g = (s/N) * r_i, always a multiple of gcd(x, r). A candidate that
    divides both original inputs is therefore the gcd itself. Otherwise the
    pair is replaced by (x', min(g, x' - g)) with x' = min(x_i, r_i). When the
    nonzero result stops changing without dividing both inputs, the addend is
    reset to an original input the result does not divide.
    """
    inst = ProblemInstance(x, r)
    if max_iters is None:
        max_iters = 10 * inst.L
    if max_iters < 1:
        raise DomainError("max_iters must be at least 1")
    rec = RunRecord(inst, choose_t(r, epsilon)[0], float(epsilon), 1, seed, "b", method)
    if inst.trivial:
        rec.claimed_gcd = r
        return rec

    xi, ri = x, r
    prev = None
    for it in range(max_iters):
        step = IterationStep(xi, ri)
        rec.iterations.append(step)
        trivial = xi % ri == 0
        if trivial:
            # N = 1: the pair's gcd is r_i itself, no estimation needed
            result = ri
            step.note = "trivial"
        else:
            t, _ = choose_t(ri, epsilon)
            rng = make_rng(seed, it)
            for _ in range(1 + MAX_REDRAWS):
                m = _draw(xi % ri, ri, t, method, rng)
                frac = recover_fraction(m, t, ri)
                rec.samples.append(PhaseEstimate(m, t))
                rec.recoveries.append(frac)
                step.draws.append(m)
                if frac.p:
                    break
            step.s_over_N = frac.reduced
            result = frac.p
            if not result:
                step.note = "zero"
                continue
        step.candidate = result
        step.divides_x = x % result == 0
        step.divides_r = r % result == 0
        if step.divides_x and step.divides_r:
            rec.claimed_gcd = result
            return rec
        if trivial or result == prev:
            xi = x if x % result else r
            ri = result
            prev = None
            step.note = (step.note + " stuck").strip()
            continue
        prev = result
        xp = min(xi, ri)
        g = result % xp
        xi, ri = xp, (min(g, xp - g) or xp)
    return rec
