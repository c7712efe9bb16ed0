"""Small-instance invariant suite behind ``qgcd verify``."""

from __future__ import annotations

import cmath
import math
import time

import numpy as np

from . import qpe
from .numerics import ProblemInstance, stein_gcd
from .statevector import CMODADD, StateVector, apply_gate


def check_eigenvalues(r_max: int, fault: str | None = None) -> tuple[bool, str]:
    sign = +1 if fault == "phase-sign" else -1
    worst = 0.0
    for r in range(2, r_max + 1):
        for x in range(1, r):
            N = ProblemInstance(x, r).N
            for s in range(N):
                u = qpe.eigenstate(x, r, s, sign=sign)
                state = StateVector(1, r, np.concatenate([np.zeros(r, complex), u]))
                apply_gate(state, CMODADD(0, x, r))
                overlap = np.vdot(u, state.amps[r:])
                err = abs(overlap - cmath.exp(2j * math.pi * s / N))
                worst = max(worst, err)
    return worst <= 1e-10, f"max |<u_s|U|u_s> - e^(2 pi i s/N)| = {worst:.2e}"


def check_oracle(r_max: int, t_values) -> tuple[bool, str]:
    worst = 0.0
    for r in range(3, r_max + 1):
        for x in range(2, r):
            for t in t_values:
                diff = np.abs(qpe.statevector_distribution(x, r, t) - qpe.exact_distribution(x, r, t)).max()
                worst = max(worst, diff)
    return worst <= 1e-10, f"max |statevector - exact| = {worst:.2e}"


def check_recovery(r_max: int) -> tuple[bool, str]:
    checked = 0
    for r in range(2, r_max + 1):
        t, _ = qpe.choose_t(r)
        T = 1 << t
        for N in (d for d in range(1, r + 1) if r % d == 0):
            for s in range(N):
                centre = s * T / N
                for m in range(math.floor(centre) - 3, math.ceil(centre) + 4):
                    m %= T
                    defect = abs(s / N - m / T)
                    defect = min(defect, 1 - defect)
                    if 2 * r * defect < 1:
                        f = qpe.recover_fraction(m, t, r)
                        if f.p * N != s * r:
                            return False, f"r={r} N={N} s={s} m={m}: got {f.p}/{r}"
                        checked += 1
    return True, f"{checked} near-peak outcomes recovered exactly"


def check_even_comb() -> tuple[bool, str]:
    probs = qpe.exact_distribution(35, 40, 4)
    want = np.array([0.125 if m % 2 == 0 else 0.0 for m in range(16)])
    err = np.abs(probs - want).max()
    return err <= 1e-12, f"max deviation from 1/8 comb = {err:.2e}"


def check_protocols(r_max: int) -> tuple[bool, str]:
    for x, r in ((35, 40), (21, 126)):
        rec = qpe.protocol_a(x, r, m_reps=20, seed=0)
        if rec.claimed_gcd != stein_gcd(x, r):
            return False, f"protocol a on ({x}, {r}) claimed {rec.claimed_gcd}"
    runs = 0
    for r in range(3, r_max + 1):
        for x in range(2, r):
            rec = qpe.protocol_b(x, r, epsilon=1 / 64, seed=0)
            if rec.claimed_gcd != stein_gcd(x, r):
                return False, f"protocol b on ({x}, {r}) claimed {rec.claimed_gcd}"
            runs += 1
    return True, f"protocol a on 2 instances, protocol b on {runs} pairs (epsilon 1/64)"


def run_suite(quick: bool = False, fault: str | None = None) -> list[tuple[str, bool, str]]:
    plan = [
        ("even comb", check_even_comb, ()),
        ("eigenvalues", check_eigenvalues, (24 if quick else 64, fault)),
        ("oracle equivalence", check_oracle, (12 if quick else 24, range(3, 7) if quick else range(3, 9))),
        ("recovery soundness", check_recovery, (24 if quick else 64,)),
        ("protocol correctness", check_protocols, (16 if quick else 32,)),
    ]
    results = []
    for name, fn, args in plan:
        start = time.perf_counter()
        ok, detail = fn(*args)
        results.append((name, ok, f"{detail} ({time.perf_counter() - start:.2f} s)"))
    return results
