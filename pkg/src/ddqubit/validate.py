"""Self-check suite pairing every fast evaluation route with its slow oracle.

Three families of checks: the closed-form free exponent against adaptive
quadrature of its defining integral, the prefix-recursion controlled
exponent against the explicit double sum, and the rate sign-flip law at
pulse instants.  The recursion check accepts an alternative free-exponent
source so a deliberately corrupted one can be injected as a negative
control.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .bath import BathSpec, gamma0, gamma0_oracle
from .ddcontrol import (
    Gamma0Fn,
    PulseSequence,
    controlled_gamma,
    controlled_gamma_direct,
    controlled_rate,
)

__all__ = ["CheckResult", "check_free_exponent", "check_recursion", "check_sign_flip", "run_all"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_error: float
    tolerance: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: max error {self.max_error:.3e} (tol {self.tolerance:.1e})"


def check_free_exponent(
    s_values=(0.5, 1.0, 2.0, 3.0, 4.0), tol: float = 1e-6
) -> CheckResult:
    """Closed-form free exponent versus the quadrature oracle."""
    t_grid = np.geomspace(0.1, 20.0, 21)
    worst = 0.0
    for s in s_values:
        spec = BathSpec(s)
        for t in t_grid:
            ref = gamma0_oracle(spec, float(t), tol=1e-9)
            err = abs(gamma0(spec, float(t)) - ref) / max(abs(ref), 1e-12)
            worst = max(worst, err)
    return CheckResult("free exponent vs quadrature", worst <= tol, worst, tol)


def _random_sequences(rng: np.random.Generator, count: int, max_pulses: int):
    for _ in range(count):
        n = int(rng.integers(1, max_pulses + 1))
        times = np.sort(rng.uniform(0.05, 20.0, size=n))
        while np.any(np.diff(times) <= 1e-6):
            times = np.sort(rng.uniform(0.05, 20.0, size=n))
        s = float(rng.uniform(0.2, 5.0))
        yield BathSpec(s), PulseSequence(tuple(times), 25.0)


def check_recursion(
    count: int = 8,
    max_pulses: int = 25,
    seed: int = 7,
    tol: float = 1e-9,
    gamma0_fn: Optional[Gamma0Fn] = None,
) -> CheckResult:
    """Prefix recursion versus the double-sum oracle on random sequences.

    ``gamma0_fn`` feeds only the recursion route, so passing a corrupted
    source must make this check fail.
    """
    rng = np.random.default_rng(seed)
    worst = 0.0
    for spec, seq in _random_sequences(rng, count, max_pulses):
        ts = rng.uniform(0.0, 24.0, size=6)
        for t in ts:
            fast = controlled_gamma(spec, seq, float(t), gamma0_fn=gamma0_fn)
            slow = controlled_gamma_direct(spec, seq, float(t))
            err = abs(fast - slow) / max(abs(slow), 1e-12)
            worst = max(worst, err)
    return CheckResult("recursion vs double sum", worst <= tol, worst, tol)


def check_sign_flip(count: int = 8, max_pulses: int = 20, seed: int = 11, tol: float = 1e-9) -> CheckResult:
    """One-sided rates at every pulse instant must be exact negatives."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for spec, seq in _random_sequences(rng, count, max_pulses):
        for tp in seq.times:
            left = controlled_rate(spec, seq, tp, side="left")
            right = controlled_rate(spec, seq, tp, side="right")
            err = abs(left + right) / max(abs(left), abs(right), 1e-12)
            worst = max(worst, err)
    return CheckResult("rate sign flip at pulses", worst <= tol, worst, tol)


def run_all() -> list[CheckResult]:
    return [check_free_exponent(), check_recursion(), check_sign_flip()]
