"""Monte Carlo execution of verification strategies on density operators.

Each trial draws a test from the strategy's mixture, samples the measuring
party's outcome by the Born rule, and accepts with the exact conditional
probability (a trace ratio), which is statistically identical to simulating
the partner's full binary measurement.  Randomized diagonal tests sample the
joint standard-basis outcome and accept from the tabulated probabilities.

Reproducibility contract: trials are partitioned into fixed blocks of
``TRIALS_PER_STREAM``; block k draws from the counter-based Philox stream
``SeedSequence(seed, spawn_key=(k,))`` and tallies merge by summation, so a
run is bit-for-bit reproducible from its seed and independent of how blocks
are scheduled.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import fidelity_from_pass_rate
from .errors import DimensionMismatchError, NotHomogeneousError, OutOfRangeError
from .states import DensityOperator
from .strategies import (
    ConditionalProjectorTest,
    Direction,
    RandomizedDiagonalTest,
    Strategy,
    is_homogeneous,
)

TRIALS_PER_STREAM = 4096
PROB_FLOOR = 1e-300


@dataclass(frozen=True)
class RunRecord:
    """Tally of one verification run.

    ``exact_rate`` is tr(Omega sigma), computed from the matrices
    independently of the sampled trials, and serves as the calibration
    oracle for the empirical ``pass_rate``.
    """

    n_trials: int
    n_pass: int
    pass_rate: float
    std_err: float
    exact_rate: float
    seed: int


@dataclass(frozen=True)
class FidelityEstimate:
    """Fidelity read off a homogeneous strategy's pass rate."""

    f_hat: float
    std_err: float
    record: RunRecord


def trial_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Counter-based generator for (seed, stream); identical arguments
    reproduce identical draws, distinct streams are independent."""
    if seed < 0 or stream < 0:
        raise OutOfRangeError(f"seed and stream must be non-negative, got {seed}, {stream}")
    return np.random.Generator(
        np.random.Philox(np.random.SeedSequence(seed, spawn_key=(stream,)))
    )


def _conditional_tables(test: ConditionalProjectorTest, sigma4: np.ndarray, d: int):
    basis = test.measured_basis.vectors
    kets = test.conditional_kets
    if test.direction is Direction.A_TO_B:
        marginal = np.einsum("abcb->ac", sigma4)
        conditional = np.einsum("aj,abcd,cj->jbd", basis.conj(), sigma4, basis)
    else:
        marginal = np.einsum("abad->bd", sigma4)
        conditional = np.einsum("bj,abcd,dj->jac", basis.conj(), sigma4, basis)
    probs = np.einsum("aj,ac,cj->j", basis.conj(), marginal, basis).real
    probs = np.clip(probs, 0.0, None)
    joint = np.einsum("bj,jbd,dj->j", kets.conj(), conditional, kets).real
    accept = np.zeros(d)
    live = test.supported & (probs > PROB_FLOOR)
    accept[live] = np.clip(joint[live] / probs[live], 0.0, 1.0)
    return probs, accept


def _test_tables(test, sigma: np.ndarray, d: int):
    """Outcome distribution and per-outcome acceptance probability."""
    if isinstance(test, RandomizedDiagonalTest):
        probs = np.clip(np.diag(sigma).real, 0.0, None)
        return probs, test.acceptance.ravel()
    return _conditional_tables(test, sigma.reshape(d, d, d, d), d)


def compile_tables(strategy: Strategy, sigma: DensityOperator):
    """Per-test sampling tables for a fixed (strategy, state) pair."""
    if sigma.dim != strategy.state.dim:
        raise DimensionMismatchError(
            f"state dimension {sigma.dim} != strategy dimension {strategy.state.dim}"
        )
    d = strategy.state.d
    pvec = np.array([q for q, _ in strategy.tests])
    tables = []
    for _, test in strategy.tests:
        probs, accept = _test_tables(test, sigma.matrix, d)
        total = float(probs.sum())
        if abs(total - 1.0) > 1e-9:
            raise OutOfRangeError(f"outcome probabilities sum to {total:.12g}")
        tables.append((probs / total, accept))
    return pvec / pvec.sum(), tables


def run_single_test(
    strategy: Strategy, sigma: DensityOperator, rng: np.random.Generator
) -> bool:
    """One verification trial; True iff the sampled test passes."""
    if sigma.dim != strategy.state.dim:
        raise DimensionMismatchError(
            f"state dimension {sigma.dim} != strategy dimension {strategy.state.dim}"
        )
    d = strategy.state.d
    pvec = np.array([q for q, _ in strategy.tests])
    l = int(rng.choice(pvec.size, p=pvec / pvec.sum()))
    probs, accept = _test_tables(strategy.tests[l][1], sigma.matrix, d)
    total = float(probs.sum())
    if abs(total - 1.0) > 1e-9:
        raise OutOfRangeError(f"outcome probabilities sum to {total:.12g}")
    outcome = int(rng.choice(probs.size, p=probs / total))
    return bool(rng.random() < accept[outcome])


def exact_pass_rate(strategy: Strategy, sigma: DensityOperator) -> float:
    """tr(Omega sigma), the exact average pass probability."""
    if sigma.dim != strategy.state.dim:
        raise DimensionMismatchError(
            f"state dimension {sigma.dim} != strategy dimension {strategy.state.dim}"
        )
    return float(np.einsum("ij,ji->", strategy.omega, sigma.matrix).real)


def run_verification(
    strategy: Strategy, sigma: DensityOperator, n_trials: int, seed: int = 0
) -> RunRecord:
    """Run ``n_trials`` independent tests of ``sigma`` and tally the passes.

    Trials are vectorized per RNG block; see the module docstring for the
    reproducibility contract.
    """
    if n_trials < 1:
        raise OutOfRangeError(f"n_trials must be >= 1, got {n_trials}")
    pvec, tables = compile_tables(strategy, sigma)
    n_tests = pvec.size
    n_pass = 0
    done = 0
    stream = 0
    while done < n_trials:
        block = min(TRIALS_PER_STREAM, n_trials - done)
        rng = trial_rng(seed, stream)
        chosen = rng.choice(n_tests, size=block, p=pvec)
        acceptance = np.zeros(block)
        for l in range(n_tests):
            sel = np.flatnonzero(chosen == l)
            if sel.size == 0:
                continue
            probs, accept = tables[l]
            outcomes = rng.choice(probs.size, size=sel.size, p=probs)
            acceptance[sel] = accept[outcomes]
        n_pass += int((rng.random(block) < acceptance).sum())
        done += block
        stream += 1
    rate = n_pass / n_trials
    std_err = math.sqrt(max(rate * (1.0 - rate), 0.0) / n_trials)
    return RunRecord(
        n_trials=n_trials,
        n_pass=n_pass,
        pass_rate=rate,
        std_err=std_err,
        exact_rate=exact_pass_rate(strategy, sigma),
        seed=seed,
    )


def estimate_fidelity(
    strategy: Strategy, sigma: DensityOperator, n_trials: int, seed: int = 0
) -> FidelityEstimate:
    """Estimate <Psi|sigma|Psi> from the pass rate of a homogeneous strategy.

    Inverts rate = (1 - beta) F + beta; the standard error scales with
    1/(1 - beta), so smaller beta estimates the fidelity more sharply.
    """
    if not is_homogeneous(strategy):
        raise NotHomogeneousError(
            f"strategy {strategy.label} is not homogeneous; fidelity is not an "
            "affine function of its pass rate"
        )
    if n_trials < 100:
        raise OutOfRangeError(f"need n_trials >= 100 for the normal error bar, got {n_trials}")
    record = run_verification(strategy, sigma, n_trials, seed)
    f_hat = fidelity_from_pass_rate(record.pass_rate, strategy.beta).fidelity
    return FidelityEstimate(
        f_hat=f_hat,
        std_err=record.std_err / (1.0 - strategy.beta),
        record=record,
    )
