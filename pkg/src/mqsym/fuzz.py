"""Seeded random-expression oracle harness.

Each case builds a fresh small registry, draws Haar-like random bases,
generates a random raw expression tree, and compares the direct matrix
evaluation of the tree against the matrix of its symbolic normal form.
Everything is derived deterministically from (seed, case index), so the
summary is byte-identical run to run and cases could be evaluated in any
order or in parallel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import (
    TAdd,
    TAdjoint,
    TMul,
    TScale,
    Tree,
    conjugate,
    filter_of,
    identity,
    leaf,
    reduce_tree,
    scalar_expr,
    symbol,
    transpose,
)
from .realization import ORACLE_TOLERANCE, random_realization, verify_normal_form
from .registry import Registry, StateRef
from .scalar import ComplexRational, ScalarExpr, tf

_OBS_NAMES = ("A", "B", "C")


@dataclass(frozen=True)
class FuzzConfig:
    dims: tuple[int, int] = (2, 5)
    cases: int = 1000
    seed: int = 0
    tolerance: float = ORACLE_TOLERANCE
    max_depth: int = 6


@dataclass
class FuzzSummary:
    config: FuzzConfig
    cases_run: int = 0
    failures: int = 0
    max_deviation: float = 0.0
    worst_case: int = -1

    @property
    def passed(self) -> bool:
        return self.failures == 0


def _random_state(rng, registry: Registry) -> StateRef:
    obs = registry.observables()[int(rng.integers(0, len(registry)))]
    return StateRef(obs.id, int(rng.integers(0, len(obs.labels))))


def _random_number(rng) -> ComplexRational:
    re = Fraction(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
    im = Fraction(int(rng.integers(-2, 3)), 2)
    return ComplexRational(re, im)


def _random_scalar(rng, registry: Registry) -> ScalarExpr:
    s = ScalarExpr.number(_random_number(rng))
    if rng.random() < 0.4:
        s = s * tf(_random_state(rng, registry), _random_state(rng, registry))
    if s.is_zero:
        s = ScalarExpr.number(1)
    return s


def _random_leaf(rng, registry: Registry) -> Tree:
    r = rng.random()
    if r < 0.45:
        return leaf(symbol(_random_state(rng, registry),
                           _random_state(rng, registry)))
    if r < 0.70:
        return leaf(filter_of(_random_state(rng, registry)))
    if r < 0.80:
        return leaf(identity())
    if r < 0.90:
        return leaf(scalar_expr(tf(_random_state(rng, registry),
                                   _random_state(rng, registry))))
    return leaf(scalar_expr(ScalarExpr.number(_random_number(rng))))


def random_tree(rng, registry: Registry, depth: int) -> Tree:
    """Random raw tree of nesting depth at most ``depth``.

    Conjugation and transposition enter as pre-reduced leaves (they are
    normal-form relabelings, not tree operations), so the tree around them
    still exercises the direct-vs-reduced comparison.
    """
    if depth <= 0 or rng.random() < 0.25:
        return _random_leaf(rng, registry)
    r = rng.random()
    if r < 0.30:
        return TAdd(random_tree(rng, registry, depth - 1),
                    random_tree(rng, registry, depth - 1))
    if r < 0.60:
        return TMul(random_tree(rng, registry, depth - 1),
                    random_tree(rng, registry, depth - 1))
    if r < 0.70:
        return TScale(_random_scalar(rng, registry),
                      random_tree(rng, registry, depth - 1))
    if r < 0.80:
        return TAdjoint(random_tree(rng, registry, depth - 1))
    if r < 0.90:
        return leaf(conjugate(reduce_tree(
            random_tree(rng, registry, depth - 1))))
    return leaf(transpose(reduce_tree(
        random_tree(rng, registry, depth - 1))))


def case_registry(dim: int, n_obs: int) -> Registry:
    registry = Registry()
    for name in _OBS_NAMES[:n_obs]:
        registry.define_observable(
            name, [f"{name.lower()}{k}" for k in range(dim)])
    return registry.freeze()


def run_case(config: FuzzConfig, index: int) -> float:
    """Deviation for one deterministic case."""
    rng = np.random.default_rng(
        np.random.SeedSequence([config.seed % (2 ** 63), index]))
    lo, hi = config.dims
    dim = int(rng.integers(lo, hi + 1))
    n_obs = int(rng.integers(2, 4))
    registry = case_registry(dim, n_obs)
    basis_seed = int(rng.integers(0, 2 ** 62))
    realization = random_realization(dim, list(range(n_obs)), basis_seed,
                                     registry)
    depth = int(rng.integers(1, config.max_depth + 1))
    tree = random_tree(rng, registry, depth)
    report = verify_normal_form(realization, tree, config.tolerance)
    return report.max_deviation


def run_fuzz(config: FuzzConfig) -> FuzzSummary:
    summary = FuzzSummary(config)
    for index in range(config.cases):
        deviation = run_case(config, index)
        summary.cases_run += 1
        if deviation > config.tolerance:
            summary.failures += 1
        if deviation > summary.max_deviation or summary.worst_case < 0:
            summary.max_deviation = deviation
            summary.worst_case = index
    return summary


def render_summary(summary: FuzzSummary) -> str:
    c = summary.config
    lines = [
        f"fuzz seed={c.seed} dims={c.dims[0]}..{c.dims[1]} "
        f"cases={c.cases} depth<={c.max_depth} tol={c.tolerance:g}",
        f"cases={summary.cases_run} failures={summary.failures}",
        f"max deviation={summary.max_deviation:.6e} "
        f"(case {summary.worst_case})",
        "PASS" if summary.passed else "FAIL",
    ]
    return "\n".join(lines)


def summary_json(summary: FuzzSummary) -> dict:
    c = summary.config
    return {
        "seed": c.seed,
        "dims": [c.dims[0], c.dims[1]],
        "cases": summary.cases_run,
        "max_depth": c.max_depth,
        "tolerance": c.tolerance,
        "failures": summary.failures,
        "max_deviation": summary.max_deviation,
        "worst_case": summary.worst_case,
        "result": "PASS" if summary.passed else "FAIL",
    }
