"""Numeric realization: orthonormal bases, matrices, and the oracle checks.

A realization assigns every atomic observable an orthonormal basis of the
same N-dimensional complex space (columns of a unitary matrix, column k for
label k).  Transformation functions become inner products, measurement
symbols become rank-1 operators, and every symbolic reduction can be
cross-checked against direct matrix arithmetic that never touches the
rewrite rules.

Convention fixed here: ⟨x|y⟩ is conjugate-linear in x, i.e.
``eval_tf(R, x, y) = column(x)† · column(y)``, which makes
conj⟨a|b⟩ = ⟨b|a⟩ automatic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .algebra import (
    AlgebraExpr,
    Identity,
    TAdd,
    TAdjoint,
    TLeaf,
    TMul,
    TScale,
    Tree,
    normalize,
    tree_state_refs,
)
from .errors import (
    DimensionMismatch,
    MissingEigenvalues,
    NotUnitary,
    ParseError,
    UnknownObservable,
)
from .functional import GaugeAssignment
from .registry import Registry, StateRef
from .scalar import ScalarExpr

DEFAULT_TOLERANCE = 1e-10
ORACLE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Realization:
    """Immutable basis assignment; ``bases[obs_id][:, k]`` is label k's vector."""

    dimension: int
    bases: dict[int, np.ndarray]
    registry: Registry
    tolerance: float = DEFAULT_TOLERANCE

    def basis(self, observable) -> np.ndarray:
        obs = self.registry.observable(observable)
        if obs.id not in self.bases:
            raise UnknownObservable(
                f"observable {obs.name!r} has no basis in this realization")
        return self.bases[obs.id]

    def column(self, ref: StateRef) -> np.ndarray:
        return self.basis(ref.observable)[:, ref.index]

    def mapped_observables(self) -> tuple[int, ...]:
        return tuple(sorted(self.bases))


@dataclass(frozen=True)
class WaveFunction:
    """Components ψ(b_k) = ⟨b_k|ψ⟩ of a state in one observable's basis."""

    basis: int
    components: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.components))


@dataclass(frozen=True)
class Report:
    """Outcome of a numeric check; failures are contents, not exceptions."""

    max_deviation: float
    tolerance: float
    passed: bool
    skipped: bool = False
    reason: str = ""


def _unitarity_residual(u: np.ndarray) -> float:
    n = u.shape[0]
    return float(np.max(np.abs(u.conj().T @ u - np.eye(n))))


def _validate_basis(name: str, u: np.ndarray, n: int, tolerance: float):
    if u.shape != (n, n):
        raise DimensionMismatch(
            f"basis for {name!r} has shape {u.shape}, expected ({n}, {n})")
    residual = _unitarity_residual(u)
    if residual > tolerance:
        raise NotUnitary(name, residual)


def make_realization(registry: Registry, dimension: int,
                     bases: Mapping[int | str, np.ndarray],
                     tolerance: float = DEFAULT_TOLERANCE) -> Realization:
    """Validated realization from explicit basis matrices."""
    resolved: dict[int, np.ndarray] = {}
    for key, mat in bases.items():
        obs = registry.observable(key)
        if obs.is_joint:
            raise DimensionMismatch(
                f"joint observable {obs.name!r} is not realizable")
        if len(obs.labels) != dimension:
            raise DimensionMismatch(
                f"observable {obs.name!r} has {len(obs.labels)} labels, "
                f"realization dimension is {dimension}")
        u = np.asarray(mat, dtype=complex)
        _validate_basis(obs.name, u, dimension, tolerance)
        resolved[obs.id] = u.copy()
    return Realization(dimension=dimension, bases=resolved,
                       registry=registry, tolerance=tolerance)


def load_realization(source: str | bytes | dict,
                     registry: Registry) -> Realization:
    """Parse and validate a JSON basis file.

    Schema: ``{"dimension": N, "tolerance": t, "observables": {name:
    {"labels": [...], "values": [...] | null, "matrix": [[[re, im], ...],
    ...]}}}`` with the matrix given as N rows of N ``[re, im]`` entries,
    column k being the basis vector of label k.
    """
    if isinstance(source, (str, bytes)):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise ParseError(f"basis file is not valid JSON: {exc}") from None
    else:
        data = source
    if not isinstance(data, dict):
        raise ParseError("basis file must be a JSON object")
    try:
        dimension = data["dimension"]
        entries = data["observables"]
    except KeyError as exc:
        raise ParseError(f"basis file is missing key {exc.args[0]!r}") from None
    if not isinstance(dimension, int) or dimension < 1:
        raise ParseError("basis file 'dimension' must be a positive integer")
    tolerance = data.get("tolerance", DEFAULT_TOLERANCE)
    if not isinstance(tolerance, (int, float)) or tolerance <= 0:
        raise ParseError("basis file 'tolerance' must be a positive number")
    if not isinstance(entries, dict):
        raise ParseError("basis file 'observables' must be an object")

    bases: dict[int, np.ndarray] = {}
    for name, entry in entries.items():
        obs = registry.observable(name)
        if obs.is_joint:
            raise ParseError(
                f"basis file maps joint observable {name!r}; only atomic "
                "observables are realizable")
        labels = entry.get("labels")
        if labels is not None and list(labels) != list(obs.labels):
            raise ParseError(
                f"basis file labels for {name!r} do not match the declared "
                f"spectrum {list(obs.labels)!r}")
        if len(obs.labels) != dimension:
            raise DimensionMismatch(
                f"observable {name!r} has {len(obs.labels)} labels, "
                f"basis file dimension is {dimension}")
        rows = entry.get("matrix")
        if rows is None:
            raise ParseError(f"basis file entry for {name!r} has no 'matrix'")
        try:
            u = np.array([[complex(re, im) for re, im in row] for row in rows],
                         dtype=complex)
        except (TypeError, ValueError):
            raise ParseError(
                f"basis file matrix for {name!r} must be rows of "
                "[re, im] pairs") from None
        _validate_basis(name, u, dimension, float(tolerance))
        bases[obs.id] = u
    return Realization(dimension=dimension, bases=bases, registry=registry,
                       tolerance=float(tolerance))


def random_realization(dimension: int, observables: Sequence, seed: int,
                       registry: Registry,
                       tolerance: float = DEFAULT_TOLERANCE) -> Realization:
    """Seed-deterministic Haar-like random bases.

    Each basis is the unitary QR factor of a complex Ginibre matrix with the
    triangular factor's diagonal phases absorbed into the columns, which
    makes the distribution invariant under fixed unitary left-multiplication.
    """
    rng = np.random.default_rng(seed)
    bases: dict[int, np.ndarray] = {}
    for key in observables:
        obs = registry.observable(key)
        if obs.is_joint:
            raise DimensionMismatch(
                f"joint observable {obs.name!r} is not realizable")
        if len(obs.labels) != dimension:
            raise DimensionMismatch(
                f"observable {obs.name!r} has {len(obs.labels)} labels, "
                f"requested dimension is {dimension}")
        z = (rng.standard_normal((dimension, dimension))
             + 1j * rng.standard_normal((dimension, dimension))) / np.sqrt(2.0)
        q, r = np.linalg.qr(z)
        d = np.diagonal(r)
        q = q * (d / np.abs(d))
        bases[obs.id] = q
    return Realization(dimension=dimension, bases=bases, registry=registry,
                       tolerance=tolerance)


def apply_gauge(r: Realization, g: GaugeAssignment) -> Realization:
    """New realization with column k of each basis multiplied by e^{iφ}."""
    bases: dict[int, np.ndarray] = {}
    for obs_id, u in r.bases.items():
        n = u.shape[0]
        angles = np.array([g.angle(StateRef(obs_id, k)) for k in range(n)])
        bases[obs_id] = u * np.exp(1j * angles)
    return Realization(dimension=r.dimension, bases=bases,
                       registry=r.registry, tolerance=r.tolerance)


def conjugate_realization(r: Realization) -> Realization:
    """Entrywise-conjugated bases.

    Conjugates every transformation-function value and every word matrix;
    for expressions with real coefficients the realized matrix is exactly
    the entrywise conjugate of the original one.
    """
    return Realization(dimension=r.dimension,
                       bases={k: u.conj() for k, u in r.bases.items()},
                       registry=r.registry, tolerance=r.tolerance)


# --- evaluation ---------------------------------------------------------------


def eval_tf(r: Realization, x: StateRef, y: StateRef) -> complex:
    """⟨x|y⟩ = column(x)† · column(y)."""
    return complex(np.vdot(r.column(x), r.column(y)))


def _phase_angle(phases, ref: StateRef) -> float:
    if phases is None:
        return 0.0
    if isinstance(phases, GaugeAssignment):
        return phases.angle(ref)
    return float(phases.get(ref, 0.0))


def eval_scalar(r: Realization, s: ScalarExpr, phases=None) -> complex:
    """Numeric value of a scalar: indeterminates via eval_tf, phase vectors
    via the given angles (unassigned states contribute nothing)."""
    total = 0.0 + 0.0j
    for m, c in s.terms:
        value = complex(c)
        for t in m.tfs:
            value *= eval_tf(r, t.bra, t.ket)
        if m.phase:
            theta = sum(n * _phase_angle(phases, ref) for ref, n in m.phase)
            value *= np.exp(1j * theta)
        total += value
    return complex(total)


def _word_matrix(r: Realization, w) -> np.ndarray:
    if w is Identity:
        return np.eye(r.dimension, dtype=complex)
    return np.outer(r.column(w.out), r.column(w.in_).conj())


def matrix_of(r: Realization, x: AlgebraExpr, phases=None) -> np.ndarray:
    """Linear map into matrices: M(b,a) ↦ |b⟩⟨a|, Identity ↦ I, scalars
    evaluated numerically."""
    out = np.zeros((r.dimension, r.dimension), dtype=complex)
    for w, s in x.terms:
        out += eval_scalar(r, s, phases) * _word_matrix(r, w)
    return out


def direct_tree_matrix(r: Realization, t: Tree, phases=None) -> np.ndarray:
    """Evaluate a raw tree by plain matrix sums, products, scalings, and
    adjoints; no symbolic reduction anywhere."""
    if isinstance(t, TLeaf):
        return matrix_of(r, t.value, phases)
    if isinstance(t, TAdd):
        return (direct_tree_matrix(r, t.left, phases)
                + direct_tree_matrix(r, t.right, phases))
    if isinstance(t, TMul):
        return (direct_tree_matrix(r, t.left, phases)
                @ direct_tree_matrix(r, t.right, phases))
    if isinstance(t, TScale):
        return (eval_scalar(r, t.scalar, phases)
                * direct_tree_matrix(r, t.child, phases))
    if isinstance(t, TAdjoint):
        return direct_tree_matrix(r, t.child, phases).conj().T
    raise TypeError(f"not a tree node: {t!r}")


def verify_normal_form(r: Realization, raw: Tree, tol: float | None = None,
                       phases=None) -> Report:
    """Compare direct matrix evaluation of ``raw`` against the matrix of its
    symbolic normal form.  Trees touching joint observables are skipped
    (joint observables have no realization)."""
    tolerance = ORACLE_TOLERANCE if tol is None else tol
    for ref in tree_state_refs(raw):
        if r.registry.observable(ref.observable).is_joint:
            return Report(max_deviation=float("nan"), tolerance=tolerance,
                          passed=True, skipped=True,
                          reason="expression references a joint observable")
    direct = direct_tree_matrix(r, raw, phases)
    reduced = matrix_of(r, normalize(raw), phases)
    deviation = float(np.max(np.abs(direct - reduced)))
    return Report(max_deviation=deviation, tolerance=tolerance,
                  passed=deviation <= tolerance)


# --- spectral layer -------------------------------------------------------------


def _values_of(r: Realization, observable):
    obs = r.registry.observable(observable)
    if obs.values is None:
        raise MissingEigenvalues(
            f"observable {obs.name!r} has no eigenvalues declared")
    return obs, np.array([float(v) for v in obs.values])


def operator_from_spectrum(r: Realization, observable) -> np.ndarray:
    """Spectral representation Σ_a a·|a⟩⟨a| of an observable's operator."""
    obs, values = _values_of(r, observable)
    u = r.basis(obs.id)
    return (u * values) @ u.conj().T


def spectral_function(r: Realization, observable,
                      poly_coeffs: Sequence[complex]) -> np.ndarray:
    """f(A) = Σ_a |a⟩ f(a) ⟨a| for a polynomial f given by ascending
    coefficients."""
    obs, values = _values_of(r, observable)
    coeffs = list(poly_coeffs)
    fvals = np.zeros(len(values), dtype=complex)
    for c in reversed(coeffs):
        fvals = fvals * values + c
    u = r.basis(obs.id)
    return (u * fvals) @ u.conj().T


def horner_matrix_polynomial(r: Realization, observable,
                             poly_coeffs: Sequence[complex]) -> np.ndarray:
    """Independent evaluation of the same polynomial directly in the matrix."""
    a = operator_from_spectrum(r, observable)
    n = r.dimension
    out = np.zeros((n, n), dtype=complex)
    for c in reversed(list(poly_coeffs)):
        out = out @ a + c * np.eye(n)
    return out


def char_poly_check(r: Realization, observable,
                    tol: float | None = None) -> Report:
    """∏_k (A − a_k·I) as a plain matrix product; passes when it annihilates."""
    tolerance = ORACLE_TOLERANCE if tol is None else tol
    obs, values = _values_of(r, observable)
    a = operator_from_spectrum(r, obs.id)
    n = r.dimension
    prod = np.eye(n, dtype=complex)
    for v in values:
        prod = prod @ (a - v * np.eye(n))
    deviation = float(np.max(np.abs(prod)))
    return Report(max_deviation=deviation, tolerance=tolerance,
                  passed=deviation <= tolerance)


# --- wave functions ---------------------------------------------------------------


def basis_wave(r: Realization, ref: StateRef) -> WaveFunction:
    """The wave function of the state |ref⟩ written in its own basis."""
    components = np.zeros(r.dimension, dtype=complex)
    components[ref.index] = 1.0
    return WaveFunction(basis=ref.observable, components=components)


def transformation_matrix(r: Realization, to, frm) -> np.ndarray:
    """U with U[i, j] = ⟨to_i|frm_j⟩; unitary within tolerance."""
    return r.basis(to).conj().T @ r.basis(frm)


def change_basis(r: Realization, psi: WaveFunction, to) -> WaveFunction:
    """ψ(a) = Σ_b ⟨a|b⟩ ψ(b); norm is preserved within tolerance."""
    obs = r.registry.observable(to)
    u = transformation_matrix(r, obs.id, psi.basis)
    return WaveFunction(basis=obs.id, components=u @ psi.components)


def born_probability(r: Realization, a: StateRef, psi: WaveFunction) -> float:
    """p(a|ψ) = |ψ(a)|² in the basis of a's observable."""
    if psi.basis != a.observable:
        psi = change_basis(r, psi, a.observable)
    return float(abs(psi.components[a.index]) ** 2)


def matrix_element(r: Realization, a: StateRef, x: np.ndarray,
                   b: StateRef) -> complex:
    """⟨a|X|b⟩ = column(a)† · X · column(b).

    The trace route Tr{matrix_of(M(b,a))·X} computes the same number; their
    agreement is part of the test suite.
    """
    if x.shape != (r.dimension, r.dimension):
        raise DimensionMismatch(
            f"matrix shape {x.shape} does not match dimension {r.dimension}")
    return complex(np.vdot(r.column(a), x @ r.column(b)))


def expectation_value(r: Realization, observable, b: StateRef) -> complex:
    """⟨A⟩_b = Tr{A·M_b}."""
    from .algebra import filter_of

    a_mat = operator_from_spectrum(r, observable)
    return complex(np.trace(a_mat @ matrix_of(r, filter_of(b))))
