"""Linear functionals and the statistical layer over the algebra.

The trace sends M(out, in) to ⟨in|out⟩ and Identity to the space dimension;
probabilities are the gauge-invariant monomials ⟨b|a⟩⟨a|b⟩; expectation
values weight them with exact rational eigenvalues.  Gauge transformations
attach exact integer phase-angle sums to monomials, so invariance statements
are literal cancellations, never float comparisons.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .algebra import AlgebraExpr, Identity, MSymbol
from .errors import MissingDimension, MissingEigenvalues
from .registry import Registry, StateRef
from .scalar import Monomial, SC_ZERO, ScalarExpr, tf


def trace(x: AlgebraExpr, dim_hint: int | None = None) -> ScalarExpr:
    """Linear trace functional: Tr{M(b,a)} = ⟨a|b⟩ and Tr{1} = N.

    ``dim_hint`` supplies N and is required as soon as ``x`` has an Identity
    term; the symbolic layer has no way of knowing the space dimension.
    """
    acc = SC_ZERO
    for w, s in x.terms:
        if w is Identity:
            if dim_hint is None:
                raise MissingDimension(
                    "trace of an expression with an Identity term needs the "
                    "space dimension")
            acc = acc + s.scaled(dim_hint)
        else:
            acc = acc + s * tf(w.in_, w.out)
    return acc


def probability_symbolic(a: StateRef, b: StateRef) -> ScalarExpr:
    """p(a|b) = ⟨b|a⟩⟨a|b⟩, the coefficient surviving the b→a→b cascade.

    Reduces to the Kronecker delta when both outcomes belong to the same
    observable; symmetric in its arguments by construction.
    """
    return tf(b, a) * tf(a, b)


def expectation_symbolic(observable, b: StateRef,
                         registry: Registry) -> ScalarExpr:
    """⟨A⟩_b = Σ_a value(a)·p(a|b) with exact rational eigenvalues."""
    obs = registry.observable(observable)
    if obs.values is None:
        raise MissingEigenvalues(
            f"observable {obs.name!r} has no eigenvalues declared")
    acc = SC_ZERO
    for k, value in enumerate(obs.values):
        p = probability_symbolic(StateRef(obs.id, k), b)
        acc = acc + p.scaled(value)
    return acc


@dataclass(frozen=True)
class GaugeAssignment:
    """Per-state phase angles φ(a) in radians; unassigned states are 0.

    The symbolic layer only ever uses which states carry a (symbolic) angle;
    the numeric values matter when a realization evaluates phases.
    """

    phases: Mapping[StateRef, float] = field(default_factory=dict)

    def angle(self, ref: StateRef) -> float:
        return self.phases.get(ref, 0.0)

    def active_states(self) -> frozenset[StateRef]:
        # A zero angle is the trivial gauge λ = 1 exactly; it leaves no
        # symbolic trace.
        return frozenset(r for r, ang in self.phases.items() if ang != 0.0)


def gauge_transform_scalar(s: ScalarExpr, g: GaugeAssignment) -> ScalarExpr:
    """Rewrite every indeterminate ⟨a|b⟩ ↦ λ⁻¹(a)⟨a|b⟩λ(b) as an exact
    phase-vector update."""
    active = g.active_states()
    out: dict[Monomial, object] = {}
    for m, c in s.terms:
        vec: dict[StateRef, int] = dict(m.phase)
        for t in m.tfs:
            if t.bra in active:
                vec[t.bra] = vec.get(t.bra, 0) - 1
            if t.ket in active:
                vec[t.ket] = vec.get(t.ket, 0) + 1
        cleaned = tuple(sorted((r, n) for r, n in vec.items() if n))
        out[Monomial(m.tfs, cleaned)] = c
    return ScalarExpr(tuple(sorted(out.items())))


def gauge_transform(x: AlgebraExpr, g: GaugeAssignment) -> AlgebraExpr:
    """M(a,b) ↦ λ(a)·M(a,b)·λ⁻¹(b) together with the indeterminate rewrite;
    algebra products are preserved exactly and all probabilities are fixed."""
    active = g.active_states()
    acc = {}
    for w, s in x.terms:
        s2 = gauge_transform_scalar(s, g)
        if isinstance(w, MSymbol):
            vec: dict[StateRef, int] = {}
            if w.out in active:
                vec[w.out] = vec.get(w.out, 0) + 1
            if w.in_ in active:
                vec[w.in_] = vec.get(w.in_, 0) - 1
            cleaned = tuple(sorted((r, n) for r, n in vec.items() if n))
            s2 = s2.with_phase(cleaned)
        acc[w] = s2
    return AlgebraExpr.from_dict(acc)
