"""Exact scalars: complex rationals and polynomials in ⟨x|y⟩ indeterminates.

A :class:`ScalarExpr` is a finite sum of monomials.  Each monomial is a
commuting multiset of transformation-function indeterminates ⟨bra|ket⟩
together with an exact unimodular phase exp(i·Σ nₛ·φ(s)) recorded as integer
multiples of per-state angle symbols.  Coefficients are exact complex
rationals, so every algebraic identity in this layer is checked by literal
equality; floating point enters only in the realization module.

Same-observable pairs ⟨a|a′⟩ reduce to the Kronecker delta at construction
time and are never stored, which makes the canonical form unique.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .registry import StateRef

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _frac(value) -> Fraction:
    return value if isinstance(value, Fraction) else Fraction(value)


@dataclass(frozen=True)
class ComplexRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = _ZERO
    im: Fraction = _ZERO

    @staticmethod
    def of(value) -> "ComplexRational":
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, complex):
            return ComplexRational(Fraction(value.real), Fraction(value.imag))
        return ComplexRational(_frac(value))

    def __add__(self, other: "ComplexRational") -> "ComplexRational":
        return ComplexRational(self.re + other.re, self.im + other.im)

    def __sub__(self, other: "ComplexRational") -> "ComplexRational":
        return ComplexRational(self.re - other.re, self.im - other.im)

    def __mul__(self, other: "ComplexRational") -> "ComplexRational":
        return ComplexRational(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    def __neg__(self) -> "ComplexRational":
        return ComplexRational(-self.re, -self.im)

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __repr__(self) -> str:
        return f"ComplexRational({self.re}, {self.im})"


CR_ZERO = ComplexRational()
CR_ONE = ComplexRational(_ONE)


@dataclass(frozen=True, order=True)
class TFIndeterminate:
    """The symbolic number ⟨bra|ket⟩ relating two characterizations.

    Never constructed with bra and ket from the same observable: that pair is
    a Kronecker delta and reduces to 0 or 1 before storage (see :func:`tf`).
    """

    bra: StateRef
    ket: StateRef

    def conjugate(self) -> "TFIndeterminate":
        return TFIndeterminate(self.ket, self.bra)


# Phase part of a monomial: ((state, integer multiple), ...) sorted by state,
# zero multiples dropped.  The factor it denotes is exp(i·Σ n·φ(state)).
PhaseVec = tuple[tuple[StateRef, int], ...]


@dataclass(frozen=True, order=True)
class Monomial:
    tfs: tuple[TFIndeterminate, ...] = ()
    phase: PhaseVec = ()

    def conjugate(self) -> "Monomial":
        return Monomial(
            tuple(sorted(t.conjugate() for t in self.tfs)),
            tuple((s, -n) for s, n in self.phase),
        )

    def __mul__(self, other: "Monomial") -> "Monomial":
        return Monomial(tuple(sorted(self.tfs + other.tfs)),
                        _merge_phase(self.phase, other.phase))


def _merge_phase(a: PhaseVec, b: PhaseVec) -> PhaseVec:
    if not a:
        return b
    if not b:
        return a
    acc: dict[StateRef, int] = dict(a)
    for s, n in b:
        m = acc.get(s, 0) + n
        if m:
            acc[s] = m
        else:
            del acc[s]
    return tuple(sorted(acc.items()))


EMPTY_MONOMIAL = Monomial()


@dataclass(frozen=True)
class ScalarExpr:
    """Normal-form polynomial in TF indeterminates over complex rationals.

    ``terms`` is sorted by monomial and stores no zero coefficients; the zero
    scalar is the empty tuple.  Instances compare exactly.
    """

    terms: tuple[tuple[Monomial, ComplexRational], ...] = ()

    @staticmethod
    def from_dict(d: Mapping[Monomial, ComplexRational]) -> "ScalarExpr":
        return ScalarExpr(tuple(sorted(
            (m, c) for m, c in d.items() if not c.is_zero)))

    @staticmethod
    def number(value) -> "ScalarExpr":
        c = ComplexRational.of(value)
        if c.is_zero:
            return SC_ZERO
        return ScalarExpr(((EMPTY_MONOMIAL, c),))

    # -- ring operations ---------------------------------------------------

    def __add__(self, other: "ScalarExpr") -> "ScalarExpr":
        if not self.terms:
            return other
        if not other.terms:
            return self
        acc = dict(self.terms)
        for m, c in other.terms:
            s = acc.get(m, CR_ZERO) + c
            if s.is_zero:
                acc.pop(m, None)
            else:
                acc[m] = s
        return ScalarExpr(tuple(sorted(acc.items())))

    def __mul__(self, other: "ScalarExpr") -> "ScalarExpr":
        if not self.terms or not other.terms:
            return SC_ZERO
        acc: dict[Monomial, ComplexRational] = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = m1 * m2
                c = c1 * c2
                s = acc.get(m)
                s = c if s is None else s + c
                if s.is_zero:
                    acc.pop(m, None)
                else:
                    acc[m] = s
        return ScalarExpr(tuple(sorted(acc.items())))

    def __neg__(self) -> "ScalarExpr":
        return ScalarExpr(tuple((m, -c) for m, c in self.terms))

    def __sub__(self, other: "ScalarExpr") -> "ScalarExpr":
        return self + (-other)

    def scaled(self, value) -> "ScalarExpr":
        c0 = ComplexRational.of(value)
        if c0.is_zero:
            return SC_ZERO
        return ScalarExpr(tuple((m, c * c0) for m, c in self.terms))

    def conjugate(self) -> "ScalarExpr":
        return ScalarExpr(tuple(sorted(
            (m.conjugate(), c.conjugate()) for m, c in self.terms)))

    def with_phase(self, phase: PhaseVec) -> "ScalarExpr":
        if not phase:
            return self
        return ScalarExpr(tuple(sorted(
            (Monomial(m.tfs, _merge_phase(m.phase, phase)), c)
            for m, c in self.terms)))

    # -- queries -------------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def constant_value(self) -> ComplexRational | None:
        """The exact value if this scalar is a plain number, else None."""
        if not self.terms:
            return CR_ZERO
        if len(self.terms) == 1 and self.terms[0][0] == EMPTY_MONOMIAL:
            return self.terms[0][1]
        return None

    def indeterminates(self) -> Iterable[TFIndeterminate]:
        for m, _ in self.terms:
            yield from m.tfs


SC_ZERO = ScalarExpr()
SC_ONE = ScalarExpr.number(1)


def tf(x: StateRef, y: StateRef) -> ScalarExpr:
    """The transformation function ⟨x|y⟩ as a scalar.

    Same-observable pairs reduce eagerly to the Kronecker delta; for a joint
    observable the labels are component tuples, so index equality is already
    the componentwise product of deltas.
    """
    if x.observable == y.observable:
        return SC_ONE if x.index == y.index else SC_ZERO
    return ScalarExpr(((Monomial((TFIndeterminate(x, y),)), CR_ONE),))


def delta(x: StateRef, y: StateRef) -> ScalarExpr:
    """Kronecker delta of two outcomes of the same observable."""
    return SC_ONE if x == y else SC_ZERO
