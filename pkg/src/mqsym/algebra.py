"""The measurement algebra: normal forms over measurement-symbol words.

A word is either the complete (non-selective) measurement ``Identity`` or a
single symbol M(out, in) that accepts systems in state ``in`` and emits them
in state ``out``; M(a, a) is the plain filter for outcome ``a``.  An
:class:`AlgebraExpr` is a linear combination of words with :class:`ScalarExpr`
coefficients, kept in a canonical sorted form with no zero terms.  Products
never deepen: the word product is a single word times a scalar, so arbitrary
operation sequences stay in normal form.

Raw, unreduced expression trees (:class:`Tree`) are kept as a separate type;
they feed both the symbolic reduction (:func:`normalize`) and the independent
matrix evaluation in the realization module, which is what makes the
cross-check between the two meaningful.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Mapping, Union

from .registry import Registry, StateRef
from .scalar import (
    CR_ONE,
    ComplexRational,
    Monomial,
    SC_ONE,
    SC_ZERO,
    ScalarExpr,
    tf,
)

# --- words -------------------------------------------------------------------


class _IdentityWord:
    """The complete measurement: passes every state, Σ_a M_a = 1."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Identity"


Identity = _IdentityWord()


@dataclass(frozen=True)
class MSymbol:
    """The general measurement symbol M(out, in): input state ``in_`` is
    changed into output state ``out`` (|out⟩⟨in| in a realization)."""

    out: StateRef
    in_: StateRef

    @property
    def is_filter(self) -> bool:
        return self.out == self.in_


Word = Union[_IdentityWord, MSymbol]


def _word_key(w: Word):
    if w is Identity:
        return (0, 0, 0, 0, 0)
    return (1, w.out.observable, w.out.index, w.in_.observable, w.in_.index)


# --- normal-form expressions --------------------------------------------------


@dataclass(frozen=True)
class AlgebraExpr:
    """Normal-form linear combination of words.

    ``terms`` is sorted (Identity first, then symbols by output/input state),
    every scalar is nonzero, and the zero expression is the empty tuple.
    """

    terms: tuple[tuple[Word, ScalarExpr], ...] = ()

    @staticmethod
    def from_dict(d: Mapping[Word, ScalarExpr]) -> "AlgebraExpr":
        return AlgebraExpr(tuple(sorted(
            ((w, s) for w, s in d.items() if not s.is_zero),
            key=lambda ws: _word_key(ws[0]))))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word: Word) -> ScalarExpr:
        for w, s in self.terms:
            if w == word:
                return s
        return SC_ZERO

    def words(self) -> Iterator[Word]:
        for w, _ in self.terms:
            yield w

    def state_refs(self) -> Iterator[StateRef]:
        """Every StateRef mentioned in words, indeterminates, and phases."""
        for w, s in self.terms:
            if isinstance(w, MSymbol):
                yield w.out
                yield w.in_
            for m, _ in s.terms:
                for t in m.tfs:
                    yield t.bra
                    yield t.ket
                for ref, _ in m.phase:
                    yield ref


ZERO = AlgebraExpr()
IDENTITY = AlgebraExpr(((Identity, SC_ONE),))


def identity() -> AlgebraExpr:
    return IDENTITY


def zero() -> AlgebraExpr:
    return ZERO


def scalar_expr(s: ScalarExpr | ComplexRational | int | Fraction) -> AlgebraExpr:
    """A bare scalar as an expression: s·1."""
    if not isinstance(s, ScalarExpr):
        s = ScalarExpr.number(s)
    if s.is_zero:
        return ZERO
    return AlgebraExpr(((Identity, s),))


def symbol(out: StateRef, in_: StateRef) -> AlgebraExpr:
    """The single-term expression M(out, in) with coefficient 1."""
    return AlgebraExpr(((MSymbol(out, in_), SC_ONE),))


def filter_of(a: StateRef) -> AlgebraExpr:
    """The filter M_a = M(a, a) selecting systems with outcome ``a``.

    (Named ``filter_of`` rather than ``filter`` to stay clear of the builtin.)
    """
    return symbol(a, a)


# --- operations ---------------------------------------------------------------


def combine(coeff: ScalarExpr | int | Fraction, x: AlgebraExpr,
            y: AlgebraExpr) -> AlgebraExpr:
    """coeff·x + y, in normal form."""
    if not isinstance(coeff, ScalarExpr):
        coeff = ScalarExpr.number(coeff)
    acc: dict[Word, ScalarExpr] = dict(y.terms)
    for w, s in x.terms:
        acc[w] = acc.get(w, SC_ZERO) + coeff * s
    return AlgebraExpr.from_dict(acc)


def add(x: AlgebraExpr, y: AlgebraExpr) -> AlgebraExpr:
    return combine(SC_ONE, x, y)


def scale(coeff, x: AlgebraExpr) -> AlgebraExpr:
    return combine(coeff, x, ZERO)


def mul(x: AlgebraExpr, y: AlgebraExpr) -> AlgebraExpr:
    """Bilinear extension of the word product.

    M(a,b)·M(c,d) contributes ⟨b|c⟩·M(a,d); when b and c belong to the same
    observable the factor is the Kronecker delta, so mismatched outcomes drop
    out entirely.  Identity is neutral on both sides.
    """
    acc: dict[Word, ScalarExpr] = {}
    for w1, s1 in x.terms:
        for w2, s2 in y.terms:
            if w1 is Identity:
                word, factor = w2, None
            elif w2 is Identity:
                word, factor = w1, None
            else:
                factor = tf(w1.in_, w2.out)
                if factor.is_zero:
                    continue
                word = MSymbol(w1.out, w2.in_)
            s = s1 * s2
            if factor is not None and factor != SC_ONE:
                s = s * factor
            prev = acc.get(word)
            acc[word] = s if prev is None else prev + s
    return AlgebraExpr.from_dict(acc)


def adjoint(x: AlgebraExpr) -> AlgebraExpr:
    """Reversal of the measurement process: words swap input and output,
    scalars are conjugated.  An involution and an antihomomorphism."""
    acc: dict[Word, ScalarExpr] = {}
    for w, s in x.terms:
        word = w if w is Identity else MSymbol(w.in_, w.out)
        acc[word] = s.conjugate()
    return AlgebraExpr.from_dict(acc)


def conjugate(x: AlgebraExpr) -> AlgebraExpr:
    """Map into the conjugate algebra: every scalar is conjugated, words are
    left unchanged."""
    return AlgebraExpr(tuple((w, s.conjugate()) for w, s in x.terms))


def transpose(x: AlgebraExpr) -> AlgebraExpr:
    """Adjoint within the conjugate algebra: words swap input and output,
    scalars are left unchanged (conjugate ∘ adjoint = adjoint ∘ conjugate)."""
    acc: dict[Word, ScalarExpr] = {}
    for w, s in x.terms:
        word = w if w is Identity else MSymbol(w.in_, w.out)
        acc[word] = s
    return AlgebraExpr.from_dict(acc)


def expand_identity(x: AlgebraExpr, via, registry: Registry) -> AlgebraExpr:
    """Replace every Identity word by the complete measurement over ``via``'s
    spectrum, Σ_k M(k, k), and renormalize."""
    obs = registry.observable(via)
    acc: dict[Word, ScalarExpr] = {}
    for w, s in x.terms:
        if w is Identity:
            for k in range(len(obs.labels)):
                word = MSymbol(StateRef(obs.id, k), StateRef(obs.id, k))
                acc[word] = acc.get(word, SC_ZERO) + s
        else:
            acc[w] = acc.get(w, SC_ZERO) + s
    return AlgebraExpr.from_dict(acc)


def complete_measurement(via, registry: Registry) -> AlgebraExpr:
    """Σ over the spectrum of ``via`` of its filters (equals Identity)."""
    return expand_identity(IDENTITY, via, registry)


# --- raw expression trees ------------------------------------------------------


class Tree:
    """Unreduced expression tree node; see module docstring."""

    __slots__ = ()


@dataclass(frozen=True)
class TLeaf(Tree):
    value: AlgebraExpr


@dataclass(frozen=True)
class TAdd(Tree):
    left: Tree
    right: Tree


@dataclass(frozen=True)
class TMul(Tree):
    left: Tree
    right: Tree


@dataclass(frozen=True)
class TScale(Tree):
    scalar: ScalarExpr
    child: Tree


@dataclass(frozen=True)
class TAdjoint(Tree):
    child: Tree


# Conjugation and transposition are *not* tree nodes.  They land in the
# conjugate algebra, whose product differs from this one, so a raw tree
# cannot be evaluated through them by plain matrix arithmetic.  They are
# definitional relabelings of normal forms (coefficient conjugation and
# input/output swap), applied eagerly wherever an expression is built.


def leaf(x: AlgebraExpr) -> Tree:
    return TLeaf(x)


def reduce_tree(t: Tree) -> AlgebraExpr:
    """Symbolic reduction of a raw tree to normal form."""
    if isinstance(t, TLeaf):
        return AlgebraExpr.from_dict(dict(t.value.terms))
    if isinstance(t, TAdd):
        return add(reduce_tree(t.left), reduce_tree(t.right))
    if isinstance(t, TMul):
        return mul(reduce_tree(t.left), reduce_tree(t.right))
    if isinstance(t, TScale):
        return scale(t.scalar, reduce_tree(t.child))
    if isinstance(t, TAdjoint):
        return adjoint(reduce_tree(t.child))
    raise TypeError(f"not a tree node: {t!r}")


def tree_state_refs(t: Tree) -> Iterator[StateRef]:
    if isinstance(t, TLeaf):
        yield from t.value.state_refs()
    elif isinstance(t, (TAdd, TMul)):
        yield from tree_state_refs(t.left)
        yield from tree_state_refs(t.right)
    elif isinstance(t, TScale):
        yield from scalar_expr(t.scalar).state_refs()
        yield from tree_state_refs(t.child)
    elif isinstance(t, TAdjoint):
        yield from tree_state_refs(t.child)


def normalize(x: AlgebraExpr | Tree) -> AlgebraExpr:
    """Canonical normal form: reduces raw trees; on an already normal
    expression this is the identity (idempotent by construction)."""
    if isinstance(x, Tree):
        return reduce_tree(x)
    return AlgebraExpr.from_dict(dict(x.terms))


# --- canonical text rendering ---------------------------------------------------


def _render_fraction(f: Fraction) -> str:
    return str(f)


def _render_coeff(c: ComplexRational) -> tuple[bool, str]:
    """Render as (is_negative, text-without-leading-sign); the text parses as
    a single factor of the DSL grammar."""
    re, im = c.re, c.im
    if im == 0:
        return re < 0, _render_fraction(abs(re))
    if re == 0:
        return im < 0, f"{_render_fraction(abs(im))}i"
    neg = re < 0
    if neg:
        re, im = -re, -im
    sign = "+" if im > 0 else "-"
    return neg, f"({_render_fraction(re)}{sign}{_render_fraction(abs(im))}i)"


def _render_phase(phase, registry: Registry) -> str:
    parts = []
    for ref, n in phase:
        name = f"φ[{registry.state_text(ref)}]"
        term = name if abs(n) == 1 else f"{abs(n)}*{name}"
        if not parts:
            parts.append(f"-{term}" if n < 0 else term)
        else:
            parts.append(f"-{term}" if n < 0 else f"+{term}")
    return f"exp(i*({''.join(parts)}))"


def _render_monomial(m: Monomial, c: ComplexRational,
                     registry: Registry) -> tuple[bool, str]:
    neg, coeff_text = _render_coeff(c)
    factors = [f"<{registry.state_text(t.bra)}|{registry.state_text(t.ket)}>"
               for t in m.tfs]
    if m.phase:
        factors.append(_render_phase(m.phase, registry))
    if not factors:
        return neg, coeff_text
    if c == CR_ONE or c == -CR_ONE:
        return neg, "*".join(factors)
    return neg, "*".join([coeff_text] + factors)


def render_scalar(s: ScalarExpr, registry: Registry) -> str:
    """Canonical text of a scalar; parseable back through the DSL whenever it
    is phase-free."""
    if s.is_zero:
        return "0"
    out = []
    for m, c in s.terms:
        neg, text = _render_monomial(m, c, registry)
        if not out:
            out.append(f"-{text}" if neg else text)
        else:
            out.append(f" - {text}" if neg else f" + {text}")
    return "".join(out)


def render_word(w: Word, registry: Registry) -> str:
    if w is Identity:
        return "I"
    if w.is_filter:
        return f"M[{registry.state_text(w.out)}]"
    return f"M[{registry.state_text(w.out)}<-{registry.state_text(w.in_)}]"


def render_expr(x: AlgebraExpr, registry: Registry) -> str:
    """Canonical text of a normal form; reparsing it reproduces the same
    normal form."""
    if x.is_zero:
        return "0"
    out = []
    for w, s in x.terms:
        word_text = render_word(w, registry)
        if s == SC_ONE:
            neg, text = False, word_text
        elif len(s.terms) == 1:
            m, c = s.terms[0]
            if not m.tfs and not m.phase and c == -CR_ONE:
                neg, text = True, word_text
            else:
                neg, body = _render_monomial(m, c, registry)
                text = f"{body}*{word_text}"
        else:
            neg, text = False, f"({render_scalar(s, registry)})*{word_text}"
        if not out:
            out.append(f"-{text}" if neg else text)
        else:
            out.append(f" - {text}" if neg else f" + {text}")
    return "".join(out)
