import random

import pytest

from mqsym.algebra import (
    AlgebraExpr,
    MSymbol,
    add,
    adjoint,
    filter_of,
    identity,
    mul,
    scale,
    symbol,
)
from mqsym.errors import MissingDimension, MissingEigenvalues
from mqsym.functional import (
    GaugeAssignment,
    expectation_symbolic,
    gauge_transform,
    gauge_transform_scalar,
    probability_symbolic,
    trace,
)
from mqsym.scalar import SC_ONE, SC_ZERO, ScalarExpr, tf

from conftest import make_abc_registry
from test_algebra import cr, random_expr


def test_trace_of_general_symbol_is_the_transformation_function():
    reg = make_abc_registry(2)
    a, b = reg.state("A", "a0"), reg.state("B", "b1")
    # Tr{M(b, a)} = ⟨a|b⟩
    assert trace(symbol(b, a)) == tf(a, b)


def test_trace_of_a_filter_is_one(spin_registry):
    up = spin_registry.state("Z", "up")
    assert trace(filter_of(up)) == SC_ONE


def test_trace_of_identity_needs_and_uses_the_dimension():
    with pytest.raises(MissingDimension):
        trace(identity())
    assert trace(identity(), dim_hint=4) == ScalarExpr.number(4)


def test_trace_is_linear_exactly(spin_registry):
    rnd = random.Random(21)
    for _ in range(30):
        x = random_expr(rnd, spin_registry)
        y = random_expr(rnd, spin_registry)
        alpha = ScalarExpr.number(cr(rnd.randint(-3, 3), rnd.randint(-2, 2)))
        beta = ScalarExpr.number(cr(rnd.randint(-3, 3), 1))
        lhs = trace(add(scale(alpha, x), scale(beta, y)), dim_hint=2)
        rhs = alpha * trace(x, dim_hint=2) + beta * trace(y, dim_hint=2)
        assert lhs == rhs


def test_trace_of_products_commutes_for_all_word_pairs():
    reg = make_abc_registry(2)
    states = [s for obs in reg.observables() for s in reg.states(obs.id)]
    words = [symbol(x, y) for x in states for y in states]
    for u in words:
        for v in words:
            assert trace(mul(u, v)) == trace(mul(v, u))


def test_trace_product_golden_form():
    # Tr{M_d^c · M_b^a} = ⟨c|b⟩⟨a|d⟩ with all four states distinct.
    reg = make_abc_registry(2)
    a, b = reg.state("A", "a0"), reg.state("B", "b0")
    c, d = reg.state("C", "c0"), reg.state("A", "a1")
    got = trace(mul(symbol(d, c), symbol(b, a)))
    assert got == tf(c, b) * tf(a, d)


def test_probability_delta_cases(spin_registry):
    up = spin_registry.state("Z", "up")
    down = spin_registry.state("Z", "down")
    assert probability_symbolic(up, up) == SC_ONE
    assert probability_symbolic(up, down) == SC_ZERO


def test_probability_cross_observable_monomial(spin_registry):
    up = spin_registry.state("Z", "up")
    plus = spin_registry.state("X", "plus")
    assert probability_symbolic(plus, up) == tf(up, plus) * tf(plus, up)


def test_probability_is_symmetric_exactly():
    reg = make_abc_registry(3)
    for a in reg.states("A"):
        for b in reg.states("B"):
            assert probability_symbolic(a, b) == probability_symbolic(b, a)


def test_expectation_collapses_in_own_basis(spin_registry):
    up = spin_registry.state("Z", "up")
    assert expectation_symbolic("Z", up, spin_registry) == SC_ONE


def test_expectation_weights_probabilities(spin_registry):
    up = spin_registry.state("Z", "up")
    down = spin_registry.state("Z", "down")
    plus = spin_registry.state("X", "plus")
    got = expectation_symbolic("Z", plus, spin_registry)
    expected = (probability_symbolic(up, plus).scaled(1)
                + probability_symbolic(down, plus).scaled(-1))
    assert got == expected


def test_expectation_requires_eigenvalues(spin_registry):
    up = spin_registry.state("Z", "up")
    with pytest.raises(MissingEigenvalues):
        expectation_symbolic("X", up, spin_registry)


def test_gauge_identity_assignment_is_a_fixed_point(spin_registry):
    rnd = random.Random(31)
    up = spin_registry.state("Z", "up")
    for g in (GaugeAssignment(), GaugeAssignment({up: 0.0})):
        for _ in range(10):
            x = random_expr(rnd, spin_registry)
            assert gauge_transform(x, g) == x


def test_gauge_fixes_filters(spin_registry):
    up = spin_registry.state("Z", "up")
    plus = spin_registry.state("X", "plus")
    g = GaugeAssignment({up: 1.7, plus: -0.4})
    assert gauge_transform(filter_of(up), g) == filter_of(up)


def test_gauge_tags_symbols_with_phase(spin_registry):
    up = spin_registry.state("Z", "up")
    plus = spin_registry.state("X", "plus")
    g = GaugeAssignment({up: 1.0, plus: 2.0})
    got = gauge_transform(symbol(up, plus), g)
    expected = AlgebraExpr(((MSymbol(up, plus),
                             SC_ONE.with_phase(((up, 1), (plus, -1)))),))
    assert got == expected


def test_gauge_fixes_probability_monomials_exactly(spin_registry):
    up = spin_registry.state("Z", "up")
    down = spin_registry.state("Z", "down")
    plus = spin_registry.state("X", "plus")
    g = GaugeAssignment({up: 0.3, down: 1.1, plus: -2.2})
    for a in (up, down):
        p = probability_symbolic(a, plus)
        assert gauge_transform_scalar(p, g) == p


def test_gauge_preserves_products_and_adjoints(spin_registry):
    rnd = random.Random(37)
    states = spin_registry.states("Z") + spin_registry.states("X")
    for trial in range(25):
        g = GaugeAssignment({s: rnd.uniform(-3, 3) for s in states
                             if rnd.random() < 0.8})
        x = random_expr(rnd, spin_registry)
        y = random_expr(rnd, spin_registry)
        assert (gauge_transform(mul(x, y), g)
                == mul(gauge_transform(x, g), gauge_transform(y, g)))
        assert (gauge_transform(add(x, y), g)
                == add(gauge_transform(x, g), gauge_transform(y, g)))
        assert (gauge_transform(adjoint(x), g)
                == adjoint(gauge_transform(x, g)))


def test_gauge_transform_scalar_rewrites_indeterminates(spin_registry):
    up = spin_registry.state("Z", "up")
    plus = spin_registry.state("X", "plus")
    g = GaugeAssignment({up: 0.5, plus: 0.25})
    got = gauge_transform_scalar(tf(up, plus), g)
    expected = tf(up, plus).with_phase(((up, -1), (plus, 1)))
    assert got == expected
