#!/usr/bin/env python3
"""A tour of the exact algebraic laws of measurement symbols.

Everything here is checked with exact rational arithmetic: equality below
means literally identical canonical forms, not closeness in floating point.
"""

from mqsym import (
    ComplexRational,
    Registry,
    ScalarExpr,
    add,
    adjoint,
    complete_measurement,
    conjugate,
    expand_identity,
    filter_of,
    identity,
    mul,
    render_expr,
    scale,
    symbol,
    transpose,
    zero,
)

reg = Registry()
reg.define_observable("A", ["a1", "a2", "a3"])
reg.define_observable("B", ["b1", "b2"])
reg.freeze()

a1, a2 = reg.state("A", "a1"), reg.state("A", "a2")
b1, b2 = reg.state("B", "b1"), reg.state("B", "b2")


def show(label, expr):
    print(f"{label:35s} {render_expr(expr, reg)}")


# Filters are idempotent; distinct outcomes of one observable annihilate.
show("M[a1] * M[a1]", mul(filter_of(a1), filter_of(a1)))
show("M[a1] * M[a2]", mul(filter_of(a1), filter_of(a2)))
assert mul(filter_of(a1), filter_of(a1)) == filter_of(a1)
assert mul(filter_of(a1), filter_of(a2)) == zero()

# A cross-observable product collapses to one general symbol times a
# transformation function.
show("M[a1] * M[b1]", mul(filter_of(a1), filter_of(b1)))

# The product is not commutative: one order chains b1 to itself and leaves
# a filter on A, the other leaves a filter on B.
x, y = symbol(a1, b1), symbol(b1, a1)
assert mul(x, y) != mul(y, x)
show("M[a1<-b1] * M[b1<-a1]", mul(x, y))
show("M[b1<-a1] * M[a1<-b1]", mul(y, x))

# ...but sums are, and associatively so.
s1 = add(add(filter_of(a1), filter_of(a2)), filter_of(b1))
s2 = add(filter_of(a1), add(filter_of(a2), filter_of(b1)))
assert s1 == s2

# The complete measurement over a spectrum is the identity.
show("sum of all A filters", complete_measurement("A", reg))
assert expand_identity(identity(), "A", reg) == complete_measurement("A", reg)

# Inserting a complete measurement in the middle of M[a1]·M[b1] produces the
# resolution Σ_a ⟨a1|a⟩⟨a|b1⟩ without changing the element.
middle = mul(filter_of(a1), mul(complete_measurement("A", reg), filter_of(b1)))
show("M[a1] * (Σ M[a]) * M[b1]", middle)
assert middle == mul(filter_of(a1), filter_of(b1))

# Adjoint: reverses processes, conjugates scalars, fixes filters.
assert adjoint(filter_of(a1)) == filter_of(a1)
assert adjoint(mul(x, y)) == mul(adjoint(y), adjoint(x))
assert adjoint(adjoint(x)) == x

# Scalars come out conjugated from the adjoint but untouched from the
# transposition; the three maps close into each other.
lam = ScalarExpr.number(ComplexRational.of(2j))
assert adjoint(scale(lam, x)) == scale(lam.conjugate(), adjoint(x))
assert transpose(scale(lam, x)) == scale(lam, transpose(x))
assert transpose(x) == conjugate(adjoint(x))
assert transpose(x) == adjoint(conjugate(x))
assert transpose(transpose(x)) == x

print("\nall algebraic laws hold exactly")
