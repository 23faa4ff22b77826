#!/usr/bin/env python3
"""The classic sequential Stern-Gerlach experiment, done symbolically.

A beam prepared spin-up passes a Z-filter, then an X-filter, then a second
Z-filter.  The middle filter re-opens the down channel: the final beam is
not empty, and exactly one quarter of it survives.
"""

import numpy as np

from mqsym import (
    Registry,
    basis_wave,
    born_probability,
    eval_scalar,
    filter_of,
    make_realization,
    mul,
    normalize,
    render_expr,
)

# Declare the two observables: Z with eigenvalues ±1, X unlabelled.
reg = Registry()
reg.define_observable("Z", ["up", "down"], [1, -1])
reg.define_observable("X", ["plus", "minus"])
reg.freeze()

up = reg.state("Z", "up")
down = reg.state("Z", "down")
plus = reg.state("X", "plus")

# The three-stage cascade, reading right to left: filter Z:up, then X:plus,
# then Z:up again.
cascade = normalize(mul(filter_of(up), mul(filter_of(plus), filter_of(up))))
print("M[Z:up] * M[X:plus] * M[Z:up]  ->", render_expr(cascade, reg))

# Blocking the middle filter instead gives exactly zero: up and down are
# orthogonal outcomes of the same observable.
blocked = mul(filter_of(up), filter_of(down))
print("M[Z:up] * M[Z:down]            ->", render_expr(blocked, reg))

# Attach concrete bases: Z standard, X Hadamard-rotated.
h = 1 / np.sqrt(2)
r = make_realization(reg, 2, {
    "Z": np.eye(2),
    "X": np.array([[h, h], [h, -h]]),
})

coeff = cascade.terms[0][1]
value = eval_scalar(r, coeff)
print()
print("cascade coefficient <up|plus><plus|up> =", f"{value.real:.6f}")
print("surviving beam fraction |coeff|^2      =", f"{abs(value)**2:.6f}")

# The single-stage transition probability, by the Born rule.
psi = basis_wave(r, up)
p = born_probability(r, plus, psi)
print("born probability p(plus|up)           =", f"{p:.6f}")

assert abs(value.real - 0.5) < 1e-12
assert abs(abs(value) ** 2 - 0.25) < 1e-12
assert abs(p - 0.5) < 1e-12
print("\nall cascade numbers check out")
