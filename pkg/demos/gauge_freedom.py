#!/usr/bin/env python3
"""Per-state phase freedom and what it cannot change.

Each state may absorb an arbitrary phase λ(a) = e^{iφ(a)}.  Transformation
functions pick up those phases, so they carry no direct physical meaning;
probabilities ⟨b|a⟩⟨a|b⟩ shed them identically.
"""

import numpy as np

from mqsym import (
    GaugeAssignment,
    Registry,
    apply_gauge,
    basis_wave,
    born_probability,
    eval_tf,
    filter_of,
    gauge_transform,
    gauge_transform_scalar,
    mul,
    probability_symbolic,
    random_realization,
    render_expr,
    render_scalar,
    symbol,
)

reg = Registry()
reg.define_observable("A", ["a0", "a1"])
reg.define_observable("B", ["b0", "b1"])
reg.freeze()

a0, b0 = reg.state("A", "a0"), reg.state("B", "b0")

# Symbolically: a gauge tags general symbols with an exact phase factor...
g = GaugeAssignment({a0: 1.25, b0: -0.5})
print("M[A:a0<-B:b0] under a gauge:",
      render_expr(gauge_transform(symbol(a0, b0), g), reg))

# ...but filters and probability monomials are exactly fixed.
assert gauge_transform(filter_of(a0), g) == filter_of(a0)
p = probability_symbolic(a0, b0)
assert gauge_transform_scalar(p, g) == p
print("p(a0|b0) =", render_scalar(p, reg), "(gauge-fixed, exactly)")

# The transformation respects products: transforming the factors and
# transforming the product give identical normal forms.
x, y = symbol(a0, b0), filter_of(b0)
assert gauge_transform(mul(x, y), g) == mul(gauge_transform(x, g),
                                            gauge_transform(y, g))

# Numerically: multiply basis columns by e^{iφ}.  Transformation functions
# rotate, probabilities stay put.
r = random_realization(2, ["A", "B"], seed=7, registry=reg)
rng = np.random.default_rng(8)
angles = GaugeAssignment({s: float(rng.uniform(-np.pi, np.pi))
                          for s in reg.states("A") + reg.states("B")})
gauged = apply_gauge(r, angles)

before = eval_tf(r, a0, b0)
after = eval_tf(gauged, a0, b0)
print(f"\n<a0|b0> before: {before:.6f}")
print(f"<a0|b0> after:  {after:.6f}")
print(f"|.|^2 both:     {abs(before)**2:.12f} vs {abs(after)**2:.12f}")
assert abs(abs(before) ** 2 - abs(after) ** 2) < 1e-12

psi = basis_wave(r, a0)
for b in reg.states("B"):
    assert abs(born_probability(r, b, psi)
               - born_probability(gauged, b, psi)) < 1e-12
print("all born probabilities unchanged under the gauge")
