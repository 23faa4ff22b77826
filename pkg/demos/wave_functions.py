#!/usr/bin/env python3
"""Wave functions, unitary basis changes, and the Born rule.

A state is a component list ψ(b) = ⟨b|ψ⟩ in some observable's basis.
Changing the describing observable is a unitary transformation built from
transformation functions; probabilities come out of squared magnitudes.
"""

import numpy as np

from mqsym import (
    Registry,
    WaveFunction,
    basis_wave,
    born_probability,
    change_basis,
    random_realization,
    transformation_matrix,
)

DIM = 3

reg = Registry()
reg.define_observable("A", [f"a{k}" for k in range(DIM)])
reg.define_observable("B", [f"b{k}" for k in range(DIM)])
reg.freeze()

r = random_realization(DIM, ["A", "B"], seed=99, registry=reg)

# U_ab has entries ⟨a_i|b_j⟩ and is unitary: the geometry of states.
u = transformation_matrix(r, "A", "B")
residual = np.max(np.abs(u.conj().T @ u - np.eye(DIM)))
print(f"U_ab unitarity residual: {residual:.2e}")
assert residual < 1e-10

# A random normalized state, written in A's basis.
rng = np.random.default_rng(1)
vec = rng.standard_normal(DIM) + 1j * rng.standard_normal(DIM)
vec /= np.linalg.norm(vec)
psi = WaveFunction(basis=reg.observable("A").id, components=vec)
print("norm in A basis:", f"{psi.norm:.12f}")

# Rewrite it in B's basis: the norm is untouched, and coming back
# reproduces the original components.
in_b = change_basis(r, psi, "B")
back = change_basis(r, in_b, "A")
print("norm in B basis:", f"{in_b.norm:.12f}")
print("round-trip deviation:",
      f"{np.max(np.abs(back.components - psi.components)):.2e}")
assert abs(in_b.norm - psi.norm) < 1e-12
assert np.max(np.abs(back.components - psi.components)) < 1e-12

# Born probabilities over a full spectrum sum to one.
probs = [born_probability(r, b, psi) for b in reg.states("B")]
for b, p in zip(reg.observable("B").labels, probs):
    print(f"p({b}|psi) = {p:.6f}")
print("total:", f"{sum(probs):.12f}")
assert abs(sum(probs) - 1.0) < 1e-10

# A basis state of A measured against A is deterministic.
a0 = reg.state("A", "a0")
assert abs(born_probability(r, a0, basis_wave(r, a0)) - 1.0) < 1e-12
print("basis states measure deterministically in their own observable")
