#!/usr/bin/env python3
"""The two-route oracle: symbolic reduction versus direct matrix arithmetic.

Any raw expression tree can be evaluated two independent ways: reduce it to
a normal form and realize that, or realize every leaf and combine matrices
directly.  The two routes must agree to near machine precision; the fuzz
harness hammers this over random trees, dimensions, and bases.
"""

import numpy as np

from mqsym import (
    Registry,
    TAdd,
    TAdjoint,
    TMul,
    filter_of,
    leaf,
    normalize,
    random_realization,
    render_expr,
    symbol,
    verify_normal_form,
)
from mqsym.fuzz import FuzzConfig, render_summary, run_fuzz
from mqsym.realization import direct_tree_matrix, matrix_of

# A hand-built tree first: (M[a0<-b1]·M[b1])† + M[a0]·M[b0]
reg = Registry()
reg.define_observable("A", ["a0", "a1", "a2"])
reg.define_observable("B", ["b0", "b1", "b2"])
reg.freeze()
a0, b0 = reg.state("A", "a0"), reg.state("B", "b0")
b1 = reg.state("B", "b1")

tree = TAdd(TAdjoint(TMul(leaf(symbol(a0, b1)), leaf(filter_of(b1)))),
            TMul(leaf(filter_of(a0)), leaf(filter_of(b0))))
print("normal form:", render_expr(normalize(tree), reg))

r = random_realization(3, ["A", "B"], seed=5, registry=reg)
direct = direct_tree_matrix(r, tree)
reduced = matrix_of(r, normalize(tree))
print("two-route deviation:", f"{np.max(np.abs(direct - reduced)):.2e}")

report = verify_normal_form(r, tree)
print("verify report:", report)
assert report.passed

# Now the full harness: 300 random trees over dimensions 2..5.
summary = run_fuzz(FuzzConfig(dims=(2, 5), cases=300, seed=11))
print()
print(render_summary(summary))
assert summary.passed
