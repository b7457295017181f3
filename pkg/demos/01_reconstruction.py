"""Reconstruct a bipartite operator from its values on product states.

A non-negative frame function over product orthonormal bases that satisfies
no-signalling is induced by a unique self-adjoint operator.  This demo walks
through the constructive side of that statement: sample a frame function on a
spanning family of product states, solve the resulting linear system, and
confirm that the recovered operator reproduces the function everywhere.
"""

import numpy as np

from nsgleason import (
    OperatorInduced,
    check_framefn,
    make_rng,
    make_signalling_example,
    random_density,
    reconstruct_pvm,
    sample_from_operator,
    spanning_design,
)

rng = make_rng(2024)
dims = (3, 3)

print("=== spanning design ===")
design = spanning_design(dims, seed=2024)
print(f"{len(design.states)} product states spanning a "
      f"{np.prod(dims) ** 2}-dimensional operator space "
      f"(feature rank {design.feature_rank}, full rank: {design.full_rank})")

print("\n=== round trip for a random density matrix ===")
rho = random_density(rng, dims)
table = sample_from_operator(rho, design.states)
rec = reconstruct_pvm(table, design)
err = np.linalg.norm(rec.t.mat - rho.mat)
print(f"Frobenius error    : {err:.3e}")
print(f"trace of estimate  : {rec.t.trace():.12f}")
print(f"holdout residual   : {rec.residual:.3e}")
print(f"classification     : {rec.classification.name}")

print("\n=== a signalling family is caught, not fitted ===")
bad = make_signalling_example(dims, np.pi / 4)
report = check_framefn(bad, trials=100, seed=0)
print(f"max marginal discrepancy across remote basis changes: "
      f"{report.max_discrepancy:.4f}")
rec_bad = reconstruct_pvm(bad, design)
print(f"least-squares residual when forcing an operator fit : "
      f"{rec_bad.residual:.4f}")
print("No operator reproduces a signalling function; the residual is the "
      "witness.")
