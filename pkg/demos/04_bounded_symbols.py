"""Constructing bounded symbols on K_{z^N}: windows, minimal extensions,
assembly, and the Blaschke transport.

Run:  python demos/04_bounded_symbols.py
"""

import numpy as np

from ttolab import (FejerWindowSet, FourierPolynomial, ModelSpace, Monomial,
                    TTOperator, assemble_bounded_symbol, blaschke_transport,
                    fejer_split, minimal_analytic_extension)

print("== Fejer windows: an exact rational partition of unity ==")
N = 16
ws = FejerWindowSet(N)
print(f"N = {N}, M = {ws.M}; partition exact on |n| <= {ws.partition_range}")
print("discrete L^1 norms (eta_1 exactly 1, the others at most 3):",
      tuple(round(v, 6) for v in ws.l1_norms()))

rng = np.random.default_rng(3)
phi = FourierPolynomial({k: complex(rng.standard_normal(), rng.standard_normal())
                         for k in range(-(N - 1), N)})
p1, p2, p3 = fejer_split(phi, N)
print("split supports: central", (min(p1.support), max(p1.support)),
      " analytic", (min(p2.support), max(p2.support)),
      " coanalytic", (min(p3.support), max(p3.support)))
total_err = max(abs(complex(p1.coeff(k) + p2.coeff(k) + p3.coeff(k))
                    - complex(phi.coeff(k))) for k in range(-(N - 1), N))
print(f"reconstruction defect (exact arithmetic): {total_err}")

print()
print("== the minimal-norm analytic extension ==")
ext = minimal_analytic_extension([1.0, 1.0])
print("data [1, 1]: minimal sup norm =", ext.norm, "(the golden ratio)")
print("extension is an all-pass multiple: modulus defect =",
      f"{ext.modulus_defect:.2e}")

print()
print("== assembling a bounded symbol for a random Toeplitz matrix ==")
col = rng.standard_normal(N) + 1j * rng.standard_normal(N)
row = rng.standard_normal(N) + 1j * rng.standard_normal(N)
row[0] = col[0]
i = np.arange(N)
M = np.where(i[:, None] >= i[None, :], col[np.maximum(i[:, None] - i[None, :], 0)],
             row[np.maximum(i[None, :] - i[:, None], 0)])
space = ModelSpace(Monomial(N))
res = assemble_bounded_symbol(TTOperator(space, matrix=M))
print(f"sup norm of the produced symbol: {res.sup_norm:.4f}")
print(f"rho-hat of the operator:         {res.rho_hat:.4f}")
print(f"measured constant (sup/rho):     {res.measured_constant:.4f}")
print(f"compression reproduced to:       {res.build_residual:.2e}")

print()
print("== transport to K_{b_alpha^N} ==")
moved = blaschke_transport(TTOperator(space, matrix=M), 0.35 - 0.2j)
print("transported operator lives on", moved.space.theta.to_json()["type"],
      "space; norms agree:",
      f"{abs(np.linalg.norm(moved.matrix) - np.linalg.norm(M)):.2e}")
