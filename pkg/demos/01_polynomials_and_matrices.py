"""Polynomials applied to matrices, and the Perron reduction.

The objects under study are polynomials p with p(A) entrywise nonnegative
for every entrywise-positive A. This walk-through shows the evaluation
conventions and why positive row-stochastic matrices are the only inputs
that ever need to be searched.
"""

import numpy as np

from nonnegcone import Polynomial, eval_matrix, eval_scalar, perron_normalize

# -- a polynomial is a coefficient tuple, constant term first
p = Polynomial([1.0, 1.0, -2.0, 1.0, 1.0])
print("p coefficients:", p.coeffs)
print("degree:", p.degree())
print("p(2) =", eval_scalar(p, 2.0))

# -- matrix evaluation uses powers of A, with A^0 = I
half = np.full((2, 2), 0.5)
print("\nA = the rank-one averaging matrix, A^2 = A:")
print(half)
print("p(A):")
print(eval_matrix(p, half))

# -- any positive matrix factors through a row-stochastic one
a = np.array([[1.0, 2.0], [3.0, 4.0]])
dec = perron_normalize(a)
print("\nA = [[1,2],[3,4]] factors as rho * D S D^-1 with S stochastic")
print("rho =", dec.rho, "(exact value (5 + sqrt 33)/2)")
print("S row sums:", dec.s.sum(axis=1))
print("reconstruction error:", np.max(np.abs(dec.reconstruct() - a)))

# the factorization conjugates p(A) by a positive diagonal, so entrywise
# signs of p(A) and p(rho S) agree; membership questions reduce to pairs
# (rho, S) with S positive stochastic
print("\nmin entry of p(A):       ", eval_matrix(p, a).min())
print("min entry of p(rho S):   ", eval_matrix(p, dec.rho * dec.s).min())
print("signs agree:", np.sign(eval_matrix(p, a).min())
      == np.sign(eval_matrix(p, dec.rho * dec.s).min()))
