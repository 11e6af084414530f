"""First-order convergence of the matrix scheme.

W' = A + B W + W C + W D W is stepped with the fractional-linear update and
compared with a reference obtained by linearising the flow and summing the
matrix exponential exactly.  Halving h should roughly halve the error.
"""

from fractions import Fraction

import numpy as np

from nls import MatrixRiccatiSystem, matrix_riccati_integrate, matrix_riccati_oracle

F = Fraction
sys_ = MatrixRiccatiSystem(A=[[F(1), F(0)], [F(1, 2), F(-1)]],
                           B=[[F(0), F(1)], [F(-1), F(0)]],
                           C=[[F(1, 4), F(0)], [F(0), F(-1, 2)]],
                           D=[[F(1, 2), F(0)], [F(0), F(1, 4)]])
W0 = [[F(0), F(1, 2)], [F(-1, 2), F(0)]]
T = F(1, 2)
exact = matrix_riccati_oracle(sys_, 0, W0, T).astype(float)
print("reference W(1/2):\n", np.array2string(exact, precision=6))

previous = None
for steps in (10, 20, 40, 80):
    W = matrix_riccati_integrate(sys_, 0, W0, T / steps, steps, mode="float").states[-1]
    err = float(np.max(np.abs(W - exact)))
    note = f"  ratio {previous / err:.3f}" if previous else ""
    print(f"h=1/{2 * steps:<4} error {err:.3e}{note}")
    previous = err
