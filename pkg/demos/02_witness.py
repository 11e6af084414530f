"""Reading an infinite-dimensionality witness.

The closure checker stops as soon as it finds two extreme terms whose
iterated brackets must keep producing new ones.  This script prints the
five conditions for {d/dx, x^3 d/dx} and then builds the algebra
generation by generation to show the exponents escaping to infinity.
"""

from nls import VectorField, check_general, growth_sequence

ops = [VectorField.from_strings(["1"], ["x"]), VectorField.from_strings(["x^3"], ["x"])]
report = check_general(ops)
print(report.summary(), "found after", report.round, "round(s)")

w = report.witness
print("operators holding the witness:", [op.to_string(["x"]) for op in report.witness_operators])
c = w.conditions
print("bracket coefficient K =", c.K)
for label, flag in zip(("i", "ii", "iii", "iv", "v"), c.flags):
    print(f"  condition ({label}): {flag}")

print("largest squared exponent norm per generation:",
      growth_sequence(w.v, w.V, w.u, w.U, steps=6))
