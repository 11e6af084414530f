"""Why the Riccati equation has a superposition rule.

x' = a0(t) + a1(t) x + a2(t) x^2 is a combination of three operators
d/dx, x d/dx, x^2 d/dx.  Their brackets stay in their span, so they form a
three-dimensional Lie algebra.  Add a cubic term and closure fails.
"""

from pathlib import Path

from nls import check_general, lie_bracket, load_system, verify_finite

DATA = Path(__file__).parent / "data"

doc = load_system(DATA / "riccati.json")
X = doc.fields()
names = doc.labels()
for a in range(3):
    for b in range(a + 1, 3):
        print(f"[{names[a]}, {names[b]}] = {lie_bracket(X[a], X[b]).to_string(doc.variables)}")

report = check_general(X)
print(report.summary())
print("every bracket of the basis re-checked in its span:", verify_finite(report))

cubic = check_general(load_system(DATA / "cubic.json").fields())
print("with x^2 d/dx and x^3 d/dx instead:", cubic.summary())
