"""A three-variable pair that closes, and a nearby one that does not.

Both systems share X2 = u w d/du + u d/dv + (w^2/2) d/dw.  In the first, X1
has components (v^2 w^2/2 - 2u^2, v^2 w - 2uv, v w^2 - 2uw) and the pair
spans a two-dimensional algebra.  Halving the last two components of X1
destroys closure, and the checker returns a vertex witness instead.
"""

import time
from pathlib import Path

from nls import check_general, load_system

DATA = Path(__file__).parent / "data"

for name in ("three_variable.json", "three_variable_as_printed.json"):
    doc = load_system(DATA / name)
    start = time.perf_counter()
    report = check_general(doc.fields())
    print(f"{name}: {report.summary()} ({time.perf_counter() - start:.2f}s)")
    if report.is_finite:
        for field in report.basis.fields():
            print("   basis:", field.to_string(doc.variables))
