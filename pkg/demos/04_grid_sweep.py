"""Sign map of Q2 over amplitude and reflectance, as CSV rows.

Equivalent command line:
    photonadd sweep --scheme bs-coherent --witness q2 --orders 4 \
        --axis1 alpha=0:6:0.5 --axis2 reflectance=0:1:0.1 --eta 0.6 --ps 0.7

Run: python3 demos/04_grid_sweep.py
"""

from photonadd import sweep
from photonadd.sweep import Axis, SweepSpec

spec = SweepSpec(
    scheme="bs-coherent",
    witness="q2",
    orders=(4,),
    axis1=Axis("alpha", 0.0, 6.0, 0.5),
    axis2=Axis("reflectance", 0.0, 1.0, 0.1),
    fixed={"eta": 0.6, "ps": 0.7},
)
rows = sweep.run_sweep(spec)
print(sweep.format_csv(rows[:6]), end="")
print(f"... {len(rows)} rows")

# a coarse text rendering of the sign column: '-' nonclassical, '+' classical
print("\nR \\ alpha " + "".join(f"{a:4.1f}" for a in spec.axis1.values()))
for r in spec.axis2.values():
    line = "".join(
        {-1: "   -", 0: "   0", 1: "   +"}[row.sign] for row in rows if row.axis2_value == r
    )
    print(f"{r:9.1f} {line}")
