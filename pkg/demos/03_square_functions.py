"""Square functions: Plancherel for partitions and growth for the unit-interval family below p = 2.

Run:  python demos/03_square_functions.py
"""
import numpy as np

from lplab.lattice import FreqInterval, Grid, IntervalFamily, SampledSignal, dyadic_decomposition
from lplab.operators import square_function, test_function
from lplab.weights import weighted_norm

if __name__ == "__main__":
    g = Grid(4096, 32.0)
    rng = np.random.default_rng(0)
    f = SampledSignal(g, rng.normal(size=g.n))
    D = dyadic_decomposition(g)
    print(f"dyadic family: {len(D)} blocks;  ||S f||_2/||f||_2 = {square_function(D, f).l2_norm() / f.l2_norm():.15f}")

    print("\nB    p=1.5     p=2      p=3")
    for B in (8, 16, 32, 64):
        fB = test_function(FreqInterval(0.0, float(B)), g)
        unit = IntervalFamily.from_bounds((float(k), float(k + 1)) for k in range(B))
        Sf = square_function(unit, fB)
        row = [weighted_norm(Sf, p) / weighted_norm(fB, p) for p in (1.5, 2.0, 3.0)]
        print(f"{B:<4d} " + "  ".join(f"{r:.4f}" for r in row))
    # p = 1.5 keeps growing with B; p = 2 is pinned at 1
