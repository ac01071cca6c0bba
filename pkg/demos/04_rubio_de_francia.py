"""Rubio de Francia iteration: an A_1 majorant and the factorised A_2 weight it produces.

Run:  python demos/04_rubio_de_francia.py
"""
import numpy as np

from lplab.lattice import Grid, SampledSignal
from lplab.maximal import factorized_weight, rdf_iterate
from lplab.weights import power_weight

if __name__ == "__main__":
    g = Grid(128, 4.0)
    w = power_weight(0.3, g)
    rng = np.random.default_rng(1)
    h = SampledSignal(g, rng.exponential(size=g.n) * (rng.random(g.n) < 0.2))

    r = rdf_iterate(h, w, 2.0)
    print(f"||M|| bound B      = {r.norm_bound:.4f}  ({r.terms} terms, tail {r.tail_bound:.1e})")
    print(f"h <= Rh            : {r.majorizes}")
    print(f"||Rh|| / ||h||     = {r.norm_ratio:.4f}  (<= 2)")
    print(f"sup M(Rh)/Rh       = {r.a1_ratio:.4f}  (<= 2B = {2 * r.norm_bound:.4f})")

    fw = factorized_weight(SampledSignal(g, rng.exponential(size=g.n) + 0.1),
                           SampledSignal(g, rng.exponential(size=g.n) + 0.1), w, 2.0)
    print(f"[w_gh]_A2 = {fw.a2_constant:.3f} <= {fw.a1_left:.3f} * {fw.a1_right:.3f} = {fw.product_bound:.3f}: {fw.holds}")
