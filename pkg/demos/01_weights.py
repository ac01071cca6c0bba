"""Power weights: A_p constants, the duality identity and Buckley-type growth of ||M||.

Run:  python demos/01_weights.py
"""
from lplab.lattice import Grid
from lplab.maximal import maximal_norm_bound, measure_buckley
from lplab.weights import ap_constant, power_weight, rh_constant, weight_report

if __name__ == "__main__":
    g = Grid(256, 8.0)
    p = 2.0

    print("alpha   [w]_A2    measured ||M||   certified bound")
    for alpha in (0.0, 0.3, 0.6, 0.9):
        w = power_weight(alpha, g)
        meas = measure_buckley(w, p)
        print(f"{alpha:5.2f}  {meas.ap_constant:8.4f}  {meas.measured:14.4f}  {maximal_norm_bound(w, p):14.4f}")

    # [w]_{A_p}^{p'-1} = [sigma]_{A_{p'}} with sigma = w^{1-p'}
    w = power_weight(-0.4, g)
    for p in (1.5, 3.0):
        pc = p / (p - 1)
        lhs = ap_constant(w, p) ** (pc - 1)
        rhs = ap_constant(w.power(1 - pc), pc)
        print(f"duality at p={p}: {lhs:.12f} vs {rhs:.12f}")

    print(weight_report(power_weight(-0.5, g), 2.0, s=1.5, s_max=8.0))
    # |x|^{-1/2} is in RH_s only for s < 2, but the grid caps the spike at h^{-1/2},
    # so the cut-off only shows up as RH constants that grow with n, fastest past s = 2
    print("\ns     RH_s (n=256)  RH_s (n=4096)")
    for s in (1.5, 1.9, 2.5, 4.0):
        vals = [rh_constant(power_weight(-0.5, Grid(n, 8.0)), s) for n in (256, 4096)]
        print(f"{s:4.1f}  {vals[0]:12.4f}  {vals[1]:13.4f}")
