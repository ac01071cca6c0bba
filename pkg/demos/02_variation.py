"""q-variation of symbols and their atomic decomposition into normalised step functions.

Run:  python demos/02_variation.py
"""
import numpy as np

from lplab.lattice import FreqInterval, Grid
from lplab.variation import Symbol, decompose_rp, var_q, vq_dyadic

if __name__ == "__main__":
    g = Grid(1024, 32.0)
    H = Symbol.hilbert(g)
    print("Hilbert symbol, dyadic V_1.5 norm:", vq_dyadic(H, 1.5))

    # sin(log|xi|) oscillates once per e-fold: bounded on every dyadic block
    m = Symbol.from_function(g, lambda xi: np.sin(np.log(np.maximum(np.abs(xi), g.dxi))))
    for q in (1.0, 1.5, 2.0):
        print(f"q={q}:  Var_q on [1,8) = {var_q(m, FreqInterval(1.0, 8.0), q):.4f},  V_q(D) = {vq_dyadic(m, q):.4f}")

    dec = decompose_rp(m, FreqInterval(1.0, 8.0), q=1.5, p=2.0, levels=8)
    print(f"{len(dec.atoms)} atoms, sum |lambda| = {dec.lambda_sum:.4f}, constant = {dec.achieved_constant:.4f}")
    print(f"residual {dec.residual_sup:.2e} <= 2^-8 V = {2**-8 * dec.vq_norm:.2e}")
    for lam, atom in list(zip(dec.lambdas, dec.atoms))[:4]:
        print(f"  lambda={lam:.4f}  pieces={len(atom.coefficients)}  [atom]_2={atom.q_norm:.6f}")
