"""The verification sweeps and the two counterexample probes, as the CLI runs them.

Run:  python demos/05_sweeps.py          (about half a minute)
Writes plot-ready CSV tables next to this file in demos/out/.
"""
from pathlib import Path

from lplab.lab import experiments as ex
from lplab.lab.report import doubling_drift, envelopes_by

if __name__ == "__main__":
    out = Path(__file__).parent / "out"
    out.mkdir(exist_ok=True)

    rep = ex.verify_theorem_b(q=1.5, p=3.0, n=2048, trials=200, q_ladder=(1.25, 1.5, 1.75))
    print(f"theorem-b: envelope {rep.envelope:.4f}, doubling drift {doubling_drift(rep, {'set': 'main'}):.1e}")
    print("  envelope by q:", envelopes_by(rep, "q", {"set": "ladder"}))
    print("  by weight    :", {k: round(v, 4) for k, v in envelopes_by(rep, "w", {"set": "main"}).items()})

    rep = ex.verify_pointwise_g(lam=2.0, trials=30)
    print(f"pointwise-g: envelope {rep.envelope:.4f}, drift {doubling_drift(rep):.1e}")

    rep = ex.carleson_counterexample(1.5)
    (out / "carleson_p1.5.csv").write_text(rep.to_csv())
    print("carleson p=1.5:", [round(v, 4) for _, v in rep.ratios], "PASS" if rep.passed else "FAIL")

    # rho(k) for three gap laws; sqrt gaps grow, but slowly (the growth rate tends to k^{1/6} at p = 3)
    for psi in ("sqrt", "linear", "arithmetic"):
        r = ex.check_necessary_condition(ex.gap_sequence(psi, 512), 3.0, 512)
        rho = dict(r.ratios)
        (out / f"rho_{psi}.csv").write_text(r.to_csv())
        print(f"rho {psi:10s}: rho(64)/rho(8) = {rho['k=64'] / rho['k=8']:.3f}, "
              f"rho(512)/rho(64) = {rho['k=512'] / rho['k=64']:.3f}")
