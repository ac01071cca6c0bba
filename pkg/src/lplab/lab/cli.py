"""Command line entry point ``lab``.

Exit codes: 0 success, 1 experiment FAIL, 2 usage error.  Settings resolve as
command-line flag, then ``--config`` file (flat ``key = value`` lines), then
the built-in default.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from ..lattice import FreqInterval, Grid, IntervalFamily, SampledSignal
from ..operators import square_function
from ..variation import Symbol, decompose_rp, var_q, vq_dyadic
from ..weights import Weight, ap_constant, ap_extremal_window, power_weight, rh_constant, weighted_norm
from . import experiments as ex
from . import families as fam
from .norms import estimate_multiplier_norm
from .report import ExperimentReport, render

DEFAULT_N = 4096


class UsageError(Exception):
    pass


def read_config(path: str | None) -> dict[str, str]:
    if path is None:
        return {}
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def _floats(text: str) -> list[float]:
    return [float(t) for t in text.split(",") if t.strip()]


def _ints(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _bounds(text: str) -> list[tuple[float, float]]:
    out = []
    for part in text.split(","):
        lo, hi = part.split(":")
        out.append((float(lo), float(hi)))
    return out


# ---------------------------------------------------------------- parser


def _common(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("common")
    g.add_argument("--n", type=int, help="grid size (power of two)")
    g.add_argument("--period", type=float, help="period L of the torus")
    g.add_argument("--seed", type=int)
    g.add_argument("--trials", type=int)
    g.add_argument("--out", help="write output to FILE instead of stdout")
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--config", help="flat key = value file with defaults")
    g.add_argument("--timing", action="store_true", default=None, help="record runtime_ms in reports")


def _weight_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--weight", help="weight CSV (x, w)")
    p.add_argument("--alpha", type=float, help="power weight max(|x|, h)^alpha")


def _symbol_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--symbol", help="symbol CSV (xi, re, im)")
    p.add_argument("--builtin", choices=("hilbert", "marcinkiewicz", "sinlog", "one"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lab", description="Weighted multiplier and square function lab.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ap-constant", help="A_p constant of a weight")
    _common(p)
    _weight_args(p)
    p.add_argument("--p", type=float)
    p.add_argument("--s", type=float, help="also report the RH_s constant")
    p.set_defaults(func=cmd_ap_constant)

    p = sub.add_parser("variation", help="q-variation of a symbol")
    _common(p)
    _symbol_args(p)
    p.add_argument("--q", type=float)
    p.add_argument("--interval", help="lo:hi (write --interval=-1:1 for negative lo); omit for the dyadic V_q norm")
    p.set_defaults(func=cmd_variation)

    p = sub.add_parser("decompose", help="atomic decomposition of a V_q symbol")
    _common(p)
    _symbol_args(p)
    p.add_argument("--q", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--interval", help="lo:hi")
    p.add_argument("--levels", type=int)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("multiplier-norm", help="lower bound for a weighted multiplier norm")
    _common(p)
    _symbol_args(p)
    _weight_args(p)
    p.add_argument("--p", type=float)
    p.set_defaults(func=cmd_multiplier_norm)

    p = sub.add_parser("square-function", help="square function of a signal for an interval family")
    _common(p)
    _weight_args(p)
    p.add_argument("--family", help="lo:hi,lo:hi,...")
    p.add_argument("--signal", help="signal CSV (x, re, im); default a seeded band-limited signal")
    p.add_argument("--r", type=float, help="exponent r in [1,2] (S_r uses the l^{r'} norm)")
    p.add_argument("--p", type=float)
    p.set_defaults(func=cmd_square_function)

    ver = sub.add_parser("verify", help="theorem verification sweeps")
    vsub = ver.add_subparsers(dest="experiment", required=True)
    p = vsub.add_parser("theorem-a")
    _common(p)
    p.add_argument("--q", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--weights", choices=("power", "a1", "unweighted"))
    p.set_defaults(func=cmd_verify)
    p = vsub.add_parser("theorem-b")
    _common(p)
    p.add_argument("--q", type=float)
    p.add_argument("--p", type=float)
    p.add_argument("--weights", choices=("power", "a1", "unweighted"))
    p.add_argument("--q-ladder", type=_floats)
    p.set_defaults(func=cmd_verify)
    p = vsub.add_parser("theorem-b-weak")
    _common(p)
    p.add_argument("--weights", choices=("power", "a1", "unweighted"))
    p.set_defaults(func=cmd_verify)
    p = vsub.add_parser("fefferman-stein")
    _common(p)
    p.add_argument("--p", type=float)
    p.add_argument("--weights", choices=("power", "a1", "unweighted"))
    p.set_defaults(func=cmd_verify)
    p = vsub.add_parser("pointwise-g")
    _common(p)
    p.add_argument("--lam", type=float)
    p.add_argument("--family", choices=("whitney",) + fam.FAMILY_KINDS)
    p.set_defaults(func=cmd_verify)

    ce = sub.add_parser("counterexample", help="unboundedness probes")
    csub = ce.add_subparsers(dest="experiment", required=True)
    p = csub.add_parser("carleson")
    _common(p)
    p.add_argument("--p", type=float)
    p.add_argument("--bandwidths", type=_ints)
    p.set_defaults(func=cmd_carleson)
    p = csub.add_parser("equ2")
    _common(p)
    p.add_argument("--psi", choices=tuple(ex.PSI))
    p.add_argument("--p", type=float)
    p.add_argument("--kmax", type=int)
    p.add_argument("--lam", type=float)
    p.add_argument("--a0", type=float)
    p.add_argument("--expect", choices=("growth", "bounded"))
    p.set_defaults(func=cmd_equ2)

    rep = sub.add_parser("report", help="report utilities")
    rsub = rep.add_subparsers(dest="action", required=True)
    p = rsub.add_parser("render")
    p.add_argument("file")
    p.add_argument("--limit", type=int, default=40)
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)
    return ap


# --------------------------------------------------------------- settings


class Settings:
    """Flag, then config, then default."""

    def __init__(self, args: argparse.Namespace, parser: argparse.ArgumentParser):
        self.args = args
        self.config = read_config(getattr(args, "config", None))
        self.types = {a.dest: a.type for a in _leaf(parser, args)._actions}

    def get(self, key: str, default=None):
        v = getattr(self.args, key, None)
        if v is not None:
            return v
        if key in self.config:
            text = self.config[key]
            conv = self.types.get(key)
            if key == "timing":
                return text.lower() in ("1", "true", "yes", "on")
            try:
                return conv(text) if conv else text
            except ValueError as exc:
                raise UsageError(f"config value for {key!r}: {exc}") from exc
        return default

    def kw(self, **names):
        """Keyword arguments for the given keys that are set somewhere."""
        out = {}
        for key, target in names.items():
            v = self.get(key)
            if v is not None:
                out[target] = v
        return out


def _leaf(parser: argparse.ArgumentParser, args: argparse.Namespace) -> argparse.ArgumentParser:
    node = parser
    for attr in ("command", "experiment", "action"):
        name = getattr(args, attr, None)
        if name is None:
            continue
        for a in node._actions:
            if isinstance(a, argparse._SubParsersAction) and name in a.choices:
                node = a.choices[name]
                break
    return node


def _grid(s: Settings) -> Grid:
    n = s.get("n", DEFAULT_N)
    return Grid(n, s.get("period", float(n)))


def _weight(s: Settings, grid: Grid, required: bool = True) -> Weight | None:
    path, alpha = s.get("weight"), s.get("alpha")
    if path:
        w = Weight.from_csv(path, s.get("period"))
        if w.grid.n != grid.n:
            raise UsageError(f"weight file has {w.grid.n} samples, grid has {grid.n}")
        return Weight(grid, w.values)
    if alpha is not None:
        return power_weight(alpha, grid)
    if required:
        raise UsageError("give --weight FILE or --alpha A")
    return None


def _symbol(s: Settings, grid: Grid) -> Symbol:
    if s.get("symbol"):
        return Symbol.from_csv(s.get("symbol"), grid)
    name = s.get("builtin", "hilbert")
    if name == "one":
        return Symbol.constant(grid)
    return fam.symbol_family(grid, s.get("seed", 0))[name]


def _require(s: Settings, key: str):
    v = s.get(key)
    if v is None:
        raise UsageError(f"--{key.replace('_', '-')} is required")
    return v


# --------------------------------------------------------------- output


def _emit(s: Settings, text: str) -> None:
    out = s.get("out")
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_dict(s: Settings, d: dict) -> None:
    if s.get("format", "json") == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(["key", "value"])
        for k in sorted(d):
            wr.writerow([k, json.dumps(d[k]) if isinstance(d[k], (list, dict)) else d[k]])
        _emit(s, buf.getvalue())
    else:
        _emit(s, json.dumps(d, sort_keys=True, indent=2) + "\n")


def _emit_report(s: Settings, rep: ExperimentReport) -> int:
    _emit(s, rep.to_csv() if s.get("format", "json") == "csv" else rep.to_json())
    if s.get("out"):
        sys.stderr.write(f"{rep.experiment}: envelope {rep.envelope:.6g} {'PASS' if rep.passed else 'FAIL'}\n")
    return 0 if rep.passed else 1


# -------------------------------------------------------------- commands


def cmd_ap_constant(s: Settings) -> int:
    grid = _grid(s)
    w = _weight(s, grid)
    p = _require(s, "p")
    out = {"p": p, "ap_constant": ap_constant(w, p), "extremal_window": list(ap_extremal_window(w, p)),
           "n": grid.n, "period": grid.period}
    if s.get("s") is not None:
        out["s"] = s.get("s")
        out["rh_constant"] = rh_constant(w, s.get("s"))
    _emit_dict(s, out)
    return 0


def cmd_variation(s: Settings) -> int:
    grid = _grid(s)
    m = _symbol(s, grid)
    q = _require(s, "q")
    iv = s.get("interval")
    if iv:
        (lo, hi), = _bounds(iv)
        out = {"q": q, "interval": [lo, hi], "var_q": var_q(m, FreqInterval(lo, hi), q)}
    else:
        out = {"q": q, "vq_dyadic": vq_dyadic(m, q)}
    _emit_dict(s, out)
    return 0


def cmd_decompose(s: Settings) -> int:
    grid = _grid(s)
    m = _symbol(s, grid)
    (lo, hi), = _bounds(_require(s, "interval"))
    dec = decompose_rp(m, FreqInterval(lo, hi), s.get("q", 1.5), s.get("p", 2.0), s.get("levels", 8))
    _emit(s, dec.to_json(sort_keys=True, indent=2) + "\n")
    return 0


def cmd_multiplier_norm(s: Settings) -> int:
    grid = _grid(s)
    m = _symbol(s, grid)
    w = _weight(s, grid, required=False)
    est = estimate_multiplier_norm(m, _require(s, "p"), w, budget=s.get("trials", 16), seed=s.get("seed", 0))
    _emit_dict(s, asdict(est) | {"kind": "lower bound"})
    return 0


def cmd_square_function(s: Settings) -> int:
    grid = _grid(s)
    family = IntervalFamily.from_bounds(_bounds(_require(s, "family")))
    if s.get("signal"):
        data = np.loadtxt(s.get("signal"), delimiter=",", skiprows=1, ndmin=2)
        if len(data) != grid.n:
            raise UsageError(f"signal file has {len(data)} samples, grid has {grid.n}")
        f = SampledSignal(grid, data[:, 1] + 1j * data[:, 2])
    else:
        fr, c = fam.random_bandlimited(fam.rng_for(s.get("seed", 0), 8), grid.period, grid.nyquist[1] / 2)
        f = fam.trig_signal(grid, fr, c)
    r, p = s.get("r", 2.0), s.get("p", 2.0)
    sq = square_function(family, f, r)
    if s.get("format", "json") == "csv":
        buf = io.StringIO()
        np.savetxt(buf, np.column_stack([grid.x, f.abs, sq.real]), delimiter=",", header="x,abs_f,Sf", comments="")
        _emit(s, buf.getvalue())
        return 0
    w = _weight(s, grid, required=False)
    _emit_dict(s, {"r": r, "p": p, "intervals": len(family),
                   "ratio": weighted_norm(sq, p, w) / weighted_norm(f, p, w)})
    return 0


def cmd_verify(s: Settings) -> int:
    name = s.args.experiment
    common = s.kw(n="n", period="period", seed="seed", trials="trials", timing="timing")
    if name == "theorem-a":
        rep = ex.verify_theorem_a(**s.kw(q="q", p="p", weights="weights"), **common)
    elif name == "theorem-b":
        rep = ex.verify_theorem_b(**s.kw(q="q", p="p", weights="weights", q_ladder="q_ladder"), **common)
    elif name == "theorem-b-weak":
        rep = ex.verify_theorem_b_weak(**s.kw(weights="weights"), **common)
    elif name == "fefferman-stein":
        rep = ex.verify_fefferman_stein(**s.kw(p="p", weights="weights"), **common)
    else:
        rep = ex.verify_pointwise_g(**s.kw(lam="lam", family="family"), **common)
    return _emit_report(s, rep)


def cmd_carleson(s: Settings) -> int:
    kw = s.kw(p="p", bandwidths="bandwidths", n="n", period="period", seed="seed", timing="timing")
    return _emit_report(s, ex.carleson_counterexample(**kw))


def cmd_equ2(s: Settings) -> int:
    psi, kmax = s.get("psi", "sqrt"), s.get("kmax", 64)
    a = ex.gap_sequence(psi, kmax, s.get("lam", 2.0), s.get("a0", 1.0))
    expect = s.get("expect", "bounded" if psi == "linear" else "growth")
    budget = 1.3 if expect == "bounded" else 2.0
    rep = ex.check_necessary_condition(a, s.get("p", 3.0), kmax, growth_budget=budget, expect=expect,
                                       label=psi, timing=bool(s.get("timing")))
    rep.seed = s.get("seed", 0)
    return _emit_report(s, rep)


def cmd_render(s: Settings) -> int:
    rep = ExperimentReport.from_json(Path(s.args.file).read_text())
    _emit(s, render(rep, s.args.limit))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(Settings(args, parser))
    except (UsageError, ValueError, FileNotFoundError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else exc
        sys.stderr.write(f"lab: error: {msg}\n")
        return 2


run_cli = main


if __name__ == "__main__":
    sys.exit(main())
