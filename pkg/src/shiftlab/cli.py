"""Batch front end: read a JSON job spec, run one command, write JSON/CSV.

Job spec::

    {"command": "pressure",
     "model": {"family": "staircase", "f": "ceil_n_over:4"},
     "potential": {"t": 1.0},
     "params": {"n_max": 12},
     "cap": 2000000}

Exit codes: 0 success, 1 invalid spec or input, 2 enumeration cap exceeded,
3 a requested certificate/tolerance could not be reached.  On failure an
error JSON is printed (and written to ``error.json`` under ``--out``).
"""
from __future__ import annotations

import argparse
import copy
import csv
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Tuple

import mpmath
import numpy as np

from . import __version__
from .approach import approachability_report, repair_budget
from .coded import SeriesUncertified, bowen_root, pressure_from_series
from .gaplab import bound_report, build_psi, derive_params, enumerate_J, sum_g_check
from .models import (DEFAULT_CAP, BlockCode, CapExceeded, Staircase, apply_factor_code,
                     model_from_config)
from .sequences import parse_sequence, sequence_from_function
from .structure import sardinas_patterson, staircase_decompose, staircase_generators
from .thermo import (Potential, hyperbolicity_check, potential_from_config,
                     pressure_bracket)
from .words import fmt, word

EXIT_OK, EXIT_SPEC, EXIT_CAP, EXIT_UNCERTIFIED = 0, 1, 2, 3


class SpecError(ValueError):
    pass


class Uncertified(RuntimeError):
    pass


DEFAULTS: Dict[str, dict] = {
    "enumerate": {"n_min": 1, "n_max": 10, "words": False},
    "pressure": {"n_max": 10, "n_lower": None},
    "hyperbolicity": {"n_max": 12, "t_grid": None, "tol": 1e-9},
    "approach": {"selector": "G*", "g": "repair", "n_min": 1, "n_max": 10},
    "series": {"t_grid": [1.0], "tol": 1e-10},
    "bowen-root": {"gamma": None, "tol": 1e-3, "t_range": [1e-3, 64.0]},
    "decipher": {"code": None, "truncation": 8},
    "decompose": {"words": []},
    "gap-lab": {"mode": "formula", "alpha": 1.0, "C": 1.0, "g": "const:1", "N": 1,
                "m": None, "beta": None, "sum_g_trials": 1000, "words": [],
                "partitions": None, "k": 2},
    "factor": {"r": 0, "code": "identity", "g": "const:1", "n_min": 1, "n_max": 8},
}
COMMANDS = tuple(DEFAULTS)

CSV_COLUMNS = {
    "enumerate": "n, count, complete",
    "pressure": "n, logLambda, upper, lower, lower_Gstar, verdict",
    "hyperbolicity": "t, n, logLambda, upper, lower, supI_lower, supI_upper, margin, verdict",
    "approach": "n, worst_distance, budget, pass, witness, status",
    "series": "t, value, lower, upper, zero, N, F1, tail1, converged, x_lo, x_hi",
    "bowen-root": "kind, t_lo, t_hi, width, converged",
    "decipher": "unique, witness, truncation, code_size",
    "decompose": "word, prefix, core, suffix, alternatives",
    "gap-lab": "formula: quantity, value; toy: word, parts, psi, phi_ok, betam_ok, markers_recovered, k",
    "factor": "n, source_count, image_count, same_language, g, g_tilde",
}


# ---------------------------------------------------------------- spec handling

def resolve_spec(spec: dict, cap: int | None = None) -> dict:
    if not isinstance(spec, dict):
        raise SpecError("job spec must be a JSON object")
    unknown = set(spec) - {"command", "model", "potential", "params", "cap"}
    if unknown:
        raise SpecError(f"unknown top-level keys: {sorted(unknown)}")
    cmd = spec.get("command")
    if cmd not in DEFAULTS:
        raise SpecError(f"command must be one of {list(COMMANDS)}, got {cmd!r}")
    params = spec.get("params") or {}
    if not isinstance(params, dict):
        raise SpecError("params must be an object")
    bad = set(params) - set(DEFAULTS[cmd])
    if bad:
        raise SpecError(f"unknown params for {cmd}: {sorted(bad)}")
    out = {
        "command": cmd,
        "model": spec.get("model", {"family": "full"}),
        "potential": spec.get("potential"),
        "params": {**copy.deepcopy(DEFAULTS[cmd]), **params},
        "cap": int(cap if cap is not None else spec.get("cap", DEFAULT_CAP)),
    }
    if out["cap"] <= 0:
        raise SpecError("cap must be positive")
    return out


def _clean(x):
    """JSON-safe values: non-finite floats become strings, numpy scalars plain."""
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, np.generic):
        x = x.item()
    if isinstance(x, float) and not math.isfinite(x):
        return "nan" if math.isnan(x) else ("inf" if x > 0 else "-inf")
    if isinstance(x, mpmath.mpf):
        return mpmath.nstr(x, 17)
    return x


def _model(spec):
    try:
        return model_from_config(spec["model"])
    except (KeyError, TypeError) as exc:
        raise SpecError(f"bad model config: {exc}") from None


def _potential(spec, model, default="zero") -> Potential:
    cfg = spec["potential"] if spec["potential"] is not None else default
    if isinstance(cfg, dict) and "t" in cfg and "alphabet" not in cfg:
        cfg = {**cfg, "alphabet": model.alphabet}
    pot = potential_from_config(cfg)
    if pot.alphabet != model.alphabet:
        if cfg == "zero":
            return Potential.zero(model.alphabet)
        raise SpecError("potential alphabet does not match the model")
    return pot


def _staircase(model) -> Staircase:
    if not isinstance(model, Staircase):
        raise SpecError("this command needs a staircase model")
    return model


def _map(fn: Callable, items: List, threads: int) -> List:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- commands

def cmd_enumerate(spec, threads) -> Tuple[List[dict], dict]:
    model, p = _model(spec), spec["params"]
    rows, words = [], {}
    for n in range(p["n_min"], p["n_max"] + 1):
        sl = model.language(n, spec["cap"])
        if not sl.complete:
            raise CapExceeded(f"L_{n} exceeds cap {spec['cap']}")
        rows.append({"n": n, "count": len(sl), "complete": sl.complete})
        if p["words"]:
            words[str(n)] = [fmt(w) for w in sl.words]
    return rows, ({"words": words} if p["words"] else {})


def cmd_pressure(spec, threads):
    model, p = _model(spec), spec["params"]
    pot = _potential(spec, model)
    pb = pressure_bracket(model, pot, p["n_max"], spec["cap"], p["n_lower"])
    rows = [{**r, "lower": pb.lower, "verdict": None} for r in pb.rows]
    return rows, {"bracket": pb.to_dict()}


def cmd_hyperbolicity(spec, threads):
    model, p = _model(spec), spec["params"]
    if p["t_grid"]:
        jobs = [(float(t), Potential.indicator(float(t), model.alphabet)) for t in p["t_grid"]]
    else:
        pot = _potential(spec, model)
        jobs = [(pot.indicator_t(), pot)]

    def run(job):
        t, pot = job
        v = hyperbolicity_check(model, pot, p["n_max"], p["tol"], spec["cap"])
        last = v.pressure.rows[-1] if v.pressure.rows else {}
        row = {"t": t, "n": p["n_max"], "logLambda": last.get("logLambda"),
               "upper": v.pressure.upper, "lower": v.pressure.lower,
               "supI_lower": v.ergodic.lower, "supI_upper": v.ergodic.upper,
               "margin": v.margin, "verdict": v.verdict}
        return row, v.to_dict()

    out = _map(run, jobs, threads)
    return [r for r, _ in out], {"details": [d for _, d in out]}


def _mistake_fn(g_cfg, model):
    if g_cfg == "repair":
        st = _staircase(model)
        return sequence_from_function("repair-budget", lambda n: repair_budget(st, n))
    return parse_sequence(g_cfg)


def cmd_approach(spec, threads):
    model, p = _model(spec), spec["params"]
    g = _mistake_fn(p["g"], model)
    n_min = p["n_min"]
    if isinstance(model, Staircase):
        n_min = max(n_min, 2 * model.n1)
    ns = list(range(p["n_min"], p["n_max"] + 1))
    rows = _map(lambda n: approachability_report(model, p["selector"], g, [n], spec["cap"],
                                                 n_min)[0].to_dict(), ns, threads)
    return rows, {"g": p["g"], "all_pass": all(r["pass"] is not False for r in rows)}


def cmd_series(spec, threads):
    st, p = _staircase(_model(spec)), spec["params"]

    def run(t):
        return pressure_from_series(st.f, float(t), p["tol"]).to_dict()

    try:
        rows = _map(run, list(p["t_grid"]), threads)
    except SeriesUncertified as exc:
        raise Uncertified(str(exc)) from None
    return rows, {}


def cmd_bowen_root(spec, threads):
    st, p = _staircase(_model(spec)), spec["params"]
    rb = bowen_root(st.f, p["gamma"], p["tol"], tuple(p["t_range"]))
    d = rb.to_dict()
    if rb.kind == "unknown" or (rb.kind == "finite" and not rb.converged):
        raise Uncertified(f"Bowen root not certified to tol={p['tol']}: {d['evidence']}")
    row = {k: d[k] for k in ("kind", "t_lo", "t_hi", "width", "converged")}
    return [row], {"verdict": rb.kind, "bracket": [rb.t_lo, rb.t_hi], "evidence": d["evidence"]}


def cmd_decipher(spec, threads):
    p = spec["params"]
    if p["code"] is not None:
        code = [word(c) for c in p["code"]]
        trunc = None
    else:
        code = staircase_generators(_staircase(_model(spec)), p["truncation"])
        trunc = p["truncation"]
    v = sardinas_patterson(code)
    row = {"unique": v.unique, "witness": fmt(v.witness) if v.witness else None,
           "truncation": trunc, "code_size": len(code)}
    return [row], v.to_dict()


def cmd_decompose(spec, threads):
    st, p = _staircase(_model(spec)), spec["params"]
    rows = []
    for w in p["words"]:
        d = staircase_decompose(w, st)
        rows.append({"word": fmt(word(w)), "prefix": fmt(d.prefix),
                     "core": ".".join(fmt(g) for g in d.core), "suffix": fmt(d.suffix),
                     "alternatives": d.alternatives})
    return rows, {}


def cmd_gap_lab(spec, threads):
    model, p = _model(spec), spec["params"]
    if p["mode"] not in ("formula", "toy"):
        raise SpecError("gap-lab mode must be 'formula' or 'toy'")
    if p["mode"] == "formula":
        gp = derive_params(model, p["alpha"], p["C"], p["g"], p["N"], beta=p["beta"], m=p["m"])
        rep = bound_report(gp)
        flipped = bound_report(gp, gp.delta_exp - 1)
        sg = sum_g_check(p["g"], gp.gamma, gp.L, trials=p["sum_g_trials"])
        rows = [{"quantity": k, "value": v} for k, v in sorted(rep.items())]
        return rows, {"params": gp.to_dict(), "bounds": rep, "flipped_delta": flipped,
                      "sum_g": sg}
    gp = derive_params(model, p["alpha"], p["C"], p["g"], p["N"], beta=p["beta"],
                       m=p["m"] if p["m"] is not None else 2)
    records, rows = [], []
    for w in p["words"]:
        w = word(w)
        parts_list = p["partitions"] or enumerate_J(len(w), gp.m, p["k"])
        for parts in parts_list:
            rec = build_psi(w, parts, gp, model, p["g"])
            records.append(rec.to_dict())
            rows.append({"word": fmt(w), "parts": "+".join(map(str, parts)), "psi": fmt(rec.psi),
                         "phi_ok": rec.phi_ok, "betam_ok": rec.betam_ok,
                         "markers_recovered": rec.markers_recovered, "k": len(parts)})
    return rows, {"params": gp.to_dict(), "records": records}


def _block_code(cfg, r: int, alphabet: int) -> BlockCode:
    if cfg == "identity":
        return BlockCode.from_function(r, alphabet, lambda w: w[0], alphabet)
    if cfg == "sum":
        return BlockCode.from_function(r, alphabet, lambda w: sum(w) % alphabet, alphabet)
    if isinstance(cfg, dict) and "table" in cfg:
        table = {word(k): int(v) for k, v in cfg["table"].items()}
        return BlockCode(r, table, int(cfg.get("out_alphabet", alphabet)))
    raise SpecError(f"unknown block code {cfg!r}")


def cmd_factor(spec, threads):
    model, p = _model(spec), spec["params"]
    r = int(p["r"])
    code = _block_code(p["code"], r, model.alphabet)
    g = parse_sequence(p["g"])
    rows = []
    for n in range(p["n_min"], p["n_max"] + 1):
        image, gt = apply_factor_code(model, code, g, n, spec["cap"])
        src = model.language(n, spec["cap"])
        rows.append({"n": n, "source_count": len(src), "image_count": len(image),
                     "same_language": image.word_set == src.word_set,
                     "g": g(n + 2 * r), "g_tilde": gt(n)})
    formula = f"({4 * r + 3})*g(n+{2 * r})+{4 * r}"
    return rows, {"formula": "(4r+3)g(n+2r)+4r", "formula_at_r": formula, "r": r}


HANDLERS = {
    "enumerate": cmd_enumerate, "pressure": cmd_pressure, "hyperbolicity": cmd_hyperbolicity,
    "approach": cmd_approach, "series": cmd_series, "bowen-root": cmd_bowen_root,
    "decipher": cmd_decipher, "decompose": cmd_decompose, "gap-lab": cmd_gap_lab,
    "factor": cmd_factor,
}


# ---------------------------------------------------------------- run + output

def versions() -> dict:
    return {"shiftlab": __version__, "numpy": np.__version__, "mpmath": mpmath.__version__}


def run(spec: dict, threads: int = 1, cap: int | None = None) -> dict:
    """Execute a job spec and return the report (raises on failure)."""
    resolved = resolve_spec(spec, cap)
    rows, result = HANDLERS[resolved["command"]](resolved, max(1, int(threads)))
    return _clean({"command": resolved["command"], "spec": resolved, "versions": versions(),
                   "rows": rows, "result": result})


def write_csv(rows: List[dict], path: str) -> None:
    cols = []
    for r in rows:
        cols.extend(k for k in r if k not in cols)
    with open(path, "w", newline="") as fh:
        wr = csv.DictWriter(fh, fieldnames=cols)
        wr.writeheader()
        for r in rows:
            wr.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v
                         for k, v in r.items()})


def write_report(report: dict, out_dir: str, figures: bool = False) -> List[str]:
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    jp = os.path.join(out_dir, "report.json")
    with open(jp, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    paths.append(jp)
    cp = os.path.join(out_dir, "report.csv")
    write_csv(report["rows"], cp)
    paths.append(cp)
    if figures:
        from .plots import render
        paths.extend(render(report["command"], report["rows"], out_dir))
    return paths


def error_payload(code: int, exc: BaseException) -> dict:
    return {"error": {"code": code, "type": type(exc).__name__, "message": str(exc)},
            "versions": versions()}


def classify(exc: BaseException) -> int | None:
    if isinstance(exc, CapExceeded):
        return EXIT_CAP
    if isinstance(exc, (Uncertified, SeriesUncertified)):
        return EXIT_UNCERTIFIED
    if isinstance(exc, (SpecError, ValueError, KeyError, TypeError)):
        return EXIT_SPEC
    return None


class _Parser(argparse.ArgumentParser):
    """Usage errors are spec errors: exit 1 with the error JSON."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(json.dumps(error_payload(EXIT_SPEC, SpecError(message)), indent=2, sort_keys=True))
        sys.exit(EXIT_SPEC)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(
        prog="shiftlab",
        description="Thermodynamic quantities, approachability and coded-shift tools for shift spaces.",
        epilog="CSV columns by command:\n" + "\n".join(f"  {k}: {v}" for k, v in CSV_COLUMNS.items()),
        formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("command", nargs="?", choices=COMMANDS,
                    help="command to run (overrides the spec's 'command')")
    ap.add_argument("--spec", help="JSON job spec file ('-' for stdin)")
    ap.add_argument("--model", help="model config as inline JSON (overrides spec)")
    ap.add_argument("--potential", help="potential config as inline JSON (overrides spec)")
    ap.add_argument("--params", help="command params as inline JSON (merged over spec)")
    ap.add_argument("--out", help="output directory for report.json/report.csv")
    ap.add_argument("--threads", type=int, default=1, help="worker threads for grids")
    ap.add_argument("--cap", type=int, help="enumeration cap in words")
    ap.add_argument("--figures", action="store_true", help="also render PNG figures into --out")
    return ap


def _load_spec(args) -> dict:
    spec: dict = {}
    if args.spec:
        fh = sys.stdin if args.spec == "-" else open(args.spec)
        with fh:
            spec = json.load(fh)
    if args.command:
        spec["command"] = args.command
    if args.model:
        spec["model"] = json.loads(args.model)
    if args.potential:
        spec["potential"] = json.loads(args.potential)
    if args.params:
        spec["params"] = {**(spec.get("params") or {}), **json.loads(args.params)}
    return spec


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = _load_spec(args)
        report = run(spec, args.threads, args.cap)
    except Exception as exc:  # mapped to an exit code below
        code = classify(exc) if not isinstance(exc, json.JSONDecodeError) else EXIT_SPEC
        if isinstance(exc, OSError):
            code = EXIT_SPEC
        if code is None:
            raise
        payload = error_payload(code, exc)
        text = json.dumps(payload, indent=2, sort_keys=True)
        print(text)
        if args.out:
            os.makedirs(args.out, exist_ok=True)
            with open(os.path.join(args.out, "error.json"), "w") as fh:
                fh.write(text + "\n")
        return code
    if args.out:
        for p in write_report(report, args.out, args.figures):
            print(p)
    else:
        if args.figures:
            print("--figures needs --out", file=sys.stderr)
        print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
