"""Config-driven verification scenarios producing flat result tables."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import jsonschema
import mpmath
import numpy as np

from .curvature import (CurvatureHypothesis, HypKind, comparison_margin, curvature_gate, gate_grid,
                        hypothesis_from_config, p_laplacian_radial, volume_ratio, volume_ratio_limit)
from .extremizers import sharpness_sweep
from .hardy import (TheoremId, admissible, bv_check, hardy_lhs, hardy_rhs, sharp_constant,
                    uncertainty_product)
from .model import RadialModel, model_from_config
from .quadrature import DivergentIntegral, LogPart, log_integral_valid, log_power_integral
from .rayleigh import theta_study, theta_truncated, xi_radial
from .trials import (RadialTrial, cos_poly, power_bump, power_profile, standard_suite,
                     with_inner_cutoff)
from .weights import WeightSpec, rho_power, weight_from_config

SCENARIOS = ("comparison", "volume_monotonicity", "hardy_power", "hardy_log", "hardy_ricinf", "sharpness",
             "example_gap", "sphere_prop", "bv_improvement", "uncertainty", "log_integrals")
FIXED_COLUMNS = ("lhs", "rhs", "constant", "margin", "verdict")
DEFAULT_TOL = 1e-8

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["scenario", "cases"],
    "properties": {
        "scenario": {"enum": list(SCENARIOS)},
        "cases": {"type": "array", "minItems": 1, "items": {"type": "object"}},
        "tol": {"type": "number", "minimum": 0},
        "grid": {"type": "integer", "minimum": 64},
        "trials": {"oneOf": [{"const": "standard"}, {"type": "array", "items": {"type": "object"}}]},
        "shuffle_seed": {"type": "integer"},
        "output": {"type": "string"},
    },
}


class ConfigError(ValueError):
    """Malformed or inadmissible configuration (CLI exit code 2)."""


class GateFailure(RuntimeError):
    """Model fails its curvature hypothesis (CLI exit code 3)."""


@dataclass
class Scenario:
    name: str
    cases: list[dict]
    tol: float | None = None
    grid: int | None = None
    trials: Any = "standard"
    shuffle_seed: int | None = None
    output: str | None = None


@dataclass
class ResultRow:
    scenario: str
    params: dict[str, Any]
    lhs: float
    rhs: float
    constant: float
    margin: float
    verdict: str = field(default="")

    def __post_init__(self):
        if not self.verdict:
            tol = float(self.params.get("tol", 0.0))
            self.verdict = "pass" if self.margin >= -tol else "fail"


def scenario_from_config(cfg: dict, scenario: str | None = None) -> Scenario:
    cfg = dict(cfg)
    if scenario is not None:
        cfg["scenario"] = scenario
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ConfigError(f"config: {exc.message}") from None
    return Scenario(name=cfg["scenario"], cases=cfg["cases"], tol=cfg.get("tol"), grid=cfg.get("grid"),
                    trials=cfg.get("trials", "standard"), shuffle_seed=cfg.get("shuffle_seed"),
                    output=cfg.get("output"))


def load_scenario(path: str | Path, scenario: str | None = None) -> Scenario:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return scenario_from_config(cfg, scenario)


# -- config helpers -------------------------------------------------------------

def _get(case: dict, key: str):
    try:
        return case[key]
    except KeyError:
        raise ConfigError(f"case is missing '{key}'") from None


def _model(case: dict) -> RadialModel:
    try:
        return model_from_config(_get(case, "model"))
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"bad model config: {exc}") from None


def _hyp(case: dict) -> CurvatureHypothesis:
    try:
        return hypothesis_from_config(_get(case, "hypothesis"))
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"bad hypothesis config: {exc}") from None


def _weight(case: dict, m: RadialModel) -> WeightSpec:
    try:
        return weight_from_config(_get(case, "weight"), m)
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"bad weight config: {exc}") from None


def _gate(m: RadialModel, hyp: CurvatureHypothesis):
    ok, reasons = curvature_gate(m, hyp)
    if not ok:
        raise GateFailure(f"model {m.to_config()} fails {hyp.label()}: " + "; ".join(reasons))


def _theorem(case: dict, m: RadialModel, w: WeightSpec, hyp: CurvatureHypothesis) -> TheoremId:
    try:
        tid = TheoremId(_get(case, "theorem"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    ok, reasons = admissible(tid, m, w, hyp)
    if not ok:
        raise ConfigError(f"{tid.value} not admissible: " + "; ".join(reasons))
    return tid


def _trial_from_spec(m: RadialModel, spec: dict) -> RadialTrial:
    kind = spec.get("kind")
    try:
        if kind == "cos_poly":
            return cos_poly(m, int(spec["j"]), float(spec.get("b", 0.0)))
        if kind == "power_bump":
            return power_bump(m, float(spec["kappa"]), float(spec.get("width", 0.75)))
        if kind == "power_profile":
            return power_profile(m, float(spec["kappa"]), float(spec.get("decay", 0.0)))
    except KeyError as exc:
        raise ConfigError(f"trial {spec} is missing {exc}") from None
    raise ConfigError(f"unknown trial kind {kind!r}")


def build_trials(s: Scenario, m: RadialModel, p: float, beta: float, log: bool = False) -> list[RadialTrial]:
    if s.trials == "standard":
        suite = standard_suite(m, p, beta, log)
    else:
        if not s.trials:
            raise ConfigError("empty trial list")
        suite = [_trial_from_spec(m, spec) for spec in s.trials]
    if s.shuffle_seed is not None:
        order = np.random.default_rng(s.shuffle_seed).permutation(len(suite))
        suite = [suite[i] for i in order]
    return suite


def _psi_str(m: RadialModel) -> str:
    return ";".join(f"{c:g}" for c in m.psi_coeffs)


def _base_params(m: RadialModel, hyp: CurvatureHypothesis | None = None) -> dict:
    out = {"n": m.n, "R": m.R, "psi": _psi_str(m)}
    if hyp is not None:
        out["hyp"] = hyp.kind.value
        out["hyp_value"] = hyp.value
    return out


def _weight_params(w: WeightSpec) -> dict:
    return {"weight": w.kind.value, "p": w.p, "beta": w.beta, "alpha": w.alpha,
            "d": "" if w.d is None else w.d}


def _tol(s: Scenario, default: float) -> float:
    return s.tol if s.tol is not None else default


def _divergent(scenario: str, params: dict, constant: float) -> ResultRow:
    return ResultRow(scenario, params, math.nan, math.nan, constant, -math.inf, verdict="divergent")


# -- scenarios ------------------------------------------------------------------

def _run_comparison(s: Scenario) -> list[ResultRow]:
    rows = []
    tol = _tol(s, 1e-10)
    npts = s.grid or 2048
    for case in s.cases:
        m, hyp = _model(case), _hyp(case)
        _gate(m, hyp)
        marg = np.asarray(comparison_margin(m, hyp, gate_grid(m, npts)))
        params = {**_base_params(m, hyp), "npts": npts, "tol": tol}
        rows.append(ResultRow(s.name, params, float(marg.min()), 0.0, 0.0, float(marg.min())))
    return rows


def _run_volume(s: Scenario) -> list[ResultRow]:
    rows = []
    tol = _tol(s, 1e-10)
    npts = s.grid or 2048
    key = {1: HypKind.RIC_N, 2: HypKind.RIC_INF_LAMBDA, 3: HypKind.RIC_INF_K}
    for case in s.cases:
        m = _model(case)
        kind = int(_get(case, "kind"))
        if kind not in key:
            raise ConfigError("volume ratio kind must be 1, 2 or 3")
        param = float(_get(case, "param"))
        hyp = CurvatureHypothesis(key[kind], param)
        base = {**_base_params(m, hyp), "kind": kind, "param": param, "npts": npts, "tol": tol}
        if case.get("monotone", True):
            _gate(m, hyp)
            f = np.asarray(volume_ratio(m, kind, param, gate_grid(m, npts)))
            worst = float(np.max(np.diff(f)))
            rows.append(ResultRow(s.name, {**base, "check": "monotone"}, worst, 0.0, 0.0, -worst))
        finite, last = volume_ratio_limit(m, kind, param)
        expected = {1: param == m.n, 2: True, 3: param == 0}[kind]
        rows.append(ResultRow(s.name, {**base, "check": "limit_finite"}, float(finite), float(expected),
                              last, -abs(float(finite) - float(expected))))
    return rows


def _hardy_rows(s: Scenario, m: RadialModel, w: WeightSpec, tid: TheoremId, hyp: CurvatureHypothesis,
                trials: list[RadialTrial], constant: float, tol: float, extra: dict | None = None,
                floor: float | None = None) -> list[ResultRow]:
    """One row per trial: lhs/rhs are the two integrals, margin = lhs/rhs - floor."""
    floor = constant if floor is None else floor
    rows = []
    for u in trials:
        params = {"theorem": tid.value, **_base_params(m, hyp), **_weight_params(w), **(extra or {}),
                  "trial": u.name, "tol": tol}
        try:
            lhs, rhs = hardy_lhs(m, w, u), hardy_rhs(m, w, u)
        except DivergentIntegral:
            rows.append(_divergent(s.name, params, constant))
            continue
        if rhs < 1e-300:
            raise ConfigError(f"trial {u.name} is identically zero")
        rows.append(ResultRow(s.name, params, lhs, rhs, constant, lhs / rhs - floor))
    return rows


def _run_hardy(s: Scenario) -> list[ResultRow]:
    rows = []
    tol = _tol(s, DEFAULT_TOL)
    for case in s.cases:
        m, hyp = _model(case), _hyp(case)
        w = _weight(case, m)
        tid = _theorem(case, m, w, hyp)
        _gate(m, hyp)
        const = sharp_constant(tid, m, w, hyp)
        trials = build_trials(s, m, w.p, w.beta, w.is_log)
        rows += _hardy_rows(s, m, w, tid, hyp, trials, const, tol)
    return rows


def _run_sharpness(s: Scenario) -> list[ResultRow]:
    rows = []
    tol = _tol(s, 0.0)
    for case in s.cases:
        m, hyp = _model(case), _hyp(case)
        w = _weight(case, m)
        tid = _theorem(case, m, w, hyp)
        _gate(m, hyp)
        eps = case.get("eps", [0.5, 0.2, 0.1, 0.05, 0.02])
        rel = float(case.get("limit_rel_tol", 0.05))
        try:
            sweep = sharpness_sweep(m, tid, w, hyp, eps)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        base = {"theorem": tid.value, **_base_params(m, hyp), **_weight_params(w), "tol": tol}
        prev = None
        for row in sweep:
            p = {**base, "eps": row["eps"], "c_eps": row["c_eps"]}
            rows.append(ResultRow(s.name, {**p, "check": "below_c_eps_pow_p"}, row["quotient"],
                                  row["c_eps_pow_p"], row["sharp_constant"], row["c_eps_pow_p"] - row["quotient"]))
            if prev is not None:
                rows.append(ResultRow(s.name, {**p, "check": "monotone"}, row["quotient"], prev,
                                      row["sharp_constant"], prev - row["quotient"]))
            prev = row["quotient"]
        last = sweep[-1]
        dev = abs(last["quotient"] - last["sharp_constant"])
        bound = rel * last["sharp_constant"]
        rows.append(ResultRow(s.name, {**base, "eps": last["eps"], "c_eps": last["c_eps"], "check": "limit"},
                              dev, bound, last["sharp_constant"], bound - dev))
    return rows


def _run_example_gap(s: Scenario) -> list[ResultRow]:
    """Ric_N with N > n on the round sphere: the N-constant is far from the true infimum."""
    rows = []
    tol = _tol(s, DEFAULT_TOL)
    for case in s.cases:
        m, hyp = _model(case), _hyp(case)
        w = _weight(case, m)
        tid = _theorem(case, m, w, hyp)
        _gate(m, hyp)
        n_const = (abs(m.n + w.beta) / w.p) ** w.p
        big_const = sharp_constant(tid, m, w, hyp)
        required = float(case.get("required_gap", 0.0586))
        trials = build_trials(s, m, w.p, w.beta)
        trial_rows = _hardy_rows(s, m, w, tid, hyp, trials, n_const, tol, extra={"check": "quotient"})
        rows += trial_rows
        quots = [r.lhs / r.rhs for r in trial_rows if r.verdict != "divergent"]
        gap = min(quots) - big_const
        params = {"theorem": tid.value, **_base_params(m, hyp), **_weight_params(w), "check": "gap_over_N",
                  "trial": "suite_min", "tol": tol}
        rows.append(ResultRow(s.name, params, gap, required, big_const, gap - required))
    return rows


def _run_sphere_prop(s: Scenario) -> list[ResultRow]:
    rows = []
    for case in s.cases:
        m = _model(case)
        if not m.psi_is_constant:
            raise ConfigError("sphere scenario needs a constant density")
        hyp = CurvatureHypothesis(HypKind.RIC_N, m.n)
        _gate(m, hyp)
        p = float(_get(case, "p"))
        if not p > m.n:
            raise ConfigError("sphere scenario needs p > n")
        a = (p - m.n) / (p - 1)
        if case.get("identity", True):
            tol = float(case.get("identity_tol", 1e-6))
            rho = rho_power(WeightSpec("power", p, -p), m, a)
            r = np.linspace(0.01, 0.99, int(case.get("identity_points", 100))) * m.diam
            points = list(r) + ([0.5 * m.diam] if m.R == 1.0 else [])
            lhs = -np.asarray(p_laplacian_radial(m, rho, p, np.array(points)))
            x = np.array(points) / m.R
            # closed form on the round sphere of radius R
            rhs = (m.n - 1) * a ** (p - 1) * np.array(points) ** (-m.n) * (1 - x / np.tan(x))
            for i, rr in enumerate(points):
                spot = i == len(r)
                params = {**_base_params(m, hyp), "p": p, "check": "spot_plap" if spot else "plap_identity",
                          "r": float(rr), "theorem": "", "trial": "", "tol": tol}
                const = 1.0 / math.pi**2 if spot and m.n == 2 and p == 3 else float(rhs[i])
                rel = abs(lhs[i] - const) / abs(const)
                rows.append(ResultRow(s.name, params, float(lhs[i]), float(rhs[i]), const, -rel))
        if case.get("hardy", True):
            tol = _tol(s, DEFAULT_TOL)
            w = WeightSpec("power", p, -p)
            tid = TheoremId.T_sphere
            const = sharp_constant(tid, m, w, hyp)
            trials = build_trials(s, m, p, -p)
            for row in _hardy_rows(s, m, w, tid, hyp, trials, const, tol):
                row.params = {**_base_params(m, hyp), "p": p, "check": "hardy", "r": "",
                              "theorem": tid.value, "trial": row.params["trial"], "tol": tol}
                rows.append(row)
    return rows


def _run_bv(s: Scenario) -> list[ResultRow]:
    rows = []
    tol = _tol(s, DEFAULT_TOL)
    for case in s.cases:
        m = _model(case)
        hyp = CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 0.0)
        _gate(m, hyp)
        p = float(_get(case, "p"))
        if not (p >= 2 and p > m.n):
            raise ConfigError("remainder scenario needs p >= 2 and p > n")
        cutoffs = case.get("cutoffs", [1e-2, 1e-3, 1e-4])
        fine = s.grid or int(case.get("grid", 1024))
        grids = [fine // 4, fine // 2, fine]
        study = theta_study(m, cutoffs, grids)
        theta, eps = study.theta, study.inner_cutoffs[-1]
        base = {**_base_params(m, hyp), "p": p, "cutoff": eps}

        def add(check, lhs, rhs, const, margin, row_tol, trial=""):
            rows.append(ResultRow(s.name, {**base, "check": check, "trial": trial, "tol": row_tol},
                                  float(lhs), float(rhs), float(const), float(margin)))

        v = study.values_per_grid
        add("refinement", study.refinement_change, 0.01, theta, 0.01 - study.refinement_change, 0.0)
        add("extrapolation", abs(study.extrapolated - v[-1]) / v[-1], 0.01, theta,
            0.01 - abs(study.extrapolated - v[-1]) / v[-1], 0.0)
        add("residual", study.residual, 1e-8, theta, 1e-8 - study.residual, 0.0)
        R2 = float(case.get("scaling_R", 2.0))
        m2 = model_from_config({**m.to_config(), "R": R2 * m.R})
        t2 = theta_truncated(m2, eps * R2, fine)
        t1 = theta_truncated(m, eps, fine)
        scal = abs(t2 * R2**2 / t1 - 1)
        add("scaling", scal, 1e-6, theta, 1e-6 - scal, 0.0)
        prev_gap = None
        for c, t in zip(study.inner_cutoffs, study.cutoff_values):
            xi = xi_radial(m, c, fine)
            add("xi_below_theta", xi, t, theta, t - xi, 1e-12, trial=f"cutoff={c:.6g}")
            gap = (t - xi) / t
            if prev_gap is not None:
                add("xi_gap_shrinks", gap, prev_gap, theta, prev_gap - gap, 0.0, trial=f"cutoff={c:.6g}")
            prev_gap = gap
        for u in build_trials(s, m, p, -p):
            uc = with_inner_cutoff(u, eps)
            try:
                lhs, rhs = bv_check(m, p, uc, theta)
            except DivergentIntegral:
                rows.append(_divergent(s.name, {**base, "check": "bv", "trial": uc.name, "tol": tol}, theta))
                continue
            add("bv", lhs, rhs, theta, (lhs - rhs) / lhs, tol, trial=uc.name)
    return rows


def _run_uncertainty(s: Scenario) -> list[ResultRow]:
    rows = []
    tol = _tol(s, DEFAULT_TOL)
    for case in s.cases:
        m = _model(case)
        hyp = CurvatureHypothesis(HypKind.RIC_INF_LAMBDA, 0.0)
        _gate(m, hyp)
        p = float(_get(case, "p"))
        if not p > m.n:
            raise ConfigError("uncertainty scenario needs p > n")
        const = (p - m.n) / p
        for u in build_trials(s, m, p, -p):
            params = {"theorem": TheoremId.T_uncertainty.value, **_base_params(m, hyp), "p": p,
                      "trial": u.name, "tol": tol}
            try:
                lhs, rhs = uncertainty_product(m, p, u)
            except DivergentIntegral:
                rows.append(_divergent(s.name, params, const))
                continue
            rows.append(ResultRow(s.name, params, lhs, rhs, const, (lhs - rhs) / lhs))
    return rows


def _log_oracle(part: LogPart, k1: float, k2: float, s_: float, l: float | None, d: float) -> float:
    """Reference value in t = log(d/r): int t^k1 d^(k2+1) e^{-(k2+1) t} dt over the image interval."""
    b = k2 + 1
    mpmath.mp.dps = 30
    f = lambda t: t**k1 * mpmath.e ** (-b * t)
    Ts = mpmath.log(d / s_)
    if part is LogPart.H1:
        val = mpmath.quad(f, [Ts, mpmath.inf])
    else:
        Tl = mpmath.log(d / l)
        val = mpmath.quad(f, [Tl, Ts])
    return float(mpmath.mpf(d) ** b * val)


def _run_log_integrals(s: Scenario) -> list[ResultRow]:
    rows = []
    tol = _tol(s, 1e-7)
    for case in s.cases:
        part = LogPart(_get(case, "part"))
        d, s_ = float(_get(case, "d")), float(_get(case, "s"))
        l = case.get("l")
        l = None if l is None else float(l)
        for k1 in _get(case, "k1"):
            for k2 in _get(case, "k2"):
                valid = log_integral_valid(part, k1, k2, l, d)
                res = log_power_integral(part, k1, k2, s_, l, d)
                params = {"part": part.value, "k1": k1, "k2": k2, "s": s_, "l": "" if l is None else l, "d": d,
                          "expected_finite": int(valid), "tol": tol}
                if not valid:
                    ok = not res.ok
                    rows.append(ResultRow(s.name, params, math.inf if ok else res.value, math.inf, 0.0,
                                          0.0 if ok else -1.0))
                    continue
                ref = _log_oracle(part, k1, k2, s_, l, d)
                rel = abs(res.value - ref) / abs(ref) if res.ok else math.inf
                rows.append(ResultRow(s.name, params, res.value, ref, 1.0, -rel))
    return rows


RUNNERS: dict[str, Callable[[Scenario], list[ResultRow]]] = {
    "comparison": _run_comparison,
    "volume_monotonicity": _run_volume,
    "hardy_power": _run_hardy,
    "hardy_log": _run_hardy,
    "hardy_ricinf": _run_hardy,
    "sharpness": _run_sharpness,
    "example_gap": _run_example_gap,
    "sphere_prop": _run_sphere_prop,
    "bv_improvement": _run_bv,
    "uncertainty": _run_uncertainty,
    "log_integrals": _run_log_integrals,
}


def run_scenario(s: Scenario) -> list[ResultRow]:
    if s.name not in RUNNERS:
        raise ConfigError(f"unknown scenario {s.name!r}")
    if isinstance(s.trials, list) and not s.trials:
        raise ConfigError("empty trial list")
    rows = RUNNERS[s.name](s)
    if not rows:
        raise ConfigError("scenario produced no rows")
    return rows


# -- output ---------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def columns(rows: list[ResultRow]) -> list[str]:
    keys: list[str] = []
    for row in rows:
        for k in row.params:
            if k not in keys:
                keys.append(k)
    return ["scenario", *keys, *FIXED_COLUMNS]


def _flat(row: ResultRow, cols: list[str]) -> dict:
    out = {"scenario": row.scenario}
    for k in cols[1:-len(FIXED_COLUMNS)]:
        out[k] = row.params.get(k, "")
    out.update(lhs=row.lhs, rhs=row.rhs, constant=row.constant, margin=row.margin, verdict=row.verdict)
    return out


def table_text(rows: list[ResultRow], fmt: str = "csv") -> str:
    if not rows:
        raise ValueError("no rows to emit")
    cols = columns(rows)
    if fmt == "csv":
        buf = io.StringIO()
        wr = csv.writer(buf, lineterminator="\n")
        wr.writerow(cols)
        for row in rows:
            flat = _flat(row, cols)
            wr.writerow([_fmt(flat[c]) for c in cols])
        return buf.getvalue()
    if fmt == "json":
        def js(v):
            if isinstance(v, (float, np.floating)):
                v = float(v)
                return v if math.isfinite(v) else _fmt(v)
            if isinstance(v, (np.integer, np.bool_)):
                return int(v)
            return v
        return json.dumps([{c: js(v) for c, v in _flat(r, cols).items()} for r in rows], indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit_table(rows: list[ResultRow], fmt: str, path: str | Path | None):
    text = table_text(rows, fmt)
    if path is None or str(path) == "-":
        import sys
        sys.stdout.write(text)
        return
    try:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write table to {path}: {exc}") from exc
