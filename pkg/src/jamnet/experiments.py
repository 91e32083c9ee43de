"""Declarative experiment sweeps: spec loading, dispatch, and result rows.

An experiment is an INI file with an ``[experiment]`` section naming the
metric, the swept key (``section.key``) and its grid, plus sections holding
the base parameters. Every key can be overridden as ``section.key=value``.
"""

from configparser import ConfigParser
from dataclasses import asdict, dataclass, field
import csv
import io
import json
import math
import time
from importlib import resources

import numpy as np

from .channel import make_constellation
from .errorprob import SerQuery, asep, simulate_ser
from .errors import SpecError
from .geometry import (
    HEX_500M_DENSITY,
    JammerParams,
    NetworkParams,
    db_to_linear,
    db_to_nat,
    effective_density,
)
from .outage import OutageQuery, outage_probability, simulate_outage
from .retx import RetxParams, retx_profile
from .sizing import SizingPolicy, min_jammers

METRICS = ("outage", "ser", "njstar", "retx")
ENGINES = ("analytic", "mc", "both")
CSV_FIELDS = ("sweep", "analytic", "mc", "mc_stderr", "trials", "wall_ms", "flags")

DEFAULTS = {
    "experiment": {
        "engines": "both",
        "trials": "100000",
        "ghq_n": "",
        "outage_mode": "ghq",
    },
    "network": {
        "lambda_raw": "hex500",
        "sigma_db": "6",
        "alpha": "3.7",
        "mu_chi": "0",
        "p": "0.01",
        "snr_db": "0",
        "noise_power": "1",
    },
    "jammer": {
        "N_J": "4",
        "N_Jc": "1",
        "radius_mode": "scaled",
        "R_J": "",
        "R_J_scale": "",
        "jnr_db": "0",
        "scheme": "BPSK",
    },
    "link": {
        "theta_db": "0",
        "constellation": "BPSK",
        "fading": "rayleigh",
        "asep_mode": "nn",
        "jammer_model": "exact",
    },
    "sizing": {
        "target": "0.9",
        "N_max": "500",
        "policy": "scaled_RJ",
        "search": "auto",
    },
    "retx": {
        "coupling": "fixed_point",
        "D": "8",
        "quantity": "ps",
    },
}


@dataclass
class ResultRow:
    sweep: object
    analytic: float = None
    mc: float = None
    mc_stderr: float = None
    trials: int = None
    wall_ms: float = None
    flags: list = field(default_factory=list)

    def ok(self):
        return not any(f.startswith("error") for f in self.flags)


@dataclass
class ExperimentSpec:
    name: str
    metric: str
    sweep: str
    grid: list
    engines: str
    trials: int
    seed: int
    config: ConfigParser

    def get(self, section, key):
        return self.config.get(section, key)


def _parse_value(text):
    text = text.strip()
    try:
        v = float(text)
    except ValueError:
        return text
    return int(v) if v.is_integer() and "." not in text and "e" not in text.lower() else v


def preset_names():
    root = resources.files("jamnet") / "presets"
    return sorted(p.name[:-4] for p in root.iterdir() if p.name.endswith(".ini"))


def _read_source(source):
    """Text of a spec file path or bundled preset name."""
    root = resources.files("jamnet") / "presets"
    candidate = root / f"{source}.ini"
    if candidate.is_file():
        return candidate.read_text()
    try:
        with open(source) as fh:
            return fh.read()
    except OSError as exc:
        raise SpecError(f"no preset or readable spec file named {source!r}: {exc}") from None


def load_spec(source, overrides=(), trials=None, seed=None, engines=None, text=None) -> ExperimentSpec:
    cfg = ConfigParser(inline_comment_prefixes=("#",))
    cfg.optionxform = str
    cfg.read_dict(DEFAULTS)
    try:
        cfg.read_string(text if text is not None else _read_source(source))
    except Exception as exc:
        if isinstance(exc, SpecError):
            raise
        raise SpecError(f"cannot parse spec: {exc}") from None
    for item in overrides:
        key, sep, value = item.partition("=")
        section, dot, option = key.strip().partition(".")
        if not sep or not dot:
            raise SpecError(f"override {item!r} is not of the form section.key=value")
        if not cfg.has_section(section):
            cfg.add_section(section)
        cfg.set(section, option, value.strip())
    if trials is not None:
        cfg.set("experiment", "trials", str(trials))
    if seed is not None:
        cfg.set("experiment", "seed", str(seed))
    if engines is not None:
        cfg.set("experiment", "engines", engines)
    return validate(cfg)


def validate(cfg) -> ExperimentSpec:
    exp = cfg["experiment"]
    metric = exp.get("metric", "")
    if metric not in METRICS:
        raise SpecError(f"metric must be one of {METRICS}, got {metric!r}")
    sweep = exp.get("sweep", "")
    section, _, option = sweep.partition(".")
    if not cfg.has_section(section) or option not in cfg[section]:
        raise SpecError(f"sweep parameter {sweep!r} does not name a known section.key")
    grid = [_parse_value(v) for v in exp.get("grid", "").split(",") if v.strip()]
    if not grid:
        raise SpecError("sweep grid is empty")
    engines = exp.get("engines")
    engines = "mc" if engines == "montecarlo" else engines
    if engines not in ENGINES:
        raise SpecError(f"engines must be one of {ENGINES}")
    if metric in ("njstar", "retx") and engines != "analytic":
        engines = "analytic"
    trials = int(float(exp.get("trials")))
    seed_text = exp.get("seed", "").strip()
    if engines in ("mc", "both"):
        if not seed_text:
            raise SpecError("a seed is required when the Monte Carlo engine is selected")
        if trials < 1000:
            raise SpecError("Monte Carlo needs at least 1000 trials")
    seed = int(seed_text) if seed_text else 0
    return ExperimentSpec(exp.get("name", "experiment"), metric, sweep, grid, engines, trials, seed, cfg)


def _point_config(spec, value):
    cfg = ConfigParser()
    cfg.optionxform = str
    cfg.read_dict({s: dict(spec.config[s]) for s in spec.config.sections()})
    section, _, option = spec.sweep.partition(".")
    cfg.set(section, option, str(value))
    return cfg


def _lambda_raw(text):
    return HEX_500M_DENSITY if text.strip() == "hex500" else float(text)


def build_network(cfg):
    n = cfg["network"]
    alpha = float(n["alpha"])
    mu = float(n["mu_chi"])
    sigma = db_to_nat(float(n["sigma_db"]))
    lam = effective_density(_lambda_raw(n["lambda_raw"]), sigma, alpha, mu)
    return NetworkParams(
        lambda_T=lam,
        P_T=db_to_linear(float(n["snr_db"])) * float(n["noise_power"]),
        p=float(n["p"]),
        alpha=alpha,
        mu_chi=mu,
        sigma_chi=sigma,
        noise_power=float(n["noise_power"]),
    )


def _min_lambda(spec, cfg):
    """Smallest effective density over the sweep (for radii fixed across a density sweep)."""
    if spec.sweep != "network.lambda_raw":
        return build_network(cfg).lambda_T
    return min(build_network(_point_config(spec, v)).lambda_T for v in spec.grid)


def build_jammers(spec, cfg, net):
    j = cfg["jammer"]
    P_J = db_to_linear(float(j["jnr_db"])) * net.noise_power
    N_J = int(float(j["N_J"]))
    scheme = j["scheme"]
    if j["radius_mode"] == "scaled":
        return JammerParams.scaled(N_J, float(j["N_Jc"]), net.lambda_T, P_J, scheme)
    if j["radius_mode"] == "fixed":
        if j["R_J"].strip():
            R_J = float(j["R_J"])
        elif j["R_J_scale"].strip():
            R_J = float(j["R_J_scale"]) / math.sqrt(_min_lambda(spec, cfg))
        else:
            raise SpecError("fixed radius mode needs jammer.R_J or jammer.R_J_scale")
        return JammerParams.fixed(N_J, R_J, net.lambda_T, P_J, scheme)
    raise SpecError(f"unknown jammer.radius_mode {j['radius_mode']!r}")


def _row_seed(spec, index):
    return int(np.random.SeedSequence([spec.seed, index]).generate_state(1)[0])


def _ghq(cfg, default):
    text = cfg.get("experiment", "ghq_n").strip()
    return int(text) if text else default


def _evaluate(spec, cfg, index, row):
    net = build_network(cfg)
    jam = build_jammers(spec, cfg, net)
    link = cfg["link"]
    theta = db_to_linear(float(link["theta_db"]))
    run_analytic = spec.engines in ("analytic", "both")
    run_mc = spec.engines in ("mc", "both")
    seed = _row_seed(spec, index)
    diag = {}

    if spec.metric == "outage":
        q = OutageQuery(theta, net, jam)
        if run_analytic:
            mode = cfg.get("experiment", "outage_mode")
            row.analytic = outage_probability(q, mode, _ghq(cfg, 15), diagnostics=diag)
        if run_mc:
            est = simulate_outage(q, spec.trials, seed)
            row.mc, row.mc_stderr, row.trials = est.value, est.stderr, est.trials
            if est.rejected_trials:
                row.flags.append(f"rejected={est.rejected_trials}")

    elif spec.metric == "ser":
        const = make_constellation(link["constellation"])
        fading = link["fading"]
        if run_analytic:
            if fading != "rayleigh":
                row.flags.append("no_analytic_model")
            else:
                row.analytic = asep(
                    const, net, jam, link["asep_mode"], _ghq(cfg, 10),
                    diagnostics=diag, jammer_model=link["jammer_model"],
                )
        if run_mc:
            est = simulate_ser(SerQuery(net, jam, const, fading), spec.trials, seed)
            row.mc, row.mc_stderr, row.trials = est.value, est.stderr, est.trials
            if est.rejected_trials:
                row.flags.append(f"rejected={est.rejected_trials}")

    elif spec.metric == "njstar":
        s = cfg["sizing"]
        policy = SizingPolicy(
            s["policy"], float(s["target"]), theta, float(cfg["jammer"]["N_Jc"]),
            jam.R_J if s["policy"] == "fixed_RJ" else None,
        )
        res = min_jammers(net, jam, policy, int(float(s["N_max"])), s["search"], _ghq(cfg, 15))
        row.analytic = res.n_star
        row.flags.extend(res.flags)
        row.flags.append(f"outage={res.outage:.6g}")

    elif spec.metric == "retx":
        r = cfg["retx"]
        D = int(float(r["D"]))
        out = retx_profile(net, jam, theta, RetxParams(net.p, r["coupling"]), [D], _ghq(cfg, 15))[0]
        quantity = r["quantity"]
        if quantity == "ps":
            row.analytic = out.p_s
        elif quantity == "ps_ratio":
            row.analytic = out.p_s / net.p
        elif quantity == "delta":
            row.analytic = out.delta
        else:
            raise SpecError(f"unknown retx.quantity {quantity!r}")
        row.flags.extend(out.flags)

    row.flags.extend(diag.get("flags", []))


def run_experiment(spec: ExperimentSpec, timing=True):
    """One ResultRow per grid value, in grid order. Engine errors are recorded per row."""
    rows = []
    for index, value in enumerate(spec.grid):
        row = ResultRow(value)
        start = time.perf_counter()
        try:
            _evaluate(spec, _point_config(spec, value), index, row)
        except Exception as exc:  # captured per row; the run continues
            row.flags.append(f"error:{type(exc).__name__}:{exc}".replace(",", ";").replace("\n", " "))
        if timing:
            row.wall_ms = (time.perf_counter() - start) * 1e3
        rows.append(row)
    return rows


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return format(float(v), ".12g")


def emit(rows, fmt="csv", path=None):
    """Serialize rows as CSV or JSON lines; write to path if given, return the text."""
    buf = io.StringIO()
    if fmt == "csv":
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_FIELDS)
        for r in rows:
            w.writerow([
                _fmt(r.sweep), _fmt(r.analytic), _fmt(r.mc), _fmt(r.mc_stderr),
                _fmt(r.trials), _fmt(r.wall_ms), ";".join(r.flags),
            ])
    elif fmt == "jsonl":
        for r in rows:
            buf.write(json.dumps(asdict(r), sort_keys=False) + "\n")
    else:
        raise SpecError(f"unknown format {fmt!r}")
    text = buf.getvalue()
    if path is not None:
        try:
            with open(path, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write results to {path}: {exc}") from exc
    return text


def parse_jsonl(text):
    return [ResultRow(**json.loads(line)) for line in text.splitlines() if line.strip()]
