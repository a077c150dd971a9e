"""Command-line entry point: validated JSON run configs, sweeps, figure recipes.

    quasicrit <task> --config run.json [--out DIR] [--threads K]
    quasicrit recipes
    quasicrit recipe <id> [--out FILE]
    quasicrit plot <figure-id> --results DIR [--out FILE]
"""
from __future__ import annotations

import argparse
import copy
import json
import logging
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import jsonschema
import numpy as np
from threadpoolctl import threadpool_limits

from . import continuum as cont
from . import dynamics as dyn
from . import effective as eff
from . import hybridization as hyb
from . import models as mdl
from . import multifractal as mf
from . import spectral as spc
from .errors import ConfigError, EmptyWindowError, NumericalError, QuasicritError
from .io import write_csv

log = logging.getLogger("quasicrit")

TASKS = ("spectrum", "multifractal", "scaling", "distribution", "dynamics", "fidelity", "greens", "continuum", "sweep")

# --- schema ---------------------------------------------------------------

_num = {"type": "number"}
_pos = {"type": "number", "exclusiveMinimum": 0}
_n = {"type": "integer", "minimum": 3, "maximum": 30}
_ladder = {"type": "array", "items": _n, "minItems": 3}


def _obj(props: dict, required=()) -> dict:
    return {"type": "object", "properties": props, "required": list(required), "additionalProperties": False}


def _window(energy_key: str) -> dict:
    return _obj(
        {
            "name": {"type": "string"},
            energy_key: {"type": "array", "items": _num, "minItems": 2, "maxItems": 2},
            "absolute": {"type": "boolean"},
        },
        ["name", energy_key],
    )


MODEL_SCHEMAS = {
    "minimal": _obj(
        {
            "family": {"const": "minimal"},
            "n": _n,
            "V_in_J": _num,
            "t_v_in_J": _num,
            "coupling": {"enum": ["rung", "rung_plus_cross", "antisymmetric_cross"]},
        },
        ["family", "n", "V_in_J", "t_v_in_J"],
    ),
    "dual": _obj(
        {"family": {"const": "dual"}, "n": _n, "J_in_J": _num, "V_in_J": _num, "t_v_in_J": _num},
        ["family", "n", "J_in_J", "V_in_J", "t_v_in_J"],
    ),
    "soc": _obj(
        {"family": {"const": "soc"}, "n": _n, "V_in_t0": _num, "lambda": _num, "t_so_in_t0": _num},
        ["family", "n", "V_in_t0", "lambda", "t_so_in_t0"],
    ),
    "gaah": _obj(
        {
            "family": {"const": "gaah"},
            "n": _n,
            "V_in_J": _num,
            "a": {"type": "number", "exclusiveMinimum": -1, "exclusiveMaximum": 1},
            "t_v_in_J": _num,
        },
        ["family", "n", "V_in_J", "a", "t_v_in_J"],
    ),
    "mosaic": _obj(
        {"family": {"const": "mosaic"}, "n": _n, "V_in_J": _num, "t_v_in_J": _num},
        ["family", "n", "V_in_J", "t_v_in_J"],
    ),
    "single_aah": _obj(
        {"family": {"const": "single_aah"}, "n": _n, "V_in_J": _num, "J_in_J": _num},
        ["family", "n", "V_in_J"],
    ),
}

SECTION_SCHEMAS = {
    "analysis": _obj({"q": {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1}}),
    "scaling": _obj(
        {
            "ns": _ladder,
            "quantity": {"enum": ["alpha_min", "tau2"]},
            "abscissa": {"enum": ["1/n", "1/lnL"]},
            "windows": {"type": "array", "items": _window("E_in_J"), "minItems": 1},
        },
        ["ns", "quantity", "windows"],
    ),
    "distribution": _obj({"window": _window("E_in_J"), "d_alpha": _pos}, ["window"]),
    "dynamics": _obj(
        {
            "sigma": _pos,
            "chain": {"enum": [1, 2]},
            "m0": {"type": "integer", "minimum": 0},
            "t_max": _pos,
            "points": {"type": "integer", "minimum": 3},
            "fit_window": {"type": "array", "items": _pos, "minItems": 2, "maxItems": 2},
        },
        ["sigma", "chain"],
    ),
    "fidelity": _obj(
        {"ns": _ladder, "windows": {"type": "array", "items": _window("E_in_J"), "minItems": 1}},
        ["ns", "windows"],
    ),
    "greens": _obj(
        {
            "energies_in_J": {"type": "array", "items": _num, "minItems": 1},
            "d_max": {"type": "integer", "minimum": 0},
            "L_chain": {"type": "integer", "minimum": 2},
            "eta": {"type": "number", "minimum": 0},
        },
        ["energies_in_J", "d_max", "L_chain"],
    ),
    "self_energy": _obj(
        {
            "E_in_J": _num,
            "V_in_J": _num,
            "n": _n,
            "potential": {"enum": ["quasiperiodic", "random"]},
            "seed": {"type": "integer"},
            "eps_in_J": _pos,
        },
        ["E_in_J", "V_in_J", "n", "potential"],
    ),
    "continuum": _obj(
        {
            "V1_in_ER": _num,
            "V2_in_ER": _num,
            "Omega_in_ER": _num,
            "L_cells": {"type": "integer", "minimum": 1},
            "dx_in_a": _pos,
            "beta": _pos,
            "n_states": {"type": "integer", "minimum": 1},
            "windows": {"type": "array", "items": _window("E_in_ER")},
        },
        ["V1_in_ER", "V2_in_ER", "Omega_in_ER", "L_cells"],
    ),
    "sweep": _obj(
        {"task": {"enum": [t for t in TASKS if t != "sweep"]}, "axis": {"type": "string"}, "values": {"type": "array", "items": _num}},
        ["task", "axis", "values"],
    ),
}

TOP_SCHEMA = _obj(
    {"task": {"enum": list(TASKS)}, "model": {"type": "object"}, **{k: {"type": "object"} for k in SECTION_SCHEMAS}},
)

TASK_SECTIONS = {
    "spectrum": ["model"],
    "multifractal": ["model"],
    "scaling": ["model", "scaling"],
    "distribution": ["model", "distribution"],
    "dynamics": ["model", "dynamics"],
    "fidelity": ["model", "fidelity"],
    "greens": ["greens"],
    "continuum": ["continuum"],
    "sweep": ["sweep"],
}


def _validate(instance, schema, prefix: str = ""):
    errors = sorted(jsonschema.Draft202012Validator(schema).iter_errors(instance), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        parts = [prefix] if prefix else []
        parts += [str(p) for p in err.absolute_path]
        if err.validator == "additionalProperties":
            extra = sorted(set(err.instance) - set(err.schema.get("properties", {})))
            parts.append(extra[0])
        elif err.validator == "required":
            parts.append(err.message.split("'")[1])
        raise ConfigError(err.message, path=".".join(parts) or "<root>")


def validate_config(config: dict, task: str) -> dict:
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object", path="<root>")
    _validate(config, TOP_SCHEMA)
    if "task" in config and config["task"] != task:
        raise ConfigError(f"config is for task {config['task']!r}, not {task!r}", path="task")
    for sec in TASK_SECTIONS[task]:
        if sec not in config:
            raise ConfigError(f"task {task!r} needs a {sec!r} section", path=sec)
    for sec, schema in SECTION_SCHEMAS.items():
        if sec in config:
            _validate(config[sec], schema, sec)
    if "model" in config:
        fam = config["model"].get("family")
        if fam not in MODEL_SCHEMAS:
            raise ConfigError(f"unknown model family {fam!r}", path="model.family")
        _validate(config["model"], MODEL_SCHEMAS[fam], "model")
    se = config.get("self_energy")
    if se and se["potential"] == "random" and "seed" not in se:
        raise ConfigError("random potential requires an explicit seed", path="self_energy.seed")
    if task == "dynamics" and config["model"]["family"] == "single_aah":
        raise ConfigError("dynamics needs a coupled model family", path="model.family")
    if task == "sweep":
        inner = config["sweep"]["task"]
        axis = config["sweep"]["axis"]
        try:
            val = _get_path(config, axis)
        except KeyError:
            raise ConfigError(f"sweep axis {axis!r} not found in config", path="sweep.axis") from None
        if isinstance(val, bool) or not isinstance(val, (int, float)):
            raise ConfigError(f"sweep axis {axis!r} is not a numeric key", path="sweep.axis")
        inner_cfg = {k: v for k, v in config.items() if k not in ("sweep", "task")}
        validate_config(inner_cfg, inner)
    return config


def _get_path(config: dict, dotted: str):
    node = config
    for part in dotted.split("."):
        if not isinstance(node, dict) or part not in node:
            raise KeyError(dotted)
        node = node[part]
    return node


def _set_path(config: dict, dotted: str, value):
    parts = dotted.split(".")
    node = config
    for part in parts[:-1]:
        node = node[part]
    old = node[parts[-1]]
    node[parts[-1]] = int(value) if isinstance(old, int) else float(value)


# --- model assembly -------------------------------------------------------


def build_model(section: dict, n: int | None = None):
    """Returns ``(spec, H, L_total)``; ``spec`` is a ChainSpec for single chains."""
    n = n or section["n"]
    fam = section["family"]
    if fam == "minimal":
        spec = mdl.minimal_model(n, section["V_in_J"], section["t_v_in_J"], section.get("coupling", "rung"))
    elif fam == "dual":
        spec = mdl.dual_coupled_model(n, section["J_in_J"], section["V_in_J"], section["t_v_in_J"])
    elif fam == "soc":
        spec = mdl.soc_model(n, section["V_in_t0"], section["lambda"], section["t_so_in_t0"])
    elif fam == "gaah":
        spec = mdl.coupled_gaah_model(n, section["V_in_J"], section["a"], section["t_v_in_J"])
    elif fam == "mosaic":
        spec = mdl.coupled_mosaic_model(n, section["V_in_J"], section["t_v_in_J"])
    elif fam == "single_aah":
        spec = mdl.aah_chain(n, section["V_in_J"], J=section.get("J_in_J", 1.0))
        return spec, mdl.build_single_chain(spec), spec.L
    else:
        raise ConfigError(f"unknown model family {fam!r}", path="model.family")
    return spec, mdl.build_hamiltonian(spec), spec.N


def _with_coupling(section: dict, value: float) -> dict:
    out = dict(section)
    key = "t_so_in_t0" if section["family"] == "soc" else "t_v_in_J"
    if key not in out:
        raise ConfigError("fidelity needs a coupled model family", path="model.family")
    out[key] = value
    return out


def _window_mask(energies, win: dict, key: str = "E_in_J") -> np.ndarray:
    lo, hi = win[key]
    e = np.abs(energies) if win.get("absolute", True) else np.asarray(energies)
    return (e >= lo) & (e <= hi)


def _label(j: int) -> int:
    # state labels in outputs are 1-based
    return j + 1


# --- tasks ----------------------------------------------------------------


def task_spectrum(cfg):
    _, H, _ = build_model(cfg["model"])
    es = spc.diagonalize(H)
    return {"spectrum.csv": (["j", "E"], [(_label(j), e) for j, e in enumerate(es.energies)])}


def task_multifractal(cfg):
    m = cfg["model"]
    _, H, L_total = build_model(m)
    es = spc.diagonalize(H)
    qs = cfg.get("analysis", {}).get("q", [2.0])
    stats = mf.state_stats(es, L_total, qs)
    header = ["n", "L", "j", "E", "tau2", "alpha_min", "ipr", "npr"] + [f"P_{q:g}" for q in qs]
    rows = [
        [m["n"], L_total, _label(s.j), s.E, s.tau2, s.alpha_min, s.ipr, s.npr] + [s.P[q] for q in qs] for s in stats
    ]
    return {"states.csv": (header, rows)}


def task_scaling(cfg):
    sc = cfg["scaling"]
    quantity = sc["quantity"]
    abscissa = sc.get("abscissa", "1/n" if quantity == "alpha_min" else "1/lnL")
    series = {w["name"]: mf.ScalingSeries(quantity, abscissa) for w in sc["windows"]}
    for n in sc["ns"]:
        _, H, L_total = build_model(cfg["model"], n)
        es = spc.diagonalize(H)
        vals = mf.alpha_min_all(es.states, L_total) if quantity == "alpha_min" else mf.tau2_all(es.states, L_total)
        for i, w in enumerate(sc["windows"]):
            mask = _window_mask(es.energies, w)
            if not mask.any():
                raise EmptyWindowError(f"window {w['name']!r} is empty at n={n}", path=f"scaling.windows.{i}")
            series[w["name"]].add(n, L_total, vals[mask].mean())
    rows, fits = [], []
    for name, s in series.items():
        rows += [(name, n, L, v) for n, L, v in s.samples]
        f = mf.extrapolate(s)
        fits.append((name, abscissa, f.intercept, f.slope, f.residual))
    return {
        "scaling.csv": (["window", "n", "L", quantity], rows),
        "scaling_fit.csv": (["window", "abscissa", "intercept", "slope", "residual"], fits),
    }


def task_distribution(cfg):
    d = cfg["distribution"]
    _, H, L_total = build_model(cfg["model"])
    es = spc.diagonalize(H)
    mask = _window_mask(es.energies, d["window"])
    if not mask.any():
        raise EmptyWindowError("distribution window selects no states", path="distribution.window")
    amin = mf.alpha_min_all(es.states, L_total)[mask]
    h = mf.alpha_histogram(amin, d.get("d_alpha", 0.02), L_total, cfg["model"]["n"])
    f = h.f_L
    rows = [
        (h.edges[i], h.edges[i + 1], h.counts[i], "" if np.isnan(f[i]) else f[i]) for i in range(len(h.counts))
    ]
    return {
        "histogram.csv": (["bin_left", "bin_right", "count", "f_L"], rows),
        "histogram_modes.csv": (["states", "modes"], [(int(mask.sum()), h.modes())]),
    }


def task_dynamics(cfg):
    d = cfg["dynamics"]
    spec, H, _ = build_model(cfg["model"])
    es = spc.diagonalize(H)
    t_max = d.get("t_max", 500.0)
    times = dyn.log_times(t_max, d.get("points", 60))
    packet = dyn.PacketSpec(sigma=d["sigma"], m0=d.get("m0"), chain=d["chain"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        tr = dyn.spread_exponent(es, spec, packet, t_max, tuple(d["fit_window"]) if "fit_window" in d else None, times)
    return {
        "dynamics.csv": (["t", "W"], list(zip(tr.times, tr.W))),
        "dynamics_fit.csv": (
            ["kappa", "prefactor", "t_lo", "t_hi", "residual", "reflected", "t_reflect"],
            [(tr.kappa, tr.prefactor, tr.fit_window[0], tr.fit_window[1], tr.residual, tr.reflected, tr.t_reflect)],
        ),
    }


def task_fidelity(cfg):
    fd = cfg["fidelity"]
    m = cfg["model"]
    out, combined = {}, []
    per_window = {w["name"]: [] for w in fd["windows"]}
    for n in fd["ns"]:
        _, H0, _ = build_model(_with_coupling(m, 0.0), n)
        _, H, L_total = build_model(m, n)
        prof = hyb.overlap_profile(spc.diagonalize(H0), spc.diagonalize(H))
        for i, w in enumerate(fd["windows"]):
            mask = _window_mask(prof.energies, w)
            if not mask.any():
                raise EmptyWindowError(f"window {w['name']!r} is empty at n={n}", path=f"fidelity.windows.{i}")
            v = float(prof.max_overlap[mask].mean())
            per_window[w["name"]].append((n, L_total, v))
            combined.append((w["name"], n, L_total, v))
    for name, rows in per_window.items():
        out[f"fidelity_{name}.csv"] = (["n", "L", "mean_max_overlap"], rows)
    out["fidelity.csv"] = (["window", "n", "L", "mean_max_overlap"], combined)
    return out


def task_greens(cfg):
    g = cfg["greens"]
    L = g["L_chain"]
    rows = []
    for E in g["energies_in_J"]:
        eta_num = g.get("eta", eff.DEFAULT_ETA if abs(E) < 2 else 0.0)
        for d in range(g["d_max"] + 1):
            try:
                ga = eff.green_analytic(E, d)
                rows.append((E, d, ga.real, ga.imag, "analytic", 0.0))
            except QuasicritError:
                pass
            gn = eff.green_numeric(E, d, 0, L, eta_num)
            rows.append((E, d, gn.real, gn.imag, "numeric", eta_num))
    out = {"greens.csv": (["E", "d", "re_G", "im_G", "kind", "eta"], rows)}
    se = cfg.get("self_energy")
    if se:
        if se["potential"] == "random":
            chain = eff.random_potential_chain(se["n"], se["V_in_J"], se["seed"])
        else:
            chain = eff.pure_potential_chain(se["n"], se["V_in_J"])
        rep = eff.self_energy_diag(se["E_in_J"], chain, se.get("eps_in_J", 0.01))
        V = mdl.onsite(chain)
        out["self_energy.csv"] = (["m", "V_m", "inv_E_minus_V"], [(m, V[m], rep.values[m]) for m in range(chain.L)])
        out["self_energy_summary.csv"] = (
            ["E", "L", "max_abs", "near_resonant"],
            [(se["E_in_J"], chain.L, rep.max_abs, rep.near_resonant)],
        )
    return out


def task_continuum(cfg):
    c = cfg["continuum"]
    spec = cont.ContinuumSpec(
        V1=c["V1_in_ER"],
        V2=c["V2_in_ER"],
        Omega=c["Omega_in_ER"],
        L_cells=c["L_cells"],
        dx=c.get("dx_in_a", 1 / 20),
        beta=c.get("beta"),
    )
    es = cont.solve_continuum(spec, c.get("n_states"))
    tau2 = cont.continuum_tau2_all(es, spec)
    wins = c.get("windows", [])
    rows = []
    for j, (E, t) in enumerate(zip(es.energies, tau2)):
        tag = ""
        for w in wins:
            if _window_mask(np.array([E]), {**w, "absolute": w.get("absolute", False)}, "E_in_ER")[0]:
                tag = w["name"]
                break
        rows.append((_label(j), E, t, tag))
    return {"continuum.csv": (["j", "E", "tau2", "window"], rows)}


TASK_FUNCS = {
    "spectrum": task_spectrum,
    "multifractal": task_multifractal,
    "scaling": task_scaling,
    "distribution": task_distribution,
    "dynamics": task_dynamics,
    "fidelity": task_fidelity,
    "greens": task_greens,
    "continuum": task_continuum,
}

PRIMARY_OUTPUT = {
    "spectrum": "spectrum.csv",
    "multifractal": "states.csv",
    "scaling": "scaling.csv",
    "distribution": "histogram.csv",
    "dynamics": "dynamics.csv",
    "fidelity": "fidelity.csv",
    "greens": "greens.csv",
    "continuum": "continuum.csv",
}


def _write_all(tables: dict, out: Path, cfg: dict) -> list[Path]:
    return [write_csv(out / name, header, rows, cfg) for name, (header, rows) in sorted(tables.items())]


def run_task(task: str, config: dict, out, threads: int = 1) -> list[Path]:
    config = validate_config(copy.deepcopy(config), task)
    out = Path(out)
    if task == "sweep":
        return run_sweep(config, out, threads)
    # LAPACK picks different bases inside degenerate subspaces at different
    # thread counts, so BLAS stays single-threaded; --threads parallelizes sweeps
    with threadpool_limits(1):
        tables = TASK_FUNCS[task](config)
    return _write_all(tables, out, config)


def run_sweep(config: dict, out: Path, threads: int = 1) -> list[Path]:
    sw = config["sweep"]
    inner, axis = sw["task"], sw["axis"]
    values = sorted(sw["values"])
    if not values:
        warnings.warn("sweep axis has no values; nothing to do", UserWarning)
        return []
    base = {k: v for k, v in config.items() if k not in ("sweep", "task")}

    def point(v):
        cfg = copy.deepcopy(base)
        _set_path(cfg, axis, v)
        with threadpool_limits(1):
            return cfg, TASK_FUNCS[inner](cfg)

    with ThreadPoolExecutor(max_workers=max(1, threads)) as pool:
        results = list(pool.map(point, values))

    written = []
    combined_header, combined = None, []
    for i, (v, (cfg, tables)) in enumerate(zip(values, results)):
        written += _write_all(tables, out / f"point_{i:03d}", cfg)
        header, rows = tables[PRIMARY_OUTPUT[inner]]
        combined_header = [axis.rsplit(".", 1)[-1]] + list(header)
        combined += [[v] + list(r) for r in rows]
    written.append(write_csv(out / "sweep.csv", combined_header, combined, config))
    return written


# --- recipes and plot scripts ---------------------------------------------

_ABC = [
    {"name": "A", "E_in_J": [2.0, 1e9]},
    {"name": "B", "E_in_J": [0.67, 2.0]},
    {"name": "C", "E_in_J": [0.0, 0.67]},
]

RECIPES = {
    "fig3a": {
        "task": "sweep",
        "model": {"family": "minimal", "n": 13, "V_in_J": 0.1, "t_v_in_J": 0.1},
        "sweep": {"task": "multifractal", "axis": "model.V_in_J", "values": [round(0.1 * k, 1) for k in range(1, 31)]},
    },
    "fig3c": {"task": "multifractal", "model": {"family": "minimal", "n": 15, "V_in_J": 2.0, "t_v_in_J": 0.1}},
    "fig4b": {
        "task": "scaling",
        "model": {"family": "minimal", "n": 12, "V_in_J": 2.0, "t_v_in_J": 0.1},
        "scaling": {"ns": [12, 13, 14, 15, 16], "quantity": "alpha_min", "windows": _ABC},
    },
    "fig5": {
        "task": "sweep",
        "model": {"family": "minimal", "n": 15, "V_in_J": 2.0, "t_v_in_J": 0.0},
        "distribution": {"window": {"name": "C", "E_in_J": [0.0, 0.67]}, "d_alpha": 0.02},
        "sweep": {"task": "distribution", "axis": "model.t_v_in_J", "values": [0.0, 0.05, 0.1]},
    },
    "fig8c": {
        "task": "dynamics",
        "model": {"family": "dual", "n": 14, "J_in_J": 2.0, "V_in_J": 2.0, "t_v_in_J": 0.5},
        "dynamics": {"sigma": 5.0, "chain": 1, "t_max": 500.0, "points": 60},
    },
    "fig9e": {
        "task": "fidelity",
        "model": {"family": "minimal", "n": 12, "V_in_J": 2.0, "t_v_in_J": 0.1},
        "fidelity": {"ns": [12, 13, 14, 15, 16], "windows": _ABC},
    },
    "fig10b": {
        "task": "continuum",
        "continuum": {
            "V1_in_ER": 8.0,
            "V2_in_ER": 0.25,
            "Omega_in_ER": 0.01,
            "L_cells": 144,
            "dx_in_a": 0.05,
            "n_states": 288,
            "windows": [{"name": "overlap", "E_in_ER": [2.48, 2.60]}],
        },
    },
    "fig14a": {
        "task": "sweep",
        "model": {"family": "soc", "n": 13, "V_in_t0": 1.0, "lambda": 1 / 3, "t_so_in_t0": 0.1},
        "sweep": {"task": "multifractal", "axis": "model.V_in_t0", "values": [round(1.0 + 0.1 * k, 1) for k in range(26)]},
    },
}

_PLOT_HEAD = '''"""Plot {fig} from quasicrit CSV output. Usage: python {{script}} RESULTS_DIR"""
import sys
from pathlib import Path

import matplotlib.pyplot as plt
import pandas as pd

root = Path(sys.argv[1] if len(sys.argv) > 1 else "{results}")
read = lambda name: pd.read_csv(root / name, comment="#")
'''

_PLOT_BODY = {
    "fig3a": """df = read("sweep.csv")
fig, ax = plt.subplots(figsize=(5, 4))
sc = ax.scatter(df["V_in_J"], df["E"], c=df["tau2"], s=1, cmap="jet", vmin=0, vmax=1)
fig.colorbar(sc, label=r"$\\tau_2(L)$")
ax.set_xlabel("V"); ax.set_ylabel("E")
""",
    "fig3c": """df = read("states.csv")
fig, ax = plt.subplots(figsize=(5, 4))
ax.scatter(df["E"], df["tau2"], s=3)
for x in (-2, -0.67, 0.67, 2):
    ax.axvline(x, ls="--", c="k", lw=0.8)
ax.set_xlabel("E"); ax.set_ylabel(r"$\\tau_2(L)$")
""",
    "fig4b": """import numpy as np
df = read("scaling.csv"); fit = read("scaling_fit.csv").set_index("window")
fig, ax = plt.subplots(figsize=(5, 4))
for name, g in df.groupby("window"):
    x = 1 / g["n"]
    ax.plot(x, g["alpha_min"], "o", label=name)
    xs = np.linspace(0, x.max(), 50)
    ax.plot(xs, fit.loc[name, "intercept"] + fit.loc[name, "slope"] * xs, "--")
ax.set_xlabel("1/n"); ax.set_ylabel(r"$\\langle\\alpha_{min}\\rangle_E$"); ax.legend()
""",
    "fig5": """files = sorted(root.rglob("histogram.csv"))
fig, axes = plt.subplots(3, 4, figsize=(12, 8), squeeze=False)
for ax, f in zip(axes.flat, files):
    h = pd.read_csv(f, comment="#")
    ax.bar(h["bin_left"], h["count"], width=h["bin_right"] - h["bin_left"], align="edge")
    ax.set_title(f.parent.name, fontsize=8)
    ax.set_xlabel(r"$\\alpha_{min}$")
""",
    "fig8c": """import numpy as np
df = read("dynamics.csv")
fig, ax = plt.subplots(figsize=(5, 4))
ax.loglog(df["t"], df["W"], "o-", ms=3)
t = df["t"].to_numpy()
for k in (0.43, 1.0):
    ax.loglog(t, df["W"].iloc[len(t) // 3] * (t / t[len(t) // 3]) ** k, "k--", lw=0.8, label=f"slope {k}")
ax.set_xlabel("t"); ax.set_ylabel("W(t)"); ax.legend()
""",
    "fig9e": """df = read("fidelity.csv")
fig, ax = plt.subplots(figsize=(5, 4))
for name, g in df.groupby("window"):
    ax.plot(g["n"], g["mean_max_overlap"], "o-", label=name)
ax.set_xlabel("n"); ax.set_ylabel(r"$\\langle Max|C_j|^2\\rangle_E$"); ax.legend()
""",
    "fig10b": """df = read("continuum.csv")
fig, ax = plt.subplots(figsize=(5, 4))
ax.scatter(df["E"], df["tau2"], s=3)
for x in (2.48, 2.60):
    ax.axvline(x, ls="--", c="k", lw=0.8)
ax.set_xlabel(r"$E/E_R$"); ax.set_ylabel(r"$\\tau_2(L)$")
""",
    "fig14a": """df = read("sweep.csv")
fig, ax = plt.subplots(figsize=(5, 4))
sc = ax.scatter(df["V_in_t0"], df["E"], c=df["tau2"], s=1, cmap="jet", vmin=0, vmax=1)
fig.colorbar(sc, label=r"$\\tau_2(L)$")
ax.set_xlabel("V"); ax.set_ylabel("E")
""",
}


def emit_plot_script(figure_id: str, results_dir=".") -> str:
    if figure_id not in _PLOT_BODY:
        raise ConfigError(f"unknown figure id {figure_id!r}; known: {', '.join(sorted(_PLOT_BODY))}", path="figure")
    head = _PLOT_HEAD.format(fig=figure_id, results=results_dir)
    return head + "\n" + _PLOT_BODY[figure_id] + 'fig.tight_layout()\nfig.savefig(root / "' + figure_id + '.png", dpi=150)\n'


# --- entry point ----------------------------------------------------------

EXIT_CODES = {ConfigError: 2, EmptyWindowError: 3, NumericalError: 4}


def _report(exc: Exception) -> int:
    code = next((c for cls, c in EXIT_CODES.items() if isinstance(exc, cls)), 1)
    rec = {"error": type(exc).__name__, "message": str(exc), "path": getattr(exc, "path", None)}
    print(json.dumps(rec), file=sys.stderr)
    return code


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quasicrit", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("command", choices=list(TASKS) + ["recipes", "recipe", "plot"])
    p.add_argument("name", nargs="?", help="recipe or figure id")
    p.add_argument("--config", type=Path)
    p.add_argument("--out", type=Path)
    p.add_argument("--results", type=Path, default=Path("."))
    p.add_argument("--threads", type=int, default=1, help="parallel sweep points")
    return p


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "recipes":
            for rid, cfg in RECIPES.items():
                print(f"{rid}\t{cfg['task']}")
            return 0
        if args.command == "recipe":
            if args.name not in RECIPES:
                raise ConfigError(f"unknown recipe {args.name!r}", path="recipe")
            text = json.dumps(RECIPES[args.name], indent=2) + "\n"
            if args.out:
                args.out.write_text(text)
            else:
                sys.stdout.write(text)
            return 0
        if args.command == "plot":
            text = emit_plot_script(args.name or "", args.results)
            if args.out:
                args.out.write_text(text)
            else:
                sys.stdout.write(text)
            return 0
        if args.config is None:
            raise ConfigError("--config is required", path="--config")
        try:
            config = json.loads(args.config.read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config: {exc}", path="--config") from exc
        for path in run_task(args.command, config, args.out or Path("."), args.threads):
            log.info("wrote %s", path)
        return 0
    except QuasicritError as exc:
        return _report(exc)


if __name__ == "__main__":
    sys.exit(main())
