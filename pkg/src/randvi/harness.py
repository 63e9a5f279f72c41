"""Experiment configs, presets, trial orchestration and CSV/summary writers."""
from __future__ import annotations

import configparser
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np

from .audit import (
    RESIDUAL_TOL,
    audit_trace,
    geometric_decay_audit,
    mean_and_stderr,
    rate_fit,
    tail_points,
)
from .core import Problem
from .feasibility import compute_q
from .methods import BatchSchedule, BatchTrace, Method, StepSchedule, run_batch
from .problems import (
    ImitationGameSpec,
    MatrixGameSpec,
    build_imitation_game,
    build_matrix_game,
    trajectory_mg,
)

SCHEMA_VERSION = 1
TRIAL_CHUNK = 250  # trials per work item; fixed so worker count never changes chunking
PRESETS = ("mg-k3", "mg-k20", "mg-k1000", "mg-k1000-bigstep", "imitation")


class ConfigError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, path=None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
        self.line = line


@dataclass(frozen=True)
class ExperimentConfig:
    problem: str
    spec: Union[MatrixGameSpec, ImitationGameSpec]
    methods: tuple[Method, ...] = (Method.PROJECTION, Method.KORPELEVICH, Method.POPOV)
    batches: tuple[BatchSchedule, ...] = (BatchSchedule(),)
    beta: float = 1.0
    trials: int = 5
    iterations: int = 2000
    base_seed: int = 0
    output_dir: str = "runs"
    cap_override: bool = False
    record_every: int = 1
    decay_rows: int = 10
    name: str = "custom"

    def __post_init__(self):
        if self.problem not in ("matrix_game", "imitation"):
            raise ConfigError(f"unknown problem {self.problem!r}")
        if not (0 < self.beta < 2):
            raise ConfigError(f"beta must lie in (0, 2), got {self.beta}")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.iterations < 1:
            raise ConfigError("iterations must be >= 1")
        if not self.methods:
            raise ConfigError("methods must be nonempty")
        if not self.batches:
            raise ConfigError("batch must name at least one schedule")
        if self.record_every < 1:
            raise ConfigError("record_every must be >= 1")
        object.__setattr__(self, "methods", tuple(Method(m) for m in self.methods))

    def with_overrides(self, **kw) -> "ExperimentConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def preset(name: str, scale: str = "desk") -> ExperimentConfig:
    """Ready-made configs for the four matrix-game scenarios and the imitation game.

    ``scale="full"`` uses 100 variables per agent and 10^4 constraints.
    """
    if name not in PRESETS:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    if scale not in ("desk", "full"):
        raise ConfigError(f"unknown scale {scale!r}")
    if name == "imitation":
        return ExperimentConfig(
            problem="imitation", spec=ImitationGameSpec(), trials=1000, iterations=10000,
            batches=(BatchSchedule.parse("constant:1"), BatchSchedule.parse("logten")),
            record_every=10, output_dir="runs/imitation", name=name,
        )
    mu, L = {"mg-k3": (1.0, 3.0), "mg-k20": (0.05, 1.0)}.get(name, (0.01, 10.0))
    spec = MatrixGameSpec(mu_target=mu, l_target=L) if scale == "full" else MatrixGameSpec.desk(
        mu_target=mu, l_target=L)
    return ExperimentConfig(
        problem="matrix_game", spec=spec, trials=5, iterations=2000, output_dir=f"runs/{name}",
        cap_override=name.endswith("bigstep"), name=name,
    )


# ---------------------------------------------------------------------------
# config files


_RUN_KEYS = {
    "name": str, "problem": str, "methods": str, "batch": str, "beta": float, "trials": int,
    "iterations": int, "base_seed": int, "output_dir": str, "cap_override": bool,
    "record_every": int, "decay_rows": int,
}


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _parse_interval(text: str) -> tuple[float, float]:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != 2:
        raise ValueError(f"expected two numbers, got {text!r}")
    return float(parts[0]), float(parts[1])


def _key_lines(text: str) -> dict[tuple[str, str], int]:
    lines, section = {}, None
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] in "#;":
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            lines[(section, "")] = no
        elif section is not None and ("=" in line or ":" in line):
            key = line.split("=", 1)[0] if "=" in line else line.split(":", 1)[0]
            lines[(section, key.strip().lower())] = no
    return lines


def parse_config(text: str, path=None) -> ExperimentConfig:
    """Parse an INI-style config with an ``[experiment]`` section and one problem section.

    Error messages carry the line of the offending key.
    """
    cp = configparser.ConfigParser(interpolation=None)
    try:
        cp.read_string(text, source=str(path or "<config>"))
    except configparser.Error as exc:
        raise ConfigError(str(exc).splitlines()[0], getattr(exc, "lineno", None), path) from exc
    where = _key_lines(text)
    if not cp.has_section("experiment"):
        raise ConfigError("missing [experiment] section", None, path)

    def fail(section, key, msg):
        raise ConfigError(msg, where.get((section, key), where.get((section, ""))), path)

    run: dict = {}
    for key, val in cp.items("experiment"):
        if key not in _RUN_KEYS:
            fail("experiment", key, f"unknown key {key!r} in [experiment]")
        try:
            typ = _RUN_KEYS[key]
            run[key] = _parse_bool(val) if typ is bool else typ(val.strip())
        except ValueError as exc:
            fail("experiment", key, f"bad value for {key}: {exc}")
    problem = run.pop("problem", None)
    if problem is None:
        fail("experiment", "", "[experiment] needs a 'problem' key (matrix_game or imitation)")
    if not cp.has_section(problem):
        fail("experiment", "problem", f"problem {problem!r} has no [{problem}] section")

    if problem == "matrix_game":
        spec_cls, typed = MatrixGameSpec, {
            "n_per_agent": int, "mu_target": float, "l_target": float, "n_constraints": int,
            "box_half_width": float, "delta_range": _parse_interval, "chi_range": _parse_interval,
            "q_eig_range": _parse_interval, "seed": int,
        }
    elif problem == "imitation":
        spec_cls, typed = ImitationGameSpec, {"xi_max": float, "box": _parse_interval, "seed": int}
    else:
        fail("experiment", "problem", f"unknown problem {problem!r}")
    spec_kw = {}
    for key, val in cp.items(problem):
        if key not in typed:
            fail(problem, key, f"unknown key {key!r} in [{problem}]")
        try:
            spec_kw[key] = typed[key](val.strip())
        except ValueError as exc:
            fail(problem, key, f"bad value for {key}: {exc}")
    try:
        spec = spec_cls(**spec_kw)
    except ValueError as exc:
        msg = str(exc)
        named = [k for k in typed if k in msg and (problem, k) in where]
        fail(problem, min(named, key=msg.index) if named else "", msg)

    kw = {}
    try:
        if "methods" in run:
            kw["methods"] = tuple(Method(m.strip().lower()) for m in run.pop("methods").split(",") if m.strip())
    except ValueError as exc:
        fail("experiment", "methods", str(exc))
    try:
        if "batch" in run:
            kw["batches"] = tuple(BatchSchedule.parse(b) for b in run.pop("batch").split(",") if b.strip())
    except ValueError as exc:
        fail("experiment", "batch", str(exc))
    kw.update(run)
    try:
        return ExperimentConfig(problem=problem, spec=spec, **kw)
    except (ConfigError, ValueError) as exc:
        msg = str(exc)
        key = next((k for k in _RUN_KEYS if msg.startswith(k)), "")
        fail("experiment", key, msg)


def load_config(path) -> ExperimentConfig:
    path = Path(path)
    return parse_config(path.read_text(), path=path)


def dump_config(cfg: ExperimentConfig) -> str:
    def fmt(v):
        if isinstance(v, tuple):
            return f"{v[0]!r}, {v[1]!r}"
        if isinstance(v, bool):
            return "true" if v else "false"
        return repr(v) if isinstance(v, float) else str(v)

    out = ["[experiment]"]
    out.append(f"name = {cfg.name}")
    out.append(f"problem = {cfg.problem}")
    out.append("methods = " + ", ".join(m.value for m in cfg.methods))
    out.append("batch = " + ", ".join(
        "logten" if b.label == "logten" else f"constant:{b.n}" for b in cfg.batches))
    for key in ("beta", "trials", "iterations", "base_seed", "output_dir", "cap_override",
                "record_every", "decay_rows"):
        out.append(f"{key} = {fmt(getattr(cfg, key))}")
    out.append("")
    out.append(f"[{cfg.problem}]")
    for f in fields(cfg.spec):
        if f.name == "max_dense_bytes":
            continue
        out.append(f"{f.name} = {fmt(getattr(cfg.spec, f.name))}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# running


def build_problem(cfg: ExperimentConfig) -> Problem:
    if cfg.problem == "matrix_game":
        return build_matrix_game(cfg.spec)
    return build_imitation_game(cfg.spec)


def step_for(cfg: ExperimentConfig, method: Method, problem: Problem) -> StepSchedule:
    cap = None
    if cfg.cap_override and method is not Method.KORPELEVICH:
        mu, L = problem.mapping.mu, problem.mapping.lipschitz
        cap = 1.0 / (4.0 * (L + mu))
    return StepSchedule.for_mapping(method, problem.mapping, cap_override=cap)


def _run_chunk(args) -> BatchTrace:
    method, problem, step, batch, beta, T, seeds, record_every = args
    return run_batch(method, problem, step, batch, beta, T, seeds, record_every=record_every)


def group_name(method: Method, batch: BatchSchedule) -> str:
    return f"{method.value}_{batch.label}"


def run_groups(cfg: ExperimentConfig, problem: Problem, workers: int = 1) -> dict[str, BatchTrace]:
    """Run every (method, batch) pair; trial ``i`` uses seed ``base_seed + i``."""
    seeds = [cfg.base_seed + i for i in range(cfg.trials)]
    chunks = [seeds[i:i + TRIAL_CHUNK] for i in range(0, len(seeds), TRIAL_CHUNK)]
    jobs, keys = [], []
    for method in cfg.methods:
        step = step_for(cfg, method, problem)
        for batch in cfg.batches:
            for ch in chunks:
                jobs.append((method, problem, step, batch, cfg.beta, cfg.iterations, ch, cfg.record_every))
                keys.append(group_name(method, batch))
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_chunk, jobs))
    else:
        results = [_run_chunk(j) for j in jobs]
    grouped: dict[str, list[BatchTrace]] = {}
    for key, res in zip(keys, results):
        grouped.setdefault(key, []).append(res)
    return {k: BatchTrace.concat(v) for k, v in grouped.items()}


# ---------------------------------------------------------------------------
# writers


def _infeasibility(trace: BatchTrace) -> Optional[np.ndarray]:
    if trace.sq_dist_set is not None:
        return np.sqrt(trace.sq_dist_set)
    return trace.max_violation


def trial_columns(n_agents: int) -> list[str]:
    return (["k", "alpha"] + [f"N_agent{j + 1}" for j in range(n_agents)]
            + ["sq_dist_solution", "dist_set_or_violation", "feas_residual", "f_evals"])


def _format_table(header: list[str], cols: list[np.ndarray], fmts: list[str]) -> str:
    # absent values (NaN, and the +inf placeholder for unaudited rows) print as empty cells
    rows = len(cols[0])
    table = np.column_stack([np.asarray(c, dtype=float).reshape(rows) for c in cols])
    table[~np.isfinite(table) & (table > 0)] = np.nan
    buf = io.StringIO()
    np.savetxt(buf, table, fmt=fmts, delimiter=",")
    body = buf.getvalue().replace("nan", "")
    return ",".join(header) + "\n" + body


def trial_csv(trace: BatchTrace, i: int) -> str:
    R, J = len(trace.k), trace.n_batch.shape[1]
    nan = np.full(R, np.nan)
    infeas = _infeasibility(trace)
    cols = [trace.k, trace.alpha] + [trace.n_batch[:, j] for j in range(J)] + [
        nan if trace.sq_dist_solution is None else trace.sq_dist_solution[:, i],
        nan if infeas is None else infeas[:, i],
        trace.feas_residual[:, i],
        trace.f_evals,
    ]
    fmts = ["%d", "%.17g"] + ["%d"] * J + ["%.17g"] * 3 + ["%d"]
    return _format_table(trial_columns(J), cols, fmts)


AGGREGATE_COLUMNS = ["k", "alpha", "mean_sq_dist_solution", "stderr_sq_dist_solution",
                     "mean_dist_set_or_violation", "stderr_dist_set_or_violation",
                     "mean_sq_dist_set", "stderr_sq_dist_set", "min_feas_residual", "f_evals"]


def aggregate_csv(trace: BatchTrace) -> str:
    R = len(trace.k)
    nan = np.full(R, np.nan)

    def ms(a):
        return (nan, nan) if a is None else mean_and_stderr(a, axis=-1)

    sol_m, sol_s = ms(trace.sq_dist_solution)
    inf_m, inf_s = ms(_infeasibility(trace))
    set_m, set_s = ms(trace.sq_dist_set)
    cols = [trace.k, trace.alpha, sol_m, sol_s, inf_m, inf_s, set_m, set_s,
            np.min(trace.feas_residual, axis=-1), trace.f_evals]
    fmts = ["%d"] + ["%.17g"] * 8 + ["%d"]
    return _format_table(AGGREGATE_COLUMNS, cols, fmts)


def _fmt_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_summary(path, items: dict) -> None:
    Path(path).write_text("".join(f"{k} = {_fmt_value(v)}\n" for k, v in items.items()))


def read_summary(path) -> dict[str, str]:
    out = {}
    for line in Path(path).read_text().splitlines():
        if "=" in line:
            k, v = line.split("=", 1)
            out[k.strip()] = v.strip()
    return out


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    traces: dict[str, BatchTrace]
    summary: dict
    passed: bool
    output_dir: Optional[Path] = None
    files: list[Path] = field(default_factory=list)


def _q_per_agent(problem: Problem, beta: float) -> list[float]:
    out = []
    for fam in problem.families:
        if fam is None:
            out.append(0.0)
        else:
            out.append(compute_q(beta, fam.regularity_c, fam.mg_bound, clamp=True).q)
    return out


def summarize(cfg: ExperimentConfig, problem: Problem, traces: dict[str, BatchTrace]) -> tuple[dict, bool]:
    s: dict = {"schema_version": SCHEMA_VERSION, "name": cfg.name, "problem": cfg.problem,
               "trials": cfg.trials, "iterations": cfg.iterations, "base_seed": cfg.base_seed,
               "beta": cfg.beta, "mu": problem.mapping.mu, "lipschitz": problem.mapping.lipschitz,
               "kappa": problem.mapping.kappa}
    q = _q_per_agent(problem, cfg.beta)
    for j, fam in enumerate(problem.families):
        if fam is not None:
            s[f"agent{j + 1}.c"] = float(fam.regularity_c)
            s[f"agent{j + 1}.mg"] = float(fam.mg_bound)
            s[f"agent{j + 1}.q"] = q[j]
    ok_all = True
    finals = {}
    for key, tr in traces.items():
        method = tr.method
        step = step_for(cfg, method, problem)
        ta = audit_trace(tr, step)
        s[f"{key}.audit.feas_residual"] = "pass" if ta.residual_ok else "fail"
        s[f"{key}.audit.feas_residual_min"] = ta.residual_min
        s[f"{key}.audit.finite"] = "pass" if ta.finite else "fail"
        s[f"{key}.audit.in_simple_sets"] = "pass" if ta.in_simple_sets else "fail"
        s[f"{key}.audit.step_admissible"] = "skipped" if ta.steps_ok is None else (
            "pass" if ta.steps_ok else "fail")
        ok_all &= ta.passed
        if tr.sq_dist_solution is not None:
            m, se = mean_and_stderr(tr.sq_dist_solution[-1])
            s[f"{key}.final_mean_sq_dist_solution"] = float(m)
            s[f"{key}.final_stderr_sq_dist_solution"] = float(se)
            finals[key] = float(m)
            means = np.mean(tr.sq_dist_solution, axis=-1)
            pts = tail_points(tr.k, means)
            if len(pts) >= 10 and np.all(pts[:, 1] > 0):
                C, p = rate_fit(pts)
                s[f"{key}.rate_C"] = C
                s[f"{key}.rate_p"] = p
        infeas = _infeasibility(tr)
        if infeas is not None:
            s[f"{key}.final_mean_dist_set_or_violation"] = float(np.mean(infeas[-1]))
        if tr.sq_dist_set is not None:
            s[f"{key}.final_mean_sq_dist_set"] = float(np.mean(tr.sq_dist_set[-1]))
            rows = [r for r in range(len(tr.k)) if 0 < tr.k[r] <= cfg.decay_rows]
            rep = geometric_decay_audit(tr, q, rows=rows)
            s[f"{key}.audit.geometric_decay"] = "pass" if rep.passed else "fail"
            if not rep.enough_trials:
                s[f"{key}.audit.geometric_decay_note"] = rep.notes[0]
            ok_all &= rep.passed
    if finals:
        best = min(finals, key=finals.get)
        s["annotation.best_final_group"] = best
    if cfg.problem == "imitation":
        for m in cfg.methods:
            a, b = f"{m.value}_logten", f"{m.value}_constant1"
            if f"{a}.final_mean_sq_dist_set" in s and f"{b}.final_mean_sq_dist_set" in s:
                s[f"annotation.{m.value}.logten_le_constant1"] = (
                    s[f"{a}.final_mean_sq_dist_set"] <= s[f"{b}.final_mean_sq_dist_set"])
    s["audits_passed"] = bool(ok_all)
    return s, bool(ok_all)


def write_outputs(out: Path, cfg: ExperimentConfig, traces: dict[str, BatchTrace], summary: dict) -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    files = []
    cfg_path = out / "config.ini"
    cfg_path.write_text(dump_config(cfg))
    files.append(cfg_path)
    width = max(4, len(str(cfg.base_seed + cfg.trials - 1)))
    for key, tr in traces.items():
        gdir = out / key
        gdir.mkdir(exist_ok=True)
        for i, seed in enumerate(tr.seeds):
            p = gdir / f"trial_{seed:0{width}d}.csv"
            p.write_text(trial_csv(tr, i))
            files.append(p)
        agg = out / f"aggregate_{key}.csv"
        agg.write_text(aggregate_csv(tr))
        files.append(agg)
    summ = out / "summary.txt"
    write_summary(summ, summary)
    files.append(summ)
    return files


def run_experiment(cfg: ExperimentConfig, workers: int = 1, write: bool = True) -> ExperimentResult:
    problem = build_problem(cfg)
    traces = run_groups(cfg, problem, workers=workers)
    summary, passed = summarize(cfg, problem, traces)
    res = ExperimentResult(cfg, traces, summary, passed)
    if write:
        res.output_dir = Path(cfg.output_dir)
        res.files = write_outputs(res.output_dir, cfg, traces, summary)
    return res


# ---------------------------------------------------------------------------
# auditing a finished run from its files


def _read_csv(path: Path) -> tuple[list[str], np.ndarray]:
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [[float(v) if v else np.nan for v in ln.split(",")] for ln in lines[1:] if ln]
    return header, np.asarray(rows, dtype=float).reshape(len(rows), len(header))


def audit_directory(trace_dir) -> tuple[dict, bool]:
    """Re-check the written traces of a run: residual sign, finiteness, k ordering, step sizes."""
    trace_dir = Path(trace_dir)
    cfg_path = trace_dir / "config.ini"
    cfg = load_config(cfg_path) if cfg_path.exists() else None
    problem = build_problem(cfg) if cfg is not None else None
    report: dict = {}
    ok = True
    groups = sorted(p for p in trace_dir.iterdir() if p.is_dir())
    if not groups:
        raise FileNotFoundError(f"no trace groups under {trace_dir}")
    for g in groups:
        files = sorted(g.glob("trial_*.csv"))
        rmin, finite, ordered, steps_ok = math.inf, True, True, True
        step = None
        if problem is not None:
            method = Method(g.name.split("_", 1)[0])
            step = step_for(cfg, method, problem)
        for f in files:
            header, tab = _read_csv(f)
            col = {h: i for i, h in enumerate(header)}
            res = tab[:, col["feas_residual"]]
            if np.any(~np.isnan(res)):
                rmin = min(rmin, float(np.nanmin(res)))
            k = tab[:, col["k"]]
            ordered &= bool(np.all(np.diff(k) > 0))
            for name in ("sq_dist_solution", "dist_set_or_violation"):
                v = tab[:, col[name]]
                finite &= bool(np.all(np.isfinite(v)) or np.all(np.isnan(v)))
            if step is not None and step.within_theory:
                alpha = tab[1:, col["alpha"]]
                bounds = np.array([step.theory_bound(int(kk) - 1) for kk in k[1:]])
                steps_ok &= bool(np.all(alpha <= bounds))
        report[f"{g.name}.trials"] = len(files)
        report[f"{g.name}.feas_residual_min"] = rmin
        report[f"{g.name}.feas_residual"] = "pass" if rmin >= -RESIDUAL_TOL else "fail"
        report[f"{g.name}.finite"] = "pass" if finite else "fail"
        report[f"{g.name}.k_increasing"] = "pass" if ordered else "fail"
        if step is not None:
            report[f"{g.name}.step_admissible"] = (
                "skipped" if not step.within_theory else ("pass" if steps_ok else "fail"))
        ok &= rmin >= -RESIDUAL_TOL and finite and ordered and steps_ok
        agg = trace_dir / f"aggregate_{g.name}.csv"
        if agg.exists():
            header, tab = _read_csv(agg)
            col = {h: i for i, h in enumerate(header)}
            means = tab[:, col["mean_sq_dist_solution"]]
            pts = tail_points(tab[:, col["k"]], means)
            if len(pts) >= 10 and np.all(pts[:, 1] > 0):
                C, p = rate_fit(pts)
                report[f"{g.name}.rate_C"] = C
                report[f"{g.name}.rate_p"] = p
    report["audits_passed"] = bool(ok)
    return report, bool(ok)


def calibration_report(cfg: ExperimentConfig, seed: Optional[int] = None) -> dict:
    """Constants behind q for each agent, plus a start-to-solution M_g diagnostic for the matrix game."""
    problem = build_problem(cfg)
    rep: dict = {"name": cfg.name, "mu": problem.mapping.mu, "lipschitz": problem.mapping.lipschitz,
                 "kappa": problem.mapping.kappa, "beta": cfg.beta}
    q = _q_per_agent(problem, cfg.beta)
    x0 = problem.initial_point(np.random.default_rng(cfg.base_seed if seed is None else seed))
    for j, fam in enumerate(problem.families):
        if fam is None:
            continue
        rep[f"agent{j + 1}.c"] = float(fam.regularity_c)
        rep[f"agent{j + 1}.mg"] = float(fam.mg_bound)
        rep[f"agent{j + 1}.q"] = q[j]
        if cfg.problem == "matrix_game":
            sl = problem.layout.slice(j)
            lo = np.minimum(x0[sl], problem.xstar[sl])
            hi = np.maximum(x0[sl], problem.xstar[sl])
            mg_t = trajectory_mg(fam, lo, hi)
            rep[f"agent{j + 1}.mg_start_to_solution"] = mg_t
            rep[f"agent{j + 1}.q_start_to_solution"] = compute_q(cfg.beta, fam.regularity_c, mg_t, clamp=True).q
    return rep
