"""Configuration-driven experiments and report writing.

A config is a JSON object::

    {
      "space": {"kind": "weighted-graph", "volumes": [1, 1, 1, 1],
                "edges": [[0, 1, 1], [1, 2, 1], [2, 3, 1], [3, 0, 1]]},
      "metric": "otto",
      "alphas": [-1, 0, 1],
      "trials": 5,
      "seed": 42
    }

Cycle grids use ``{"kind": "cycle-grid", "n": 64, "circumference": 6.283...,
"laplacian_style": "compositional"}``.  Optional keys: ``experiment``,
``fd_step`` (1e-5), ``output``, ``T`` (0.5), ``steps`` (200) and
``velocity_scale`` (0.5) for geodesic comparisons.

Reports are JSON with every float written to 17 significant digits.  Check
records are sorted by name and parameters so the output does not depend on
evaluation order.
"""

from __future__ import annotations

import csv
import json
import math
import re
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import discretization as disc
from .connections import (
    ConnectionSpec,
    amari_otto_closed,
    amari_tensor,
    curvature_fd,
    conjugacy_residual,
    d_otto_closed,
    d_tensor,
    duality_residual,
    k_otto_closed,
    k_tensor,
    levi_civita_otto_closed,
    sup_relative_error,
    torsion,
    torsion_otto_closed,
)
from .density import Density, TangentVector, fisher_rao_inner, project_mean_zero, radon_nikodym
from .geodesics import compare_geodesics
from .metrics import (
    fisher_rao_model,
    gateaux_phi_fd,
    gram_matrix,
    metric_norm,
    otto_model,
    perturbed,
)
from .rng import SplitMix64, random_density, random_tangent

EXPERIMENTS = ("verify", "torsion_scan", "convergence", "geodesic_compare")
METRICS = ("fisher_rao", "otto")
_KEYS = {
    "space", "metric", "alphas", "experiment", "trials", "seed", "fd_step",
    "output", "T", "steps", "velocity_scale",
}
_SPACE_KEYS = {"kind", "n", "circumference", "laplacian_style", "volumes", "edges"}


class ConfigError(ValueError):
    def __init__(self, field_name: str, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}" + (f", column {column}" if column else "") + ")" if line else ""
        super().__init__(f"config field {field_name!r}: {message}{where}")
        self.field = field_name
        self.line = line
        self.column = column


@dataclass
class ExperimentConfig:
    space: dict
    metric: str = "otto"
    alphas: list = field(default_factory=lambda: [-1.0, 0.0, 1.0])
    experiment: str = "verify"
    trials: int = 5
    seed: int | None = None
    fd_step: float = 1e-5
    output: str | None = None
    T: float = 0.5
    steps: int = 200
    velocity_scale: float = 0.5

    def echo(self) -> dict:
        return {
            "space": self.space,
            "metric": self.metric,
            "alphas": list(self.alphas),
            "experiment": self.experiment,
            "trials": self.trials,
            "seed": self.seed,
            "fd_step": self.fd_step,
            "T": self.T,
            "steps": self.steps,
            "velocity_scale": self.velocity_scale,
        }


def _line_of(text: str | None, key: str) -> int | None:
    if not text:
        return None
    m = re.search(r'"%s"\s*:' % re.escape(key), text)
    return text.count("\n", 0, m.start()) + 1 if m else None


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("<document>", exc.msg, exc.lineno, exc.colno) from None
    return config_from_dict(raw, text)


def load_config(path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


def config_from_dict(raw: dict, text: str | None = None) -> ExperimentConfig:
    def fail(key, msg):
        raise ConfigError(key, msg, _line_of(text, key.split(".")[-1]))

    if not isinstance(raw, dict):
        raise ConfigError("<document>", "top level must be an object")
    for key in raw:
        if key not in _KEYS:
            fail(key, "unknown field")
    if "space" not in raw:
        raise ConfigError("space", "missing required field")
    space = raw["space"]
    if not isinstance(space, dict):
        fail("space", "must be an object")
    for key in space:
        if key not in _SPACE_KEYS:
            fail(f"space.{key}", "unknown field")
    kind = space.get("kind")
    if kind == "cycle-grid":
        if "n" not in space or "circumference" not in space:
            fail("space.kind", "cycle-grid needs 'n' and 'circumference'")
        style = space.get("laplacian_style", "variational")
        if style not in disc.STYLES:
            fail("space.laplacian_style", f"must be one of {disc.STYLES}, got {style!r}")
    elif kind == "weighted-graph":
        if "volumes" not in space or "edges" not in space:
            fail("space.kind", "weighted-graph needs 'volumes' and 'edges'")
        if space.get("laplacian_style", "variational") != "variational":
            fail("space.laplacian_style", "graphs only support the variational style")
    else:
        fail("space.kind", f"must be 'cycle-grid' or 'weighted-graph', got {kind!r}")

    cfg = ExperimentConfig(space=dict(space))
    if "metric" in raw:
        if raw["metric"] not in METRICS:
            fail("metric", f"unknown metric {raw['metric']!r}; expected one of {METRICS}")
        cfg.metric = raw["metric"]
    if "experiment" in raw:
        if raw["experiment"] not in EXPERIMENTS:
            fail("experiment", f"unknown experiment {raw['experiment']!r}")
        cfg.experiment = raw["experiment"]
    if "alphas" in raw:
        alphas = raw["alphas"]
        if not isinstance(alphas, list) or not alphas or not all(isinstance(a, (int, float)) for a in alphas):
            fail("alphas", "must be a non-empty list of numbers")
        cfg.alphas = [float(a) for a in alphas]
    for key, kind_, positive in (("trials", int, True), ("steps", int, True), ("fd_step", float, True),
                                 ("T", float, True), ("velocity_scale", float, True)):
        if key in raw:
            v = raw[key]
            if isinstance(v, bool) or not isinstance(v, (int, float)) or (kind_ is int and not isinstance(v, int)):
                fail(key, f"must be a{'n integer' if kind_ is int else ' number'}")
            if positive and not v > 0:
                fail(key, "must be positive")
            setattr(cfg, key, kind_(v))
    if "seed" in raw:
        seed = raw["seed"]
        if isinstance(seed, bool) or not isinstance(seed, int) or not 0 <= seed < 2**64:
            fail("seed", "must be an unsigned 64-bit integer")
        cfg.seed = seed
    if "output" in raw:
        cfg.output = str(raw["output"])
    return cfg


def build_space(spec: dict):
    if spec["kind"] == "cycle-grid":
        return disc.build_cycle_space(int(spec["n"]), float(spec["circumference"]),
                                      spec.get("laplacian_style", "variational"))
    return disc.build_graph_space(spec["volumes"], [tuple(e) for e in spec["edges"]])


# Reports -------------------------------------------------------------------


@dataclass
class CheckRecord:
    name: str
    value: float
    threshold: float | None
    comparison: str = "<="
    params: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool | None:
        if self.threshold is None:
            return None
        if not math.isfinite(self.value):
            return False
        if self.comparison == "<=":
            return self.value <= self.threshold
        return self.value >= self.threshold

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "params": self.params,
            "value": self.value,
            "comparison": self.comparison,
            "threshold": self.threshold,
            "passed": self.passed,
        }


@dataclass
class Report:
    config: dict
    checks: list = field(default_factory=list)
    tables: dict = field(default_factory=dict)
    stage: str = field(default="<setup>", repr=False, compare=False)

    def add(self, name, value, threshold, comparison="<=", **params) -> CheckRecord:
        self.stage = name
        rec = CheckRecord(name, float(value), threshold, comparison, params)
        self.checks.append(rec)
        return rec

    @property
    def passed(self) -> bool:
        return all(c.passed is not False for c in self.checks)

    def sorted_checks(self) -> list:
        return sorted(self.checks, key=lambda c: (c.name, json.dumps(c.params, sort_keys=True)))

    def as_dict(self) -> dict:
        return {
            "config": self.config,
            "passed": self.passed,
            "checks": [c.as_dict() for c in self.sorted_checks()],
            "tables": self.tables,
        }

    def to_json(self) -> str:
        return _dumps(self.as_dict()) + "\n"

    def write(self, path, csv_tables: bool = True) -> None:
        path = Path(path)
        path.write_text(self.to_json())
        if not csv_tables:
            return
        rows = [
            {"name": c.name, "params": json.dumps(c.params, sort_keys=True), "value": _num(c.value),
             "comparison": c.comparison, "threshold": "" if c.threshold is None else _num(c.threshold),
             "passed": "" if c.passed is None else str(c.passed).lower()}
            for c in self.sorted_checks()
        ]
        _write_csv(path.with_name(path.stem + "_checks.csv"), rows)
        for name, table in self.tables.items():
            _write_csv(path.with_name(f"{path.stem}_{name}.csv"), table)

    def summary_lines(self) -> list:
        out = []
        for c in self.sorted_checks():
            status = {True: "PASS", False: "FAIL", None: "INFO"}[c.passed]
            params = ", ".join(f"{k}={v}" for k, v in sorted(c.params.items()))
            thr = "" if c.threshold is None else f" {c.comparison} {c.threshold:.3g}"
            out.append(f"{status} {c.name}[{params}] {c.value:.3e}{thr}")
        return out


def _num(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    # Shortest repr that round-trips exactly.
    return repr(x)


def _dumps(obj, indent=0) -> str:
    pad = "  " * (indent + 1)
    end = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {_dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dumps(v, indent + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return json.dumps(str(obj))


def _write_csv(path: Path, rows: list) -> None:
    if not rows:
        path.write_text("")
        return
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()), lineterminator="\n")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _num(v) if isinstance(v, float) else v for k, v in row.items()})


# Experiments ---------------------------------------------------------------


def _model(name: str, style: str | None = None):
    return fisher_rao_model() if name == "fisher_rao" else otto_model(style)


def _require_seed(cfg: ExperimentConfig) -> int:
    if cfg.seed is None:
        raise ConfigError("seed", "required for randomized experiments")
    return cfg.seed


def _draw(space, rng, k):
    mu = random_density(space, rng)
    return mu, [random_tangent(mu, rng) for _ in range(k)]


def _rel(x: np.ndarray, y: np.ndarray) -> float:
    scale = max(np.max(np.abs(y)), np.finfo(float).tiny)
    return float(np.max(np.abs(x - y)) / scale)


def _verify(cfg: ExperimentConfig, report: Report) -> None:
    space = build_space(cfg.space)
    rng = SplitMix64(_require_seed(cfg))
    model = _model(cfg.metric)
    style = space.laplacian_style
    # Symmetry-dependent identities are exact only for symmetric discretizations.
    exact = style == "variational"
    worst = {}

    def track(name, value, mode="max"):
        report.stage = name
        prev = worst.get(name)
        if prev is None:
            worst[name] = value
        else:
            worst[name] = max(prev, value) if mode == "max" else min(prev, value)

    otto_nonzero = {a: 0 for a in cfg.alphas}
    n = space.vertex_count
    for _ in range(cfg.trials):
        mu, (A, B, C) = _draw(space, rng, 3)
        m = mu.mass
        f = rng.normal(n)
        g = rng.normal(n)
        lap_f = disc.mu_laplacian(space, mu, f)
        lap_g = disc.mu_laplacian(space, mu, g)
        scale = np.abs(lap_f * g) @ m + np.abs(lap_g * f) @ m
        track("laplacian_self_adjoint", abs((lap_f * g) @ m - (lap_g * f) @ m) / scale)
        track("laplacian_mean_zero", abs(lap_f @ m) / (np.abs(lap_f) @ m))
        track("laplacian_kernel", np.max(np.abs(disc.mu_laplacian(space, mu, np.full(n, 3.0)))))
        X = disc.gradient(space, g)
        Xf = disc.pointwise_inner(space, X, disc.gradient(space, f), mu)
        divX = disc.divergence(space, mu, X)
        track("divergence_adjoint", abs(Xf @ m + (f * divX) @ m) / (np.abs(Xf) @ m + np.abs(f * divX) @ m))
        dirichlet = disc.pointwise_inner(space, disc.gradient(space, f), disc.gradient(space, g), mu) @ m
        track("dirichlet_identity", abs(dirichlet + (lap_f * g) @ m) / (abs(dirichlet) + np.abs(lap_f * g) @ m))
        r = project_mean_zero(f, mu).values
        h = disc.solve_mu_laplacian(space, mu, r)
        track("solve_round_trip", _rel(disc.mu_laplacian(space, mu, h), r))
        track("radon_nikodym_mean_zero", abs(radon_nikodym(A, mu) @ m))
        track("fisher_rao_positive", fisher_rao_inner(mu, A, A) / np.dot(A.density**2, space.reference_volume), "min")

        P = model.phi(mu, A)
        track("phi_inverse_round_trip", _rel(model.phi_inverse(mu, P).density, A.density))
        track("phi_total_mass", abs(P.total_mass) / np.sum(np.abs(P.mass)))
        if n <= 64:
            G = gram_matrix(model, mu)
            track("gram_symmetry", np.max(np.abs(G - G.T)) / np.max(np.abs(G)))
            track("gram_min_eigenvalue", np.min(np.linalg.eigvalsh(0.5 * (G + G.T))), "min")
        exact_d = model.gateaux_phi(mu, A, B)
        fd_d = gateaux_phi_fd(model, mu, A, B)
        dscale = max(np.max(np.abs(exact_d.density)), np.max(np.abs(model.phi(mu, B).density)))
        track("gateaux_consistency", np.max(np.abs(exact_d.density - fd_d.density)) / dscale)

        step = cfg.fd_step
        dG = (model.inner(perturbed(mu, A, step), B, C) - model.inner(perturbed(mu, A, -step), B, C)) / (2 * step)
        K = k_tensor(model, mu, A, B)
        track("k_representation", abs(model.inner(mu, K, C) + dG))
        t1 = torsion(ConnectionSpec.alpha_family(model, 1.0), mu, A, B).density
        for alpha in cfg.alphas:
            spec = ConnectionSpec.alpha_family(model, alpha)
            tor = torsion(spec, mu, A, B)
            norm = metric_norm(model, mu, tor)
            if alpha == -1.0:
                track("torsion_mixture_zero", float(np.max(np.abs(tor.density))))
            else:
                lin = np.max(np.abs(tor.density - 0.5 * (alpha + 1) * t1)) / max(np.max(np.abs(t1)), 1e-300)
                track("torsion_linearity", lin if np.max(np.abs(t1)) > 0 else 0.0)
                if cfg.metric == "fisher_rao":
                    track("fisher_rao_torsion_free", float(np.sqrt(fisher_rao_inner(mu, tor, tor))))
                elif norm >= 1e-3:
                    otto_nonzero[alpha] += 1
            track(f"duality[alpha={alpha:g}]", duality_residual(model, alpha, mu, A, B, C, step))
        lc = ConnectionSpec.levi_civita(model)
        track("levi_civita_torsion", np.max(np.abs(torsion(lc, mu, A, B).density)) / np.max(np.abs(K.density)))
        track("levi_civita_compatibility", conjugacy_residual(lc, lc, mu, A, B, C, step))
        track("curvature_alpha1", metric_norm(model, mu, curvature_fd(ConnectionSpec.alpha_family(model, 1.0), mu, A, B, C, step)))
        track("curvature_mixture", float(np.max(np.abs(curvature_fd(ConnectionSpec.mixture(model), mu, A, B, C).density))))
        if cfg.metric == "otto":
            combo = -0.5 * k_otto_closed(mu, A, B) - 0.5 * k_otto_closed(mu, B, A) + 0.5 * d_otto_closed(mu, A, B)
            track("levi_civita_otto_identity", sup_relative_error(mu, levi_civita_otto_closed(mu, A, B), combo))

    sym = 1e-10 if exact else None
    report.add("laplacian_self_adjoint", worst["laplacian_self_adjoint"], sym)
    report.add("laplacian_mean_zero", worst["laplacian_mean_zero"], 1e-12)
    report.add("laplacian_kernel", worst["laplacian_kernel"], 1e-10)
    report.add("divergence_adjoint", worst["divergence_adjoint"], sym)
    report.add("dirichlet_identity", worst["dirichlet_identity"], None if space.is_grid else 1e-12)
    report.add("solve_round_trip", worst["solve_round_trip"], 1e-10)
    report.add("radon_nikodym_mean_zero", worst["radon_nikodym_mean_zero"], 1e-12)
    report.add("fisher_rao_positive", worst["fisher_rao_positive"], 0.0, ">=")
    report.add("phi_inverse_round_trip", worst["phi_inverse_round_trip"], 1e-10)
    report.add("phi_total_mass", worst["phi_total_mass"], 1e-12)
    if n <= 64:
        compat_g = exact or cfg.metric == "fisher_rao"
        report.add("gram_symmetry", worst["gram_symmetry"], 1e-10 if compat_g else None)
        report.add("gram_min_eigenvalue", worst["gram_min_eigenvalue"], 0.0 if compat_g else None, ">=")
    report.add("gateaux_consistency", worst["gateaux_consistency"], 1e-6)
    compat = 1e-8 if exact or cfg.metric == "fisher_rao" else None
    report.add("k_representation", worst["k_representation"], 1e-8)
    if "torsion_mixture_zero" in worst:
        report.add("torsion_mixture_zero", worst["torsion_mixture_zero"], 0.0)
    if "torsion_linearity" in worst:
        report.add("torsion_linearity", worst["torsion_linearity"], 1e-12)
    if "fisher_rao_torsion_free" in worst:
        report.add("fisher_rao_torsion_free", worst["fisher_rao_torsion_free"], 1e-10)
    if cfg.metric == "otto":
        # A one-dimensional tangent space admits no torsion.
        need = cfg.trials - cfg.trials // 20 if n > 2 else None
        for alpha, count in otto_nonzero.items():
            if alpha != -1.0:
                report.add("otto_torsion_nonzero_trials", count, need, ">=", alpha=alpha)
        report.add("levi_civita_otto_identity", worst["levi_civita_otto_identity"], 1e-12)
    for alpha in cfg.alphas:
        report.add("duality", worst[f"duality[alpha={alpha:g}]"], compat, alpha=alpha)
    report.add("levi_civita_torsion", worst["levi_civita_torsion"], 1e-12 if compat else None)
    report.add("levi_civita_compatibility", worst["levi_civita_compatibility"], compat)
    report.add("curvature_alpha1", worst["curvature_alpha1"], 1e-6 if compat else None)
    report.add("curvature_mixture", worst["curvature_mixture"], 0.0)


def _torsion_scan(cfg: ExperimentConfig, report: Report) -> None:
    space = build_space(cfg.space)
    rng = SplitMix64(_require_seed(cfg))
    draws = [_draw(space, rng, 2) for _ in range(cfg.trials)]
    rows = []
    for name in METRICS:
        model = _model(name)
        ref_alpha = next((a for a in cfg.alphas if a != -1.0), None)
        for trial, (mu, (A, B)) in enumerate(draws):
            norms = {}
            for alpha in cfg.alphas:
                tor = torsion(ConnectionSpec.alpha_family(model, alpha), mu, A, B)
                norms[alpha] = metric_norm(model, mu, tor)
                rows.append({"metric": name, "alpha": alpha, "trial": trial, "norm": norms[alpha],
                             "fisher_rao_norm": float(np.sqrt(fisher_rao_inner(mu, tor, tor)))})
            if ref_alpha is not None and norms[ref_alpha] > 0:
                for alpha in cfg.alphas:
                    expected = (alpha + 1) / (ref_alpha + 1) * norms[ref_alpha]
                    report.add("torsion_scan_linearity", abs(norms[alpha] - expected) / norms[ref_alpha],
                               1e-12, metric=name, alpha=alpha, trial=trial)
    report.tables["torsion_scan"] = rows
    for name in METRICS:
        for alpha in cfg.alphas:
            vals = [r["norm"] for r in rows if r["metric"] == name and r["alpha"] == alpha]
            if name == "fisher_rao":
                report.add("torsion_fisher_rao_max", max(vals), 1e-10, alpha=alpha)
            elif alpha == -1.0:
                report.add("torsion_otto_max", max(vals), 0.0, alpha=alpha)
            else:
                need = len(vals) - len(vals) // 20 if space.vertex_count > 2 else None
                report.add("torsion_otto_nonzero_trials", sum(v >= 1e-3 for v in vals), need, ">=", alpha=alpha)


def smooth_instance(space):
    """Non-uniform density and three smooth tangent vectors on a cycle grid."""
    x = 2 * np.pi * space.coordinates / space.circumference
    mu = Density.from_unnormalized(space, np.exp(0.4 * np.cos(x) + 0.2 * np.sin(2 * x)))

    def tv(f):
        return TangentVector.from_function(mu, project_mean_zero(f, mu).values)

    return mu, tv(np.sin(x) + 0.3 * np.cos(3 * x)), tv(np.cos(2 * x) + 0.5 * np.sin(x)), tv(np.cos(x) - 0.2 * np.sin(2 * x))


def closed_form_errors(space) -> dict:
    """Definitional vs closed-form Otto tensors on ``smooth_instance``."""
    model = otto_model()
    mu, A, B, C = smooth_instance(space)
    a_def = amari_tensor(model, mu, A, B, C)
    a_closed = amari_otto_closed(mu, A, B, C)
    return {
        "K": sup_relative_error(mu, k_tensor(model, mu, A, B), k_otto_closed(mu, A, B)),
        "A": abs(a_def - a_closed) / abs(a_closed),
        "Tor": sup_relative_error(mu, torsion(ConnectionSpec.alpha_family(model, 1.0), mu, A, B),
                                  torsion_otto_closed(mu, A, B, 1.0)),
        "D": sup_relative_error(mu, d_tensor(model, mu, A, B), d_otto_closed(mu, A, B)),
    }


def _convergence(cfg: ExperimentConfig, report: Report) -> None:
    spec = cfg.space
    if spec["kind"] != "cycle-grid":
        raise ConfigError("space.kind", "convergence studies need a cycle-grid space")
    n0 = int(spec["n"])
    rows = []
    prev = None
    for n in (n0, 2 * n0, 4 * n0):
        space = disc.build_cycle_space(n, float(spec["circumference"]), spec.get("laplacian_style", "variational"))
        errs = closed_form_errors(space)
        for name, err in errs.items():
            row = {"tensor": name, "n": n, "error": err, "ratio": None}
            if prev is not None:
                row["ratio"] = prev[name] / err
                report.add("closed_form_ratio", row["ratio"], 3.2, ">=", tensor=name, n=n)
                report.add("closed_form_ratio_upper", row["ratio"], 4.8, "<=", tensor=name, n=n)
            rows.append(row)
        prev = errs
    report.tables["convergence"] = rows


def _geodesic_compare(cfg: ExperimentConfig, report: Report) -> None:
    space = build_space(cfg.space)
    rng = SplitMix64(_require_seed(cfg))
    mu0 = random_density(space, rng)
    v0 = random_tangent(mu0, rng, cfg.velocity_scale)
    model = _model(cfg.metric)
    cmp = compare_geodesics(ConnectionSpec.alpha_family(model, 0.0), ConnectionSpec.levi_civita(model),
                            mu0, v0, cfg.T, cfg.steps)
    report.tables["geodesic_compare"] = [
        {"time": float(t), "l1_distance": float(d)} for t, d in zip(cmp.times, cmp.distances)
    ]
    if cfg.metric == "fisher_rao":
        report.add("geodesic_gap_fisher_rao", cmp.max_distance, 1e-8)
    else:
        report.add("geodesic_gap_otto", cmp.max_distance, 1e-4, ">=")


_RUNNERS = {
    "verify": _verify,
    "torsion_scan": _torsion_scan,
    "convergence": _convergence,
    "geodesic_compare": _geodesic_compare,
}


def run_experiment(config: ExperimentConfig) -> Report:
    report = Report(config.echo())
    try:
        _RUNNERS[config.experiment](config, report)
    except ConfigError:
        raise
    except Exception as exc:
        raise RuntimeError(f"{config.experiment} failed near check {report.stage!r}: {exc}") from exc
    return report
