"""Seeded Monte Carlo harness: trial batteries, aggregation, reports.

An :class:`ExperimentConfig` names a product (catalog entry or explicit
base list), an experiment kind, a trial count, and a base seed.  Trial
i derives its own seed as splitmix64(base_seed XOR i), so any row can
be reproduced in isolation and results do not depend on scheduling.

Kinds:

* ``hitting_times``: one uniform edge ordering per trial; rows carry
  tau1, tau2, tau3 (-1 when the full graph never reaches the target
  matching size) and the coincidence flag tau1 = tau2 = tau3.
* ``percolation_profile``: one bond percolation sample per trial; rows
  carry the component structure used by the sprinkling argument (giant
  size, isolated count, whether every non-giant component is isolated,
  minimum host distance between isolated vertices).
* ``obstructions``: one sample per trial; rows carry the minimal
  obstruction size/count and the outcomes of the three-component and
  shared-W+S+B checks.
* ``isoperimetry``: single instance, no trial loop; rows carry f*(k)
  and, when the order admits exhaustive enumeration, exact f(k).
* ``verify_all``: the cross-module invariant battery; rows are suites.

Reports are CSV (provenance as ``# key=value`` comments, one header
row, aggregates as trailing ``# agg:key=value`` comments) or JSON with
fixed key order.  Integers are written verbatim; every real value is
rounded once to 9 significant digits when the row or aggregate is
built, so both formats carry identical numbers.  Repeated runs of the
same config produce byte-identical reports apart from the
``generated_at`` line, which is excluded from the config hash.
"""

import hashlib
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone

from .catalog import build_catalog_product, catalog_specs, tiny_names
from .graph_core import (BaseGraphSpec, GraphBuildError, ProductGraph,
                         bipartition_signature, build_product,
                         cartesian_product, full_mask, star)
from .isoperimetry import (BoundParams, count_rooted_trees, edge_connectivity,
                           exhaustive_profile, f_star, rooted_tree_bound)
from .matching import brute_deficiency, tutte_berge_deficiency
from .obstructions import (find_minimal_obstructions, verify_determination,
                           verify_three_components)
from .process import (component_profile, critical_p, double_exposure,
                      incremental_matching_sizes, run_process,
                      sample_ordering, sample_percolation)
from .rng import Xoshiro256StarStar, derive_trial_seed

KINDS = ("hitting_times", "percolation_profile", "isoperimetry",
         "obstructions", "verify_all")
_PERCOLATION_KINDS = ("percolation_profile", "obstructions")
_TRIAL_KINDS = ("hitting_times", "percolation_profile", "obstructions")

_COLUMNS = {
    "hitting_times": ("trial", "seed", "tau1", "tau2", "tau3", "coincident"),
    "percolation_profile": ("trial", "seed", "p", "components", "giant",
                            "isolated", "mid_components", "non_giant_isolated",
                            "min_isolated_distance", "structure_ok"),
    "obstructions": ("trial", "seed", "p", "minimal_size", "minimal_count",
                     "three_checked", "three_counterexamples", "wsb_groups",
                     "wsb_max_group", "wsb_violations"),
    "isoperimetry": ("k", "f_star", "f_exact"),
    "verify_all": ("suite", "instances", "counterexamples", "status", "detail"),
}

_CONFIG_KEYS = {"kind", "product", "trials", "seed", "p", "omega", "u_max",
                "component_threshold", "tau3_mode", "out", "format", "workers",
                "fault_injection"}


class ConfigError(ValueError):
    """Invalid experiment configuration."""


def resolve_product(product) -> tuple[tuple[BaseGraphSpec, ...], str | None]:
    """Turn a config ``product`` value (catalog name or list of base
    spec objects) into specs plus the catalog name when one was used."""
    if isinstance(product, str):
        try:
            return catalog_specs(product), product
        except KeyError as exc:
            raise ConfigError(exc.args[0]) from None
    if isinstance(product, list) and product:
        try:
            return tuple(BaseGraphSpec.from_dict(item) for item in product), None
        except GraphBuildError as exc:
            raise ConfigError(f"bad base spec: {exc}") from None
    raise ConfigError("product must be a catalog name or a nonempty list of base specs")


def round9(x: float) -> float:
    """Round to 9 significant digits.

    Applied exactly once, when a value enters a row or aggregate, so
    CSV text and JSON floats agree by construction.
    """
    return float(f"{x:.9g}")


def _format_cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


@dataclass(frozen=True)
class ExperimentConfig:
    """One experiment definition; validated on construction.

    ``p`` and ``omega`` are mutually exclusive; percolation kinds need
    exactly one (``omega`` sets p = critical_p(pg, omega)), the
    isoperimetry kind accepts one optionally for threshold
    annotations, and the remaining kinds accept neither.  ``product``
    may be empty only for ``verify_all``, which runs on a built-in
    corpus.
    """

    kind: str
    specs: tuple[BaseGraphSpec, ...]
    seed: int
    trials: int = 1
    catalog_name: str | None = None
    p: float | None = None
    omega: float | None = None
    u_max: int = 4
    component_threshold: float | None = None
    tau3_mode: str = "bisect"
    out: str | None = None
    fmt: str = "csv"
    workers: int | None = None
    fault_injection: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown experiment kind {self.kind!r}; known: {', '.join(KINDS)}")
        if not self.specs and self.kind != "verify_all":
            raise ConfigError(f"kind {self.kind!r} needs a product")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool):
            raise ConfigError("seed must be an integer")
        if not 0 <= self.seed < 1 << 64:
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")
        if not isinstance(self.trials, int) or self.trials < 1:
            raise ConfigError(f"trials must be a positive integer, got {self.trials!r}")
        given = [name for name, value in (("p", self.p), ("omega", self.omega))
                 if value is not None]
        if self.kind in _PERCOLATION_KINDS and len(given) != 1:
            raise ConfigError(f"kind {self.kind!r} needs exactly one of p / omega")
        if self.kind == "isoperimetry" and len(given) > 1:
            raise ConfigError("isoperimetry accepts at most one of p / omega")
        if self.kind in ("hitting_times", "verify_all") and given:
            raise ConfigError(f"kind {self.kind!r} does not take {' or '.join(given)}")
        if self.p is not None and not 0.0 < self.p <= 1.0:
            raise ConfigError(f"p must lie in (0, 1], got {self.p}")
        if self.omega is not None and self.omega <= 0.0:
            raise ConfigError(f"omega must be positive, got {self.omega}")
        if self.u_max < 1:
            raise ConfigError(f"u_max must be at least 1, got {self.u_max}")
        if self.component_threshold is not None and self.component_threshold <= 0:
            raise ConfigError("component_threshold must be positive")
        if self.tau3_mode not in ("bisect", "incremental"):
            raise ConfigError(f"unknown tau3_mode {self.tau3_mode!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"format must be csv or json, got {self.fmt!r}")
        if self.workers is not None and self.workers < 1:
            raise ConfigError(f"workers must be at least 1, got {self.workers}")
        if self.fault_injection not in (None, "matching"):
            raise ConfigError(f"unknown fault_injection hook {self.fault_injection!r}")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        if not isinstance(data, dict):
            raise ConfigError(f"config must be an object, got {type(data).__name__}")
        unknown = set(data) - _CONFIG_KEYS
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        kind = data.get("kind")
        if kind is None:
            raise ConfigError("missing config key: kind")
        if "seed" not in data:
            raise ConfigError("missing config key: seed")
        specs: tuple[BaseGraphSpec, ...] = ()
        catalog_name = None
        if "product" in data:
            specs, catalog_name = resolve_product(data["product"])
        elif kind != "verify_all":
            raise ConfigError("missing config key: product")
        kwargs = {}
        for key, attr in (("trials", "trials"), ("seed", "seed"), ("p", "p"),
                          ("omega", "omega"), ("u_max", "u_max"),
                          ("component_threshold", "component_threshold"),
                          ("tau3_mode", "tau3_mode"), ("out", "out"),
                          ("format", "fmt"), ("workers", "workers"),
                          ("fault_injection", "fault_injection")):
            if key in data:
                kwargs[attr] = data[key]
        return cls(kind=kind, specs=specs, catalog_name=catalog_name, **kwargs)

    def canonical_dict(self) -> dict:
        """Reproduction-relevant fields with defaults applied.

        Execution plumbing (out, format, workers) is excluded: it
        cannot change a single row.  The hash of this dict identifies
        the experiment.
        """
        out = {"kind": self.kind}
        if self.specs:
            out["product"] = [spec.to_dict() for spec in self.specs]
        out["seed"] = self.seed
        out["trials"] = self.trials
        if self.p is not None:
            out["p"] = self.p
        if self.omega is not None:
            out["omega"] = self.omega
        if self.kind == "hitting_times":
            out["tau3_mode"] = self.tau3_mode
        if self.kind == "obstructions":
            out["u_max"] = self.u_max
            if self.component_threshold is not None:
                out["component_threshold"] = self.component_threshold
        if self.fault_injection is not None:
            out["fault_injection"] = self.fault_injection
        return out

    def config_hash(self) -> str:
        blob = json.dumps(self.canonical_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()

    def product_label(self) -> str:
        if self.catalog_name:
            return self.catalog_name
        if not self.specs:
            return "builtin-corpus"
        return "x".join(spec.label() for spec in self.specs)

    def build(self) -> ProductGraph:
        if not self.specs:
            raise ConfigError("this config has no product to build")
        return build_product(self.specs)

    def effective_p(self, pg: ProductGraph) -> float:
        if self.p is not None:
            return self.p
        if self.omega is not None:
            return critical_p(pg, self.omega)
        raise ConfigError("neither p nor omega configured")


@dataclass(frozen=True)
class TrialSummary:
    """Rows plus aggregates for one experiment run."""

    kind: str
    config_hash: str
    config: dict
    product_label: str
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    aggregates: dict


def _percentile(values, q: float):
    """Nearest-rank percentile: sorted[ceil(q * len) - 1]."""
    ordered = sorted(values)
    return ordered[max(0, math.ceil(q * len(ordered)) - 1)]


def _compute_row(config: ExperimentConfig, pg: ProductGraph, index: int) -> tuple:
    trial_seed = derive_trial_seed(config.seed, index)
    if config.kind == "hitting_times":
        ordering = sample_ordering(pg, trial_seed)
        times = run_process(pg, ordering, tau3_mode=config.tau3_mode)
        tau3 = -1 if times.tau3 is None else times.tau3
        coincident = int(times.tau3 is not None
                         and times.tau1 == times.tau2 == times.tau3)
        return (index, trial_seed, times.tau1, times.tau2, tau3, coincident)
    if config.kind == "percolation_profile":
        p = config.effective_p(pg)
        sample = sample_percolation(pg, p, trial_seed)
        prof = component_profile(pg, sample)
        non_singletons = sum(1 for size in prof.sizes if size >= 2)
        non_giant_isolated = int(non_singletons <= 1)
        dist = prof.min_isolated_distance
        dist_cell = -1 if dist is None else dist
        structure_ok = int(non_giant_isolated and (dist is None or dist >= 2))
        return (index, trial_seed, round9(p), len(prof.sizes), prof.giant,
                len(prof.isolated), prof.mid_components, non_giant_isolated,
                dist_cell, structure_ok)
    if config.kind == "obstructions":
        p = config.effective_p(pg)
        sample = sample_percolation(pg, p, trial_seed)
        minimal = find_minimal_obstructions(pg, sample, u_max=config.u_max,
                                            threshold=config.component_threshold)
        three_checked = 0
        three_cx = 0
        for record in minimal:
            report = verify_three_components(pg, sample, record)
            if not report.skipped_out_of_scope:
                three_checked += report.checked_vertices
                three_cx += len(report.counterexamples)
        det = verify_determination(pg, sample, u_max=config.u_max,
                                   threshold=config.component_threshold,
                                   minimal=minimal)
        minimal_size = minimal[0].u if minimal else -1
        return (index, trial_seed, round9(p), minimal_size, len(minimal),
                three_checked, three_cx, det.group_count, det.max_group,
                len(det.violating_groups))
    raise ConfigError(f"kind {config.kind!r} has no per-trial rows")


_WORKER_STATE: dict[str, tuple[ExperimentConfig, ProductGraph]] = {}


def _worker_row(payload: tuple[str, int]) -> tuple:
    blob, index = payload
    state = _WORKER_STATE.get(blob)
    if state is None:
        config = ExperimentConfig.from_dict(json.loads(blob))
        state = (config, config.build())
        _WORKER_STATE[blob] = state
    config, pg = state
    return _compute_row(config, pg, index)


def _trial_rows(config: ExperimentConfig, pg: ProductGraph) -> list[tuple]:
    workers = config.workers if config.workers is not None else os.cpu_count() or 1
    if workers > 1 and config.trials > 1:
        blob = json.dumps(config.canonical_dict(), sort_keys=True)
        chunk = max(1, config.trials // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_worker_row,
                                 ((blob, i) for i in range(config.trials)),
                                 chunksize=chunk))
    return [_compute_row(config, pg, i) for i in range(config.trials)]


def _aggregate_hitting(pg: ProductGraph, rows) -> dict:
    tau1 = [row[2] for row in rows]
    tau2 = [row[3] for row in rows]
    finite3 = [row[4] for row in rows if row[4] >= 0]
    never = len(rows) - len(finite3)
    violations = sum(1 for row in rows if row[2] > row[3])
    if pg.n % 2 == 0:
        violations += sum(1 for row in rows if row[4] >= 0 and row[2] > row[4])
    out = {
        "trials": len(rows),
        "coincidence_rate": round9(sum(row[5] for row in rows) / len(rows)),
        "order_violations": violations,
        "tau3_never": never,
        "mean_tau1": round9(sum(tau1) / len(tau1)),
        "p50_tau1": _percentile(tau1, 0.5),
        "p90_tau1": _percentile(tau1, 0.9),
        "mean_tau2": round9(sum(tau2) / len(tau2)),
        "p50_tau2": _percentile(tau2, 0.5),
        "p90_tau2": _percentile(tau2, 0.9),
    }
    if finite3:
        out["mean_tau3"] = round9(sum(finite3) / len(finite3))
        out["p50_tau3"] = _percentile(finite3, 0.5)
        out["p90_tau3"] = _percentile(finite3, 0.9)
    else:
        out["mean_tau3"] = -1
        out["p50_tau3"] = -1
        out["p90_tau3"] = -1
    return out


def _aggregate_percolation(rows) -> dict:
    count = len(rows)
    dist_ok = sum(1 for row in rows if row[8] == -1 or row[8] >= 2)
    return {
        "trials": count,
        "p": rows[0][2],
        "frac_non_giant_isolated": round9(sum(row[7] for row in rows) / count),
        "frac_distance_ok": round9(dist_ok / count),
        "frac_structure_ok": round9(sum(row[9] for row in rows) / count),
        "mean_components": round9(sum(row[3] for row in rows) / count),
        "mean_giant": round9(sum(row[4] for row in rows) / count),
        "mean_isolated": round9(sum(row[5] for row in rows) / count),
    }


def _aggregate_obstructions(rows) -> dict:
    count = len(rows)
    with_obs = [row for row in rows if row[3] >= 0]
    return {
        "trials": count,
        "p": rows[0][2],
        "obstruction_rate": round9(len(with_obs) / count),
        "mean_minimal_size": (round9(sum(row[3] for row in with_obs) / len(with_obs))
                              if with_obs else -1),
        "three_counterexamples": sum(row[6] for row in rows),
        "wsb_violations": sum(row[9] for row in rows),
        "max_wsb_group": max((row[8] for row in rows), default=0),
    }


def _run_isoperimetry(config: ExperimentConfig, pg: ProductGraph):
    if pg.d is None:
        raise ConfigError("isoperimetry experiments need a regular product")
    p = config.p
    if config.omega is not None:
        p = critical_p(pg, config.omega)
    params = BoundParams.from_product(pg, p if p is not None else 0.5)
    exact: tuple[int, ...] | None = None
    symmetry_ok = 1
    if pg.n <= 24:
        profile = exhaustive_profile(pg, keep_witnesses=False)
        exact = profile.f
        symmetry_ok = int(all(profile.f_of(k) == profile.f_of(pg.n - k)
                              for k in range(1, pg.n)))
    rows = []
    violations = 0
    for k in range(1, pg.n):
        star_val = round9(f_star(params, k))
        f_exact = exact[k - 1] if exact is not None else -1
        if exact is not None and f_exact < star_val - 1e-9:
            violations += 1
        rows.append((k, star_val, f_exact))
    aggregates = {
        "n": pg.n,
        "d": pg.d,
        "C": pg.C,
        "m": pg.m,
        "profile_exhaustive": int(exact is not None),
        "bound_violations": violations if exact is not None else -1,
        "symmetry_ok": symmetry_ok,
    }
    if pg.n <= 256:
        cut = edge_connectivity(pg)
        aggregates["min_cut"] = cut
        aggregates["min_cut_equals_d"] = int(cut == pg.d)
    if p is not None:
        aggregates["s_threshold"] = round9(params.s_threshold)
        aggregates["b_threshold"] = round9(params.b_threshold)
    return rows, aggregates


def run_trials(config: ExperimentConfig) -> TrialSummary:
    """Execute the experiment; rows are ordered by trial index."""
    if config.kind == "verify_all":
        rows, aggregates = _run_battery(config)
    else:
        pg = config.build()
        if config.kind == "obstructions" and pg.n > 16 and config.u_max > 3:
            raise ConfigError(
                f"obstruction enumeration needs n <= 16 or u_max <= 3 "
                f"(n={pg.n}, u_max={config.u_max})")
        if config.kind == "isoperimetry":
            rows, aggregates = _run_isoperimetry(config, pg)
        else:
            rows = _trial_rows(config, pg)
            if config.kind == "hitting_times":
                aggregates = _aggregate_hitting(pg, rows)
            elif config.kind == "percolation_profile":
                aggregates = _aggregate_percolation(rows)
            else:
                aggregates = _aggregate_obstructions(rows)
    return TrialSummary(kind=config.kind, config_hash=config.config_hash(),
                        config=config.canonical_dict(),
                        product_label=config.product_label(),
                        columns=_COLUMNS[config.kind], rows=tuple(rows),
                        aggregates=aggregates)


def render_report(summary: TrialSummary, fmt: str = "csv",
                  generated_at: str | None = None) -> str:
    """Serialize a summary; identical inputs give identical bytes apart
    from the generated_at stamp."""
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    if generated_at is None:
        generated_at = datetime.now(timezone.utc).isoformat(timespec="seconds")
    if fmt == "json":
        doc = {
            "config_hash": summary.config_hash,
            "kind": summary.kind,
            "product": summary.product_label,
            "config": summary.config,
            "generated_at": generated_at,
            "columns": list(summary.columns),
            "rows": [list(row) for row in summary.rows],
            "aggregates": summary.aggregates,
        }
        return json.dumps(doc, indent=2) + "\n"
    lines = [
        f"# config_hash={summary.config_hash}",
        f"# kind={summary.kind}",
        f"# product={summary.product_label}",
        f"# config={json.dumps(summary.config, sort_keys=True, separators=(',', ':'))}",
        f"# generated_at={generated_at}",
        ",".join(summary.columns),
    ]
    lines.extend(",".join(_format_cell(cell) for cell in row) for row in summary.rows)
    lines.extend(f"# agg:{key}={_format_cell(value)}"
                 for key, value in summary.aggregates.items())
    return "\n".join(lines) + "\n"


def emit_report(summary: TrialSummary, path: str, fmt: str = "csv") -> str:
    """Write the report to ``path``; returns the path."""
    text = render_report(summary, fmt)
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(text)
    return path


def verify_all(config: ExperimentConfig) -> tuple[int, TrialSummary]:
    """Cross-module invariant battery; exit status 0 iff no counterexample."""
    if config.kind != "verify_all":
        raise ConfigError(f"verify_all needs kind verify_all, got {config.kind!r}")
    summary = run_trials(config)
    return summary.aggregates["exit_status"], summary


def _suite_oracle_equivalence(seed: int, fault: str | None):
    """Solver deficiency vs subset enumeration on random masks and the
    small catalog."""
    instances = 0
    counterexamples = 0
    detail = ""
    hosts: dict[int, ProductGraph] = {}
    for i in range(200):
        trial_seed = derive_trial_seed(seed, i)
        gen = Xoshiro256StarStar(trial_seed)
        order = 4 + gen.next_below(7)
        host = hosts.get(order)
        if host is None:
            host = build_product((BaseGraphSpec.complete(order),))
            hosts[order] = host
        p = 0.2 + 0.6 * gen.next_double()
        mask = bytes(1 if gen.next_double() < p else 0 for _ in range(host.m))
        solver = tutte_berge_deficiency(host, mask)
        if fault == "matching":
            solver += 1
        if solver != brute_deficiency(host, mask):
            counterexamples += 1
            if not detail:
                detail = f"random mask K{order} trial {i} seed {trial_seed}"
        instances += 1
    for j, name in enumerate(tiny_names(12)):
        pg = build_catalog_product(name)
        masks = [full_mask(pg)]
        for k in range(3):
            sample_seed = derive_trial_seed(derive_trial_seed(seed, 1000 + j), k)
            masks.append(sample_percolation(pg, 0.55, sample_seed).mask)
        for k, mask in enumerate(masks):
            solver = tutte_berge_deficiency(pg, mask)
            if fault == "matching":
                solver += 1
            if solver != brute_deficiency(pg, mask):
                counterexamples += 1
                if not detail:
                    detail = f"catalog {name} mask {k}"
            instances += 1
    return instances, counterexamples, detail


def _suite_isoperimetry_bounds():
    """Exhaustive f(k) >= f*(k), profile symmetry, and a spot profile."""
    instances = 0
    counterexamples = 0
    detail = ""
    for name in ("Q4", "K3xK3", "C4xK3", "C5xK2"):
        pg = build_catalog_product(name)
        params = BoundParams.from_product(pg, 0.5)
        profile = exhaustive_profile(pg, keep_witnesses=False)
        for k in range(1, pg.n):
            instances += 1
            bad_bound = profile.f_of(k) < f_star(params, k) - 1e-9
            bad_symmetry = profile.f_of(k) != profile.f_of(pg.n - k)
            if bad_bound or bad_symmetry:
                counterexamples += 1
                if not detail:
                    detail = f"{name} k={k}"
    q3 = exhaustive_profile(build_catalog_product("Q3"), keep_witnesses=False)
    instances += 1
    if q3.f != (3, 4, 5, 4, 5, 4, 3):
        counterexamples += 1
        if not detail:
            detail = f"Q3 profile {list(q3.f)}"
    return instances, counterexamples, detail


def _suite_edge_connectivity():
    """Global minimum cut equals the degree on regular products."""
    instances = 0
    counterexamples = 0
    detail = ""
    for name in ("K3xK3", "Q4", "C5xC5", "K4xK3"):
        pg = build_catalog_product(name)
        instances += 1
        if edge_connectivity(pg) != pg.d:
            counterexamples += 1
            if not detail:
                detail = name
    return instances, counterexamples, detail


def _suite_tree_bounds():
    """Rooted subtree counts against (e*d)**(k-1) for k up to 5."""
    instances = 0
    counterexamples = 0
    detail = ""
    for name in ("petersen", "Q3", "K5", "K3xK3"):
        pg = build_catalog_product(name)
        for k in range(1, 6):
            bound = rooted_tree_bound(pg.d, k)
            for v in range(pg.n):
                instances += 1
                if count_rooted_trees(pg, v, k) > bound + 1e-9:
                    counterexamples += 1
                    if not detail:
                        detail = f"{name} v={v} k={k}"
    return instances, counterexamples, detail


def _suite_star_identity():
    """Bipartition class difference (1-s)**t on star powers."""
    instances = 0
    counterexamples = 0
    detail = ""
    for s in (2, 3, 4):
        leaves_star = star(s)
        for t in range(1, 6):
            pg = cartesian_product([leaves_star] * t, require_regular=False)
            signature = bipartition_signature(pg)
            instances += 1
            if signature is None or signature[0] - signature[1] != (1 - s) ** t:
                counterexamples += 1
                if not detail:
                    detail = f"s={s} t={t} signature={signature}"
    return instances, counterexamples, detail


def _suite_obstruction_properties(seed: int):
    """Three-component and shared-W+S+B checks on seeded small samples."""
    instances = 0
    counterexamples = 0
    detail = ""
    names = [name for name in tiny_names(14) if name != "Q2"]
    products = [build_catalog_product(name) for name in names]
    for i in range(48):
        pg = products[i % len(products)]
        trial_seed = derive_trial_seed(seed, i)
        gen = Xoshiro256StarStar(trial_seed)
        p = 0.2 + 0.5 * gen.next_double()
        sample = sample_percolation(pg, p, derive_trial_seed(trial_seed, 1))
        u_cap = min(4, (pg.n - 1) // 2)
        minimal = find_minimal_obstructions(pg, sample, u_max=u_cap)
        for record in minimal:
            instances += 1
            if len(record.u_set) + len(record.v1) + len(record.w_set) + \
                    len(record.s_set) + len(record.b_set) != pg.n:
                counterexamples += 1
                if not detail:
                    detail = f"partition {names[i % len(names)]} trial {i}"
            report = verify_three_components(pg, sample, record)
            if report.counterexamples:
                counterexamples += 1
                if not detail:
                    detail = (f"three-component {names[i % len(names)]} trial {i} "
                              f"seed {trial_seed}")
        det = verify_determination(pg, sample, u_max=u_cap, minimal=minimal)
        instances += 1
        if det.violating_groups:
            counterexamples += 1
            if not detail:
                detail = f"determination {names[i % len(names)]} trial {i} seed {trial_seed}"
    return instances, counterexamples, detail


def _suite_coupling(seed: int):
    """Two-round union inclusion frequency within 4 sigma of p per edge."""
    pg = build_catalog_product("Q4")
    p = 0.5
    rounds = 10_000
    counts = [0] * pg.m
    for i in range(rounds):
        first, second, union = double_exposure(pg, p, derive_trial_seed(seed, i))
        if bytes(a | b for a, b in zip(first.mask, second.mask)) != union.mask:
            return 1, 1, f"union mismatch at trial {i}"
        for eid, bit in enumerate(union.mask):
            counts[eid] += bit
    sigma = math.sqrt(p * (1 - p) / rounds)
    counterexamples = 0
    detail = ""
    for eid, total in enumerate(counts):
        if abs(total / rounds - p) > 4 * sigma:
            counterexamples += 1
            if not detail:
                detail = f"edge {eid} freq {total / rounds:.5f}"
    return pg.m, counterexamples, detail


def _suite_hitting_sanity(seed: int):
    """Order invariants and bisect/incremental agreement on small runs."""
    instances = 0
    counterexamples = 0
    detail = ""
    for name_index, name in enumerate(("Q4", "K3xK3", "C4xK3")):
        pg = build_catalog_product(name)
        target = pg.n // 2
        for i in range(10):
            trial_seed = derive_trial_seed(derive_trial_seed(seed, name_index), i)
            ordering = sample_ordering(pg, trial_seed)
            times = run_process(pg, ordering, tau3_mode="bisect")
            sizes = incremental_matching_sizes(pg, ordering, stop_at=target)
            incremental = next((idx + 1 for idx, size in enumerate(sizes)
                                if size >= target), None)
            instances += 1
            bad_order = times.tau1 > times.tau2 or (
                pg.n % 2 == 0 and times.tau3 is not None and times.tau1 > times.tau3)
            if bad_order or times.tau3 != incremental:
                counterexamples += 1
                if not detail:
                    detail = f"{name} trial {i} seed {trial_seed}"
    return instances, counterexamples, detail


def _run_battery(config: ExperimentConfig):
    """Run every suite; rows name each suite with its counterexample count."""
    suites = (
        ("oracle_equivalence",
         lambda: _suite_oracle_equivalence(derive_trial_seed(config.seed, 1),
                                           config.fault_injection)),
        ("isoperimetry_bounds", _suite_isoperimetry_bounds),
        ("edge_connectivity", _suite_edge_connectivity),
        ("tree_bounds", _suite_tree_bounds),
        ("star_identity", _suite_star_identity),
        ("obstruction_properties",
         lambda: _suite_obstruction_properties(derive_trial_seed(config.seed, 2))),
        ("coupling_statistics",
         lambda: _suite_coupling(derive_trial_seed(config.seed, 3))),
        ("hitting_sanity",
         lambda: _suite_hitting_sanity(derive_trial_seed(config.seed, 4))),
    )
    rows = []
    total = 0
    for name, runner in suites:
        instances, counterexamples, detail = runner()
        total += counterexamples
        rows.append((name, instances, counterexamples,
                     "ok" if counterexamples == 0 else "fail",
                     detail.replace(",", ";") if detail else ""))
    aggregates = {
        "suites": len(rows),
        "counterexamples": total,
        "exit_status": 0 if total == 0 else 1,
    }
    return rows, aggregates
