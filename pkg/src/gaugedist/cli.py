"""Command-line surface: config-driven experiments with CSV/JSON/SVG reports.

One structured config file describes one run; the CLI dispatches to the
owning module, writes the result tables and fit summaries, and judges
any thresholds declared in the config.  Exit codes: 0 all verdicts
pass, 2 a threshold verdict failed, 1 error.  Outputs are byte-stable
for a fixed config and seed; the optional timestamp field is off by
default precisely to keep them so.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from . import bodies as B
from . import fourier as F
from . import distset as D
from . import fractal as X
from .errors import ConfigError, GaugedistError
from .svgplot import svg_decay_plot

_REQUIRED = object()


class ScanConfig:
    """Typed view over a parsed INI config with field-naming diagnostics."""

    def __init__(self, parser: configparser.ConfigParser, path: str,
                 seed: Optional[int] = None, threads: Optional[int] = None,
                 out_dir: Optional[str] = None):
        self._p = parser
        self.path = path
        self.seed = seed if seed is not None else self.get_int("run", "seed", 0)
        self.threads = threads if threads is not None else self.get_int("run", "threads", 1)
        self.out_dir = Path(out_dir if out_dir is not None
                            else self.get("run", "out_dir", "."))
        self.timestamp = self.get_bool("run", "timestamp", False)

    @classmethod
    def load(cls, path: str, **overrides) -> "ScanConfig":
        parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
        try:
            with open(path, "r", encoding="utf-8") as fh:
                parser.read_file(fh)
        except FileNotFoundError:
            raise ConfigError(f"{path}: config file not found") from None
        except configparser.Error as exc:
            raise ConfigError(f"{path}: {exc}") from None
        return cls(parser, path, **overrides)

    def has_section(self, section: str) -> bool:
        return self._p.has_section(section)

    def section(self, name: str) -> dict:
        if not self._p.has_section(name):
            raise ConfigError(f"{self.path}: missing required section [{name}]")
        return dict(self._p.items(name))

    def get(self, section: str, key: str, default=_REQUIRED) -> str:
        if self._p.has_option(section, key):
            return self._p.get(section, key).strip()
        if default is _REQUIRED:
            raise ConfigError(f"{self.path}: [{section}] {key}: missing required key")
        return default

    def _cast(self, section, key, raw, caster, what):
        try:
            return caster(raw)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(
                f"{self.path}: [{section}] {key}: expected {what}, got {raw!r}") from None

    def get_int(self, section, key, default=_REQUIRED) -> int:
        raw = self.get(section, key, default)
        if not isinstance(raw, str):
            return raw
        return self._cast(section, key, raw, int, "an integer")

    def get_float(self, section, key, default=_REQUIRED) -> float:
        raw = self.get(section, key, default)
        if not isinstance(raw, str):
            return raw
        return self._cast(section, key, raw, lambda s: float(Fraction(s)), "a number")

    def get_bool(self, section, key, default=_REQUIRED) -> bool:
        raw = self.get(section, key, default)
        if not isinstance(raw, str):
            return raw
        low = raw.lower()
        if low in ("on", "true", "yes", "1"):
            return True
        if low in ("off", "false", "no", "0"):
            return False
        raise ConfigError(f"{self.path}: [{section}] {key}: expected on/off, got {raw!r}")

    def get_list(self, section, key, default=_REQUIRED, cast=float):
        raw = self.get(section, key, default)
        if not isinstance(raw, str):
            return raw
        items = [t for t in raw.replace(",", " ").split() if t]
        if not items:
            raise ConfigError(f"{self.path}: [{section}] {key}: list is empty")
        return [self._cast(section, key, t, cast, cast.__name__) for t in items]

    def echo(self) -> dict:
        return {s: dict(self._p.items(s)) for s in self._p.sections()}


@dataclass
class Report:
    """Everything one run produced, JSON-serializable with stable keys."""

    experiment: str
    config_echo: dict
    tables: dict = field(default_factory=dict)
    fits: dict = field(default_factory=dict)
    verdicts: list = field(default_factory=list)
    metadata: dict = field(default_factory=dict)

    def add_verdict(self, name: str, value, threshold: str, passed: bool):
        self.verdicts.append({"name": name, "value": value,
                              "threshold": threshold, "passed": bool(passed)})

    @property
    def passed(self) -> bool:
        return all(v["passed"] for v in self.verdicts)

    def to_json(self) -> dict:
        return {
            "experiment": self.experiment,
            "metadata": {"version": __version__, **self.metadata},
            "config": self.config_echo,
            "tables": self.tables,
            "fits": self.fits,
            "verdicts": self.verdicts,
            "passed": self.passed,
        }


def _num(x) -> str:
    """Fixed CSV number rendering: '.' decimal, shortest stable form."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".12g")


def _write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_num(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def _write_json(path: Path, obj):
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8", newline="\n")


def _jsonable(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer, int)):
        return int(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    return x


def _fit_summary(profile: F.DecayProfile) -> dict:
    return {"gamma": profile.gamma, "C": profile.amplitude,
            "residual": profile.residual, "n_samples": int(profile.n_used),
            "n_dropped": int(profile.n_dropped), "log_power": int(profile.log_power)}


def _band_verdict(report: Report, cfg: ScanConfig, section: str, name: str, value: float):
    lo = cfg.get_float(section, f"{name}_min", None)
    hi = cfg.get_float(section, f"{name}_max", None)
    if lo is None and hi is None:
        return
    lo = -math.inf if lo is None else lo
    hi = math.inf if hi is None else hi
    report.add_verdict(name, value, f"[{_num(lo)}, {_num(hi)}]", lo <= value <= hi)


def _body_from(cfg: ScanConfig, rng) -> B.ConvexBody:
    return B.body_from_config(cfg.section("body"), rng)


def _r_grid(cfg: ScanConfig, section: str) -> np.ndarray:
    if cfg.get(section, "r_list", None) is not None:
        grid = np.array(cfg.get_list(section, "r_list"), dtype=float)
    else:
        r_min = cfg.get_float(section, "r_min", 8.0)
        r_max = cfg.get_float(section, "r_max", 512.0)
        spo = cfg.get_int(section, "samples_per_octave", 8)
        if not 0 < r_min < r_max:
            raise ConfigError(f"{cfg.path}: [{section}] r_min/r_max: need 0 < r_min < r_max")
        n = int(round(spo * math.log2(r_max / r_min))) + 1
        grid = np.geomspace(r_min, r_max, n)
    if len(grid) == 0 or np.any(np.diff(grid) <= 0) or np.any(grid <= 0):
        raise ConfigError(f"{cfg.path}: [{section}]: R grid must be positive and sorted")
    return grid


# ---------------------------------------------------------------------------
# experiment handlers


def _run_body_inspect(cfg: ScanConfig, report: Report):
    rng = np.random.default_rng(cfg.seed)
    body = _body_from(cfg, rng)
    n_theta = cfg.get_int("inspect", "n_theta", 16) if cfg.has_section("inspect") else 16
    thetas = np.arange(n_theta) * (2.0 * math.pi / n_theta)
    omegas = np.stack([np.cos(thetas), np.sin(thetas)], axis=1)
    sup = np.asarray(body.support(omegas), dtype=float)
    rad = 1.0 / np.asarray(body.gauge(omegas), dtype=float)
    rows = list(zip(thetas.tolist(), sup.tolist(), rad.tolist()))
    report.tables["boundary"] = [
        {"theta": t, "support": s, "radial": r} for t, s, r in rows]
    report.fits["summary"] = body.summary()
    do_curv = cfg.get_bool("inspect", "curvature", True) if cfg.has_section("inspect") else True
    if do_curv and body.dim == 2:
        curv = B.curvature_condition(body)
        report.fits["curvature"] = {"satisfied": bool(curv.satisfied),
                                    "c_sup": float(curv.c_sup),
                                    "flat_directions": _jsonable(curv.flat_directions)}
        expect = cfg.get("inspect", "expect_curvature", None) if cfg.has_section("inspect") else None
        if expect is not None:
            want = cfg.get_bool("inspect", "expect_curvature")
            report.add_verdict("curvature_satisfied", bool(curv.satisfied),
                               f"expected {want}", curv.satisfied == want)
    return [("theta", "support", "radial")] + [tuple(r) for r in rows]


def _run_decay_scan(cfg: ScanConfig, report: Report):
    rng = np.random.default_rng(cfg.seed)
    body = _body_from(cfg, rng)
    sec = "decay"
    kind = cfg.get(sec, "kind", "body")
    if kind not in ("body", "surface"):
        raise ConfigError(f"{cfg.path}: [decay] kind: expected body or surface, got {kind!r}")
    average = cfg.get(sec, "average", "l2")
    if average not in ("l1", "l2", "pointwise"):
        raise ConfigError(f"{cfg.path}: [decay] average: expected l1, l2 or pointwise")
    grid = _r_grid(cfg, sec)
    theta = cfg.get_float(sec, "theta", 0.0)
    if average == "pointwise":
        xi = np.stack([grid * math.cos(theta), grid * math.sin(theta)], axis=1)
        cplx = F.surface_ft(body, xi) if kind == "surface" else F.body_ft(body, xi)
        vals = np.abs(cplx)
        header = ("R", "theta", "value_re", "value_im", "abs")
        rows = [(R, theta, z.real, z.imag, abs(z)) for R, z in zip(grid, cplx)]
    else:
        p = 1 if average == "l1" else 2
        vals = np.array([F.spherical_average(body, R, kind=kind, p=p,
                                             threads=cfg.threads) for R in grid])
        header = ("R", "average")
        rows = list(zip(grid.tolist(), vals.tolist()))

    aggregation = cfg.get(sec, "aggregation", "envelope" if average == "pointwise" else "rms")
    wpo = cfg.get_int(sec, "windows_per_octave", 2)
    if aggregation == "none":
        R_fit, v_fit = grid, vals
    elif aggregation == "envelope":
        R_fit, v_fit = F.octave_envelope(grid, vals, wpo)
    elif aggregation in ("rms", "mean", "max"):
        R_fit, v_fit = F.window_aggregate(grid, vals, wpo, agg=aggregation)
    else:
        raise ConfigError(f"{cfg.path}: [decay] aggregation: unknown mode {aggregation!r}")

    log_power = (body.dim - 1) if cfg.get_bool(sec, "log_correction", False) else 0
    min_samples = min(8, len(R_fit))
    profile = F.decay_fit(R_fit, v_fit, log_power=log_power, min_samples=min_samples)
    report.fits["decay"] = _fit_summary(profile)
    report.tables["aggregated"] = [
        {"R": float(a), "value": float(b)} for a, b in zip(R_fit, v_fit)]
    _band_verdict(report, cfg, sec, "gamma", profile.gamma)

    svg_name = cfg.get("out", "svg", None)
    if svg_name:
        text = svg_decay_plot(R_fit, v_fit, profile,
                              title=f"{body.kind()} {kind} {average} decay",
                              xlabel="R", ylabel=f"|{kind} transform| {average}")
        (cfg.out_dir / svg_name).write_text(text, encoding="utf-8", newline="\n")
    return [header] + rows


def _distset_family(cfg: ScanConfig, sec: str):
    family = cfg.get(sec, "family", "lattice")
    angle = cfg.get_float(sec, "angle", 0.0)
    jitter = cfg.get_float(sec, "jitter", 0.25)
    seed = cfg.seed
    if family == "lattice":
        return D.PointSet.lattice, "lattice"
    if family == "rotated_lattice":
        return (lambda q: D.PointSet.rotated_lattice(q, angle)), f"rotated_lattice(angle={angle})"
    if family == "perturbed_lattice":
        return (lambda q: D.PointSet.perturbed_lattice(q, seed, jitter)), \
            f"perturbed_lattice(seed={seed}, jitter={jitter})"
    raise ConfigError(f"{cfg.path}: [{sec}] family: unknown family {family!r}")


def _run_distset_scan(cfg: ScanConfig, report: Report):
    rng = np.random.default_rng(cfg.seed)
    body = _body_from(cfg, rng)
    sec = "distset"
    q_list = sorted(cfg.get_list(sec, "q_list", cast=int))
    if not q_list:
        raise ConfigError(f"{cfg.path}: [distset] q_list: empty")
    mode = cfg.get(sec, "mode", "float_tol")
    alpha = cfg.get_float(sec, "alpha", None)
    slack = cfg.get_float(sec, "slack", 0.1)
    family, fam_label = _distset_family(cfg, sec)

    rows = []
    counts = []
    for q in q_list:
        ds = D.distance_set(family(q), body, mode, threads=cfg.threads)
        rows.append((q, ds.count, ds.min_gap))
        counts.append(ds.count)
    grow = D.growth_scan(family, body, q_list, alpha=alpha, slack=slack,
                         mode=mode, threads=cfg.threads)
    probe = D.polygonality_probe(grow)
    report.tables["scan"] = [
        {"q": int(q), "count": int(c), "min_gap": float(g)} for q, c, g in rows]
    report.fits["growth"] = {"beta": grow.beta, "amplitude": grow.amplitude,
                             "bound": grow.bound, "verdict": grow.verdict,
                             "n_fit": grow.n_fit, "family": fam_label,
                             "classification": probe}
    if alpha is not None:
        report.add_verdict("beta_bound", grow.beta,
                           f">= {_num(grow.bound)} - {_num(slack)}", bool(grow.verdict))
    _band_verdict(report, cfg, sec, "beta", grow.beta)
    expect_cls = cfg.get(sec, "expect_classification", None)
    if expect_cls is not None:
        report.add_verdict("classification", probe, f"expected {expect_cls}",
                           probe == expect_cls)

    svg_name = cfg.get("out", "svg", None)
    if svg_name:
        profile = F.DecayProfile(gamma=-grow.beta, amplitude=grow.amplitude,
                                 residual=0.0, n_used=len(q_list), n_dropped=0,
                                 log_power=0, R=np.array([float(q) for q in q_list]),
                                 values=np.array([float(c) for c in counts]))
        text = svg_decay_plot([float(q) for q in q_list],
                              [float(c) for c in counts], profile,
                              title=f"distinct distances, {fam_label}",
                              xlabel="q", ylabel="count")
        (cfg.out_dir / svg_name).write_text(text, encoding="utf-8", newline="\n")
    return [("q", "count", "min_gap")] + rows


def _run_fractal_build(cfg: ScanConfig, report: Report):
    sec = "fractal"
    construction = cfg.get(sec, "construction", "cantor")
    if construction not in ("cantor", "dio"):
        raise ConfigError(f"{cfg.path}: [fractal] construction: expected cantor or dio")
    rows = [("a", "b")]
    if construction == "cantor":
        m = cfg.get_int(sec, "m", 2)
        depth = cfg.get_int(sec, "depth", 8)
        spec = X.CantorSpec(m, depth)
        iterate = X.cantor_build(spec)
        rows += [(str(a), str(b)) for a, b in iterate.intervals]
        report.fits["cantor"] = {
            "m": m, "depth": depth, "intervals": iterate.count,
            "total_length": str(iterate.total_length),
            "total_length_float": float(iterate.total_length)}
        if cfg.get_bool(sec, "difference_cover", True):
            dc = X.difference_cover(spec)
            report.fits["difference_cover"] = {
                "pre_merge_count": dc.pre_merge_count,
                "pre_merge_length": str(dc.pre_merge_length),
                "pre_merge_length_float": float(dc.pre_merge_length),
                "merged_intervals": dc.union.count,
                "merged_length": str(dc.union.total_length),
                "merged_length_float": float(dc.union.total_length)}
            hi = cfg.get_float(sec, "cover_length_max", None)
            if hi is not None:
                val = float(dc.union.total_length)
                report.add_verdict("cover_length", val, f"< {_num(hi)}", val < hi)
        exps = cfg.get_list(sec, "box_exponents", None, cast=int)
        if exps is None:
            bits = max(1, int(round(math.log2(2 * m))))
            exps = [bits * j for j in range(1, depth + 1)]
        dims = cfg.get_int(sec, "dims", 1)
        scales = [Fraction(1, 2 ** e) for e in exps]
        target = iterate if dims == 1 else tuple([iterate] * dims)
        dim_val = X.box_dim(target, scales)
        report.fits["box_dim"] = {"value": dim_val, "dims": dims,
                                  "scales": [str(s) for s in scales]}
        _band_verdict(report, cfg, sec, "box_dim", dim_val)
        for gamma in cfg.get_list(sec, "energy_gammas", []):
            mu = X.natural_measure(spec, dims=2)
            ladder = X.energy_ladder(mu, gamma, cfg.get_list(sec, "energy_T", [16, 32, 64]))
            key = f"energy_gamma_{_num(gamma)}"
            report.fits[key] = {"T": _jsonable(ladder.T_values),
                                "integrals": _jsonable(ladder.integrals),
                                "increments": _jsonable(ladder.increments),
                                "trend": ladder.trend}
            expect = cfg.get(sec, f"expect_trend_{_num(gamma)}", None)
            if expect is not None:
                report.add_verdict(key, ladder.trend, f"expected {expect}",
                                   ladder.trend == expect)
    else:
        q = cfg.get_int(sec, "q", 4)
        s = cfg.get_float(sec, "s", 1.0)
        family, fam_label = _distset_family(cfg, sec)
        S = family(q)
        dio = X.dio_build(X.DioSpec(S, q, s))
        rows += list(dio.axis_union())
        report.fits["dio"] = {"q": q, "s": s, "family": fam_label,
                              "cubes": dio.count, "half_side": dio.half_side,
                              "disjoint": bool(dio.disjoint)}
    return rows


def _run_convert_demo(cfg: ScanConfig, report: Report):
    """Discrete-to-continuous conversion ledger along a q ladder.

    Counts distinct distances of S_q, covers the distance set of the
    matching diophantine stage, and compares the fitted growth exponent
    against the conversion bound d/alpha.
    """
    rng = np.random.default_rng(cfg.seed)
    body = _body_from(cfg, rng)
    sec = "convert"
    q_list = sorted(cfg.get_list(sec, "q_list", cast=int))
    s = cfg.get_float(sec, "s", 1.0)
    alpha = cfg.get_float(sec, "alpha", 4.0 / 3.0)
    slack = cfg.get_float(sec, "slack", 0.1)
    mode = cfg.get(sec, "mode", "float_tol")
    family, fam_label = _distset_family(cfg, sec)

    rows = []
    for q in q_list:
        S = family(q)
        cover = X.delta_cover(X.DioSpec(S, q, s), body, mode=mode)
        rows.append((q, cover.count, cover.total_length, cover.half_width))
    grow = D.growth_scan(family, body, q_list, alpha=alpha, slack=slack,
                         mode=mode, threads=cfg.threads)
    d = family(q_list[0]).dim
    dim_bound = s * grow.beta / d
    report.tables["ladder"] = [
        {"q": int(q), "count": int(c), "cover_length": float(L),
         "half_width": float(h)} for q, c, L, h in rows]
    report.fits["conversion"] = {
        "family": fam_label, "s": s, "beta": grow.beta,
        "conversion_bound": grow.bound, "dim_bound_s_beta_over_d": dim_bound,
        "verdict": grow.verdict}
    report.add_verdict("beta_bound", grow.beta,
                       f">= {_num(grow.bound)} - {_num(slack)}", bool(grow.verdict))
    return [("q", "count", "cover_length", "half_width")] + rows


def _run_lemma_check(cfg: ScanConfig, report: Report):
    rng = np.random.default_rng(cfg.seed)
    body = _body_from(cfg, rng)
    sec = "lemma"
    which = cfg.get(sec, "which", "both")
    if which not in ("chord", "annulus", "both"):
        raise ConfigError(f"{cfg.path}: [lemma] which: expected chord, annulus or both")
    rows = [("check", "t_or_R", "xi", "delta", "theta", "value", "bound", "ratio")]

    if which in ("chord", "both"):
        t_min = cfg.get_float(sec, "t_min", 4.0)
        t_max = cfg.get_float(sec, "t_max", 1024.0)
        spo = cfg.get_int(sec, "t_per_octave", 4)
        n = int(round(spo * math.log2(t_max / t_min))) + 1
        t_grid = np.geomspace(t_min, t_max, n)
        n_theta = cfg.get_int(sec, "n_theta", 64)
        rep = F.chord_bound_report(body, t_grid, n_theta=n_theta)
        for i, t in enumerate(rep.t_values):
            row = rep.ratios[i]
            if not np.any(np.isfinite(row)):
                continue
            j = int(np.nanargmax(row))
            rows.append(("chord", float(t), "", "", float(rep.thetas[j]),
                         "", "", float(row[j])))
        spread_max = cfg.get_float(sec, "spread_max", 2.0)
        report.fits["chord_bound"] = {
            "octave_max": _jsonable(rep.octave_max),
            "octave_spread": rep.octave_spread,
            "n_skipped": int(rep.n_skipped)}
        report.add_verdict("chord_octave_spread", rep.octave_spread,
                           f"<= {_num(spread_max)}", rep.octave_spread <= spread_max)

    if which in ("annulus", "both"):
        R_list = cfg.get_list(sec, "r_list", [1.0, 2.0, 4.0, 8.0])
        xi_list = cfg.get_list(sec, "xi_list", [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0])
        d_list = cfg.get_list(sec, "delta_list", [1e-3, 1e-2, 1e-1])
        n_theta = cfg.get_int(sec, "annulus_theta", 16)
        rep = F.annulus_bound_report(body, R_list, xi_list, d_list, n_theta=n_theta)
        for r in rep.rows:
            rows.append(("annulus", r[0], r[1], r[2], r[3], r[4], r[5], r[6]))
        report.fits["annulus_bound"] = {
            "c_hat": rep.c_hat, "growth_slope": rep.growth_slope,
            "divergent": bool(rep.divergent),
            "c_by_xi": _jsonable(rep.c_by_xi)}
        expect = cfg.get(sec, "expect_annulus", None)
        if expect is not None:
            if expect not in ("bounded", "divergent"):
                raise ConfigError(f"{cfg.path}: [lemma] expect_annulus: "
                                  "expected bounded or divergent")
            got = "divergent" if rep.divergent else "bounded"
            report.add_verdict("annulus_behavior", got, f"expected {expect}",
                               got == expect)
        refine = cfg.get_bool(sec, "refine", False)
        if refine:
            rep2 = F.annulus_bound_report(body, R_list, xi_list, d_list,
                                          n_theta=2 * n_theta)
            ratio = rep2.c_hat / rep.c_hat if rep.c_hat > 0 else math.inf
            report.fits["annulus_refinement"] = {"c_hat_refined": rep2.c_hat,
                                                 "ratio": ratio}
            report.add_verdict("annulus_refinement", ratio, "< 2.0",
                               max(ratio, 1.0 / ratio) < 2.0)
    return rows


_HANDLERS = {
    "body inspect": _run_body_inspect,
    "decay scan": _run_decay_scan,
    "distset scan": _run_distset_scan,
    "fractal build": _run_fractal_build,
    "convert demo": _run_convert_demo,
    "lemma check": _run_lemma_check,
}


def run(experiment: str, cfg: ScanConfig) -> Report:
    """Dispatch one experiment and write its CSV/JSON outputs."""
    declared = cfg.get("run", "experiment", None)
    if declared is not None and declared != experiment.split()[0] \
            and declared.replace("-", " ") != experiment:
        raise ConfigError(f"{cfg.path}: [run] experiment: config declares "
                          f"{declared!r} but the command line asked for {experiment!r}")
    report = Report(experiment, cfg.echo())
    report.metadata["seed"] = cfg.seed
    if cfg.timestamp:
        report.metadata["timestamp"] = datetime.now(timezone.utc).isoformat()
    cfg.out_dir.mkdir(parents=True, exist_ok=True)  # handlers may emit SVGs
    table = _HANDLERS[experiment](cfg, report)

    base = experiment.replace(" ", "_")
    csv_name = cfg.get("out", "csv", f"{base}.csv")
    json_name = cfg.get("out", "json", f"{base}.json")
    _write_csv(cfg.out_dir / csv_name, table[0], table[1:])
    _write_json(cfg.out_dir / json_name, _jsonable_deep(report.to_json()))
    return report


def _jsonable_deep(obj):
    if isinstance(obj, dict):
        return {k: _jsonable_deep(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable_deep(v) for v in obj]
    return _jsonable(obj)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gaugedist",
        description="Convex-body gauge geometry, Fourier decay, and distance-set scans")
    sub = parser.add_subparsers(dest="group", required=True)
    actions = {"body": "inspect", "decay": "scan", "distset": "scan",
               "fractal": "build", "convert": "demo", "lemma": "check"}
    for group, action in actions.items():
        g = sub.add_parser(group)
        gs = g.add_subparsers(dest="action", required=True)
        a = gs.add_parser(action)
        a.add_argument("--config", required=True, help="path to the INI config")
        a.add_argument("--out", default=None, help="output directory")
        a.add_argument("--seed", type=int, default=None, help="RNG seed override")
        a.add_argument("--threads", type=int, default=None, help="worker threads")
    args = parser.parse_args(argv)
    experiment = f"{args.group} {actions[args.group]}"
    try:
        cfg = ScanConfig.load(args.config, seed=args.seed, threads=args.threads,
                              out_dir=args.out)
        report = run(experiment, cfg)
    except GaugedistError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    for v in report.verdicts:
        mark = "pass" if v["passed"] else "FAIL"
        print(f"[{mark}] {v['name']} = {v['value']} (threshold {v['threshold']})")
    if not report.verdicts:
        print(f"{experiment}: done (no thresholds declared)")
    return 0 if report.passed else 2


if __name__ == "__main__":
    sys.exit(main())
