"""Command-line entry point: validated JSON configs in, deterministic files out.

Exit status is 0 on success, 1 on an invalid config and 2 when an experiment
runs but its assertion fails.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import math
import platform
import sys
import time
import warnings
from enum import Enum
from pathlib import Path
from typing import Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from . import __version__, export, partition, rieck, surface
from .config import DEFAULT, Tolerances
from .errors import ConfigInvalid, CSDCError, PairNotReal
from .geometry import ControlTriangle, Viewpoint, dc_value, make_triangle

COMMANDS = ("sweep", "fit", "member", "cross", "map", "fold", "rank", "rieck-report", "deltoid")


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TriangleConfig(_Strict):
    phi_a: float = 0.0
    phi_b: float = 2.0 * math.pi / 3.0
    phi_c: float = -2.0 * math.pi / 3.0


class GridConfig(_Strict):
    """Explicit values, or ``n`` points from ``start`` to ``stop``."""

    values: Optional[list[float]] = None
    n: Optional[int] = Field(default=None, ge=1)
    start: float = 0.0
    stop: float = 2.0 * math.pi
    endpoint: bool = False
    log: bool = False

    @model_validator(mode="after")
    def _one_form(self):
        if (self.values is None) == (self.n is None):
            raise ValueError("give exactly one of 'values' or 'n'")
        if self.log and (self.start <= 0 or self.stop <= 0):
            raise ValueError("log grids need positive start and stop")
        return self

    def array(self) -> np.ndarray:
        if self.values is not None:
            return np.asarray(self.values, dtype=float)
        if self.log:
            return np.geomspace(self.start, self.stop, self.n, endpoint=self.endpoint)
        return np.linspace(self.start, self.stop, self.n, endpoint=self.endpoint)


class SweepConfig(_Strict):
    theta: Optional[GridConfig] = None
    z0: Optional[GridConfig] = None
    random: Optional[int] = Field(default=None, ge=1, description="random sources instead of a grid")
    z_range: tuple[float, float] = (0.05, 20.0)
    log_uniform: bool = True
    jitter: float = Field(default=0.0, ge=0.0, description="uniform theta/z0 jitter half-width")

    @model_validator(mode="after")
    def _grid_or_random(self):
        if self.random is None and (self.theta is None or self.z0 is None):
            raise ValueError("give 'theta' and 'z0' grids or 'random'")
        return self

    @property
    def randomized(self) -> bool:
        return self.random is not None or self.jitter > 0


class ObjConfig(_Strict):
    bounds: tuple[tuple[float, float], tuple[float, float], tuple[float, float]] = (
        (-4.0, 4.0), (-4.0, 4.0), (-4.0, 4.0))
    resolution: int = Field(default=64, ge=8, le=256)


class FitConfig(_Strict):
    samples_csv: Optional[str] = None
    sweep: Optional[SweepConfig] = None
    degree: int = Field(default=12, ge=1, le=20)
    even_in_z: bool = True
    holdout: float = Field(default=0.2, gt=0.0, lt=1.0)
    compare_degrees: list[int] = Field(default_factory=list)
    nondivisibility_points: int = Field(default=100, ge=1)
    obj: Optional[ObjConfig] = None
    max_heldout_rms: float = 1e-6

    @model_validator(mode="after")
    def _source(self):
        if (self.samples_csv is None) == (self.sweep is None):
            raise ValueError("give exactly one of 'samples_csv' or 'sweep'")
        return self


class MemberConfig(_Strict):
    points: list[tuple[float, float, float]]
    tol: Optional[float] = None
    precision: Literal["auto", "double", "mp"] = "auto"


class PathConfig(_Strict):
    start: tuple[float, float, float]
    end: tuple[float, float, float]
    n_samples: int = Field(default=400, ge=3)


class RandomCrossConfig(_Strict):
    n: int = Field(default=100, ge=1)
    z_range: tuple[float, float] = (0.3, 3.0)
    half_length: float = Field(default=0.02, gt=0.0)


class CrossConfig(_Strict):
    paths: list[PathConfig] = Field(default_factory=list)
    random: Optional[RandomCrossConfig] = None

    @model_validator(mode="after")
    def _something(self):
        if not self.paths and self.random is None:
            raise ValueError("give 'paths' or 'random'")
        return self


class SliceConfig(_Strict):
    origin: tuple[float, float, float] = (-3.0, -3.0, 1.5)
    u: tuple[float, float, float] = (6.0 / 255.0, 0.0, 0.0)
    v: tuple[float, float, float] = (0.0, 6.0 / 255.0, 0.0)
    n_u: int = Field(default=256, ge=1, le=2048)
    n_v: int = Field(default=256, ge=1, le=2048)


class MapConfig(_Strict):
    slice: SliceConfig = Field(default_factory=SliceConfig)
    boundary_probes: int = Field(default=100, ge=0)
    boundary_reach: int = Field(default=2, ge=0)


class FoldPoint(_Strict):
    theta: float
    z0: float
    direction: tuple[float, float, float]


class FoldConfig(_Strict):
    points: list[FoldPoint] = Field(default_factory=list)
    random: Optional[int] = Field(default=None, ge=1)
    z_range: tuple[float, float] = (0.3, 3.0)
    epsilons: list[float] = Field(default_factory=lambda: list(partition.EPSILONS))
    auto_flip: bool = True
    min_null_component: float = Field(default=0.1, ge=0.0, le=1.0)
    exponent_tolerance: float = 0.05

    @model_validator(mode="after")
    def _something(self):
        if not self.points and self.random is None:
            raise ValueError("give 'points' or 'random'")
        return self


class RankConfig(_Strict):
    points: list[tuple[float, float, float]] = Field(default_factory=list)
    random_dc: int = Field(default=0, ge=0)
    random_off: int = Field(default=0, ge=0)
    z_range: tuple[float, float] = (0.3, 3.0)
    box: tuple[tuple[float, float], tuple[float, float], tuple[float, float]] = (
        (-3.0, 3.0), (-3.0, 3.0), (0.3, 3.0))
    off_margin: float = Field(default=0.05, gt=0.0)
    dc_max_ratio: float = 1e-8
    off_min_ratio: float = 1e-3


class RieckConfig(_Strict):
    n: int = Field(default=1000, ge=1)
    box: tuple[tuple[float, float], tuple[float, float], tuple[float, float]] = (
        (-2.0, 2.0), (-2.0, 2.0), (0.2, 3.0))
    anchor: Optional[tuple[float, float, float]] = (0.3, 0.2, 1.0)
    hold_tol: float = 1e-6


class DeltoidConfig(_Strict):
    z0_values: list[float] = Field(default_factory=lambda: [10.0, 100.0, 1000.0])
    n_theta: int = Field(default=100, ge=3)
    max_distance: float = 1e-2
    min_ratio: float = 10.0


class ExperimentConfig(_Strict):
    triangle: TriangleConfig = Field(default_factory=TriangleConfig)
    tolerances: dict[str, Union[int, float]] = Field(default_factory=dict)
    seed: Optional[int] = Field(default=None, ge=0, lt=2 ** 64)
    out: Optional[str] = None
    threads: int = Field(default=1, ge=1)
    sweep: Optional[SweepConfig] = None
    fit: Optional[FitConfig] = None
    member: Optional[MemberConfig] = None
    cross: Optional[CrossConfig] = None
    map: Optional[MapConfig] = None
    fold: Optional[FoldConfig] = None
    rank: Optional[RankConfig] = None
    rieck_report: Optional[RieckConfig] = Field(default=None, alias="rieck-report")
    deltoid: Optional[DeltoidConfig] = None

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    @model_validator(mode="after")
    def _tolerance_names(self):
        known = {f.name for f in dataclasses.fields(Tolerances)}
        bad = sorted(set(self.tolerances) - known)
        if bad:
            raise ValueError(f"unknown tolerance fields: {', '.join(bad)}")
        return self

    def block(self, command: str):
        name = command.replace("-", "_")
        blk = getattr(self, name)
        if blk is None:
            defaults = {"map": MapConfig, "rieck_report": RieckConfig, "deltoid": DeltoidConfig}
            if name not in defaults:
                raise ConfigInvalid(f"field '{command}': block required for this command")
            blk = defaults[name]()
        return blk

    def randomized(self, command: str) -> bool:
        b = self.block(command)
        if command == "sweep":
            return b.randomized
        if command == "fit":
            return b.sweep is not None and b.sweep.randomized
        if command == "cross":
            return b.random is not None
        if command == "fold":
            return b.random is not None
        if command == "rank":
            return b.random_dc > 0 or b.random_off > 0
        return command == "rieck-report"

    def tolerance_record(self) -> Tolerances:
        return DEFAULT.with_overrides(**self.tolerances)

    def make_triangle(self) -> ControlTriangle:
        t = self.triangle
        return make_triangle(t.phi_a, t.phi_b, t.phi_c, self.tolerance_record())


# ------------------------------------------------------------ serialization

def jsonable(obj):
    """Plain JSON types; NaN and infinities become null."""
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return jsonable(dataclasses.asdict(obj))
    if isinstance(obj, BaseModel):
        return jsonable(obj.model_dump(by_alias=True))
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): jsonable(v)
                for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, complex):
        return [jsonable(obj.real), jsonable(obj.imag)]
    if obj is None or isinstance(obj, str):
        return obj
    return str(obj)


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), indent=1, sort_keys=True, allow_nan=False) + "\n"


# ------------------------------------------------------------ commands

class ExperimentFailed(Exception):
    """An experiment ran to completion but its assertion does not hold."""


def _rng_seed(cfg: ExperimentConfig) -> int:
    return int(cfg.seed) if cfg.seed is not None else 0


def _sweep_params(sw: SweepConfig, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if sw.random is not None:
        P = surface.random_sources(sw.random, int(rng.integers(2 ** 63)), tuple(sw.z_range),
                                   sw.log_uniform)
    else:
        T, Z = np.meshgrid(sw.theta.array(), sw.z0.array(), indexing="ij")
        P = np.column_stack([T.ravel(), Z.ravel()])
    if sw.jitter > 0:
        P = P + rng.uniform(-sw.jitter, sw.jitter, P.shape)
    return P


def cmd_sweep(cfg, tri, tol, out: Path) -> dict:
    sw = cfg.block("sweep")
    res, _ = surface.sweep_sources(tri, _sweep_params(sw, _rng_seed(cfg)), tol,
                                   workers=cfg.threads)
    if not res.samples:
        raise ExperimentFailed("sweep produced no samples")
    export.write(out / "samples.csv", export.samples_csv(res.samples))
    report = {"n_sources": res.n_sources, "n_samples": len(res.samples),
              "excluded": res.excluded}
    export.write(out / "sweep_report.json", dumps(report))
    return report


def _read_samples_csv(path: str) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 2:5]


def cmd_fit(cfg, tri, tol, out: Path) -> dict:
    ft = cfg.block("fit")
    if ft.samples_csv is not None:
        X = _read_samples_csv(ft.samples_csv)
    else:
        res, _ = surface.sweep_sources(tri, _sweep_params(ft.sweep, _rng_seed(cfg)), tol,
                                       workers=cfg.threads)
        X = res.points()
        if not res.samples:
            raise ExperimentFailed("sweep produced no samples")
        export.write(out / "samples.csv", export.samples_csv(res.samples))
    fits = {}
    for deg in [ft.degree, *ft.compare_degrees]:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            poly, rep = surface.fit_poly(X, deg, ft.even_in_z, ft.holdout, _rng_seed(cfg), tol)
        fits[deg] = (poly, rep, [str(w.message) for w in caught])
    poly, rep, warns = fits[ft.degree]
    export.write(out / "poly.json", poly.to_json())
    nondiv = surface.dc_nondivisibility(poly, ft.nondivisibility_points, _rng_seed(cfg), avoid=X)
    report = {
        "fit": rep, "warnings": warns,
        "dc_nondivisibility": nondiv,
        "dc_residual_rms": surface.dc_residual_rms(poly),
        "compare": {str(d): {"fit": fits[d][1], "warnings": fits[d][2]}
                    for d in ft.compare_degrees},
    }
    export.write(out / "fit_report.json", dumps(report))
    if ft.obj is not None:
        export.write(out / "surface.obj", export.surface_obj(poly, ft.obj.bounds, ft.obj.resolution))
    if not rep.heldout_rms <= ft.max_heldout_rms:
        raise ExperimentFailed(f"held-out RMS {rep.heldout_rms:.3e} above {ft.max_heldout_rms:.1e}")
    return report


def cmd_member(cfg, tri, tol, out: Path) -> dict:
    mb = cfg.block("member")
    verdicts = [surface.membership(tri, p, mb.tol, tol, mb.precision) for p in mb.points]
    report = {"points": mb.points, "verdicts": verdicts}
    export.write(out / "membership.json", dumps(report))
    return report


def _check_crossing(c) -> bool:
    return c.tangential or c.surface != "CSDC" or (abs(c.delta) == 2 and c.pair_transitions == 1)


def cmd_cross(cfg, tri, tol, out: Path) -> dict:
    cr = cfg.block("cross")
    report: dict = {"paths": []}
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        for p in cr.paths:
            path = partition.PathSpec(Viewpoint(*p.start), Viewpoint(*p.end), p.n_samples,
                                      tol.bisection)
            report["paths"].append({"path": p, "crossings": partition.detect_crossings(tri, path, tol)})
        if cr.random is not None:
            rs = partition.crossing_survey(tri, cr.random.n, _rng_seed(cfg), tuple(cr.random.z_range),
                                           cr.random.half_length, tol, cfg.threads)
            report["random"] = rs
    report["warnings"] = [str(w.message) for w in caught]
    crossings = [c for p in report["paths"] for c in p["crossings"]]
    crossings += report.get("random", {}).get("reports", [])
    report["all_csdc_delta_two"] = all(_check_crossing(c) for c in crossings)
    export.write(out / "crossings.json", dumps(report))
    if not report["all_csdc_delta_two"]:
        raise ExperimentFailed("a CSDC crossing changed the count by other than 2")
    return report


def cmd_map(cfg, tri, tol, out: Path) -> dict:
    mp_ = cfg.block("map")
    s = mp_.slice
    spec = partition.SliceSpec(s.origin, s.u, s.v, s.n_u, s.n_v)
    cm = partition.count_map(tri, spec, tol)
    export.write(out / "count_map.csv", export.count_map_csv(cm))
    export.write(out / "count_map.pgm", export.count_map_pgm(cm.counts))
    values, freq = np.unique(cm.counts, return_counts=True)
    report = {"histogram": {str(int(v)): int(f) for v, f in zip(values, freq)}}
    if mp_.boundary_probes:
        report["boundary"] = partition.boundary_probes(cm, mp_.boundary_probes, _rng_seed(cfg),
                                                       mp_.boundary_reach)
    export.write(out / "count_map.json", dumps(report))
    return report


def cmd_fold(cfg, tri, tol, out: Path) -> dict:
    fd = cfg.block("fold")
    rows = []
    for p in fd.points:
        O = Viewpoint(math.cos(p.theta), math.sin(p.theta), p.z0)
        try:
            rep = partition.fold_scaling(tri, O, p.direction, fd.epsilons, fd.auto_flip, tol)
            rows.append({"point": p, "report": rep})
        except PairNotReal as exc:
            rows.append({"point": p, "error": str(exc), "evidence": exc.evidence})
    report: dict = {"points": rows}
    exps = [r["report"].exponent for r in rows if "report" in r]
    if fd.random is not None:
        sv = partition.fold_survey(tri, fd.random, _rng_seed(cfg), tuple(fd.z_range),
                                   min_null_component=fd.min_null_component,
                                   epsilons=fd.epsilons, tol=tol)
        report["survey"] = sv
        exps += [r["exponent"] for r in sv["rows"]]
        exps += [r["imag_exponent"] for r in sv["rows"]]
    ok = all(abs(e - 0.5) <= fd.exponent_tolerance for e in exps)
    report["exponents_within_tolerance"] = ok
    export.write(out / "fold.json", dumps(report))
    if not ok:
        raise ExperimentFailed("fold exponent outside 0.5 +- tolerance")
    return report


def cmd_rank(cfg, tri, tol, out: Path) -> dict:
    rk = cfg.block("rank")
    rng = np.random.default_rng(_rng_seed(cfg))
    explicit = [partition.jacobian_analysis(tri, p, tol) for p in rk.points]
    dc_rows, off_rows = [], []
    for _ in range(rk.random_dc):
        th, z = rng.uniform(0, 2 * np.pi), rng.uniform(*rk.z_range)
        O = (math.cos(th), math.sin(th), z)
        dc_rows.append({"viewpoint": O, "ratio": partition.jacobian_analysis(tri, O, tol).ratio})
    lo = np.array([b[0] for b in rk.box])
    hi = np.array([b[1] for b in rk.box])
    while len(off_rows) < rk.random_off:
        X = lo + (hi - lo) * rng.random(3)
        if abs(dc_value(X)) < rk.off_margin:
            continue
        off_rows.append({"viewpoint": X, "ratio": partition.jacobian_analysis(tri, X, tol).ratio})
    report = {"explicit": [{"viewpoint": p, "analysis": a.as_dict()}
                           for p, a in zip(rk.points, explicit)],
              "dc": dc_rows, "off": off_rows,
              "dc_max_ratio": max((r["ratio"] for r in dc_rows), default=None),
              "off_min_ratio": min((r["ratio"] for r in off_rows), default=None)}
    export.write(out / "rank.json", dumps(report))
    if dc_rows and not report["dc_max_ratio"] <= rk.dc_max_ratio:
        raise ExperimentFailed("Jacobian not rank 2 on the danger cylinder")
    if off_rows and not report["off_min_ratio"] >= rk.off_min_ratio:
        raise ExperimentFailed("Jacobian near-singular off the danger cylinder")
    return report


def cmd_rieck(cfg, tri, tol, out: Path) -> dict:
    rc = cfg.block("rieck-report")
    rep = rieck.survey(tri, rc.n, _rng_seed(cfg), tuple(map(tuple, rc.box)),
                       tuple(rc.anchor) if rc.anchor is not None else None, rc.hold_tol, tol)
    try:
        bc = rieck.basis_coeffs(tri, tol)
        rep["basis_coeffs"] = {"k": bc.k, "E": bc.E, "linear_remainder": bc.linear_remainder,
                               "condition": bc.condition}
    except CSDCError as exc:
        rep["basis_coeffs"] = {"error": str(exc)}
    dci = rieck.derive_dc_implicit(tri)
    rep["dc_implicit"] = {"coefficients": dci.coefficients, "norm": dci.norm,
                          "metadata": dci.metadata}
    rep["printed_forms_on_circle"] = rieck.printed_forms_on_circle(
        np.linspace(0, 2 * np.pi, 12, endpoint=False))
    if rc.anchor is not None:
        rep["p_constraint_at_anchor"] = rieck.p_constraint_diagnostic(tri, rc.anchor, tol)
    export.write(out / "rieck_report.json", dumps(rep))
    return rep


def cmd_deltoid(cfg, tri, tol, out: Path) -> dict:
    dl = cfg.block("deltoid")
    rep = surface.deltoid_limit_check(tri, sorted(dl.z0_values), dl.n_theta, tol, cfg.threads)
    last = rep["rows"][-1]
    rep["pass"] = bool(rep["monotone"] and rep["ratio"] >= dl.min_ratio
                       and last["max_distance"] <= dl.max_distance)
    export.write(out / "deltoid.json", dumps(rep))
    if not rep["pass"]:
        raise ExperimentFailed("companions do not converge to the deltoid")
    return rep


HANDLERS = {"sweep": cmd_sweep, "fit": cmd_fit, "member": cmd_member, "cross": cmd_cross,
            "map": cmd_map, "fold": cmd_fold, "rank": cmd_rank, "rieck-report": cmd_rieck,
            "deltoid": cmd_deltoid}


# ------------------------------------------------------------ entry point

def _line_of(text: str, key: str) -> int | None:
    needle = f'"{key}"'
    for i, line in enumerate(text.splitlines(), 1):
        if needle in line:
            return i
    return None


def load_config(path: str | None, overrides: dict) -> ExperimentConfig:
    """Parse and validate a JSON config; raises ConfigInvalid with line/field diagnostics."""
    text = "{}"
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigInvalid(f"cannot read config: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigInvalid("line 1: config must be a JSON object")
    raw.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        msgs = []
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"])
            keys = [p for p in err["loc"] if isinstance(p, str)]
            line = _line_of(text, keys[-1]) if keys else None
            where = f"line {line}, " if line else ""
            msgs.append(f"{where}field '{loc}': {err['msg']}")
        raise ConfigInvalid("; ".join(msgs)) from exc


def _versions() -> dict:
    import mpmath
    import pydantic
    import scipy
    import skimage
    import sympy

    return {"artifact": __version__, "python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "sympy": sympy.__version__, "mpmath": mpmath.__version__,
            "scikit-image": skimage.__version__, "pydantic": pydantic.VERSION}


def run(command: str, cfg: ExperimentConfig, out: str | Path) -> int:
    """Run one command; returns the exit status."""
    out = Path(out)
    if cfg.randomized(command) and cfg.seed is None:
        raise ConfigInvalid(f"field 'seed': required for randomized command '{command}'")
    tol = cfg.tolerance_record()
    tri = cfg.make_triangle()
    t0 = time.perf_counter()
    status, message = 0, "ok"
    try:
        HANDLERS[command](cfg, tri, tol, out)
    except (ExperimentFailed, CSDCError) as exc:
        status, message = 2, f"{type(exc).__name__}: {exc}"
    manifest = {
        "command": command,
        "config": cfg.model_dump(by_alias=True, exclude_none=True),
        "tolerances": tol.as_dict(),
        "versions": _versions(),
        "status": status,
        "message": message,
        "wall_time_s": round(time.perf_counter() - t0, 3),
    }
    export.write(out / "manifest.json", dumps(manifest))
    return status


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="csdc", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON experiment config")
    ap.add_argument("--out", help="output directory (overrides config)")
    ap.add_argument("--threads", type=int, help="worker pool cap (overrides config)")
    ap.add_argument("--seed", type=int, help="RNG seed (overrides config)")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, {"seed": args.seed, "threads": args.threads,
                                        "out": args.out})
        out = cfg.out or "out"
        return run(args.command, cfg, out)
    except ConfigInvalid as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except CSDCError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
