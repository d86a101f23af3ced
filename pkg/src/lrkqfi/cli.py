"""Command-line driver: ``lrkqfi <command> [options]``.

Every run writes its tables (CSV and/or JSON), any fit summaries, and last of
all a ``manifest.json`` echoing the resolved configuration.  Exit status is
0 on success, 1 on a numerical failure, 2 on a usage error.
"""
import argparse
import dataclasses
import datetime as dt
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, metrology, model, uncertain
from .cache import configure_default
from .errors import NUMERIC_ERRORS, DomainError
from .fitting import exp_decay_fit, linear_fit, power_law_fit
from .table import SweepTable, read_csv, write_csv

COMMANDS = ("dispersion", "qfi-sweep", "scaling", "ratio", "uncertain-surface",
            "uncertain-scaling", "sigma-threshold", "uncertain-ratio", "fit")
SINGLE_L = {"dispersion", "qfi-sweep", "ratio", "uncertain-surface", "uncertain-ratio"}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class GridSpec:
    """A sweep axis: ``min:max:count[:log]`` or an explicit list of points."""

    min: float = 0.0
    max: float = 0.0
    count: int = 1
    spacing: str = "linear"
    points: tuple = ()

    def __post_init__(self):
        if self.points:
            return
        if self.count < 1:
            raise DomainError("grid count must be >= 1")
        if self.min > self.max:
            raise DomainError("grid min must not exceed max")
        if self.spacing not in ("linear", "log"):
            raise DomainError(f"unknown spacing {self.spacing!r}")
        if self.spacing == "log" and not self.min > 0:
            raise DomainError("log spacing needs min > 0")

    @classmethod
    def parse(cls, text):
        if isinstance(text, GridSpec):
            return text
        if isinstance(text, (int, float)):
            return cls(points=(float(text),))
        if isinstance(text, (list, tuple)):
            return cls(points=tuple(float(v) for v in text))
        text = str(text).strip()
        if ":" in text:
            parts = text.split(":")
            if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] not in ("log", "linear")):
                raise DomainError(f"grid {text!r} is not min:max:count[:log]")
            count = int(parts[2])
            return cls(float(parts[0]), float(parts[1]), count,
                       parts[3] if len(parts) == 4 else "linear")
        return cls(points=tuple(float(v) for v in text.split(",") if v))

    def values(self):
        if self.points:
            return list(self.points)
        if self.count == 1:
            return [float(self.min)]
        space = np.geomspace if self.spacing == "log" else np.linspace
        return [float(v) for v in space(self.min, self.max, self.count)]

    def to_json(self):
        if self.points:
            return list(self.points)
        return f"{self.min!r}:{self.max!r}:{self.count}:{self.spacing}"


_DEFAULTS = {
    "L": {"dispersion": [400], "qfi-sweep": [400], "ratio": [400],
          "scaling": [100, 200, 400, 800], "uncertain-surface": [50],
          "uncertain-ratio": [50], "uncertain-scaling": [20, 30, 40, 50, 60],
          "sigma-threshold": [20, 30, 40, 50, 60], "fit": [400]},
    "alpha_grid": {"ratio": "1.3:5:20", "uncertain-ratio": "1.3,1.5,1.7,2,2.5,3,3.5,4,4.5,5",
                   "sigma-threshold": "1.3,1.6,2,2.5,3,5"},
    "sigma_grid": {"uncertain-surface": "1e-5:1e-1:41:log",
                   "uncertain-ratio": "1e-4,1e-3,1e-2",
                   "uncertain-scaling": "1e-4,1e-3,1e-2"},
}


@dataclass
class ExperimentConfig:
    command: str
    L: list = field(default_factory=lambda: [400])
    alpha: float = 1.5
    t: float = 1.0
    mu: float = 1.0
    delta: float = 1.0
    convention: str = "open"
    mu_grid: GridSpec = GridSpec.parse("0.5:1.5:501")
    alpha_grid: GridSpec = GridSpec.parse("1.3:5:20")
    sigma_grid: GridSpec = GridSpec.parse("1e-4,1e-3,1e-2")
    t_bar_grid: GridSpec = GridSpec.parse("0.8:1.2:201")
    window: tuple = (0.8, 1.2)
    delta_d: float = 0.1
    fit_min: float = 1.5
    quad_tol: float = 1e-6
    quad_method: str = "adaptive-gk"
    out: str = "out"
    formats: tuple = ("csv",)
    workers: int = 1
    cache: bool = True
    disk_cache: bool = False
    input: str = None
    x: str = None
    y: str = None
    model: str = "linear"
    y_offset: float = 0.0
    x_min: float = None
    x_max: float = None

    def to_dict(self):
        d = {}
        for f in dataclasses.fields(self):
            v = getattr(self, f.name)
            if isinstance(v, GridSpec):
                v = v.to_json()
            elif isinstance(v, tuple):
                v = list(v)
            d[f.name] = v
        return d

    def base_params(self, L=None):
        return model.ModelParams(L=self.L[0] if L is None else L, alpha=self.alpha, t=self.t,
                                 mu=self.mu, delta=self.delta, convention=self.convention)

    def quad(self):
        return uncertain.QuadratureConfig(method=self.quad_method, rel_tol=self.quad_tol)


_KEYS = {f.name for f in dataclasses.fields(ExperimentConfig)} - {"command"}
_ALIASES = {"format": "formats", "no_cache": "cache"}


def _build_parser():
    common = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    g = common.add_argument_group("run")
    g.add_argument("--config", help="JSON file of option values (CLI flags take precedence)")
    g.add_argument("--out", help="output directory")
    g.add_argument("--format", dest="formats", help="comma list from {csv,json}")
    g.add_argument("--workers", type=int)
    g.add_argument("--no-cache", dest="cache", action="store_false")
    g.add_argument("--disk-cache", dest="disk_cache", action="store_true",
                   help="persist pairing tables under OUT/cache")
    m = common.add_argument_group("model")
    m.add_argument("--L", help="system size, or comma list for scaling commands")
    m.add_argument("--alpha", type=float)
    m.add_argument("--t", type=float)
    m.add_argument("--mu", type=float)
    m.add_argument("--delta", type=float)
    m.add_argument("--convention", choices=("open", "ring"))
    s = common.add_argument_group("sweeps")
    s.add_argument("--mu-grid", dest="mu_grid")
    s.add_argument("--alpha-grid", dest="alpha_grid")
    s.add_argument("--sigma-grid", dest="sigma_grid")
    s.add_argument("--t-bar-grid", dest="t_bar_grid")
    s.add_argument("--window", help="lo,hi peak-search window in units of t (or mu)")
    s.add_argument("--delta-d", dest="delta_d", type=float)
    s.add_argument("--fit-min", dest="fit_min", type=float,
                   help="smallest alpha used in exponential fits")
    s.add_argument("--quad-tol", dest="quad_tol", type=float)
    s.add_argument("--quad-method", dest="quad_method", choices=("adaptive-gk", "gauss-hermite"))
    f = common.add_argument_group("fit")
    f.add_argument("--input")
    f.add_argument("--x")
    f.add_argument("--y")
    f.add_argument("--model", choices=("linear", "power", "exp"))
    f.add_argument("--y-offset", dest="y_offset", type=float)
    f.add_argument("--x-min", dest="x_min", type=float)
    f.add_argument("--x-max", dest="x_max", type=float)

    parser = argparse.ArgumentParser(prog="lrkqfi", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    return parser


def _load_config_file(path):
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"--config: cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise UsageError("--config: top level must be a JSON object")
    out = {}
    for key, value in data.items():
        name = key.replace("-", "_")
        if name == "no_cache":
            out["cache"] = not value
            continue
        name = _ALIASES.get(name, name)
        if name not in _KEYS:
            raise UsageError(f"--config: unknown key {key!r}")
        out[name] = value
    return out


def _flag(name):
    return "--" + {"formats": "format", "cache": "no-cache"}.get(name, name.replace("_", "-"))


def _resolve(command, values):
    cfg = ExperimentConfig(command=command)
    for key, table in _DEFAULTS.items():
        if command in table:
            setattr(cfg, key, table[command])
    for name, raw in values.items():
        try:
            setattr(cfg, name, _coerce(name, raw))
        except (ValueError, TypeError, DomainError) as exc:
            raise UsageError(f"{_flag(name)}: {exc}") from exc
    cfg.L = _coerce("L", cfg.L)
    for name in ("alpha_grid", "sigma_grid", "mu_grid", "t_bar_grid"):
        setattr(cfg, name, GridSpec.parse(getattr(cfg, name)))
    _validate(cfg)
    return cfg


def _coerce(name, raw):
    if name == "L":
        vals = raw if isinstance(raw, (list, tuple)) else str(raw).split(",")
        Ls = [int(v) for v in vals if str(v).strip()]
        if not Ls:
            raise ValueError("empty L list")
        return Ls
    if name in ("mu_grid", "alpha_grid", "sigma_grid", "t_bar_grid"):
        return GridSpec.parse(raw)
    if name == "formats":
        vals = raw if isinstance(raw, (list, tuple)) else str(raw).split(",")
        fmts = tuple(v.strip() for v in vals if v.strip())
        if not fmts or not set(fmts) <= {"csv", "json"}:
            raise ValueError("formats must be a non-empty subset of {csv,json}")
        return fmts
    if name == "window":
        vals = raw if isinstance(raw, (list, tuple)) else str(raw).split(",")
        lo, hi = (float(v) for v in vals)
        if not lo < hi:
            raise ValueError("window needs lo < hi")
        return (lo, hi)
    if name in ("cache", "disk_cache"):
        if not isinstance(raw, bool):
            raise ValueError("expected true/false")
        return raw
    if name == "workers":
        w = int(raw)
        if w < 1:
            raise ValueError("workers must be >= 1")
        return w
    if name in ("alpha", "t", "mu", "delta", "delta_d", "fit_min", "quad_tol", "y_offset",
                "x_min", "x_max"):
        return float(raw)
    return raw


def _validate(cfg):
    def bad(flag, msg):
        raise UsageError(f"{flag}: {msg}")

    if cfg.command in SINGLE_L and len(cfg.L) != 1:
        bad("--L", f"{cfg.command} takes a single system size")
    for L in cfg.L:
        if L < 4 or L % 2:
            bad("--L", f"L must be even and >= 4, got {L}")
    if not cfg.alpha > 1:
        bad("--alpha", f"alpha must be > 1, got {cfg.alpha}")
    if any(not a > 1 for a in cfg.alpha_grid.values()):
        bad("--alpha-grid", "every alpha must be > 1")
    if not cfg.delta > 0:
        bad("--delta", "delta must be > 0")
    if cfg.convention not in ("open", "ring"):
        bad("--convention", "expected open or ring")
    if not 0 < cfg.delta_d < 1:
        bad("--delta-d", "must lie in (0, 1)")
    if not 1e-12 < cfg.quad_tol < 1e-2:
        bad("--quad-tol", "must lie in (1e-12, 1e-2)")
    if any(not s >= 0 for s in cfg.sigma_grid.values()):
        bad("--sigma-grid", "sigmas must be >= 0")
    if cfg.command == "fit" and not (cfg.input and cfg.x and cfg.y):
        bad("--input", "fit needs --input, --x and --y")


def parse_config(argv):
    """Resolve defaults <- config file <- CLI flags into an ExperimentConfig.

    Raises UsageError on invalid values; argparse itself exits with status 2
    on unknown flags.
    """
    ns = vars(_build_parser().parse_args(argv))
    command = ns.pop("command")
    values = {}
    if "config" in ns:
        values.update(_load_config_file(ns.pop("config")))
    values.update(ns)
    return _resolve(command, values)


# --- dispatch ---------------------------------------------------------------

def _fit_summary(fit, **extra):
    d = dict(extra)
    d["fit"] = fit.to_dict()
    return d


def _exp_fit_of_excess(xs, ys, x_min):
    xs, ys = np.asarray(xs), np.asarray(ys)
    m = xs >= x_min
    return exp_decay_fit(xs[m], ys[m] - 1.0)


def _run_dispersion(cfg):
    rows = model.dispersion_curve(cfg.base_params())
    return {"dispersion": SweepTable(("k", "epsilon"), rows)}, {}


def _run_qfi_sweep(cfg):
    return {"qfi_sweep": metrology.qfi_sweep(cfg.base_params(), cfg.mu_grid.values())}, {}


def _run_scaling(cfg):
    table = metrology.scaling_curve(cfg.alpha, cfg.L, cfg.base_params(), cfg.window, cfg.workers)
    fits = {}
    if len(table) >= 2:
        fit = power_law_fit(table.column("L"), table.column("f_max"))
        fits["scaling"] = _fit_summary(fit, model="power", x="L", y="f_max",
                                       exponent=fit.slope)
    return {"scaling": table}, fits


def _run_ratio(cfg):
    table = metrology.ratio_curve(cfg.alpha_grid.values(), cfg.L[0], cfg.base_params(),
                                  cfg.window, cfg.workers)
    fits = {}
    alphas, R = table.column("alpha"), table.column("R")
    if np.sum(alphas >= cfg.fit_min) >= 2 and np.all(R[alphas >= cfg.fit_min] > 1):
        fit = _exp_fit_of_excess(alphas, R, cfg.fit_min)
        fits["ratio"] = _fit_summary(fit, model="exp", x="alpha", y="R-1",
                                     x_min=cfg.fit_min, decay_rate=fit.decay_rate)
    return {"ratio": table}, fits


def _run_uncertain_surface(cfg):
    table = uncertain.uncertain_surface(cfg.mu, cfg.t_bar_grid.values(), cfg.sigma_grid.values(),
                                        cfg.base_params(), cfg.quad(), cfg.workers)
    return {"uncertain_surface": table}, {}


def _run_uncertain_scaling(cfg):
    table = uncertain.uncertain_scaling(cfg.alpha, cfg.L, cfg.sigma_grid.values(),
                                        cfg.base_params(), cfg.quad(), cfg.window, cfg.workers)
    return {"uncertain_scaling": table}, {}


def _run_sigma_threshold(cfg):
    table = uncertain.sigma_threshold_table(
        cfg.alpha_grid.values(), cfg.L, cfg.base_params(), cfg.workers,
        delta_d=cfg.delta_d, mu=cfg.mu, quad=cfg.quad(), window=cfg.window)
    tables = {"sigma_threshold": table}
    fits = {}
    if len(cfg.L) >= 2:
        s_table = uncertain.s_exponent_curve(cfg.alpha_grid.values(), cfg.L, None,
                                             thresholds=table)
        tables["s_exponent"] = s_table
        fits["sigma_threshold"] = {
            "model": "power", "x": "L", "y": "sigma_t_d",
            "fits": [{"alpha": a, "s": s, "r_squared": r2} for a, s, r2 in s_table.rows]}
    return tables, fits


def _run_uncertain_ratio(cfg):
    table = uncertain.uncertain_ratio_table(cfg.alpha_grid.values(), cfg.sigma_grid.values(),
                                            cfg.L[0], cfg.base_params(), cfg.quad(),
                                            cfg.window, cfg.workers)
    alphas, sig, r = table.column("alpha"), table.column("sigma_t"), table.column("r")
    per_sigma = []
    for s in cfg.sigma_grid.values():
        m = sig == s
        a, rr = alphas[m], r[m]
        sel = a >= cfg.fit_min
        if np.sum(sel) >= 2 and np.all(rr[sel] > 1):
            fit = _exp_fit_of_excess(a, rr, cfg.fit_min)
            per_sigma.append({"sigma_t": s, "q": fit.decay_rate, "fit": fit.to_dict()})
    fits = {"uncertain_ratio": {"model": "exp", "x": "alpha", "y": "r-1",
                                "x_min": cfg.fit_min, "fits": per_sigma}}
    return {"uncertain_ratio": table}, fits


def _run_fit(cfg):
    table = read_csv(cfg.input, inputs=())
    try:
        xs, ys = table.column(cfg.x), table.column(cfg.y) - cfg.y_offset
    except ValueError as exc:
        raise UsageError(f"--x/--y: column not found in {cfg.input}") from exc
    m = np.ones(len(xs), dtype=bool)
    if cfg.x_min is not None:
        m &= xs >= cfg.x_min
    if cfg.x_max is not None:
        m &= xs <= cfg.x_max
    fitter = {"linear": linear_fit, "power": power_law_fit, "exp": exp_decay_fit}[cfg.model]
    fit = fitter(xs[m], ys[m])
    return {}, {"fit": _fit_summary(fit, model=cfg.model, x=cfg.x, y=cfg.y,
                                    y_offset=cfg.y_offset)}


_DISPATCH = {
    "dispersion": _run_dispersion, "qfi-sweep": _run_qfi_sweep, "scaling": _run_scaling,
    "ratio": _run_ratio, "uncertain-surface": _run_uncertain_surface,
    "uncertain-scaling": _run_uncertain_scaling, "sigma-threshold": _run_sigma_threshold,
    "uncertain-ratio": _run_uncertain_ratio, "fit": _run_fit,
}


def _now():
    return dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")


def _dump_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2, allow_nan=True) + "\n",
                          encoding="utf-8", newline="\n")


def run_experiment(cfg):
    """Run one configured experiment; returns the process exit code."""
    out = Path(cfg.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"lrkqfi: cannot create output directory {out}: {exc}", file=sys.stderr)
        return 1
    configure_default(out / "cache" if cfg.disk_cache else None, enabled=cfg.cache)
    manifest = {"config": cfg.to_dict(), "tool_version": __version__, "started": _now()}
    written = []
    try:
        tables, fits = _DISPATCH[cfg.command](cfg)
        outputs = []
        for name, table in tables.items():
            if "csv" in cfg.formats:
                path = out / f"{name}.csv"
                written.append(path)
                outputs.append({"file": path.name, "rows": write_csv(table, path)})
            if "json" in cfg.formats:
                path = out / f"{name}.json"
                written.append(path)
                _dump_json(table.to_dict(), path)
                outputs.append({"file": path.name, "rows": len(table)})
        for name, summary in fits.items():
            path = out / f"{name}_fit.json"
            written.append(path)
            _dump_json(summary, path)
            outputs.append({"file": path.name, "rows": 1})
    except (*NUMERIC_ERRORS, OSError) as exc:
        for path in written:
            path.unlink(missing_ok=True)
        manifest.update(status="failed", outputs=[], finished=_now(),
                        error={"type": type(exc).__name__, "message": str(exc)})
        _dump_json(manifest, out / "manifest.json")
        print(f"lrkqfi: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    manifest.update(status="ok", outputs=outputs, finished=_now())
    _dump_json(manifest, out / "manifest.json")
    return 0


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        return run_experiment(cfg)
    except UsageError as exc:
        print(f"lrkqfi: error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
