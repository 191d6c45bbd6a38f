"""``qbarrier`` command-line interface.

Every command resolves a :class:`RunConfig` from (in increasing priority)
built-in defaults, a ``--preset``, a ``--config`` file and explicit flags,
validates it completely, and only then computes and writes output.

Exit codes: 0 success, 1 validation failure, 2 configuration or I/O error,
3 numerical or truncation error.
"""

import argparse
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .classical import classical_spectrum
from .errors import QBarrierError
from .params import Coherent, ModelParams, Thermal
from .quantized import distribution_from, entanglement_entropy, probability_block
from .states import (conditional_distribution, detector_positions, fresnel_circle,
                     thermal_distribution, vacuum_distribution)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

COMMANDS = ("classical", "fock", "vacuum", "thermal", "coherent", "entropy",
            "validate", "sweep")
SWEEP_PARAMS = ("cap_lambda", "lambda_bar", "omega_tau", "n0")
FIG4_Y = math.exp(-0.1)

PRESETS = {
    "fig3": {"command": "fock", "cap_lambdas": [0.0, 0.5, 1.0, 2.0],
             "omega_tau": math.pi, "n_max": 24},
    "fig4": {"command": "thermal", "cap_lambdas": [0.0, 1.0, 3.0, 10.0],
             "omega_tau": math.pi, "y": FIG4_Y},
    "fig5": {"command": "coherent", "cap_lambda": 1.0, "omega_tau": math.pi,
             "alpha_abs": 3.0, "phi_alpha": 0.0, "part": "distributions"},
    "fig6": {"command": "coherent", "cap_lambda": 1.0, "omega_tau": math.pi,
             "alpha_abs": 3.0, "phi_alpha": 0.0, "part": "circle", "grid_points": 64},
}

# key -> parser used for config-file values
_FIELDS = {
    "lambda_bar": float, "omega_tau": float, "cap_lambda": float, "phi": float,
    "n0": int, "n_max": int, "y": float, "alpha_abs": float, "phi_alpha": float,
    "e0_ratio": float, "tail_tol": float, "format": str, "out": str,
    "cap_lambdas": lambda s: [float(v) for v in s.split(",") if v.strip()],
    "grid_points": int, "part": str, "sweep_param": str, "start": float,
    "stop": float, "num": int, "workers": int,
}


_COUPLINGS = ("lambda_bar", "cap_lambda", "cap_lambdas")


class ConfigError(Exception):
    """Invalid run configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    command: str
    lambda_bar: Optional[float] = None
    omega_tau: float = math.pi
    cap_lambda: Optional[float] = None
    phi: float = 0.0
    n0: Optional[int] = None
    n_max: int = 24
    y: float = FIG4_Y
    alpha_abs: float = 3.0
    phi_alpha: float = 0.0
    e0_ratio: float = 1.0e6
    tail_tol: float = 1e-12
    format: str = "csv"
    out: Optional[str] = None
    cap_lambdas: Optional[List[float]] = None
    grid_points: int = 64
    part: str = "both"
    sweep_param: str = "cap_lambda"
    start: float = 0.0
    stop: float = 2.0
    num: int = 9
    workers: int = 1
    inject_fault: bool = False
    params: Optional[ModelParams] = field(default=None, repr=False)

    def model(self, cap_lambda=None, lambda_bar=None):
        """``ModelParams`` for this config, optionally overriding the coupling."""
        cap = self.cap_lambda if cap_lambda is None else cap_lambda
        lam = self.lambda_bar if lambda_bar is None else lambda_bar
        extra = dict(phi=self.phi, phi_alpha=self.phi_alpha, e0_ratio=self.e0_ratio)
        if lambda_bar is None and cap is not None:
            return ModelParams.from_cap_lambda(cap, omega_tau=self.omega_tau, **extra)
        return ModelParams(lam if lam is not None else 0.0, self.omega_tau, **extra)


# -- configuration ---------------------------------------------------------


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment, dashes in keys
    are read as underscores."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc.strerror}") from None
    out = {}
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FIELDS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            out[key] = _FIELDS[key](value)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad value {value!r} for {key}") from None
    return out


def _validate(cfg):
    def need(cond, name, msg):
        if not cond:
            raise ConfigError(f"{name}: {msg}")

    for name in ("omega_tau", "phi", "y", "alpha_abs", "phi_alpha", "e0_ratio", "tail_tol",
                 "start", "stop"):
        need(math.isfinite(getattr(cfg, name)), name, "must be finite")
    need(cfg.omega_tau >= 0, "omega_tau", "must be >= 0")
    need(0.0 < cfg.tail_tol < 1.0, "tail_tol", "must lie in (0, 1)")
    need(cfg.e0_ratio > 0, "e0_ratio", "must be > 0")
    need(0.0 <= cfg.y < 1.0, "y", "must lie in [0, 1)")
    need(cfg.alpha_abs >= 0, "alpha_abs", "must be >= 0")
    need(cfg.n_max >= 0, "n_max", "must be >= 0")
    need(cfg.n0 is None or cfg.n0 >= 0, "n0", "must be >= 0")
    need(cfg.format in ("csv", "json"), "format", "must be csv or json")
    need(cfg.part in ("both", "distributions", "circle"), "part",
         "must be both, distributions or circle")
    need(cfg.grid_points >= 1, "grid_points", "must be >= 1")
    need(cfg.workers >= 1, "workers", "must be >= 1")
    need(cfg.num >= 1, "num", "must be >= 1")
    need(cfg.sweep_param in SWEEP_PARAMS, "sweep_param", f"must be one of {SWEEP_PARAMS}")
    if cfg.lambda_bar is not None and cfg.cap_lambda is not None:
        raise ConfigError("lambda_bar and cap_lambda are mutually exclusive")
    if cfg.lambda_bar is not None:
        need(math.isfinite(cfg.lambda_bar) and cfg.lambda_bar >= 0, "lambda_bar",
             "must be finite and >= 0")
    caps = list(cfg.cap_lambdas or []) + ([cfg.cap_lambda] if cfg.cap_lambda is not None else [])
    for cap in caps:
        need(math.isfinite(cap) and cap >= 0, "cap_lambda", "must be finite and >= 0")
    try:
        for cap in caps:
            cfg.model(cap_lambda=cap)
        cfg.params = cfg.model(cap_lambda=max(caps) if caps else None)
    except QBarrierError as exc:
        raise ConfigError(str(exc)) from None
    return cfg


def resolve_config(ns):
    """Merge defaults, preset, config file and flags into a ``RunConfig``."""
    merged = {}

    def layer(values):
        # a coupling in a higher layer replaces whatever coupling a lower one pinned
        if any(k in values for k in _COUPLINGS):
            for k in _COUPLINGS:
                merged.pop(k, None)
        merged.update(values)

    if ns.preset:
        preset = dict(PRESETS[ns.preset])
        pcmd = preset.pop("command")
        if ns.command != pcmd:
            raise ConfigError(f"preset {ns.preset} belongs to command {pcmd!r}, not {ns.command!r}")
        layer(preset)
    if ns.config:
        layer(read_config_file(ns.config))
    layer({k: getattr(ns, k) for k in _FIELDS if getattr(ns, k, None) is not None})
    return _validate(RunConfig(command=ns.command, inject_fault=ns.inject_fault, **merged))


# -- output ----------------------------------------------------------------


def fmt(value):
    """12 significant digits in scientific notation."""
    return f"{float(value):.11e}"


class Table:
    """Header plus rows of already-typed values (``int`` or ``float``)."""

    def __init__(self, columns):
        self.columns = list(columns)
        self.rows = []

    def add(self, *values):
        self.rows.append(values)

    def to_csv(self):
        lines = [",".join(self.columns)]
        for row in self.rows:
            lines.append(",".join(v if isinstance(v, str) else
                                  str(v) if isinstance(v, (int, np.integer)) else fmt(v)
                                  for v in row))
        return "\n".join(lines) + "\n"

    def to_json(self, command):
        recs = []
        for row in self.rows:
            rec = {}
            for k, v in zip(self.columns, row):
                if isinstance(v, str):
                    rec[k] = v
                elif isinstance(v, (int, np.integer)):
                    rec[k] = int(v)
                else:
                    rec[k] = float(fmt(v))
            recs.append(rec)
        doc = {"command": command, "columns": self.columns, "records": recs}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and ``os.replace``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".qbarrier-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg, text, path=None):
    path = path or cfg.out
    if path is None:
        sys.stdout.write(text)
    else:
        write_atomic(path, text)


def _render(cfg, table):
    return table.to_json(cfg.command) if cfg.format == "json" else table.to_csv()


def _sibling(path, suffix):
    root, ext = os.path.splitext(path)
    return f"{root}_{suffix}{ext}"


# -- commands ----------------------------------------------------------------


def _cap_list(cfg):
    if cfg.cap_lambdas:
        return sorted(cfg.cap_lambdas)
    if cfg.lambda_bar is not None:
        return [None]
    return [cfg.cap_lambda if cfg.cap_lambda is not None else 0.0]


def _model_for(cfg, cap):
    if cap is None:
        return cfg.model()
    return cfg.model(cap_lambda=cap)


def run_classical(cfg):
    """Sideband spectrum; ``lambda_bar`` (or ``cap_lambda`` via the same map)
    is the drive amplitude in photon units."""
    spec = classical_spectrum(cfg.params, cfg.tail_tol)
    t = Table(["n", "re_amplitude", "im_amplitude", "probability", "k_ratio"])
    for n, a, p, k in zip(spec.orders, spec.amplitudes, spec.probabilities, spec.k_ratio):
        t.add(int(n), a.real, a.imag, p, k)
    return [(None, t)]


def run_fock(cfg):
    """Fock-input probabilities ``P_{n0,n}``.

    With ``n0`` set, one certified row; otherwise the square grid
    ``n0, n <= n_max`` for every configured ``Lambda``.
    """
    t = Table(["lambda_cap", "n0", "n", "probability"])
    for cap in _cap_list(cfg):
        p = _model_for(cfg, cap)
        lam_cap = p.cap_lambda
        if cfg.n0 is not None:
            d = distribution_from(cfg.n0, p, cfg.tail_tol)
            for n, v in zip(d.n, d.p):
                t.add(lam_cap, cfg.n0, int(n), v)
            continue
        grid = np.arange(cfg.n_max + 1)
        pb = probability_block(p, grid, grid)
        for n0 in grid:
            for n in grid:
                t.add(lam_cap, int(n0), int(n), pb[n0, n])
    return [(None, t)]


def run_vacuum(cfg):
    d = vacuum_distribution(cfg.params, cfg.tail_tol)
    t = Table(["n", "probability"])
    for n, v in zip(d.n, d.p):
        t.add(int(n), v)
    return [(None, t)]


def run_thermal(cfg):
    t = Table(["lambda_cap", "n", "probability"])
    for cap in _cap_list(cfg):
        p = _model_for(cfg, cap)
        d = thermal_distribution(p, Thermal(cfg.y), cfg.tail_tol)
        for n, v in zip(d.n, d.p):
            t.add(p.cap_lambda, int(n), v)
    return [(None, t)]


def run_coherent(cfg):
    """Conditional photon laws at the two detector positions and/or the
    Fresnel-plane circle of output labels."""
    state = Coherent(cfg.alpha_abs, cfg.phi_alpha)
    p = cfg.params
    out = []
    if cfg.part in ("both", "distributions"):
        x_plus, x_minus = detector_positions(p, state)
        dp = conditional_distribution(p, state, x_plus, cfg.tail_tol)
        dm = conditional_distribution(p, state, x_minus, cfg.tail_tol)
        top = max(dp.n_max, dm.n_max)
        t = Table(["position_tag", "n", "probability"])
        for tag, d in (("x_plus", dp), ("x_minus", dm)):
            for n, v in enumerate(d.dense(top)):
                t.add(tag, n, v)
        out.append((None, t))
    if cfg.part in ("both", "circle"):
        x, xi = fresnel_circle(p, state, cfg.grid_points)
        t = Table(["x_over_period", "re_xi", "im_xi"])
        for xv, z in zip(x, xi):
            t.add(xv, z.real, z.imag)
        out.append(("circle" if cfg.part == "both" else None, t))
    return out


def run_entropy(cfg):
    t = Table(["lambda_cap", "n0", "entropy"])
    n0 = cfg.n0 if cfg.n0 is not None else 0
    for cap in _cap_list(cfg):
        p = _model_for(cfg, cap)
        t.add(p.cap_lambda, n0, entanglement_entropy(n0, p, cfg.tail_tol))
    return [(None, t)]


def _sweep_point(cfg, value):
    n0 = cfg.n0 if cfg.n0 is not None else 0
    if cfg.sweep_param == "cap_lambda":
        p = cfg.model(cap_lambda=value)
    elif cfg.sweep_param == "lambda_bar":
        p = cfg.model(lambda_bar=value)
    elif cfg.sweep_param == "omega_tau":
        lam = cfg.params.lambda_bar
        p = ModelParams(lam, value, cfg.phi, cfg.phi_alpha, cfg.e0_ratio)
    else:
        p = cfg.params
        n0 = int(round(value))
    d = distribution_from(n0, p, cfg.tail_tol)
    return p.cap_lambda, n0, d.mean(), d.variance(), d.entropy(), d.tail_bound


def run_sweep(cfg):
    """Fock-input observables along a 1-D parameter sweep.

    Points may run on ``workers`` threads; rows are assembled in sweep order.
    """
    values = np.linspace(cfg.start, cfg.stop, cfg.num)
    if cfg.sweep_param == "n0":
        values = np.round(values)
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        results = list(pool.map(lambda v: _sweep_point(cfg, float(v)), values))
    t = Table(["index", "value", "lambda_cap", "n0", "mean_photons", "variance",
               "entropy", "tail_bound"])
    for i, (v, r) in enumerate(zip(values, results)):
        t.add(i, float(v), r[0], r[1], r[2], r[3], r[4], r[5])
    return [(None, t)]


def run_validate(cfg):
    from .validation import run_all
    results = run_all(perturb=1e-6 if cfg.inject_fault else 0.0)
    doc = {"passed": all(r.passed for r in results),
           "checks": [r.as_dict() for r in results]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n", doc["passed"]


RUNNERS = {"classical": run_classical, "fock": run_fock, "vacuum": run_vacuum,
           "thermal": run_thermal, "coherent": run_coherent, "entropy": run_entropy,
           "sweep": run_sweep}


# -- entry point -------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(
        prog="qbarrier",
        description="Photon exchange of a particle crossing a driven barrier.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--preset", choices=sorted(PRESETS))
    ap.add_argument("--config", metavar="PATH", help="key = value file; flags override it")
    ap.add_argument("--lambda-bar", type=float)
    ap.add_argument("--omega-tau", type=float)
    ap.add_argument("--cap-lambda", type=float,
                    help="coupling Lambda; solved for lambda_bar at the given omega_tau")
    ap.add_argument("--cap-lambdas", type=_FIELDS["cap_lambdas"], metavar="L1,L2,...")
    ap.add_argument("--phi", type=float, help="classical drive phase")
    ap.add_argument("--n0", type=int)
    ap.add_argument("--n-max", type=int)
    ap.add_argument("--y", type=float, help="thermal Boltzmann ratio exp(-hbar omega/kT)")
    ap.add_argument("--alpha-abs", type=float)
    ap.add_argument("--phi-alpha", type=float)
    ap.add_argument("--e0-ratio", type=float)
    ap.add_argument("--tail-tol", type=float)
    ap.add_argument("--grid-points", type=int)
    ap.add_argument("--part", choices=("both", "distributions", "circle"))
    ap.add_argument("--sweep-param", choices=SWEEP_PARAMS)
    ap.add_argument("--start", type=float)
    ap.add_argument("--stop", type=float)
    ap.add_argument("--num", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--format", choices=("csv", "json"))
    ap.add_argument("--out", metavar="PATH")
    ap.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return ap


def main(argv=None):
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        cfg = resolve_config(ns)
    except ConfigError as exc:
        print(f"qbarrier: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        if cfg.command == "validate":
            text, ok = run_validate(cfg)
            _emit(cfg, text)
            return EXIT_OK if ok else EXIT_VALIDATION
        outputs = RUNNERS[cfg.command](cfg)
        rendered = [(tag, _render(cfg, t)) for tag, t in outputs]
        for tag, text in rendered:
            if tag is None or cfg.out is None:
                _emit(cfg, text)
            else:
                _emit(cfg, text, _sibling(cfg.out, tag))
    except QBarrierError as exc:
        print(f"qbarrier: numerical error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except BrokenPipeError:
        # reader went away (e.g. ``| head``); stay quiet like other CLI tools
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return EXIT_OK
    except OSError as exc:
        where = exc.filename or cfg.out
        print(f"qbarrier: cannot write {where!r}: {exc.strerror}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
