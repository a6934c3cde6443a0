"""Command-line front end: parameter intake, batch grid evaluation, and
machine-readable (JSON/CSV) output.

Usage:
    abx --alpha 0.5 --eta 0 --a 0,0 --b 1,0 spectrum
    abx --alpha 0.3 --k 1.0 --angles 360 --format csv xsection
    abx --config run.cfg eigenfunction --out psi.json

A flat key=value config file may supply any flag's value; command-line
flags override the file.  Exit codes: 0 success, 2 validation error,
3 numerical failure (near-eigenvalue momentum, non-converged quadrature
or extraction).

Grid points are evaluated concurrently when ABX_THREADS > 1, with output
always serialized in grid order, so results are deterministic and
bitwise identical across runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import ConsistencyError, ConvergenceError, NearEigenvalueError
from .extension import ExtensionParams, FluxAlpha, classify
from .krein import d_of_k, full_resolvent_kernel, p_of_k
from .scattering import (
    FORWARD_EPSILON,
    PlaneWaveChannel,
    amplitude_u,
    channel_mixing,
    cross_section,
    psi_u,
)
from .specfun import UpperHalfK, hankel1_orders
from .spectrum import spectral_report

TASKS = ("spectrum", "amplitude", "xsection", "eigenfunction", "resolvent", "mixing", "validate")

_PROVENANCE = {
    "branch": "principal logarithm of -k^2; real-axis values are limits from Im k > 0",
    "eigenfunction_phases": (
        "outgoing corrections use the quarter-angle cross-channel phase "
        "factors validated by the resolvent-kernel limit"
    ),
    "amplitude_sign": (
        "smooth amplitude carries exp(+i(phi-theta)) in the resonant "
        "denominator, fixed by asymptotic extraction"
    ),
    "mixing_constant": "8 k sin(pi alpha), the angle-integrated cross-channel cross section",
}


@dataclass(frozen=True)
class RunConfig:
    """Validated run configuration; construction validates the physics
    parameters through FluxAlpha/ExtensionParams."""

    task: str
    alpha: FluxAlpha
    params: ExtensionParams
    k_values: tuple[float, ...] = (1.0,)
    k_imag: float = 0.0
    theta: float = 0.0
    angle_count: int = 360
    radii: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0)
    source: tuple[float, float] = (1.0, 0.0)
    fmt: str = "json"
    out: str | None = None
    tolerances: dict = field(default_factory=dict)


def _parse_complex_pair(text: str) -> complex:
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) == 1:
        return complex(float(parts[0]), 0.0)
    if len(parts) == 2:
        return complex(float(parts[0]), float(parts[1]))
    raise ValueError(f"expected 're' or 're,im', got {text!r}")


def _parse_float_list(text: str) -> tuple[float, ...]:
    vals = tuple(float(p) for p in str(text).split(",") if p.strip())
    if not vals:
        raise ValueError(f"expected a comma-separated list of numbers, got {text!r}")
    return vals


def _read_config_file(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, val = line.partition("=")
            out[key.strip()] = val.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="abx",
        description="Self-adjoint flux-line Hamiltonians: spectra, eigenfunctions, scattering.",
    )
    ap.add_argument("--config", help="flat key=value config file; flags override it")
    ap.add_argument("--alpha", type=float, help="flux parameter in (0, 1)")
    ap.add_argument("--eta", type=float, help="overall phase of the channel map (radians)")
    ap.add_argument("--a", help="diagonal parameter a as re,im")
    ap.add_argument("--b", help="coupling parameter b as re,im")
    ap.add_argument("--k", help="comma-separated momenta k > 0")
    ap.add_argument("--k-imag", type=float, dest="k_imag",
                    help="imaginary part of k (resolvent task only)")
    ap.add_argument("--theta", type=float, help="incidence angle (radians)")
    ap.add_argument("--angles", type=int, help="number of angular grid points on [0, 2pi)")
    ap.add_argument("--radii", help="comma-separated radial grid")
    ap.add_argument("--source", help="resolvent source point as r,phi")
    ap.add_argument("--format", dest="fmt", choices=("json", "csv"), help="output format")
    ap.add_argument("--out", help="output path (default: stdout)")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("task", nargs="?", choices=TASKS,
                    help="computation to run (may also come from the config file)")
    return ap


_DEFAULTS = {
    "alpha": 0.5,
    "eta": 0.0,
    "a": "-1,0",
    "b": "0,0",
    "k": "1.0",
    "k_imag": 0.0,
    "theta": 0.0,
    "angles": 360,
    "radii": "0.5,1.0,2.0,4.0",
    "source": "1.0,0.0",
    "fmt": "json",
    "out": None,
}


def parse_config(argv) -> RunConfig:
    """Build a validated RunConfig from flags plus an optional config
    file (flags win)."""
    ns = build_parser().parse_args(argv)
    merged = dict(_DEFAULTS)
    if ns.config:
        rename = {"format": "fmt"}
        for key, val in _read_config_file(ns.config).items():
            merged[rename.get(key, key)] = val
    for key in ("alpha", "eta", "a", "b", "k", "k_imag", "theta", "angles",
                "radii", "source", "fmt", "out"):
        val = getattr(ns, key)
        if val is not None:
            merged[key] = val
    task = ns.task or merged.get("task")
    if task not in TASKS:
        raise ValueError(f"task must be one of {TASKS}, got {task!r}")

    alpha = FluxAlpha(float(merged["alpha"]))
    params = ExtensionParams(
        float(merged["eta"]),
        _parse_complex_pair(merged["a"]),
        _parse_complex_pair(merged["b"]),
    )
    k_values = _parse_float_list(merged["k"]) if not isinstance(merged["k"], tuple) else merged["k"]
    for k in k_values:
        if k <= 0:
            raise ValueError(f"momenta must be positive, got {k}")
    radii = _parse_float_list(merged["radii"]) if not isinstance(merged["radii"], tuple) else merged["radii"]
    source = _parse_float_list(merged["source"])
    if len(source) != 2:
        raise ValueError("source must be r,phi")
    angle_count = int(merged["angles"])
    if angle_count < 1:
        raise ValueError(f"angle grid needs at least one point, got {angle_count}")
    return RunConfig(
        task=ns.task,
        alpha=alpha,
        params=params,
        k_values=tuple(k_values),
        k_imag=float(merged["k_imag"]),
        theta=float(merged["theta"]),
        angle_count=angle_count,
        radii=tuple(radii),
        source=(float(source[0]), float(source[1])),
        fmt=str(merged["fmt"]),
        out=merged["out"],
        tolerances={"forward_cone": FORWARD_EPSILON},
    )


def _worker_count() -> int:
    raw = os.environ.get("ABX_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _grid_map(fn, items):
    """Evaluate fn over items, concurrently if ABX_THREADS > 1; output
    order always follows input order."""
    workers = _worker_count()
    items = list(items)
    if workers == 1 or len(items) < 2:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _angle_grid(n: int) -> np.ndarray:
    # half-open [0, 2 pi), cell-centered so the forward direction is not
    # sampled exactly
    return (np.arange(n) + 0.5) * (2.0 * math.pi / n)


def _c2l(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _param_header(cfg: RunConfig) -> dict:
    p = cfg.params
    return {
        "alpha": cfg.alpha.alpha,
        "eta": p.eta,
        "a": _c2l(p.a),
        "b": _c2l(p.b),
        "class": classify(p).kind.value,
    }


def _provenance_row(cfg: RunConfig) -> list:
    p = cfg.params
    return [cfg.alpha.alpha, p.eta, p.a.real, p.a.imag, p.b.real, p.b.imag]


_PROV_COLS = ["alpha", "eta", "a_re", "a_im", "b_re", "b_im"]


def _task_spectrum(cfg: RunConfig):
    report = spectral_report(cfg.params, cfg.alpha)
    s = report.summary
    results = {
        "bound_states": [st.energy for st in s.bound_states],
        "residuals": [st.residual for st in s.bound_states],
        "zero_resonance": s.zero_resonance,
        "essential_spectrum": [0.0, "inf"],
        "notes": report.notes,
    }
    rows = [_provenance_row(cfg) + [st.energy, st.residual] for st in s.bound_states]
    cols = _PROV_COLS + ["energy", "residual"]
    meta = [f"zero_resonance={s.zero_resonance}", "essential_spectrum=[0,inf)"]
    return results, cols, rows, meta


def _task_mixing(cfg: RunConfig):
    def one(k):
        mix = channel_mixing(cfg.params, cfg.alpha, k)
        return {"k": k, "prob_0_to_m1": mix.prob_0_to_m1,
                "prob_m1_to_0": mix.prob_m1_to_0, "constant": mix.constant}

    results = _grid_map(one, cfg.k_values)
    cols = _PROV_COLS + ["k", "prob_0_to_m1", "prob_m1_to_0", "constant"]
    rows = [_provenance_row(cfg) + [r["k"], r["prob_0_to_m1"], r["prob_m1_to_0"], r["constant"]]
            for r in results]
    return results, cols, rows, []


def _task_xsection(cfg: RunConfig):
    angles = _angle_grid(cfg.angle_count)

    def one(k):
        def point(phi):
            if abs(math.remainder(phi - cfg.theta, 2.0 * math.pi)) < FORWARD_EPSILON:
                return None
            return cross_section(cfg.params, cfg.alpha, k, cfg.theta, phi)

        vals = _grid_map(point, angles)
        return {"k": k, "theta": cfg.theta,
                "phi": [float(a) for a in angles],
                "dsigma_dphi": vals,
                "forward_excluded": [v is None for v in vals]}

    results = _grid_map(one, cfg.k_values)
    cols = _PROV_COLS + ["k", "theta", "phi", "dsigma_dphi", "in_forward_cone"]
    rows = []
    for r in results:
        for phi, v in zip(r["phi"], r["dsigma_dphi"]):
            rows.append(_provenance_row(cfg)
                        + [r["k"], r["theta"], phi,
                           "" if v is None else v, v is None])
    meta = [f"forward_cone_halfwidth={FORWARD_EPSILON}"]
    return results, cols, rows, meta


def _task_amplitude(cfg: RunConfig):
    angles = _angle_grid(cfg.angle_count)

    def one(k):
        amp = amplitude_u(cfg.params, cfg.alpha, k)
        vals = []
        for phi in angles:
            if abs(math.remainder(phi - cfg.theta, 2.0 * math.pi)) < FORWARD_EPSILON:
                vals.append(None)
            else:
                vals.append(amp.smooth(cfg.theta, phi))
        return {"k": k, "theta": cfg.theta,
                "phi": [float(a) for a in angles],
                "smooth": [None if v is None else _c2l(v) for v in vals],
                "forward_delta_coeff": _c2l(amp.forward_delta_coeff),
                "forward_pv_weight": _c2l(amp.forward_pv_weight),
                "notes": list(amp.convention_notes)}

    results = _grid_map(one, cfg.k_values)
    cols = _PROV_COLS + ["k", "theta", "phi", "f_re", "f_im", "in_forward_cone"]
    rows = []
    for r in results:
        for phi, v in zip(r["phi"], r["smooth"]):
            rows.append(_provenance_row(cfg)
                        + [r["k"], r["theta"], phi,
                           "" if v is None else v[0], "" if v is None else v[1],
                           v is None])
    return results, cols, rows, []


def _task_eigenfunction(cfg: RunConfig):
    angles = _angle_grid(cfg.angle_count)

    def one(k):
        chan = PlaneWaveChannel(k, cfg.theta)
        grid = [(r, phi) for r in cfg.radii for phi in angles]
        vals = _grid_map(lambda p: psi_u(cfg.params, cfg.alpha, chan, p[0], p[1]), grid)
        return {"k": k, "theta": cfg.theta,
                "points": [[float(r), float(phi)] for r, phi in grid],
                "psi": [_c2l(v) for v in vals]}

    results = _grid_map(one, cfg.k_values)
    cols = _PROV_COLS + ["k", "theta", "r", "phi", "psi_re", "psi_im"]
    rows = []
    for r in results:
        for (rr, phi), v in zip(r["points"], r["psi"]):
            rows.append(_provenance_row(cfg) + [r["k"], r["theta"], rr, phi, v[0], v[1]])
    return results, cols, rows, []


def _task_resolvent(cfg: RunConfig):
    angles = _angle_grid(cfg.angle_count)
    y = cfg.source

    def one(k):
        kk = UpperHalfK(complex(k, cfg.k_imag)) if cfg.k_imag > 0 else UpperHalfK(k, on_real_axis=True)
        grid = [(r, phi) for r in cfg.radii for phi in angles]
        vals = _grid_map(
            lambda p: full_resolvent_kernel(cfg.params, cfg.alpha, kk, p, y), grid
        )
        return {"k": [k, cfg.k_imag], "source": list(y),
                "points": [[float(r), float(phi)] for r, phi in grid],
                "kernel": [_c2l(v) for v in vals]}

    results = _grid_map(one, cfg.k_values)
    cols = _PROV_COLS + ["k_re", "k_im", "src_r", "src_phi", "r", "phi", "kernel_re", "kernel_im"]
    rows = []
    for r in results:
        for (rr, phi), v in zip(r["points"], r["kernel"]):
            rows.append(_provenance_row(cfg)
                        + [r["k"][0], r["k"][1], y[0], y[1], rr, phi, v[0], v[1]])
    return results, cols, rows, []


def _task_validate(cfg: RunConfig):
    """Dual-path coupling/determinant cross-checks plus one
    resolvent-limit sample of the eigenfunction closed form."""
    rng = np.random.default_rng(20240811)
    worst_p = 0.0
    worst_d = 0.0
    for _ in range(50):
        g = rng.normal(size=4)
        n = math.hypot(math.hypot(g[0], g[1]), math.hypot(g[2], g[3]))
        params = ExtensionParams(rng.uniform(-math.pi, math.pi),
                                 complex(g[0], g[1]) / n, complex(g[2], g[3]) / n)
        alpha = rng.uniform(0.05, 0.95)
        k = UpperHalfK(complex(rng.uniform(-10, 10), rng.uniform(0.1, 10)))
        # p_of_k and d_of_k raise ConsistencyError on dual-path failure
        p_of_k(params, alpha, k)
        d_of_k(params, alpha, k)

    alpha = cfg.alpha.alpha
    params = cfg.params
    k = cfg.k_values[0]
    theta, r, phi = 0.4, 1.2, 1.6
    rho = 300.0 / k
    kc = UpperHalfK(complex(k, 1e-6 * k))
    chan = PlaneWaveChannel(k, theta)
    limit = (4.0 / (1j * complex(hankel1_orders(0.0, kc.k * rho)))
             * full_resolvent_kernel(params, alpha, kc, (r, phi), (rho, theta + math.pi)))
    closed = psi_u(params, alpha, chan, r, phi)
    rel = float(abs(limit - closed) / max(abs(closed), 1e-300))
    ok = bool(rel < 2e-2)
    results = {
        "dual_path_samples": 50,
        "dual_path_ok": True,
        "limit_oracle_rel_error": rel,
        "limit_oracle_tol": 2e-2,
        "limit_oracle_ok": ok,
    }
    if not ok:
        raise ConsistencyError(
            f"eigenfunction limit oracle failed: rel error {rel:.3e} >= 2e-2"
        )
    rows = [_provenance_row(cfg) + [50, rel]]
    cols = _PROV_COLS + ["dual_path_samples", "limit_oracle_rel_error"]
    return results, cols, rows, []


_TASK_FNS = {
    "spectrum": _task_spectrum,
    "mixing": _task_mixing,
    "xsection": _task_xsection,
    "amplitude": _task_amplitude,
    "eigenfunction": _task_eigenfunction,
    "resolvent": _task_resolvent,
    "validate": _task_validate,
}


def _render_json(cfg: RunConfig, results) -> str:
    doc = {
        "task": cfg.task,
        "params": _param_header(cfg),
        "results": results,
        "diagnostics": {
            "tolerances": cfg.tolerances,
            "k_values": list(cfg.k_values),
            "theta": cfg.theta,
        },
        "provenance": _PROVENANCE,
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def _render_csv(cfg: RunConfig, cols, rows, meta) -> str:
    buf = io.StringIO()
    p = cfg.params
    buf.write(f"# task={cfg.task}\n")
    buf.write(f"# alpha={cfg.alpha.alpha!r} eta={p.eta!r} a={p.a!r} b={p.b!r}\n")
    for line in meta:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    writer.writerows(rows)
    return buf.getvalue()


def run(config: RunConfig, stream=None) -> int:
    """Dispatch the configured task and write its output."""
    results, cols, rows, meta = _TASK_FNS[config.task](config)
    text = (_render_json(config, results) if config.fmt == "json"
            else _render_csv(config, cols, rows, meta))
    if config.out:
        with open(config.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        (stream or sys.stdout).write(text)
    return 0


def main(argv=None) -> int:
    try:
        config = parse_config(argv if argv is not None else sys.argv[1:])
    except ValueError as exc:
        print(f"abx: invalid configuration: {exc}", file=sys.stderr)
        return 2
    try:
        return run(config)
    except ValueError as exc:
        print(f"abx: invalid request: {exc}", file=sys.stderr)
        return 2
    except (NearEigenvalueError, ConvergenceError, ConsistencyError) as exc:
        print(f"abx: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
