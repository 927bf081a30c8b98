"""Batch front-end: config parsing, sweeps over n, solver comparison, CSV output.

Config files are JSON with an explicit ``units`` field; all frequencies are
linear MHz (converted to angular rad/us internally) and times are us.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import fields, ladder, master, metrics

COMPARE_GATE = 0.02  # relative master/ladder discrepancy allowed per row

CSV_COLUMNS = ("n", "eta_master", "nu_master", "eta_ladder", "nu_ladder",
               "eta_series", "max_photons", "trace_defect", "status")


class ConfigError(ValueError):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.12g}"


@dataclass
class RunConfig:
    params: fields.PhysicalParams
    shape: str
    n_values: list[float]
    T_c: float
    control_kind: str
    control_path: Path | None
    grid: fields.TimeGrid
    mode_N: int
    mode_L_over_cTc: float
    solver: str
    m_max: int
    samples: int

    @property
    def sech_T(self) -> float:
        return fields.sech_T_for_coherence_time(self.T_c)

    def envelope(self, n: float) -> fields.PulseEnvelope:
        if self.shape == "sech":
            return fields.sech_envelope(n, self.sech_T)
        if self.shape == "gaussian":
            return fields.gaussian_envelope(n, self.T_c)
        raise ConfigError(f"pulse.shape: unsupported shape {self.shape!r}")

    def control(self) -> fields.ControlField:
        if self.control_kind == "optimal-sech":
            if self.shape != "sech":
                raise ConfigError(
                    "control.kind: the optimal-sech closed form applies only to "
                    "sech pulses; use a tabulated control for other shapes"
                )
            return fields.optimal_control_sech(self.params, self.sech_T)
        return fields.load_control_csv(self.control_path)

    def mode_grid(self, N: int | None = None) -> fields.ModeGrid:
        return fields.ModeGrid(
            N=N if N is not None else self.mode_N,
            flight_time=self.mode_L_over_cTc * self.T_c,
            kappa=self.params.kappa,
        )


def _require(block: dict, field: str, ctx: str):
    if field not in block:
        raise ConfigError(f"{ctx}.{field}: missing required field")
    return block[field]


def load_config(path, overrides: dict | None = None) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config: file not found: {path}")
    with path.open() as fh:
        raw = json.load(fh)
    if overrides:
        raw = {**raw, **{k: v for k, v in overrides.items() if v is not None}}

    if raw.get("units") != "MHz,us":
        raise ConfigError('units: must be present and equal "MHz,us"')

    phys = raw.get("physical", {})
    params = fields.PhysicalParams.from_mhz(
        g=_require(phys, "g", "physical"),
        kappa=_require(phys, "kappa", "physical"),
        gamma=_require(phys, "gamma", "physical"),
        kappa_loss=phys.get("kappa_loss", 0.0),
        Delta=phys.get("Delta", 0.0),
        delta=phys.get("delta", 0.0),
    )

    pulse = raw.get("pulse", {})
    shape = pulse.get("shape", "sech")
    n_raw = _require(pulse, "n", "pulse")
    n_values = [float(v) for v in (n_raw if isinstance(n_raw, list) else [n_raw])]
    if not n_values:
        raise ConfigError("pulse.n: sweep list must be non-empty")
    T_c = float(pulse.get("T_c", 0.5))

    control = raw.get("control", {"kind": "optimal-sech"})
    kind = control.get("kind", "optimal-sech")
    control_path = None
    if kind == "tabulated":
        control_path = Path(_require(control, "path", "control"))
        if not control_path.is_absolute():
            control_path = path.parent / control_path
        if not control_path.exists():
            raise ConfigError(f"control.path: file not found: {control_path}")
    elif kind != "optimal-sech":
        raise ConfigError(f"control.kind: unknown kind {kind!r}")

    gblock = raw.get("grid", {})
    grid = fields.TimeGrid(
        t1=float(gblock.get("t1_over_Tc", -6.0)) * T_c,
        t2=float(gblock.get("t2_over_Tc", 6.0)) * T_c,
        rel_tol=float(gblock.get("rel_tol", 1e-8)),
        abs_tol=float(gblock.get("abs_tol", 1e-10)),
    )

    mblock = raw.get("modes", {})
    solver = raw.get("solver", "both")
    if solver not in ("master", "ladder", "both"):
        raise ConfigError(f"solver: must be master, ladder or both, got {solver!r}")

    return RunConfig(
        params=params,
        shape=shape,
        n_values=n_values,
        T_c=T_c,
        control_kind=kind,
        control_path=control_path,
        grid=grid,
        mode_N=int(mblock.get("N", 311)),
        mode_L_over_cTc=float(mblock.get("L_over_cTc", 12.0)),
        solver=solver,
        m_max=int(raw.get("m_max", 14)),
        samples=int(gblock.get("samples", 1201)),
    )


def _write_csv(path: Path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(row) + "\n")


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _master_point(args):
    """Worker: one master-equation run; returns a result dict or an error."""
    cfg, n = args
    try:
        res = master.integrate_master(
            cfg.params, cfg.envelope(n), cfg.control(), cfg.grid, m_max=cfg.m_max
        )
        return {"eta": res.eta, "nu": res.nu, "max_photons": res.max_photons,
                "trace_defect": res.trace_defect}
    except Exception as exc:  # row marked failed, sweep continues
        return {"error": str(exc)}


def run_sweep(cfg: RunConfig, out_dir: Path, jobs: int = 1) -> int:
    """Sweep over n; CSV rows in input order. Returns a process exit code."""
    ladder_res = None
    if cfg.solver in ("ladder", "both"):
        ladder_res = ladder.solve_ladder(
            cfg.params, cfg.envelope(1.0), cfg.mode_grid(), cfg.control(), cfg.grid
        )

    master_results = [None] * len(cfg.n_values)
    if cfg.solver in ("master", "both"):
        work = [(cfg, n) for n in cfg.n_values]
        if jobs > 1:
            with ProcessPoolExecutor(max_workers=jobs) as pool:
                master_results = list(pool.map(_master_point, work))
        else:
            master_results = [_master_point(w) for w in work]

    rows = []
    any_failed = False
    for n, mres in zip(cfg.n_values, master_results):
        row = {"n": n, "eta_master": None, "nu_master": None,
               "eta_ladder": None, "nu_ladder": None, "eta_series": None,
               "max_photons": None, "trace_defect": None}
        status = "ok"
        if mres is not None:
            if "error" in mres:
                status = "failed"
                any_failed = True
            else:
                row.update(eta_master=mres["eta"], nu_master=mres["nu"],
                           max_photons=mres["max_photons"],
                           trace_defect=mres["trace_defect"])
        if ladder_res is not None:
            eta_l, nu_l = ladder.coherent_efficiency_ladder(
                n, ladder_res.eta_1, ladder_res.eta_2
            )
            eta_s, _ = metrics.series_eta(n, ladder_res.eta_1, ladder_res.eta_2)
            row.update(eta_ladder=eta_l, nu_ladder=nu_l, eta_series=eta_s)
        rows.append([_fmt(row[c]) if c != "status" else status for c in CSV_COLUMNS])

    _write_csv(out_dir / "sweep.csv", CSV_COLUMNS, rows)
    return 1 if any_failed else 0


# ---------------------------------------------------------------------------
# pulse dump
# ---------------------------------------------------------------------------

def dump_pulse(cfg: RunConfig, out_dir: Path) -> int:
    env = cfg.envelope(cfg.n_values[0])
    ctrl = cfg.control()
    t = np.linspace(cfg.grid.t1, cfg.grid.t2, cfg.samples)
    e = env(t)
    om = np.asarray(ctrl(t), dtype=complex)
    rows = [
        [_fmt(ti), _fmt(er), _fmt(ei), _fmt(o)]
        for ti, er, ei, o in zip(t, e.real, e.imag, om.real)
    ]
    _write_csv(out_dir / "pulse.csv", ("t", "re_E_in", "im_E_in", "Omega"), rows)
    return 0


# ---------------------------------------------------------------------------
# solver comparison
# ---------------------------------------------------------------------------

def compare_solvers(cfg: RunConfig, out_dir: Path, force: bool = False) -> int:
    over_cap = [n for n in cfg.n_values if n > ladder.LADDER_VALIDITY_CAP]
    if over_cap and not force:
        raise ConfigError(
            f"pulse.n: values {over_cap} exceed the two-excitation validity cap "
            f"{ladder.LADDER_VALIDITY_CAP}; rerun with --force to proceed"
        )

    ctrl = cfg.control()
    env1 = cfg.envelope(1.0)
    lres = ladder.solve_ladder(cfg.params, env1, cfg.mode_grid(), ctrl, cfg.grid)

    # grid-refinement evidence for eta_2 at half the mode count, same line length
    n_half = (cfg.mode_N - 1) // 2
    if n_half % 2 == 0:
        n_half += 1
    lres_half = ladder.solve_ladder(cfg.params, env1, cfg.mode_grid(n_half), ctrl, cfg.grid)

    report = {
        "eta_1": lres.eta_1,
        "eta_2": lres.eta_2,
        "eta_2_convergence": {
            "N": cfg.mode_N, "N_half": n_half,
            "eta_2_half": lres_half.eta_2,
            "delta": abs(lres.eta_2 - lres_half.eta_2),
        },
        "gate": COMPARE_GATE,
        "rows": [],
    }
    all_pass = True
    for n in cfg.n_values:
        mres = master.integrate_master(cfg.params, cfg.envelope(n), ctrl,
                                       cfg.grid, m_max=cfg.m_max)
        eta_l, _ = ladder.coherent_efficiency_ladder(n, lres.eta_1, lres.eta_2)
        rel = abs(mres.eta - eta_l) / mres.eta if mres.eta > 0 else math.inf
        in_validity = n <= ladder.LADDER_VALIDITY_CAP
        row = {"n": n, "eta_master": mres.eta, "eta_ladder": eta_l,
               "rel_discrepancy": rel}
        if in_validity:
            row["pass"] = rel < COMPARE_GATE
            all_pass = all_pass and row["pass"]
        else:
            row["note"] = "outside two-excitation validity; O(n^3) breakdown expected"
        report["rows"].append(row)

    out_dir.mkdir(parents=True, exist_ok=True)
    with (out_dir / "compare.json").open("w") as fh:
        json.dump(report, fh, indent=2)
    for row in report["rows"]:
        verdict = ("PASS" if row["pass"] else "FAIL") if "pass" in row else "----"
        print(f"n={row['n']:g} eta_master={row['eta_master']:.6g} "
              f"eta_ladder={row['eta_ladder']:.6g} "
              f"rel={row['rel_discrepancy']:.4%} {verdict}")
    return 0 if all_pass else 1


def print_metrics(cfg: RunConfig) -> int:
    fom = metrics.figures_of_merit(cfg.params, cfg.T_c)
    print(f"cooperativity C = {fom.C:.6g}")
    print(f"eta_max_sp = {fom.eta_max_sp:.6g}")
    print(f"adiabaticity gamma*T_c*C = {fom.adiabaticity:.6g}")
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavitymem",
        description="Storage of weak coherent pulses in a single-atom cavity memory",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in [
        ("sweep", "sweep eta/nu over the photon numbers in the config"),
        ("pulse", "dump the input pulse and control field to CSV"),
        ("compare", "cross-validate the master and ladder solvers"),
        ("metrics", "print C, eta_max_sp and the adiabaticity parameter"),
    ]:
        sp = sub.add_parser(name, help=doc)
        sp.add_argument("--config", required=True, help="path to JSON config")
        sp.add_argument("--out", default="out", help="output directory")
        sp.add_argument("--jobs", type=int, default=1, help="parallel workers")
        sp.add_argument("--force", action="store_true",
                        help="run beyond the two-excitation validity cap")
        sp.add_argument("--solver", choices=["master", "ladder", "both"],
                        help="override the solver selection from the config")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, overrides={"solver": args.solver})
        out = Path(args.out)
        if args.command == "sweep":
            return run_sweep(cfg, out, jobs=args.jobs)
        if args.command == "pulse":
            return dump_pulse(cfg, out)
        if args.command == "compare":
            return compare_solvers(cfg, out, force=args.force)
        return print_metrics(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
