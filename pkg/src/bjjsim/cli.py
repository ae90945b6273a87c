"""Command-line front end.

Subcommands consume a plain ``key = value`` config file (one pair per line,
``#`` comments) and write deterministic text outputs:

  trajectory   CSV "t,z,sin_phi,cos_phi,var_sin,energy,norm"
  husimi       grid file: header "z_min z_max nz phi_min phi_max nphi",
               then nz rows of nphi Q values (row-major)
  ssb-sweep    CSV "S,method,u_critical_over_j,tolerance"
  stability    fixed-point report as JSON on stdout

All floats are written with 17 significant digits; identical config plus
identical seed gives byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .core import DomainError, PhaseSpacePoint, SystemParams
from .meanfield import mf_energy, ssb_fixed_points, stability_at_origin
from .observables import TrajectoryRecord
from .scenarios import ScenarioSpec, husimi_snapshots, run_scenario, ssb_onset
from .variational import PRESET_PLASMA_N2, RANDOM_SAMPLER, VariationalConfig


class ConfigError(ValueError):
    """Unparseable or invalid run configuration."""


class AuditError(RuntimeError):
    """An engine invariant audit failed after the outputs were computed."""


_KEYS = {
    "trajectory": {
        "engine", "j", "u", "s", "z0", "phi0", "t_final", "sample_dt", "rel_tol",
        "multiplicity", "sampler", "seed", "epsilon_seed", "svd_cutoff", "step",
        "audit_tol", "out",
    },
    "husimi": {
        "engine", "j", "u", "s", "z0", "phi0", "times", "nz", "nphi",
        "multiplicity", "sampler", "seed", "epsilon_seed", "svd_cutoff", "step",
        "out",
    },
    "ssb-sweep": {"s_list", "method", "horizon", "tolerance", "j", "out"},
    "stability": {"j", "u", "s", "out"},
}


def parse_config(path: str, allowed: set[str]) -> dict[str, tuple[str, int]]:
    """key -> (raw value, line number); unknown keys are rejected by name."""
    table: dict[str, tuple[str, int]] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            key = key.lower()
            if key not in allowed:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            if key in table:
                raise ConfigError(f"{path}:{lineno}: duplicate key {key!r}")
            table[key] = (value, lineno)
    return table


class _Config:
    def __init__(self, path: str, table: dict[str, tuple[str, int]]):
        self.path = path
        self.table = table

    def _fetch(self, key, cast, default):
        if key not in self.table:
            if default is _REQUIRED:
                raise ConfigError(f"{self.path}: missing required key {key!r}")
            return default
        value, lineno = self.table[key]
        try:
            return cast(value)
        except (ValueError, DomainError) as exc:
            raise ConfigError(f"{self.path}:{lineno}: bad value for {key!r}: {exc}") from exc

    def real(self, key, default=None):
        return self._fetch(key, float, _REQUIRED if default is None else default)

    def integer(self, key, default=None):
        return self._fetch(key, lambda s: int(s, 10), _REQUIRED if default is None else default)

    def word(self, key, default=None):
        return self._fetch(key, str, _REQUIRED if default is None else default)

    def real_list(self, key):
        return self._fetch(
            key, lambda s: [float(x) for x in s.split(",") if x.strip()], _REQUIRED
        )

    def int_list(self, key):
        return self._fetch(
            key, lambda s: [int(x) for x in s.split(",") if x.strip()], _REQUIRED
        )


_REQUIRED = object()


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _system_params(cfg: _Config) -> SystemParams:
    return SystemParams(J=cfg.real("j"), U=cfg.real("u"), S=cfg.integer("s"))


def _scenario_spec(cfg: _Config, seed_override: int | None, need_time: bool = True) -> ScenarioSpec:
    engine = cfg.word("engine").lower()
    params = _system_params(cfg)
    initial = PhaseSpacePoint(cfg.real("z0"), cfg.real("phi0", 0.0))
    t_final = cfg.real("t_final") if need_time else 1.0
    sample_dt = cfg.real("sample_dt", 0.01)
    variational = None
    if engine == "variational":
        seed = seed_override if seed_override is not None else cfg.integer("seed", 0)
        variational = VariationalConfig(
            multiplicity=cfg.integer("multiplicity"),
            step=cfg.real("step", 0.01),
            epsilon_seed=cfg.real("epsilon_seed", 1e-8),
            svd_cutoff=cfg.real("svd_cutoff", 1e-10),
            sampler=cfg.word("sampler", PRESET_PLASMA_N2).lower(),
            seed=seed,
        )
    return ScenarioSpec(
        engine=engine,
        params=params,
        initial=initial,
        t_final=t_final,
        sample_dt=sample_dt,
        rel_tol=cfg.real("rel_tol", 1e-10),
        variational=variational,
    )


def write_trajectory_csv(path: str, record: TrajectoryRecord) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("t,z,sin_phi,cos_phi,var_sin,energy,norm\n")
        for i in range(len(record)):
            fh.write(
                ",".join(
                    _fmt(col[i])
                    for col in (
                        record.t, record.z, record.sin_phi, record.cos_phi,
                        record.var_sin, record.energy, record.norm,
                    )
                )
                + "\n"
            )


def write_husimi_grid(path: str, grid) -> None:
    nz = grid.z_axis.shape[0]
    nphi = grid.phi_axis.shape[0]
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{_fmt(-1.0)} {_fmt(1.0)} {nz} {_fmt(-math.pi)} {_fmt(math.pi)} {nphi}\n")
        for row in grid.Q:
            fh.write(" ".join(_fmt(v) for v in row) + "\n")


def _audit_record(record: TrajectoryRecord, engine: str, tol: float) -> None:
    norm_drift = float(np.max(np.abs(record.norm - 1.0)))
    e0 = record.energy[0]
    energy_drift = float(np.max(np.abs(record.energy - e0)) / (abs(e0) + 1.0))
    if norm_drift > tol or energy_drift > tol:
        raise AuditError(
            f"{engine} audit failed: norm drift {norm_drift:.3e}, "
            f"energy drift {energy_drift:.3e} (tolerance {tol:.1e})"
        )


def cmd_trajectory(config_path: str, seed_override=None, out_override=None) -> str:
    cfg = _Config(config_path, parse_config(config_path, _KEYS["trajectory"]))
    spec = _scenario_spec(cfg, seed_override)
    out = out_override or cfg.word("out")
    record = run_scenario(spec)
    write_trajectory_csv(out, record)
    if spec.engine == "exact":
        _audit_record(record, "exact", cfg.real("audit_tol", 1e-10))
    elif spec.engine == "variational":
        _audit_record(record, "variational", cfg.real("audit_tol", 1e-6))
    else:
        # the mean-field integrator audits energy internally; norm is exact
        _audit_record(record, "meanfield", 1e-8)
    return out


def cmd_husimi(config_path: str, seed_override=None, out_override=None) -> list[str]:
    cfg = _Config(config_path, parse_config(config_path, _KEYS["husimi"]))
    spec = _scenario_spec(cfg, seed_override, need_time=False)
    times = cfg.real_list("times")
    nz = cfg.integer("nz", 201)
    nphi = cfg.integer("nphi", 201)
    out = out_override or cfg.word("out")
    grids = husimi_snapshots(spec, times, nz=nz, nphi=nphi)
    paths = []
    for t, grid in zip(sorted(times), grids):
        if len(times) == 1:
            path = out
        else:
            stem, dot, ext = out.rpartition(".")
            path = f"{stem}_t{t:g}.{ext}" if dot else f"{out}_t{t:g}"
        write_husimi_grid(path, grid)
        paths.append(path)
    return paths


def cmd_ssb_sweep(config_path: str, seed_override=None, out_override=None) -> str:
    cfg = _Config(config_path, parse_config(config_path, _KEYS["ssb-sweep"]))
    s_values = cfg.int_list("s_list")
    if not s_values:
        raise ConfigError(f"{config_path}: s_list must name at least one particle number")
    method = cfg.word("method").lower()
    horizon = cfg.real("horizon", 1000.0)
    tolerance = cfg.real("tolerance", 1e-3)
    J = cfg.real("j", 1.0)
    out = out_override or cfg.word("out")
    results = [ssb_onset(S, method, horizon=horizon, tolerance=tolerance, J=J) for S in s_values]
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("S,method,u_critical_over_j,tolerance\n")
        for res in results:
            fh.write(f"{res.S},{res.method},{_fmt(res.u_critical_over_j)},{_fmt(res.tolerance)}\n")
    return out


def _complex_pair(value: complex) -> list[float]:
    return [float(value.real), float(value.imag)]


def cmd_stability(config_path: str, out_override=None) -> str:
    cfg = _Config(config_path, parse_config(config_path, _KEYS["stability"]))
    params = _system_params(cfg)
    origin = stability_at_origin(params)
    doc = {
        "origin": {
            "fixed_point": {"z": origin.fixed_point.z, "phi": origin.fixed_point.phi},
            "jacobian": origin.jacobian.tolist(),
            "eigenvalues": [_complex_pair(ev) for ev in origin.eigenvalues],
            "classification": origin.classification,
        }
    }
    broken = ssb_fixed_points(params)
    if broken is not None:
        doc["symmetry_breaking"] = {
            "points": [{"z": p.z, "phi": p.phi} for p in broken.points],
            "jacobian": broken.report.jacobian.tolist(),
            "eigenvalues": [_complex_pair(ev) for ev in broken.report.eigenvalues],
            "classification": broken.report.classification,
            "energy": mf_energy(broken.points[0], params),
        }
    text = json.dumps(doc, indent=2, sort_keys=True)
    out = out_override
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return text


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="bjjsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("trajectory", "husimi", "ssb-sweep", "stability"):
        p = sub.add_parser(name)
        p.add_argument("config", help="path to a 'key = value' run configuration")
        p.add_argument("--out", help="override the configured output path")
        if name != "stability":
            p.add_argument("--seed", type=int, help="override the configured RNG seed")
    args = parser.parse_args(argv)

    try:
        if args.command == "trajectory":
            cmd_trajectory(args.config, args.seed, args.out)
        elif args.command == "husimi":
            cmd_husimi(args.config, args.seed, args.out)
        elif args.command == "ssb-sweep":
            cmd_ssb_sweep(args.config, args.seed, args.out)
        else:
            cmd_stability(args.config, args.out)
    except (ConfigError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AuditError, ArithmeticError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
