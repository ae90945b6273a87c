"""Parsers for the simulator's output files.

Two formats exist: trajectory CSVs with the fixed seven-column header, and
plain-text Husimi grids whose first line carries the domain bounds and grid
shape.  Errors name the offending file and line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TRAJECTORY_HEADER = "t,z,sin_phi,cos_phi,var_sin,energy,norm"
SWEEP_HEADER = "S,method,u_critical_over_j,tolerance"


class ParseError(ValueError):
    pass


@dataclass(frozen=True)
class Trajectory:
    path: str
    columns: dict[str, np.ndarray]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]


def read_trajectory(path: str) -> Trajectory:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != TRAJECTORY_HEADER:
            raise ParseError(f"{path}:1: expected header {TRAJECTORY_HEADER!r}, got {header!r}")
        names = header.split(",")
        rows = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.strip().split(",")
            if len(parts) != len(names):
                raise ParseError(f"{path}:{lineno}: expected {len(names)} fields, got {len(parts)}")
            try:
                rows.append([float(p) for p in parts])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from exc
    if not rows:
        raise ParseError(f"{path}: no data rows")
    data = np.asarray(rows)
    return Trajectory(path, {name: data[:, i] for i, name in enumerate(names)})


@dataclass(frozen=True)
class HusimiGrid:
    path: str
    z_axis: np.ndarray
    phi_axis: np.ndarray
    Q: np.ndarray


def read_husimi(path: str) -> HusimiGrid:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 6:
            raise ParseError(f"{path}:1: expected 'z_min z_max nz phi_min phi_max nphi'")
        try:
            z_min, z_max = float(header[0]), float(header[1])
            nz = int(header[2])
            nphi = int(header[5])
        except ValueError as exc:
            raise ParseError(f"{path}:1: {exc}") from exc
        rows = []
        for lineno, line in enumerate(fh, start=2):
            parts = line.split()
            if len(parts) != nphi:
                raise ParseError(f"{path}:{lineno}: expected {nphi} values, got {len(parts)}")
            rows.append([float(p) for p in parts])
    if len(rows) != nz:
        raise ParseError(f"{path}: expected {nz} grid rows, got {len(rows)}")
    z_axis = np.linspace(z_min, z_max, nz)
    # the phase grid is anchored at zero and steps 2 pi / nphi around the circle
    dphi = 2.0 * math.pi / nphi
    phi_axis = dphi * (np.arange(nphi) - (nphi - 1) // 2)
    return HusimiGrid(path, z_axis, phi_axis, np.asarray(rows))


@dataclass(frozen=True)
class OnsetSweep:
    path: str
    S: np.ndarray
    method: list[str]
    u_critical: np.ndarray


def read_sweep(path: str) -> OnsetSweep:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != SWEEP_HEADER:
            raise ParseError(f"{path}:1: expected header {SWEEP_HEADER!r}, got {header!r}")
        S, methods, u = [], [], []
        for lineno, line in enumerate(fh, start=2):
            parts = line.strip().split(",")
            if len(parts) != 4:
                raise ParseError(f"{path}:{lineno}: expected 4 fields")
            S.append(int(parts[0]))
            methods.append(parts[1])
            u.append(float(parts[2]))
    if not S:
        raise ParseError(f"{path}: no data rows")
    return OnsetSweep(path, np.asarray(S), methods, np.asarray(u))
