#!/usr/bin/env python3
"""Regenerate the committed sample data by driving the simulator CLI.

Every input consumed by the figure recipes is produced here through the
public command-line interface (file coupling only, no imports from the
simulator package).  Figure runs for the strongly spreading regimes relax
the conservation audit explicitly (audit_tol = 1): those multiplicities are
illustration-quality, as documented in the simulator README; the acceptance
suite certifies conservation separately on its own run set.

Run from the plots/ directory:  python3 generate_samples.py
Takes roughly ten minutes; the expensive entries are the S=50 variational
runs and the two-configuration onset sweep.
"""

import os
import subprocess
import sys
import tempfile

HERE = os.path.dirname(os.path.abspath(__file__))
DATA = os.path.join(HERE, "sample_data")

Z_SSB_012_S50 = 0.9404  # displaced equilibrium at U/J=-0.12, S=50
Z_SSB_015_S20 = 0.7124
Z_SSB_019_S20 = 0.8325


def run_cli(subcommand, conf_text, out_name):
    os.makedirs(DATA, exist_ok=True)
    out = os.path.join(DATA, out_name)
    with tempfile.NamedTemporaryFile("w", suffix=".conf", delete=False) as fh:
        fh.write(conf_text)
        conf = fh.name
    try:
        subprocess.run(
            [sys.executable, "-m", "bjjsim.cli", subcommand, conf, "--out", out],
            check=True,
        )
    finally:
        os.unlink(conf)
    print(out_name)


def trajectory(name, engine, j, u, s, z0, t_final, sample_dt, **extra):
    lines = [
        f"engine = {engine}", f"j = {j}", f"u = {u}", f"s = {s}", f"z0 = {z0}",
        f"t_final = {t_final}", f"sample_dt = {sample_dt}",
    ]
    for key, value in extra.items():
        lines.append(f"{key} = {value}")
    run_cli("trajectory", "\n".join(lines) + "\n", name)


VAR_LOOSE = dict(audit_tol=1.0, svd_cutoff=1e-7, step=0.0025, sampler="random")


def main():
    # fig 1: classical portraits, repulsive vs attractive
    for z0 in (0.1, 0.3, 0.5):
        trajectory(f"fig1_mf_rep_z{z0}.csv", "meanfield", 1, 0.1, 20, z0, 100, 0.05)
    for dz in (0.01, 0.05, 0.1):
        z0 = round(0.4802 - dz, 4)  # displaced equilibrium for U/J=-0.12, S=20 is 0.4802
        trajectory(f"fig1_mf_att_d{dz}.csv", "meanfield", 1, -0.12, 20, z0, 100, 0.05)

    # fig 2: three engines, small imbalances
    for z0 in (0.01, 0.05, 0.1):
        trajectory(f"fig2_mf_z{z0}.csv", "meanfield", 1, 0.1, 20, z0, 100, 0.05)
        trajectory(
            f"fig2_n2_z{z0}.csv", "variational", 1, 0.1, 20, z0, 100, 0.05,
            multiplicity=2, sampler="preset-plasma-n2", step=0.005, audit_tol=1.0,
        )
        trajectory(f"fig2_exact_z{z0}.csv", "exact", 1, 0.1, 20, z0, 100, 0.05)

    # fig 3: exact large-imbalance spirals
    trajectory("fig3_exact_s20.csv", "exact", 1, 0.1, 20, 0.5, 100, 0.05)
    trajectory("fig3_exact_s50.csv", "exact", 1, 0.1, 50, 0.5, 100, 0.05)

    # fig 4: collapse and revival time series
    trajectory("fig4_exact_s20.csv", "exact", 1, 0.1, 20, 0.5, 100, 0.1)
    trajectory("fig4_var_s20.csv", "variational", 1, 0.1, 20, 0.5, 100, 0.1,
               multiplicity=8, seed=1, **VAR_LOOSE)
    trajectory("fig4_exact_s50.csv", "exact", 1, 0.1, 50, 0.5, 100, 0.1)
    trajectory("fig4_var_s50.csv", "variational", 1, 0.1, 50, 0.5, 100, 0.1,
               multiplicity=20, seed=1, **VAR_LOOSE)

    # fig 5: self-trapping split
    trajectory("fig5_mf_s20.csv", "meanfield", 1, 1.2, 20, 0.5, 50, 0.05)
    trajectory("fig5_exact_s20.csv", "exact", 1, 1.2, 20, 0.5, 50, 0.05)
    trajectory("fig5_var_s20.csv", "variational", 1, 1.2, 20, 0.5, 50, 0.05,
               multiplicity=12, seed=4, audit_tol=1.0, svd_cutoff=1e-7, step=0.00125,
               sampler="random")
    trajectory("fig5_mf_s50.csv", "meanfield", 1, 0.53, 50, 0.5, 50, 0.05)
    trajectory("fig5_exact_s50.csv", "exact", 1, 0.53, 50, 0.5, 50, 0.05)
    trajectory("fig5_var_s50.csv", "variational", 1, 0.53, 50, 0.5, 50, 0.05,
               multiplicity=25, seed=4, audit_tol=1.0, svd_cutoff=1e-7, step=0.00125,
               sampler="random")

    # fig 6: symmetry-broken oscillations at S=50
    for dz in (0.01, 0.05, 0.1):
        z0 = round(Z_SSB_012_S50 - dz, 4)
        trajectory(f"fig6_mf_d{dz}.csv", "meanfield", 1, -0.12, 50, z0, 100, 0.05)
        trajectory(f"fig6_var_d{dz}.csv", "variational", 1, -0.12, 50, z0, 100, 0.05,
                   multiplicity=10, seed=1, **VAR_LOOSE)
        trajectory(f"fig6_exact_d{dz}.csv", "exact", 1, -0.12, 50, z0, 100, 0.05)

    # fig 7: Husimi snapshots, delocalizing vs confined attractive runs
    for tag, u, z_ssb in (("u015", -0.15, Z_SSB_015_S20), ("u019", -0.19, Z_SSB_019_S20)):
        z0 = round(z_ssb - 0.05, 4)
        conf = "\n".join(
            [
                "engine = variational", "j = 1", f"u = {u}", "s = 20", f"z0 = {z0}",
                "times = 0, 200, 300", "nz = 101", "nphi = 101",
                "multiplicity = 2", "sampler = preset-mirror",
                "step = 0.0025", "svd_cutoff = 1e-6",
            ]
        )
        run_cli("husimi", conf + "\n", f"fig7_{tag}.grid")

    # fig 8: onset of symmetry breaking versus particle number
    run_cli("ssb-sweep", "s_list = 5, 10, 20, 50\nmethod = meanfield\n", "fig8_meanfield.csv")
    run_cli("ssb-sweep", "s_list = 10, 20, 50\nmethod = exact-groundstate\n", "fig8_exact.csv")
    run_cli("ssb-sweep", "s_list = 10, 20, 50\nmethod = variational-n2\n", "fig8_n2.csv")


if __name__ == "__main__":
    main()
