"""Rendering tests: every committed recipe renders deterministically from the
committed sample data, the portrait axis convention holds, and schema
violations fail loudly."""

import glob
import os

import pytest

from bjjplots.readers import ParseError, read_husimi, read_sweep, read_trajectory
from bjjplots.render import SIN_LABEL, Z_LABEL, load_recipe, render, render_to_file

HERE = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
RECIPES = sorted(glob.glob(os.path.join(HERE, "recipes", "fig*.json")))
DATA = os.path.join(HERE, "sample_data")


def test_all_recipes_present():
    names = [os.path.basename(p) for p in RECIPES]
    assert names == [f"fig{i}.json" for i in range(1, 9)]


@pytest.mark.parametrize("recipe_path", RECIPES, ids=[os.path.basename(p) for p in RECIPES])
def test_recipe_renders_byte_identically(recipe_path, tmp_path):
    out1 = render_to_file(recipe_path, DATA, str(tmp_path / "first"))
    out2 = render_to_file(recipe_path, DATA, str(tmp_path / "second"))
    with open(out1, "rb") as a, open(out2, "rb") as b:
        assert a.read() == b.read()
    assert os.path.getsize(out1) > 10_000


def test_phase_portraits_use_z_vs_sine_axes():
    recipe = load_recipe(os.path.join(HERE, "recipes", "fig2.json"))
    fig = render(recipe, DATA)
    visible = [ax for ax in fig.axes if ax.get_visible() and ax.get_xlabel()]
    assert visible, "no labelled axes rendered"
    for ax in visible:
        assert ax.get_xlabel() == Z_LABEL
        assert ax.get_ylabel() == SIN_LABEL


def test_trajectory_reader_round_trip():
    path = os.path.join(DATA, "fig2_exact_z0.1.csv")
    traj = read_trajectory(path)
    assert set(traj.columns) == {"t", "z", "sin_phi", "cos_phi", "var_sin", "energy", "norm"}
    assert traj["t"].shape == traj["z"].shape
    assert traj["t"][0] == 0.0


def test_husimi_reader_shapes():
    grid = read_husimi(os.path.join(DATA, "fig7_u015_t0.grid"))
    assert grid.Q.shape == (grid.z_axis.shape[0], grid.phi_axis.shape[0])
    assert grid.Q.min() >= 0.0


def test_sweep_reader():
    sweep = read_sweep(os.path.join(DATA, "fig8_meanfield.csv"))
    assert list(sweep.S) == [5, 10, 20, 50]
    assert all(u < 0 for u in sweep.u_critical)


def test_empty_csv_rejected(tmp_path):
    bad = tmp_path / "empty.csv"
    bad.write_text("t,z,sin_phi,cos_phi,var_sin,energy,norm\n")
    with pytest.raises(ParseError, match="no data rows"):
        read_trajectory(str(bad))


def test_wrong_header_rejected(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("time,z\n0,0\n")
    with pytest.raises(ParseError, match="bad.csv:1"):
        read_trajectory(str(bad))


def test_cli_nonzero_exit_on_parse_error(tmp_path):
    from bjjplots.cli import main

    bad_recipe = tmp_path / "r.json"
    bad_recipe.write_text('{"figure": "x", "kind": "phase_portraits", "out": "x.png", '
                          '"panels": [{"inputs": [{"file": "missing.csv"}]}]}')
    assert main(["render", str(bad_recipe), "--data-dir", str(tmp_path),
                 "--out-dir", str(tmp_path)]) == 1
