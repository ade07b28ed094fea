import pytest

from vneig import ConfigError, list_presets, load_config, load_sweep_config, preset_path

GOOD = """
[grid]
x_min = -5.0
length = 10.0
n_points = 16
hbar = 1.0

[lattice]
n_x = 4
n_p = 4
alpha = 0.5

[potential]
kind = harmonic
mass = 1.0
omega = 1.0

[method]
name = bvn

[prune]
target_count = 9

[report]
n_levels = 8
oracle = on
"""


def write(tmp_path, text, name="exp.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


class TestLoadConfig:
    def test_full_roundtrip(self, tmp_path):
        cfg = load_config(write(tmp_path, GOOD))
        assert cfg.method == "bvn"
        assert cfg.grid.n_points == 16
        assert cfg.lattice.alpha == 0.5
        assert cfg.target_count == 9 and cfg.e_cut is None
        assert cfg.model.kind == "harmonic"
        assert cfg.oracle is True
        # default output names derive from the file stem
        assert cfg.summary_file == "exp-summary.txt"
        assert cfg.levels_file == "exp-levels.csv"

    def test_all_presets_load(self):
        names = list_presets()
        assert "harmonic-pvn" in names and "morse-sweep" in names
        for name in names:
            if name == "morse-sweep":
                load_sweep_config(preset_path(name))
            else:
                load_config(preset_path(name))

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            load_config(tmp_path / "nope.ini")

    def test_missing_section(self, tmp_path):
        broken = GOOD.replace("[grid]", "[grd]")
        with pytest.raises(ConfigError, match=r"\[grid\]"):
            load_config(write(tmp_path, broken))

    def test_missing_key_named(self, tmp_path):
        broken = GOOD.replace("omega = 1.0", "")
        with pytest.raises(ConfigError, match="potential.omega"):
            load_config(write(tmp_path, broken))

    def test_unknown_key_rejected(self, tmp_path):
        broken = GOOD.replace("omega = 1.0", "omega = 1.0\nomeag = 2.0")
        with pytest.raises(ConfigError, match="omeag"):
            load_config(write(tmp_path, broken))

    def test_bad_number(self, tmp_path):
        broken = GOOD.replace("length = 10.0", "length = ten")
        with pytest.raises(ConfigError, match="grid.length"):
            load_config(write(tmp_path, broken))

    def test_both_prune_keys_rejected(self, tmp_path):
        broken = GOOD.replace("target_count = 9",
                              "target_count = 9\ne_cut = 3.0")
        with pytest.raises(ConfigError, match="exactly one"):
            load_config(write(tmp_path, broken))

    def test_neither_prune_key_rejected(self, tmp_path):
        broken = GOOD.replace("target_count = 9", "")
        with pytest.raises(ConfigError, match="exactly one"):
            load_config(write(tmp_path, broken))

    def test_prune_with_non_bvn_rejected(self, tmp_path):
        broken = GOOD.replace("name = bvn", "name = pvn")
        with pytest.raises(ConfigError, match="bvn"):
            load_config(write(tmp_path, broken))

    def test_bvn_without_prune_rejected(self, tmp_path):
        broken = GOOD.replace("[prune]\ntarget_count = 9\n", "")
        with pytest.raises(ConfigError, match="prune"):
            load_config(write(tmp_path, broken))

    def test_lattice_required_for_pvn(self, tmp_path):
        broken = GOOD.replace("name = bvn", "name = pvn")
        broken = broken.replace("[prune]\ntarget_count = 9\n", "")
        broken = broken.replace(
            "[lattice]\nn_x = 4\nn_p = 4\nalpha = 0.5\n", "")
        with pytest.raises(ConfigError, match="lattice"):
            load_config(write(tmp_path, broken))

    def test_lattice_mismatch_reported(self, tmp_path):
        broken = GOOD.replace("n_x = 4", "n_x = 3")
        with pytest.raises(ConfigError, match="lattice"):
            load_config(write(tmp_path, broken))

    def test_bad_method_name(self, tmp_path):
        broken = GOOD.replace("name = bvn", "name = dvr")
        with pytest.raises(ConfigError, match="method.name"):
            load_config(write(tmp_path, broken))

    def test_tabulated_with_oracle_rejected(self, tmp_path):
        (tmp_path / "table.dat").write_text("0.0 0.0\n1.0 1.0\n2.0 0.0\n")
        text = GOOD.replace(
            "kind = harmonic\nmass = 1.0\nomega = 1.0",
            "kind = tabulated\nmass = 1.0\nfile = table.dat")
        with pytest.raises(ConfigError, match="oracle"):
            load_config(write(tmp_path, text))

    def test_tabulated_loads_with_oracle_off(self, tmp_path):
        (tmp_path / "table.dat").write_text("-6.0 0.0\n0.0 1.0\n6.0 0.0\n")
        text = GOOD.replace(
            "kind = harmonic\nmass = 1.0\nomega = 1.0",
            "kind = tabulated\nmass = 1.0\nfile = table.dat")
        text = text.replace("oracle = on", "oracle = off")
        cfg = load_config(write(tmp_path, text))
        assert cfg.model.kind == "tabulated"


class TestLoadSweepConfig:
    def test_preset(self):
        sweep = load_sweep_config(preset_path("morse-sweep"))
        assert sweep.e_shell == 11.25
        assert sweep.digits == 4
        assert [p.hbar for p in sweep.points] == [1.0, 0.5, 0.25, 0.125, 0.0625]
        for p in sweep.points:
            assert p.grid.n_points == p.lattice.n_x * p.lattice.n_p

    def test_missing_point_section(self, tmp_path):
        text = preset_path("morse-sweep").read_text().replace(
            "[point 0.0625]", "[point 0.06250]")
        with pytest.raises(ConfigError, match=r"point 0\.0625"):
            load_sweep_config(write(tmp_path, text, "sweep.ini"))
