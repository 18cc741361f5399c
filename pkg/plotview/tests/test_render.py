"""Renderer acceptance: all five kinds from golden CSVs, strict schema."""

import subprocess
import sys

import pytest

from plotview import cli, schema


@pytest.fixture(scope="module")
def golden(tmp_path_factory):
    """Small golden CSVs produced through the generator's own CLI."""
    root = tmp_path_factory.mktemp("golden")

    def generate(*args):
        proc = subprocess.run([sys.executable, "-m", "micromacro", *args],
                              capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
        return proc

    generate("fig2", "--db-list", "5", "--m", "1", "--transmission", "bal",
             "--grid", "201", "--out", str(root / "fig2"))
    generate("fig3", "--db-range", "1:5:1", "--m", "0,1", "--out", str(root / "fig3.csv"))
    generate("fig4", "--db-range", "1:5:1", "--m", "0,1", "--out", str(root / "fig4.csv"))
    generate("fig5", "--db-range", "2:6:2", "--m", "1", "--t-points", "11",
             "--out", str(root / "fig5"))
    generate("remote", "--lambdas", "0,0.1", "--etas", "0.5,1.0",
             "--out", str(root / "remote.csv"))
    return {
        "fig2": root / "fig2" / "fig2_m1_db5_bal.csv",
        "fig3": root / "fig3.csv",
        "fig4": root / "fig4.csv",
        "fig5": root / "fig5" / "fig5_m1.csv",
        "fig5_tbal": root / "fig5" / "fig5_m1_tbal.csv",
        "remote": root / "remote.csv",
    }


@pytest.mark.parametrize("kind", ("fig2", "fig3", "fig4", "fig5", "remote"))
def test_renders_every_kind(golden, tmp_path, kind):
    out = tmp_path / f"{kind}.png"
    argv = ["--kind", kind, "--in", str(golden[kind]), "--out", str(out)]
    if kind == "fig5":
        argv += ["--tbal", str(golden["fig5_tbal"])]
    assert cli.main(argv) == 0
    assert out.exists() and out.stat().st_size > 0


def test_rendering_is_deterministic(golden, tmp_path):
    first = tmp_path / "a.png"
    second = tmp_path / "b.png"
    for out in (first, second):
        assert cli.main(["--kind", "fig3", "--in", str(golden["fig3"]),
                         "--out", str(out)]) == 0
    assert first.read_bytes() == second.read_bytes()


def test_rejects_schema_corrupted_csv(golden, tmp_path, capsys):
    corrupted = tmp_path / "bad.csv"
    lines = golden["fig4"].read_text().splitlines()
    lines[0] = lines[0].replace("P", "rate") + ",surprise"
    corrupted.write_text("\n".join(lines) + "\n")
    out = tmp_path / "bad.png"
    code = cli.main(["--kind", "fig4", "--in", str(corrupted), "--out", str(out)])
    assert code != 0
    assert not out.exists()
    message = capsys.readouterr().err
    assert "rate" in message and "surprise" in message   # column diagnostic


def test_rejects_kind_mismatch(golden, tmp_path):
    out = tmp_path / "mismatch.png"
    code = cli.main(["--kind", "fig3", "--in", str(golden["remote"]), "--out", str(out)])
    assert code == 2
    assert not out.exists()


def test_rejects_empty_csv(tmp_path, capsys):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    out = tmp_path / "empty.png"
    assert cli.main(["--kind", "fig2", "--in", str(empty), "--out", str(out)]) == 2
    assert not out.exists()
    headers_only = tmp_path / "headers.csv"
    headers_only.write_text("x,p_plus,p_minus\n")
    assert cli.main(["--kind", "fig2", "--in", str(headers_only), "--out", str(out)]) == 2
    assert not out.exists()


def test_rejects_nonnumeric_cell(tmp_path):
    bad = tmp_path / "cell.csv"
    bad.write_text("x,p_plus,p_minus\n0.0,abc,0.1\n")
    with pytest.raises(schema.SchemaError):
        schema.read_table(str(bad), "fig2")


def test_all_rows_flagged_is_an_error(tmp_path):
    flagged = tmp_path / "flagged.csv"
    flagged.write_text("r_db,m,t_policy,D,status\n0,1,bal,0,degenerate\n")
    out = tmp_path / "flagged.png"
    assert cli.main(["--kind", "fig3", "--in", str(flagged), "--out", str(out)]) == 2
    assert not out.exists()
