import pytest

from backend.services.export import CSV_FIELDS
from backend.errors import CriterionAssertion, RamifiedPrimeError
from scripts import sedecim_cli
from scripts.sedecim_cli import EXIT_MISMATCH, EXIT_OK, EXIT_USAGE, main, sequence_values


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ("SEDECIM_JOBS", "SEDECIM_ORACLE_CAP", "SEDECIM_CONFIG"):
        monkeypatch.delenv(name, raising=False)


def test_tables(capsys):
    assert main(["tables"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "194u -336v" in out
    assert "FAIL" not in out


def test_sequence(capsys):
    assert main(["sequence", "--q", "3", "--p", "61", "157", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "p=5: does not split completely" in out
    assert out.count("e_p=-1") == 4
    assert out.count("e_p=1") == 4


def test_sequence_values():
    values = sequence_values(3, 157, {})
    assert len(values) == 4
    assert all((v.value_re, v.value_im, v.e) == ("1.0", "0.0", 1) for v in values)


def test_density_then_verify(tmp_path):
    out = tmp_path / "q3.csv"
    args = ["density", "--q", "3", "--x-max", "300", "--out", str(out), "--format", "csv"]
    assert main(args) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(CSV_FIELDS)
    assert len(lines) == 1 + 29
    assert main(["verify", "--in", str(out)]) == EXIT_OK


def test_density_json(tmp_path):
    out = tmp_path / "q7.json"
    args = ["density", "--q", "7", "--x-max", "200", "--method", "criterion", "--out", str(out), "--format", "json"]
    assert main(args) == EXIT_OK
    assert '"ratio16"' in out.read_text()


def test_verify_recomputes(capsys):
    assert main(["verify", "--q", "11", "--x-max", "200"]) == EXIT_OK
    assert "mismatches=0" in capsys.readouterr().out


def test_verify_flags_contradictions(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text(",".join(CSV_FIELDS) + "\n3,157,1,1,13,2,-1,16,4,true\n")
    assert main(["verify", "--in", str(path)]) == EXIT_MISMATCH
    assert "MISMATCH q=3 p=157" in capsys.readouterr().out


def test_usage_errors():
    assert main(["density", "--q", "5", "--x-max", "100"]) == EXIT_USAGE
    assert main(["density", "--q", "3", "--x-max", "1"]) == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["sequence", "--q", "5", "--p", "13"])
    assert info.value.code == EXIT_USAGE


def test_density_json_independent_of_jobs(tmp_path):
    paths = []
    for jobs in ("1", "2"):
        out = tmp_path / f"jobs{jobs}.json"
        args = ["density", "--q", "7", "--x-max", "300", "--method", "both", "--jobs", jobs,
                "--out", str(out), "--format", "json"]
        assert main(args) == EXIT_OK
        paths.append(out)
    assert paths[0].read_bytes() == paths[1].read_bytes()


@pytest.mark.parametrize("error", [
    RamifiedPrimeError("p=3 divides 2q"),
    CriterionAssertion(3, 13, "(u/p) != 1"),
])
def test_library_errors_exit_with_mismatch_code(monkeypatch, error):
    def failing(args, settings):
        raise error

    monkeypatch.setitem(sedecim_cli.COMMANDS, "tables", failing)
    assert main(["tables"]) == EXIT_MISMATCH


def test_plain_value_errors_are_usage_errors(monkeypatch):
    def failing(args, settings):
        raise ValueError("bad input")

    monkeypatch.setitem(sedecim_cli.COMMANDS, "tables", failing)
    assert main(["tables"]) == EXIT_USAGE
