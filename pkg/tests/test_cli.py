"""Command-line interface: exit codes and output formats."""

from __future__ import annotations

import pytest

from conftest import model_path
from kfix.cli import main
from kfix.cnf import parse_dimacs, to_dimacs


@pytest.fixture(autouse=True)
def _clear_model_env(monkeypatch):
    monkeypatch.delenv("KFIX_MODEL_ROOT", raising=False)


def test_parse_reports_counts(capsys) -> None:
    assert main(["parse", "--model", model_path("listing")]) == 0
    out = capsys.readouterr().out
    assert out == "parsed 4 symbols (4 prompted, 0 choice groups)\n"


def test_model_root_env_and_directory(monkeypatch, capsys) -> None:
    monkeypatch.setenv("KFIX_MODEL_ROOT", str(model_path("listing")).rsplit("/", 1)[0])
    assert main(["parse"]) == 0
    assert "parsed 4 symbols" in capsys.readouterr().out


def test_missing_model_is_usage_error(capsys) -> None:
    assert main(["parse"]) == 2
    assert "no model given" in capsys.readouterr().err


def test_nonexistent_model_path(capsys) -> None:
    assert main(["parse", "--model", "/no/such/model"]) == 2
    assert "not found" in capsys.readouterr().err


def test_malformed_model_exits_2(tmp_path, capsys) -> None:
    bad = tmp_path / "Kconfig"
    bad.write_text("config lower\n\tbool zzz\n")
    assert main(["parse", "--model", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_dimacs_round_trip(tmp_path, capsys) -> None:
    out = tmp_path / "model.cnf"
    assert main(["dimacs", "--model", model_path("listing"), "--out", str(out)]) == 0
    text = out.read_text()
    assert to_dimacs(parse_dimacs(text)) == text
    assert "wrote" in capsys.readouterr().out


def test_dimacs_to_stdout(capsys) -> None:
    assert main(["dimacs", "--model", model_path("listing")]) == 0
    out = capsys.readouterr().out
    assert "p cnf " in out


def test_check_default_config_satisfiable(capsys) -> None:
    assert main(["check", "--model", model_path("listing")]) == 0
    assert capsys.readouterr().out == "satisfiable\n"


def test_check_with_config_file(tmp_path, capsys) -> None:
    dot = tmp_path / ".config"
    dot.write_text("CONFIG_X86=y\nCONFIG_64BIT=y\n")
    rc = main(["check", "--model", model_path("listing"), "--config", str(dot)])
    assert rc == 0
    assert "satisfiable" in capsys.readouterr().out


def test_check_missing_config_file(capsys) -> None:
    rc = main(["check", "--model", model_path("listing"), "--config", "/no/.config"])
    assert rc == 2


def test_check_bad_config_line(tmp_path, capsys) -> None:
    dot = tmp_path / ".config"
    dot.write_text("CONFIG_X86=maybe\n")
    rc = main(["check", "--model", model_path("listing"), "--config", str(dot)])
    assert rc == 2
    assert "line 1" in capsys.readouterr().err


def test_fix_dependency_chain(capsys) -> None:
    rc = main(["fix", "--model", model_path("listing"), "--set", "CONFIG_64BIT=y"])
    assert rc == 0
    out = capsys.readouterr().out
    assert out == "fix 1 (changes 2 symbols): [X86 := y, 64BIT := y]\n"


def test_fix_directly_applicable(capsys) -> None:
    rc = main(["fix", "--model", model_path("listing"), "--set", "X86=n"])
    assert rc == 0
    assert "directly applicable" in capsys.readouterr().out


def test_fix_requires_set(capsys) -> None:
    assert main(["fix", "--model", model_path("listing")]) == 2
    assert "--set" in capsys.readouterr().err


def test_fix_unknown_symbol(capsys) -> None:
    rc = main(["fix", "--model", model_path("listing"), "--set", "NOPE=y"])
    assert rc == 2
    assert "unknown symbol" in capsys.readouterr().err


def test_fix_rejects_bad_values(capsys) -> None:
    base = ["fix", "--model", model_path("listing")]
    assert main(base + ["--set", "64BIT=7"]) == 2
    assert main(base + ["--set", "EX=m"]) == 2
    assert main(base + ["--set", "EX"]) == 2


def test_fix_reports_unresolvable(tmp_path, capsys) -> None:
    # B has no prompt and no default, so A can never be enabled
    model = tmp_path / "Kconfig"
    model.write_text('config A\n\tbool "a"\n\tdepends on B\n\nconfig B\n\tbool\n')
    rc = main(["fix", "--model", str(model), "--set", "A=y"])
    assert rc == 1
    assert "no fix found" in capsys.readouterr().err


def test_eval_writes_csv(tmp_path, capsys) -> None:
    out = tmp_path / "rows.csv"
    rc = main(
        [
            "eval",
            "--model",
            model_path("listing"),
            "--samples",
            "1",
            "--p-no",
            "0.5",
            "--seed",
            "4",
            "--model-id",
            "listing",
            "--out",
            str(out),
        ]
    )
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "conflicts generated" in stdout
    assert "wrote" in stdout
    lines = out.read_text().splitlines()
    assert lines[0].startswith("model_id,sample_seed,p_no,")
    assert len(lines) >= 2
    assert all(row.startswith("listing,") for row in lines[1:])


def test_eval_rejects_bad_probability_list(capsys) -> None:
    base = ["eval", "--model", model_path("listing")]
    assert main(base + ["--p-no", "abc"]) == 2
    assert main(base + ["--p-no", ""]) == 2


def test_serve_rejects_bad_listen_address(capsys) -> None:
    rc = main(["serve", "--model", model_path("listing"), "--listen", "nope"])
    assert rc == 2
    assert "addr:port" in capsys.readouterr().err
