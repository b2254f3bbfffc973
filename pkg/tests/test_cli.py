import pytest

from speedup_learning.cli import build_parser, main


def test_bound_prints_pinned_values(capsys):
    assert main(["bound", "--epsilon", "0.1", "--delta", "0.1", "--dim", "81"]) == 0
    assert capsys.readouterr().out.strip() == "585"
    assert main(["bound", "--epsilon", "0.1", "--delta", "0.1", "--dim", "35"]) == 0
    assert capsys.readouterr().out.strip() == "266"


def test_curve_writes_csv(tmp_path):
    out = tmp_path / "curve.csv"
    code = main(["curve", "--domain", "eightpuzzle", "--trials", "2",
                 "--train-max", "4", "--eval-every", "2",
                 "--test-set-size", "5", "--output", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "num_examples,mean_accuracy,stddev"
    assert len(lines) == 3


def test_curve_stdout(capsys):
    code = main(["curve", "--domain", "eightpuzzle", "--trials", "1",
                 "--train-max", "2", "--eval-every", "2", "--test-set-size", "3"])
    assert code == 0
    assert capsys.readouterr().out.startswith("num_examples,mean_accuracy,stddev\n")


def test_table_build(tmp_path, capsys):
    out = tmp_path / "table.txt"
    code = main(["table", "--build-exhaustive", "--output", str(out)])
    assert code == 0
    printed = capsys.readouterr().out
    assert "filled cells: 44" in printed
    assert "nonempty macros: 35" in printed
    dump = out.read_text()
    assert len(dump.splitlines()) == 9
    assert "rdlu" in dump


def test_table_without_flag_errors(capsys):
    assert main(["table"]) == 2


def test_parser_rejects_unknown_domain():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["curve", "--domain", "chess"])


def test_verify_subcommand_wiring():
    args = build_parser().parse_args(["verify", "--all", "--teacher-draws", "10"])
    assert args.teacher_draws == 10 and args.command == "verify"
