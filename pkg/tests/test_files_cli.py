import csv
import io
import sys

import numpy as np
import pytest

from diskhop import InputFormatError, Site, compute_layers
from diskhop.cli import main
from diskhop.files import (
    format_instance,
    format_result,
    parse_instance,
    parse_result,
)
from diskhop.oracle import InstanceSpec, generate

from conftest import make_sites


def test_parse_instance_with_comments():
    text = "# a comment\n0 0 1\n\n2.5 -1e-3 0.25\n# trailing\n"
    sites = parse_instance(text)
    assert len(sites) == 2
    assert sites[0] == Site(0, 0, 0, 1)
    assert sites[1].x == 2.5 and sites[1].r == 0.25


def test_parse_instance_errors_carry_line_numbers():
    with pytest.raises(InputFormatError) as e:
        parse_instance("0 0 1\n1 2\n")
    assert "line 2" in str(e.value)
    with pytest.raises(InputFormatError):
        parse_instance("0 0 -1\n")
    with pytest.raises(InputFormatError):
        parse_instance("# nothing\n")


def test_instance_round_trip():
    sites = generate(InstanceSpec(count=30, seed=3))
    assert parse_instance(format_instance(sites)) == sites


def test_result_round_trip(tangent_chain):
    res = compute_layers(tangent_chain, 0)
    text = format_result(res)
    assert text == "0 0 -\n1 1 0\n2 2 1\n"
    dist, pred = parse_result(text)
    assert (dist == res.dist).all()
    assert (pred == res.pred).all()


def test_result_serializes_unreached_as_inf():
    res = compute_layers(make_sites([(0, 0, 1), (50, 0, 1)]), 0)
    assert format_result(res) == "0 0 -\n1 inf -\n"


def test_cli_solve_chain(tmp_path, capsys):
    inst = tmp_path / "chain.txt"
    inst.write_text("0 0 1\n2 0 1\n4 0 1\n")
    out = tmp_path / "out.txt"
    rc = main(["solve", str(inst), "--source", "0", "--out", str(out)])
    assert rc == 0
    assert out.read_text() == "0 0 -\n1 1 0\n2 2 1\n"


def test_cli_solve_single_site(tmp_path):
    inst = tmp_path / "one.txt"
    inst.write_text("1 2 0.5\n")
    out = tmp_path / "out.txt"
    assert main(["solve", str(inst), "--source", "0", "--out", str(out)]) == 0
    assert out.read_text() == "0 0 -\n"


def test_cli_solve_with_oracle(tmp_path):
    inst = tmp_path / "gen.txt"
    assert main(["gen", "--n", "300", "--seed", "5", "--nesting", "0.2",
                 "--out", str(inst)]) == 0
    out = tmp_path / "res.txt"
    assert main(["solve", str(inst), "--source", "0", "--oracle",
                 "--out", str(out)]) == 0


def test_cli_solve_input_errors(tmp_path):
    assert main(["solve", str(tmp_path / "missing.txt"), "--source", "0"]) == 2
    bad = tmp_path / "bad.txt"
    bad.write_text("1 2\n")
    assert main(["solve", str(bad), "--source", "0"]) == 2
    ok = tmp_path / "ok.txt"
    ok.write_text("0 0 1\n")
    assert main(["solve", str(ok), "--source", "5"]) == 2


def test_cli_gen_deterministic(tmp_path):
    a = tmp_path / "a.txt"
    b = tmp_path / "b.txt"
    assert main(["gen", "--n", "5", "--seed", "7", "--out", str(a)]) == 0
    assert main(["gen", "--n", "5", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_cli_gen_invalid_flags():
    assert main(["gen", "--n", "0"]) == 2


def test_cli_gen_nesting_dominated(tmp_path):
    inst = tmp_path / "nest.txt"
    assert main(["gen", "--n", "100", "--seed", "1", "--nesting", "0.3",
                 "--out", str(inst)]) == 0
    from diskhop import build_diagram
    from diskhop.files import read_instance
    assert len(build_diagram(read_instance(str(inst))).dominated) >= 1


def test_cli_round_trip_matches_memory(tmp_path):
    inst = tmp_path / "i.txt"
    res_path = tmp_path / "r.txt"
    assert main(["gen", "--n", "120", "--seed", "9", "--nesting", "0.2",
                 "--out", str(inst)]) == 0
    assert main(["solve", str(inst), "--source", "3", "--out", str(res_path)]) == 0
    from diskhop.files import read_instance
    sites = read_instance(str(inst))
    res = compute_layers(sites, 3)
    dist, pred = parse_result(res_path.read_text())
    assert (dist == res.dist).all()
    assert (pred == res.pred).all()


def test_cli_bench_csv_schema(tmp_path):
    out = tmp_path / "bench.csv"
    rc = main(["bench", "--sizes", "1024", "--trials", "1", "--seed", "3",
               "--out", str(out), "--naive-cutoff", "2048"])
    assert rc == 0
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["n", "trial", "t_build_ns", "t_solve_ns", "t_naive_ns",
                       "q_ops", "dt_edges"]
    assert len(rows) == 2
    n, trial, tb, ts, tn, q, dt = rows[1]
    assert n == "1024" and trial == "0"
    assert int(tb) > 0 and int(ts) > 0 and int(tn) > 0
    assert int(q) >= 0 and int(dt) > 0


def test_cli_bench_naive_cutoff_blank(tmp_path):
    out = tmp_path / "bench.csv"
    assert main(["bench", "--sizes", "256", "--trials", "1",
                 "--out", str(out), "--naive-cutoff", "128"]) == 0
    rows = list(csv.reader(out.open()))
    assert rows[1][4] == ""  # t_naive_ns skipped above the cutoff


def test_cli_bench_invalid(tmp_path):
    assert main(["bench", "--sizes", "", "--out", str(tmp_path / "x.csv")]) == 2
    assert main(["bench", "--sizes", "10", "--trials", "0"]) == 2


def test_cli_verify_passes(tmp_path, capsys):
    inst = tmp_path / "i.txt"
    assert main(["gen", "--n", "80", "--seed", "2", "--nesting", "0.2",
                 "--dominated-source", "--out", str(inst)]) == 0
    assert main(["verify", str(inst), "--source", "0"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 7
    assert "FAIL" not in out


def test_cli_verify_negative_control(tmp_path, capsys):
    inst = tmp_path / "i.txt"
    inst.write_text("0 0 1\n2 0 1\n4 0 1\n")
    assert main(["verify", str(inst), "--source", "0",
                 "--inject-corruption"]) == 1
    assert "FAIL" in capsys.readouterr().out
