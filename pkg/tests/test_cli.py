import json
from itertools import combinations

import networkx as nx
import pytest

from mstci import cli
from mstci import conjecture as cj
from mstci.graph import Graph
from mstci.instance_io import InstanceParseError, format_instance, parse_graph6, parse_instance


def k_n_text(n, tree=None):
    lines = [f"n {n}"] + [f"{a} {b}" for a, b in combinations(range(n), 2)]
    if tree is not None:
        lines += ["tree"] + [f"{a} {b}" for a, b in tree]
    return "\n".join(lines) + "\n"


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    return _write


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, json.loads(out), err


def test_compute_star_and_path(capsys, write):
    star = write("star.txt", k_n_text(5, [(0, 1), (0, 2), (0, 3), (0, 4)]))
    code, report, _ = run_json(capsys, "compute", star)
    assert code == 0 and report["results"]["total"] == 12
    for c in report["results"]["cycles"]:
        assert c["intersections"] == 4 == c["internal"] + c["external"] + c["transit"]
    path = write("path.txt", k_n_text(5, [(0, 1), (1, 2), (2, 3), (3, 4)]))
    assert run_json(capsys, "compute", path)[1]["results"]["total"] == 14


def test_compute_star_flag(capsys, write):
    plain = write("k5.txt", k_n_text(5))
    code, report, _ = run_json(capsys, "compute", plain, "--star", "3")
    assert code == 0 and report["results"]["total"] == 12
    code, _, err = run(capsys, "compute", plain)
    assert code == 2 and "no tree" in err


def test_compute_cyclic_tree_rejected(capsys, write):
    bad = write("bad.txt", k_n_text(5, [(0, 1), (1, 2), (0, 2), (3, 4)]))
    code, out, err = run(capsys, "compute", bad)
    assert code == 2 and out == ""
    assert "not a spanning tree" in err


def test_compute_csv(capsys, write):
    star = write("star.txt", k_n_text(4, [(0, 1), (0, 2), (0, 3)]))
    code, out, _ = run(capsys, "compute", star, "--format", "csv")
    rows = out.strip().splitlines()
    assert rows[0] == "u,w,length,intersections,internal,external,transit"
    assert rows[-1] == "total,,,3,,,"
    assert len(rows) == 5


def test_output_file(capsys, tmp_path, write):
    star = write("star.txt", k_n_text(4, [(0, 1), (0, 2), (0, 3)]))
    target = tmp_path / "report.json"
    code, out, _ = run(capsys, "compute", star, "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["results"]["total"] == 3


def test_report_fields(capsys, write):
    star = write("star.txt", k_n_text(4, [(0, 1), (0, 2), (0, 3)]))
    _, report, _ = run_json(capsys, "compute", star)
    assert list(report) == [
        "command", "parameters", "version", "input_digest", "seed", "results", "result_digest", "wall_time",
    ]
    assert report["command"] == "compute"
    assert report["parameters"]["graph"] == star
    assert len(report["input_digest"]) == 64
    _, quiet, _ = run_json(capsys, "compute", star, "--no-timing")
    assert "wall_time" not in quiet
    assert quiet["result_digest"] == report["result_digest"]


@pytest.mark.parametrize("n, value, count", [(5, 12, 5), (4, 3, 16)])
def test_optimal_complete(capsys, write, n, value, count):
    code, report, _ = run_json(capsys, "optimal", write("k.txt", k_n_text(n)))
    assert code == 0
    assert report["results"]["best_value"] == value
    assert report["results"]["count"] == count


def test_optimal_path_graph(capsys, write):
    p6 = write("p6.txt", "n 6\n" + "".join(f"{i} {i + 1}\n" for i in range(5)))
    _, report, _ = run_json(capsys, "optimal", p6)
    assert report["results"]["best_value"] == 0 and report["results"]["count"] == 1


def test_optimal_cap_suggests_local_search(capsys, write):
    code, _, err = run(capsys, "optimal", write("k6.txt", k_n_text(6)), "--cap", "10")
    assert code == 2 and "local-search" in err


def test_local_search(capsys, write):
    k5 = write("k5.txt", k_n_text(5))
    code, report, _ = run_json(capsys, "local-search", k5, "--star", "0")
    assert code == 0 and report["results"]["best_value"] == 12
    _, report, _ = run_json(capsys, "local-search", k5)
    assert report["results"]["best_value"] <= report["results"]["trace"][0]


def test_search_small(capsys):
    code, report, _ = run_json(capsys, "search-small", "--nodes", "6", "--jobs", "1")
    res = report["results"]
    assert code == 0 and res["counterexamples"] == []
    assert 251 / 2 <= res["instances"] <= 2 * 251
    assert report["seed"] is None


def test_search_small_nodes_bounds(capsys):
    assert run(capsys, "search-small", "--nodes", "3")[0] == 1
    assert run(capsys, "search-small", "--nodes", "12", "--max-nodes", "9")[0] == 1


def test_search_small_counterexample_dump(capsys, tmp_path, monkeypatch):
    fake = cj.SearchOutcome("exhaustive", 4)
    inst = cj.generate_graph_alg1(0, [(0, 1), (1, 2)])
    fake.record(1, 2)
    fake.counterexamples.append(inst)
    monkeypatch.setattr(cli, "counterexample_search", lambda *a, **k: fake)
    dump = tmp_path / "ce.txt"
    code, report, _ = run_json(capsys, "search-small", "--nodes", "4", "--dump", str(dump))
    assert code == 3
    assert report["results"]["dumped_to"] == str(dump)
    g, tree = parse_instance(dump.read_text())
    assert sorted(tree) == sorted(inst.tree_edges)
    assert sorted(g.edges) == sorted(inst.graph().edges)


def test_search_random(capsys):
    code, report, _ = run_json(capsys, "search-random", "--nodes", "10", "--samples", "20", "--seed", "3", "--jobs", "1")
    res = report["results"]
    assert code == 0 and res["instances"] == 60 and res["counterexamples"] == []
    assert report["seed"] == 3 and res["densities"] == [0.1, 0.5, 0.9]


@pytest.mark.parametrize("bad", [["--samples", "0"], ["--samples", "5", "--densities", "0.1,1.5"],
                                 ["--samples", "5", "--densities", "x"], ["--samples", "5", "--densities", "0"]])
def test_search_random_usage_errors(capsys, bad):
    assert run(capsys, "search-random", "--nodes", "10", *bad)[0] == 1


def test_search_random_replay_byte_identical(capsys):
    argv = ["search-random", "--nodes", "12", "--samples", "30", "--seed", "9", "--no-timing"]
    first = run(capsys, *argv, "--jobs", "1")[1]
    second = run(capsys, *argv, "--jobs", "2")[1]
    assert first == second


def test_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("MSTCI_SEED", "11")
    argv = ["search-random", "--nodes", "8", "--samples", "5", "--no-timing", "--jobs", "1"]
    from_env = run_json(capsys, *argv)[1]
    assert from_env["seed"] == 11
    explicit = run_json(capsys, *argv, "--seed", "4")[1]
    assert explicit["seed"] == 4
    monkeypatch.delenv("MSTCI_SEED")
    assert run_json(capsys, *argv, "--seed", "11")[1]["results"] == from_env["results"]
    monkeypatch.setenv("MSTCI_SEED", "nope")
    assert run(capsys, *argv)[0] == 1


def test_search_csv_table(capsys):
    code, out, _ = run(capsys, "search-small", "--nodes", "4", "--format", "csv", "--no-timing", "--jobs", "1")
    assert out.splitlines() == ["nodes,instances,counterexamples,equalities,min_margin,seed", "4,5,0,5,0,"]


@pytest.mark.parametrize("suite", ["intrinsic", "partition", "reduction"])
def test_verify_suites(capsys, suite):
    code, report, _ = run_json(capsys, "verify", "--suite", suite, "--seed", "1")
    assert code == 0 and report["results"]["passed"]


def test_verify_failure_exit_code(capsys, monkeypatch):
    from mstci.verify import Check

    monkeypatch.setattr(cli, "run_suite", lambda name, seed: [Check("x", False, 1, "n 3\n0 1\n1 2\n")])
    code, report, _ = run_json(capsys, "verify", "--suite", "intrinsic")
    assert code == 3
    assert report["results"]["checks"][0]["failing_instance"].startswith("n 3")


def test_verify_unknown_suite(capsys):
    assert run(capsys, "verify", "--suite", "nonsense")[0] == 1


def test_graph6_input(capsys, tmp_path):
    path = tmp_path / "g.g6"
    path.write_bytes(nx.to_graph6_bytes(nx.complete_graph(4), header=False) + nx.to_graph6_bytes(nx.complete_graph(5), header=False))
    code, report, _ = run_json(capsys, "optimal", str(path), "--graph6", "--index", "1")
    assert code == 0 and report["results"]["best_value"] == 12
    assert run(capsys, "optimal", str(path), "--graph6", "--index", "7")[0] == 2


def test_missing_file(capsys, tmp_path):
    assert run(capsys, "compute", str(tmp_path / "absent.txt"))[0] == 2


def test_parse_errors_report_line(capsys, write):
    bad = write("bad.txt", "n 4\n0 1\n# note\n1 x\n")
    code, _, err = run(capsys, "compute", bad)
    assert code == 2 and "line 4" in err
    with pytest.raises(InstanceParseError) as info:
        parse_instance("n 3\n0 1\n0 5\n")
    assert info.value.line == 3
    with pytest.raises(InstanceParseError):
        parse_instance("")
    with pytest.raises(InstanceParseError):
        parse_instance("nodes 3\n")
    with pytest.raises(InstanceParseError):
        parse_instance("n 3\n0 1\ntree\n0 1\ntree\n")
    with pytest.raises(InstanceParseError, match="duplicate"):
        parse_instance("n 3\n0 1\n1 0\n")


def test_instance_round_trip():
    text = "n 4\n0 1\n0 2\n1 2\n2 3\ntree\n0 1\n0 2\n2 3\n"
    g, tree = parse_instance(text)
    assert format_instance(g, tree) == text
    messy = "# header\nn 4\n\n2 1\n0 2\n1 0\n3 2\ntree\n2 0\n1 0\n3 2\n"
    g2, tree2 = parse_instance(messy)
    assert format_instance(g2, tree2) == text


def test_parse_graph6_rejects_garbage():
    with pytest.raises(InstanceParseError):
        parse_graph6("~~~~\n")
    assert [g.m for g in parse_graph6("C~\n\nBw\n")] == [6, 3]
    assert isinstance(parse_graph6("A_\n")[0], Graph)


def test_version_flag(capsys):
    assert cli.main(["--version"]) == 0
    assert "mstci" in capsys.readouterr().out


def test_missing_subcommand(capsys):
    assert cli.main([]) == 1
