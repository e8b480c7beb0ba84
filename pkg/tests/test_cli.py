import json
import subprocess
import sys


def run_cli(args: list[str]) -> subprocess.CompletedProcess:
    return subprocess.run(
        [sys.executable, "-m", "boolmeasure", *args], capture_output=True, text=True
    )


def write(tmp_path, name, payload) -> str:
    path = tmp_path / name
    path.write_text(json.dumps(payload), encoding="utf-8")
    return str(path)


def test_gen_is_byte_identical_and_parses(tmp_path):
    a = run_cli(["gen", "--kind", "measure", "--atoms", "4", "--seed", "7"])
    b = run_cli(["gen", "--kind", "measure", "--atoms", "4", "--seed", "7"])
    assert a.returncode == 0 and b.returncode == 0
    assert a.stdout == b.stdout
    data = json.loads(a.stdout)
    assert data["atom_count"] == 4


def test_gen_kinds_produce_usable_sections(tmp_path):
    for kind, extra in [
        ("measure", []),
        ("submeasure", []),
        ("fragmentation", []),
        ("collection", ["--params", "size=4"]),
    ]:
        res = run_cli(["gen", "--kind", kind, "--atoms", "4", "--seed", "3", *extra])
        assert res.returncode == 0, res.stderr
        assert kind in json.loads(res.stdout)
    res = run_cli(["gen", "--kind", "expander", "--seed", "3", "--params", "m=20,p=30,k=3"])
    assert res.returncode == 0, res.stderr
    data = json.loads(res.stdout)
    assert data["expander"]["m"] == 20 and data["atom_count"] == 30


def test_gen_bad_params_exit_2():
    assert run_cli(["gen", "--kind", "expander", "--seed", "1"]).returncode == 2
    assert run_cli(["gen", "--kind", "measure", "--atoms", "3", "--seed", "1",
                    "--params", "bogus=1"]).returncode == 2


def test_kappa_singleton(tmp_path):
    path = write(tmp_path, "single.json", {"atom_count": 2, "collection": [[0, 1]]})
    res = run_cli(["kappa", "--input", path])
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["values"]["kappa"] == "1/1"
    assert report["verdict"] == "computed"


def test_kappa_disjoint_pair_with_brute(tmp_path):
    path = write(tmp_path, "pair.json", {"atom_count": 2, "collection": [[0], [1]]})
    res = run_cli(["kappa", "--input", path, "--brute", "2"])
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["values"]["kappa"] == "1/2"
    assert report["values"]["brute_value"] == "1/2"
    assert report["values"]["agreement"] is True


def test_kappa_all_pairs_of_four(tmp_path):
    members = [[0, 1], [0, 2], [0, 3], [1, 2], [1, 3], [2, 3]]
    path = write(tmp_path, "pairs.json", {"atom_count": 4, "collection": members})
    res = run_cli(["kappa", "--input", path, "--brute", "6"])
    report = json.loads(res.stdout)
    assert report["values"]["kappa"] == "1/2"
    assert report["values"]["agreement"] is True


def test_kappa_bare_brute_defaults_to_denominator(tmp_path):
    path = write(tmp_path, "tri.json",
                 {"atom_count": 3, "collection": [[0, 1], [1, 2], [0, 2]]})
    res = run_cli(["kappa", "--input", path, "--brute"])
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["values"]["kappa"] == "2/3"
    assert report["values"]["brute_max_len"] == 3
    assert report["values"]["agreement"] is True
    assert run_cli(["kappa", "--input", path, "--brute", "xyz"]).returncode == 2


def test_certify_submeasure_auto_conversion(tmp_path):
    gen = run_cli(["gen", "--kind", "submeasure", "--atoms", "4", "--seed", "6",
                   "--out", str(tmp_path / "s.json")])
    assert gen.returncode == 0
    res = run_cli(["certify", "--input", str(tmp_path / "s.json")])
    assert res.returncode == 0, res.stderr
    report = json.loads(res.stdout)
    assert report["verdict"] == "holds"
    assert "submeasure thresholds" in " ".join(report["notes"])


def test_kappa_input_errors_exit_2(tmp_path):
    missing = write(tmp_path, "m.json", {"atom_count": 2})
    assert run_cli(["kappa", "--input", missing]).returncode == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    assert run_cli(["kappa", "--input", str(bad)]).returncode == 2
    assert run_cli(["kappa", "--input", str(tmp_path / "absent.json")]).returncode == 2
    empty = write(tmp_path, "e.json", {"atom_count": 2, "collection": []})
    assert run_cli(["kappa", "--input", empty]).returncode == 2


def test_measure_command(tmp_path):
    path = write(tmp_path, "c.json", {"atom_count": 2, "collection": [[0], [1]]})
    res = run_cli(["measure", "--input", path])
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["values"]["kappa"] == "1/2"
    assert report["values"]["measure"]["weights"] == ["1/2", "1/2"]
    assert report["values"]["member_values"] == ["1/2", "1/2"]


def test_certify_from_measure_file(tmp_path):
    gen = run_cli(["gen", "--kind", "measure", "--atoms", "5", "--seed", "2",
                   "--out", str(tmp_path / "m.json")])
    assert gen.returncode == 0
    res = run_cli(["certify", "--input", str(tmp_path / "m.json")])
    assert res.returncode == 0, res.stderr
    report = json.loads(res.stdout)
    assert report["verdict"] == "holds"
    assert "measure" in report
    for level in report["levels"]:
        assert level["kappa"] is not None and level["bound"] is not None


def test_certify_single_level_and_trace(tmp_path):
    path = write(
        tmp_path, "f.json",
        {"atom_count": 2, "fragmentation": {"levels": [[[0], [1], [0, 1]]]}},
    )
    res = run_cli(["certify", "--input", path, "--level", "1", "--trace", "--seed", "5"])
    assert res.returncode == 0, res.stderr
    report = json.loads(res.stdout)
    assert report["levels"][0]["kappa"] == "1/2"
    trace = report["traces"][0]
    assert trace["verdict"]["kind"] == "witness"
    assert trace["parameters"]["K"] == 2


def test_certify_non_graded_fixture_exits_1(tmp_path):
    # C_1 = C_2 = {1}, C_3 = B+: valid fragmentation, but not graded
    frag = {"levels": [[[0, 1]], [[0, 1]], [[0], [1], [0, 1]]]}
    path = write(tmp_path, "bad.json", {"atom_count": 2, "fragmentation": frag})
    res = run_cli(["certify", "--input", path])
    assert res.returncode == 1
    report = json.loads(res.stdout)
    assert report["verdict"] == "fails"
    witness = report["witnesses"]["graded_violation"]
    assert witness["level"] == 1
    assert witness["whole"] == [0, 1] and witness["part"] == [0]


def test_certify_invalid_fragmentation_exits_1(tmp_path):
    frag = {"levels": [[[0]]]}  # not upward closed, not covering
    path = write(tmp_path, "bad2.json", {"atom_count": 2, "fragmentation": frag})
    res = run_cli(["certify", "--input", path])
    assert res.returncode == 1
    report = json.loads(res.stdout)
    assert report["witnesses"]["fragmentation_violation"]["kind"] == "upward"


def test_check_frag_holds_and_fails(tmp_path):
    good = run_cli(["gen", "--kind", "fragmentation", "--atoms", "4", "--seed", "9",
                    "--out", str(tmp_path / "g.json")])
    assert good.returncode == 0
    res = run_cli(["check-frag", "--input", str(tmp_path / "g.json")])
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["values"]["valid"] and report["values"]["graded"]

    bad = write(tmp_path, "b.json",
                {"atom_count": 2, "fragmentation": {"levels": [[[0, 1]], [[0, 1]],
                                                               [[0], [1], [0, 1]]]}})
    res = run_cli(["check-frag", "--input", bad])
    assert res.returncode == 1
    assert "graded_violation" in json.loads(res.stdout)["witnesses"]


def test_antichain_command(tmp_path):
    path = write(
        tmp_path, "f.json",
        {"atom_count": 3, "fragmentation": {"levels": [[[0], [1], [2], [0, 1], [0, 2],
                                                        [1, 2], [0, 1, 2]]]}},
    )
    res = run_cli(["antichain", "--input", path, "--level", "1"])
    assert res.returncode == 0
    report = json.loads(res.stdout)
    assert report["values"]["K"] == 3
    assert report["values"]["witness"] == [[0], [1], [2]]
    assert run_cli(["antichain", "--input", path, "--level", "2"]).returncode == 2


def test_kr_verify_roundtrip(tmp_path):
    gen = run_cli(["gen", "--kind", "expander", "--seed", "4",
                   "--params", "m=20,p=30,k=3", "--out", str(tmp_path / "x.json")])
    assert gen.returncode == 0
    res = run_cli(["kr-verify", "--input", str(tmp_path / "x.json"), "--choices"])
    assert res.returncode == 0, res.stderr
    report = json.loads(res.stdout)
    assert report["values"]["checked"] == 1350
    assert report["values"]["choice_functions"] == 1350


def test_kr_verify_failure_witness(tmp_path):
    payload = {
        "atom_count": 9,
        "expander": {"m": 3, "p": 9, "k": 3,
                     "sets": [[0, 1, 2], [0, 1, 2], [0, 1, 2]]},
    }
    path = write(tmp_path, "x.json", payload)
    res = run_cli(["kr-verify", "--input", path])
    assert res.returncode == 1
    report = json.loads(res.stdout)
    assert report["witnesses"]["violating_indices"] == [0, 1, 2]


def test_exit_codes_never_other(tmp_path):
    # a large sample of malformed invocations must map onto {0, 1, 2}
    outcomes = set()
    outcomes.add(run_cli(["kappa"]).returncode)
    outcomes.add(run_cli(["nope"]).returncode)
    outcomes.add(run_cli([]).returncode)
    path = write(tmp_path, "c.json", {"atom_count": 2, "collection": [[0]]})
    outcomes.add(run_cli(["kappa", "--input", path]).returncode)
    assert outcomes <= {0, 1, 2}
