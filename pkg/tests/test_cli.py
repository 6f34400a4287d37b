import json

from profmack import cli
from profmack.groups import CyclicGroup, group_to_json, trivial_subgroup
from profmack.gsets import transitive_gset
from profmack import burnside as bs


def run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_cb_rank_json(capsys):
    code, out = run(capsys, ["cb", "rank", "--tower", "pro_p:2", "--depth", "6",
                             "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "Exact" and data["rank"] == 2
    assert data["schema"] == 1
    assert data["convention"].startswith("rank(empty)=0")


def test_cb_rank_depth_zero_interval(capsys):
    code, out = run(capsys, ["cb", "rank", "--tower", "pro_p:2", "--depth", "0",
                             "--json"])
    assert code == 0
    assert json.loads(out)["verdict"] == "Interval"


def test_usage_error_exit_code(capsys):
    code, _ = run(capsys, ["cb", "rank", "--tower", "bogus"])
    assert code == cli.EXIT_USAGE


def test_marks_tsv_golden(capsys):
    code, out = run(capsys, ["burnside", "marks", "--group", "sym:3", "--tsv"])
    assert code == 0
    assert out == "6\t0\t0\t0\n3\t1\t0\t0\n2\t0\t2\t0\n1\t1\t1\t1\n"


def test_marks_trivial_group(capsys):
    code, out = run(capsys, ["burnside", "marks", "--group", "cyclic:1", "--tsv"])
    assert code == 0
    assert out.strip() == "1"


def test_group_info(capsys):
    code, out = run(capsys, ["group", "info", "--group", "sym:3", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["num_subgroups"] == 6 and data["num_classes"] == 4


def test_group_info_bad_selector(capsys):
    code, _ = run(capsys, ["group", "info", "--group", "weird:9"])
    assert code == cli.EXIT_USAGE


def test_mackey_ext_cli(capsys):
    code, out = run(capsys, ["mackey", "ext", "--group", "cyclic:2",
                             "--M", "burnside", "--N", "fixedpoint:Q(zeta_2)",
                             "--degree", "1", "--json"])
    assert code == 0
    assert json.loads(out)["dimension"] == 0


def test_sheaf_godement_cli(capsys):
    code, out = run(capsys, ["sheaf", "godement", "--base", "spzp:2",
                             "--sheaf", "const:Q", "--stages", "3", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["length"] == 1
    assert data["stalk_vanishing_violations"] == []


def test_homdim_certify_cli(capsys):
    code, out = run(capsys, ["homdim", "certify", "--setup", "spzp-weyl",
                             "--depth", "5", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["verdict"] == "Exact" and data["value"] == 1


def test_verify_round_trip(tmp_path, capsys):
    code, out = run(capsys, ["cb", "rank", "--tower", "pro_p:3", "--depth", "6",
                             "--json"])
    f = tmp_path / "cert.json"
    f.write_text(out)
    code, out = run(capsys, ["cb", "rank", "--verify", str(f), "--json"])
    assert code == 0
    assert json.loads(out)["verified"]

    code, out = run(capsys, ["homdim", "certify", "--setup", "spzp-weyl",
                             "--depth", "5", "--json"])
    g = tmp_path / "hd.json"
    g.write_text(out)
    code, out = run(capsys, ["homdim", "certify", "--verify", str(g), "--json"])
    assert code == 0
    assert json.loads(out)["verified"]


def test_verify_rejects_tampered_certificate(tmp_path, capsys):
    _, out = run(capsys, ["homdim", "certify", "--setup", "spzp-weyl",
                          "--depth", "5", "--json"])
    data = json.loads(out)
    data["value"] = 7  # tamper
    data["upper"] = 7
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(data))
    code, _ = run(capsys, ["homdim", "certify", "--verify", str(f)])
    assert code == cli.EXIT_USAGE


def test_span_compose_cli(tmp_path, capsys):
    G = CyclicGroup(2)
    O = transitive_gset(G, trivial_subgroup(G))
    sp = bs.identity_span(O)
    data = {
        "schema": 1,
        "group": group_to_json(G),
        "gsets": {"O": {"act": [list(r) for r in O.act]}},
        "spans": [
            {"left_foot": "O", "right_foot": "O",
             "apex": {"act": [list(r) for r in sp.apex.act]},
             "left": list(sp.left), "right": list(sp.right)},
        ] * 2,
    }
    f = tmp_path / "spans.json"
    f.write_text(json.dumps(data))
    code, out = run(capsys, ["span", "compose", "--file", str(f), "--json"])
    assert code == 0
    assert json.loads(out)["apex_size"] == 2


def test_determinism_across_threads(capsys):
    outs = []
    for n in ("1", "4"):
        code, out = run(capsys, ["cb", "rank", "--tower", "pro_p:2",
                                 "--depth", "6", "--json", "--threads", n,
                                 "--seed", "7"])
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1]
