"""End-to-end CLI behaviour, run in-process through main(argv)."""

import json

import pytest

from p2stab import cli, quiver
from p2stab.geometry import module_point
from p2stab.io_utils import load_json
from p2stab.linalg import QQ


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_points(path, pts):
    path.write_text(json.dumps({"points": [[str(c) for c in p] for p in pts]}))
    return str(path)


def write_rep(path, rep):
    path.write_text(json.dumps(quiver.rep_to_json(rep)))
    return str(path)


# ---------------------------------------------------------------------------
# one-line arithmetic commands


def test_chern_commands(capsys):
    code, out, _ = run(capsys, "chern", "dimvec", "--ch=1,1,-3/2", "--heart", "A1")
    assert (code, out) == (0, "[-2,-5,-2]\n")
    code, out, _ = run(capsys, "chern", "euler", "--a=1,0,0", "--b=1,1,1/2")
    assert (code, out) == (0, "3\n")
    code, out, _ = run(capsys, "chern", "twist", "--ch=1,0,0", "--k", "-1")
    assert (code, out) == (0, "[1,-1,1/2]\n")
    code, out, _ = run(capsys, "chern", "bogomolov", "--ch=2,1,0")
    assert (code, out) == (0, "1\n")
    code, out, _ = run(capsys, "chern", "expected-dim", "--ch=1,0,-2")
    assert (code, out) == (0, "4\n")


def test_charge_commands(capsys):
    code, out, _ = run(capsys, "charge", "eval", "--ch=2,1,0", "--b=9/20", "--t2=99/400")
    assert (code, out) == (0, "re=99/200 im_coeff=1/10\n")
    code, out, _ = run(capsys, "charge", "sigma-b", "--b=1/2")
    assert (code, out) == (0, "[-1/2,0]; [-1/2,0]; [3/2,1]\n")
    code, out, _ = run(capsys, "charge", "abc", "--b=1/2")
    assert (code, out) == (0, "[3/2,1,1/2]\n")
    code, out, _ = run(capsys, "charge", "verify-T", "--b=1/2")
    assert (code, out) == (0, "OK (exact)\n")
    code, out, _ = run(capsys, "charge", "hypotheses", "--ch=2,1,0", "--b=9/20", "--t2=99/400")
    assert code == 0 and out.strip().endswith("all=ok")


def test_charge_scan_csv(capsys):
    code, out, _ = run(capsys, "charge", "scan", "--steps", "3")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "b,t2,epsilon,reZ,imZ_coeff,abc_a,abc_b,abc_c,hypotheses_ok"
    assert len(lines) == 4
    assert lines[1].startswith("1/10,9/100,")
    assert lines[2].startswith("1/2,1/4,")


def test_walls_commands(capsys, tmp_path):
    code, out, _ = run(capsys, "walls", "theta-family", "--n", "3", "--b", "1")
    assert (code, out) == (0, "[-3,0,3]\n")

    code, out, _ = run(capsys, "walls", "chamber", "--n", "2", "--theta=-1,-1,7/2")
    assert (code, out) == (0, "C_P2  sigma=1/2 tau=1/2\n")

    target = tmp_path / "walls.json"
    code, out, _ = run(capsys, "walls", "enumerate", "--n", "2", "--out", str(target))
    assert code == 0 and f"wrote {target}" in out
    blob = load_json(str(target))
    assert len(blob["walls"]) == 13 and blob["class"] == [2, 5, 2]

    pic = tmp_path / "plane.svg"
    code, out, _ = run(capsys, "walls", "svg", "--n", "2", "--out", str(pic))
    assert code == 0
    assert pic.read_text().startswith("<svg ")


# ---------------------------------------------------------------------------
# module pipeline through files


def test_module_pipeline(capsys, tmp_path):
    pts = write_points(tmp_path / "pts.json", [(1, 0, 0), (0, 1, 0)])
    rep_file = tmp_path / "rep.json"
    code, out, _ = run(
        capsys, "module", "from-points", "--points", pts,
        "--construction", "ideal-A1", "--out", str(rep_file),
    )
    assert code == 0 and f"wrote {rep_file}" in out

    code, out, _ = run(capsys, "module", "check", "--in", str(rep_file))
    assert code == 0
    assert "relations OK" in out and "dims=(2, 5, 2)" in out

    jh_file = tmp_path / "jh.json"
    code, out, _ = run(
        capsys, "module", "jh", "--in", str(rep_file),
        "--theta=-2,0,2", "--exact", "--out", str(jh_file),
    )
    assert code == 0
    blob = load_json(str(jh_file))
    assert sorted(tuple(d) for d in blob["factor_dims"]) == [(0, 1, 0), (1, 2, 1), (1, 2, 1)]


def test_module_dual_and_tilt(capsys, tmp_path):
    pts = write_points(tmp_path / "pt.json", [(1, 2, 3)])
    rep_file = tmp_path / "point.json"
    run(capsys, "module", "from-points", "--points", pts,
        "--construction", "point", "--out", str(rep_file))

    dual_file = tmp_path / "dual.json"
    code, _, _ = run(capsys, "module", "dual", "--in", str(rep_file), "--out", str(dual_file))
    assert code == 0
    assert load_json(str(dual_file))["dims"] == [1, 2, 1]

    mid_file = tmp_path / "tilted.json"
    code, _, _ = run(capsys, "module", "tilt", "--in", str(rep_file), "--out", str(mid_file))
    assert code == 0
    mid = load_json(str(mid_file))
    assert mid["algebra"] == "Bprime" and mid["dims"] == [1, 1, 1]

    back_file = tmp_path / "back.json"
    code, _, _ = run(capsys, "module", "tilt", "--in", str(mid_file), "--out", str(back_file))
    assert code == 0
    assert load_json(str(back_file))["dims"] == [1, 2, 1]

    code, out, _ = run(capsys, "module", "hom", "--a", str(rep_file), "--b", str(rep_file))
    assert (code, out) == (0, "1\n")

    code, out, _ = run(capsys, "module", "iso", "--a", str(rep_file), "--b", str(back_file), "--exact")
    assert (code, out) == (0, "isomorphic (exact)\n")


def test_module_check_reports_violations(capsys, tmp_path):
    rep = module_point([1, 0, 0])
    bad_delta = [[list(r) for r in rep.delta_m(j)] for j in range(3)]
    bad_delta[1][0][0] = 7
    broken = quiver.QuiverRep(rep.algebra, rep.field, rep.dims, rep.gamma, bad_delta)
    assert not quiver.check_relations(broken)[0]
    bad_file = write_rep(tmp_path / "bad.json", broken)
    code, _, err = run(capsys, "module", "check", "--in", bad_file)
    assert code == 3
    assert "relations violated" in err


def test_module_iso_exact_can_refuse(capsys, tmp_path):
    # Hom is one-dimensional but nowhere invertible, so over the rationals
    # the negative verdict stays probabilistic and --exact must bail out.
    zero_g = [((0,),)] * 3
    a = quiver.QuiverRep("B", QQ, (1, 1, 0), zero_g, [()] * 3)
    b = quiver.QuiverRep("B", QQ, (1, 1, 0), [((1,),), ((0,),), ((0,),)], [()] * 3)
    fa, fb = write_rep(tmp_path / "a.json", a), write_rep(tmp_path / "b.json", b)
    code, out, _ = run(capsys, "module", "iso", "--a", fa, "--b", fb)
    assert code == 0 and out.startswith("not isomorphic (probabilistic")
    code, _, err = run(capsys, "module", "iso", "--a", fa, "--b", fb, "--exact")
    assert code == 4
    assert err.startswith("incomplete:")


# ---------------------------------------------------------------------------
# hilbert report and selftest


def test_hilbert_report_command(capsys, tmp_path):
    src = tmp_path / "configs.json"
    src.write_text(json.dumps({"configs": [[["1", "0", "0"]], {"points": [["0", "1", "5"]]}]}))
    out_file = tmp_path / "report.json"
    svg_file = tmp_path / "plane.svg"
    code, out, _ = run(
        capsys, "hilbert", "report", "--n", "1", "--points", str(src),
        "--out", str(out_file), "--svg", str(svg_file),
    )
    assert code == 0
    assert f"wrote {out_file}" in out and f"wrote {svg_file}" in out
    report = load_json(str(out_file))
    assert len(report["configurations"]) == 2
    assert report["configurations"][0]["zeta"]["skipped"] is True
    assert svg_file.read_text().startswith("<svg ")

    # single-configuration shorthand on stdout
    single = tmp_path / "single.json"
    write_points(single, [(1, 1, 1)])
    code, out, _ = run(capsys, "hilbert", "report", "--n", "1", "--points", str(single))
    assert code == 0
    assert json.loads(out)["n"] == 1

    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps({"something": []}))
    code, _, err = run(capsys, "hilbert", "report", "--n", "1", "--points", str(bare))
    assert code == 2 and err.startswith("error:")


def test_selftest_quick(capsys):
    code, out, _ = run(capsys, "selftest", "--level", "quick")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[-1] == "6/6 criteria passed"
    assert all(line.startswith("PASS") for line in lines[:-1])


# ---------------------------------------------------------------------------
# failure modes


def test_bad_input_exits_2(capsys):
    code, _, err = run(capsys, "chern", "euler", "--a=1,0", "--b=1,0,0")
    assert code == 2 and err.startswith("error:")
    code, _, err = run(capsys, "walls", "chamber", "--n", "2", "--theta=1,1,1")
    assert code == 2 and "perpendicular" in err
    code, _, err = run(capsys, "charge", "sigma-b", "--b=2")
    assert code == 2 and "sigma_b" in err


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["chern", "frobnicate"])
    assert info.value.code == 2
    capsys.readouterr()
