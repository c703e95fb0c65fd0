import json
import os

import pytest

from ecbias.cli import main
from tests.conftest import LEGENDRE_PATH


def _run(tmp_path, *argv):
    return main([*argv, "--outdir", str(tmp_path / "out")]) \
        if "--outdir" not in argv else main(list(argv))


def test_places_count(capsys, tmp_path):
    assert main(["places", "--q", "5", "--deg", "2", "--count"]) == 0
    assert capsys.readouterr().out.strip() == "10"


def test_lpoly_flagship(tmp_path, capsys):
    out = str(tmp_path / "out")
    rc = main(["lpoly", "--curve", LEGENDRE_PATH, "--trunc", "6",
               "--outdir", out])
    assert rc == 0
    with open(os.path.join(out, "lpoly", "sym1.json")) as fh:
        obj = json.load(fh)
    assert obj == {"n": 1, "q": 5, "coeffs": ["1"], "degree": 0,
                   "epsilon": 1, "rank": 0, "trunc": 6}


def test_local_place(tmp_path):
    out = str(tmp_path / "out")
    rc = main(["local", "--curve", LEGENDRE_PATH, "--place", "T",
               "--outdir", out])
    assert rc == 0
    with open(os.path.join(out, "local", "T.json")) as fh:
        obj = json.load(fh)
    assert obj["red"] == "split_mult" and obj["a"] == 1 and obj["f"] == 1
    rc = main(["local", "--curve", LEGENDRE_PATH, "--place", "infinity",
               "--outdir", out])
    assert rc == 0
    with open(os.path.join(out, "local", "infinity.json")) as fh:
        obj = json.load(fh)
    assert obj["red"] == "additive" and obj["f"] == 2


def test_bias_and_te(tmp_path):
    out = str(tmp_path / "out")
    assert main(["bias", "--curve", LEGENDRE_PATH, "--kind", "a_weighted",
                 "--dmax", "6", "--outdir", out]) == 0
    path = os.path.join(out, "bias", "a_weighted.csv")
    header = open(path).readline().strip().split(",")
    assert header[:3] == ["d", "x", "sum a_v/q_v"]
    assert main(["te", "--curve", LEGENDRE_PATH, "--dmax", "4",
                 "--outdir", out]) == 0
    with open(os.path.join(out, "te", "report.json")) as fh:
        assert 0.0 <= json.load(fh)["positive_density"] <= 1.0


def test_classic_commands(tmp_path):
    out = str(tmp_path / "out")
    assert main(["classic", "pis", "--x", "10", "--q", "4", "--a", "3",
                 "--s", "0.5", "--outdir", out]) == 0
    with open(os.path.join(out, "classic", "pis.json")) as fh:
        obj = json.load(fh)
    assert obj["empirical"] is True
    assert main(["classic", "tau", "--x", "1e3", "--outdir", out]) == 0
    assert main(["classic", "chi4", "--x", "1e4", "--outdir", out]) == 0
    with open(os.path.join(out, "classic", "chi4.json")) as fh:
        assert json.load(fh)["all_positive_from_5"] is True


def test_exit_codes(tmp_path):
    out = str(tmp_path / "out")
    # unsupported characteristic
    assert main(["local", "--curve", "q = 3; a = [0,0,0,T,1]",
                 "--place", "T", "--outdir", out]) == 3
    # isotrivial
    assert main(["lpoly", "--curve", "q = 5; a = [0,0,0,T,0]",
                 "--outdir", out]) == 3
    # parse failure
    assert main(["lpoly", "--curve", "q = 5; nonsense",
                 "--outdir", out]) == 2
    # missing curve file
    assert main(["lpoly", "--curve", str(tmp_path / "nope.curve"),
                 "--outdir", out]) == 2


def test_determinism_same_config(tmp_path):
    out1, out2 = str(tmp_path / "o1"), str(tmp_path / "o2")
    for out in (out1, out2):
        assert main(["bias", "--curve", LEGENDRE_PATH, "--kind", "mertens_II",
                     "--dmax", "6", "--seed", "7", "--outdir", out]) == 0
    b1 = open(os.path.join(out1, "bias", "mertens_II.csv"), "rb").read()
    b2 = open(os.path.join(out2, "bias", "mertens_II.csv"), "rb").read()
    assert b1 == b2
