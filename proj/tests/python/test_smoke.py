import json
import os
import subprocess
from fractions import Fraction
from pathlib import Path

import pytest

import opgb

DATA = Path(__file__).resolve().parent.parent / "data"


def test_hermite_family_is_exact():
    f = opgb.polys(DATA / "hermite.json", n=3)
    assert f["p1"][2] == [Fraction(-1, 2), 0, 1]
    assert f["norms"] == [1, Fraction(1, 2), Fraction(1, 2)]


def test_three_atom_gram_and_moments():
    three = {"type": "discrete", "atoms": [{"q": "-1", "w": "1"}, {"q": "0", "w": "1"}, {"q": "1", "w": "1"}]}
    assert opgb.moments(three, 4) == [3, 0, 2, 0, 2]
    assert opgb.gram(three, 2) == [[3, 0], [0, 2]]
    assert opgb.gram({"source": three, "n": 5}, 1) == [[3]]


def test_legendre_quadrature():
    q = opgb.quadrature(DATA / "legendre.json", k=2)
    assert q["nodes"] == pytest.approx([-(1 / 3) ** 0.5, (1 / 3) ** 0.5])
    assert q["weights"] == pytest.approx([0.5, 0.5])


def test_identities_and_transform():
    assert opgb.identities(DATA / "laguerre.json", n=4, seed=2)["passed"]
    assert opgb.identities(DATA / "hermite.json", n=4, mode="float")["passed"]
    assert opgb.transform(DATA / "three_atoms_job.json")["oracle_match"]


def test_errors_are_typed():
    with pytest.raises(opgb.Error) as e:
        opgb.polys(DATA / "degenerate_minor.json", n=3)
    assert e.value.kind == "NotQuasiDefinite"
    assert e.value.index == 1
    assert e.value.admissibility
    with pytest.raises(opgb.Error) as e:
        opgb.polys({"type": "weird"})
    assert not e.value.admissibility
    with pytest.raises(opgb.Error):
        opgb.run("polys", DATA / "hermite.json", mode="fast")
    with pytest.raises(opgb.Error):
        opgb.moments(DATA / "bivariate.json", 3)


def test_matches_cli():
    cli = os.environ.get("OPGB_CLI")
    if not cli:
        pytest.skip("OPGB_CLI not set")
    out = subprocess.run([cli, "polys", "--spec", str(DATA / "three_atoms.json"), "--n", "3"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out) == opgb.run("polys", DATA / "three_atoms.json", n=3)
