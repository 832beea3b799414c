import json
from pathlib import Path
from typing import Any, Dict, List

import pytest

from dessinator import __version__
from dessinator.cli import CommandResult, run
from dessinator.defaults import MAX_COSETS_ENV, SCHEMA_VERSION
from dessinator.dessin import Dessin, dump_dessin


def payload(result: CommandResult) -> Dict[str, Any]:
    assert result.status == 0, result.stderr
    data: Dict[str, Any] = json.loads(result.stdout)
    assert data["schema_version"] == SCHEMA_VERSION
    return data


@pytest.fixture
def torus_file(tmp_path: Path, torus: Dessin) -> str:
    path = tmp_path / "torus.json"
    dump_dessin(torus, path)
    return str(path)


class TestCommands:
    def test_dessin_analyze(self, torus_file: str) -> None:
        data = payload(run(["dessin", "analyze", "--in", torus_file]))
        assert data["genus"] == 1
        assert data["type"] == [3, 3, 3]
        assert data["geometry"] == "euclidean"
        assert data["passport"] == {"black": [3], "white": [3], "faces": [3]}
        assert data["regular"] and data["reflexive"] and not data["chiral"]

    def test_dessin_enumerate(self, tmp_path: Path) -> None:
        out = tmp_path / "three.json"
        data = payload(run(["dessin", "enumerate", "--m", "3", "--out", str(out)]))
        assert data["count"] == 7
        assert json.loads(out.read_text())["dessins"] == data["dessins"]

    def test_dessin_cover(self, torus_file: str, tmp_path: Path) -> None:
        out = tmp_path / "cover.json"
        data = payload(run(["dessin", "cover", "--in", torus_file, "--mod", "2", "--out", str(out)]))
        assert data["edges"] == 12
        assert data["genus"] == 1
        assert json.loads(out.read_text())["edges"] == 12

    def test_triangle_check(self) -> None:
        data = payload(run(["triangle", "check", "--type", "2,3,5"]))
        assert data["order"] == 60
        assert data["geometry"] == "spherical"
        assert data["curvature"] == "1/30"

    def test_triangle_census(self) -> None:
        data = payload(run(["triangle", "check", "--type", "2,3,7", "--index", "7"]))
        assert data["order"] is None
        assert data["census"]["count"] == len(data["census"]["dessins"]) > 0

    def test_triangle_roundtrip(self, torus_file: str) -> None:
        data = payload(run(["triangle", "roundtrip", "--in", torus_file]))
        assert data["isomorphic"]
        assert data["aut_plus"] == data["normalizer_index"] == 3

    def test_modular_kn(self) -> None:
        data = payload(run(["modular", "kn", "--n", "1"]))
        assert data["generators"] == ["A^4", "A^2*E", "A*E*A^-3"]
        assert (data["index"], data["genus"], data["cusps"], data["free_rank"]) == (12, 1, 2, 3)
        assert "a4_normalizes" not in data

    def test_modular_normalization(self) -> None:
        assert payload(run(["modular", "kn", "--n", "1", "--normalization"]))["a4_normalizes"] is True

    def test_modular_eval(self) -> None:
        data = payload(run(["modular", "eval", "--word", "A^2*E", "--z", "1"]))
        assert data["image"] == "3"

    def test_ends(self) -> None:
        data = payload(run(["ends", "--group", "Z2*Z3", "--rmax", "6"]))
        assert data["classification"] == "infinitely_many"
        assert len(data["profiles"]) == 5

    def test_superelliptic_genus(self) -> None:
        data = payload(run(["superelliptic", "genus", "--n", "3", "--d", "2"]))
        assert data["genus"] == data["riemann_hurwitz"] == 4
        assert data["connected"]

    def test_superelliptic_eval(self) -> None:
        data = payload(run(["superelliptic", "eval", "--fixture", "sine", "--N", "1000", "--z", "0.5"]))
        assert data["relative_error"] < 1e-2

    def test_superelliptic_eval_without_reference(self) -> None:
        data = payload(run(["superelliptic", "eval", "--fixture", "sine", "--N", "10", "--z", "300j"]))
        assert data["reference"] is None
        assert data["relative_error"] is None
        assert data["value"][1] > 0

    def test_superelliptic_moduli(self, tmp_path: Path) -> None:
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        a.write_text("[0, 1, 2]")
        b.write_text("[5, 7, [9, 0]]")
        data = payload(run(["superelliptic", "moduli", "--a", str(a), "--b", str(b)]))
        assert data["equivalent"]
        assert data["a"] == [2.0, 0.0]

    def test_fpgroup(self) -> None:
        presentation = "< x y | x^2 y^3 (x*y)^5 >"
        assert payload(run(["fpgroup", "enumerate", "--presentation", presentation]))["index"] == 60
        data = payload(run(["fpgroup", "abelianize", "--presentation", "< a b | a^2 b^3 >"]))
        assert data["structure"] == "Z6"

    def test_fpgroup_subgroup(self) -> None:
        args = ["fpgroup", "abelianize", "--presentation", "< x y | >", "--subgroup", "x", "--subgroup", "y^2"]
        args += ["--subgroup", "y*x*y^-1"]
        data = payload(run(args))
        assert data["free_rank"] == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["dessin", "enumerate", "--m", "3"],
        ["triangle", "check", "--type", "2,3,4"],
        ["modular", "kn", "--n", "1"],
        ["ends", "--group", "F2", "--rmax", "4"],
        ["superelliptic", "genus", "--n", "2", "--d", "3"],
    ],
)
def test_output_is_deterministic(argv: List[str]) -> None:
    assert run(argv).stdout == run(argv).stdout


def test_seed_and_threads_do_not_change_census() -> None:
    plain = run(["dessin", "enumerate", "--m", "4"])
    assert run(["--seed", "3", "--threads", "2", "dessin", "enumerate", "--m", "4"]).stdout == plain.stdout


class TestFailures:
    def test_domain_error(self) -> None:
        result = run(["triangle", "check", "--type", "2,3"])
        assert result.status == 1
        assert result.stderr.startswith("error: ")
        assert result.stdout == ""

    def test_missing_file(self, tmp_path: Path) -> None:
        result = run(["dessin", "analyze", "--in", str(tmp_path / "nope.json")])
        assert result.status == 1
        assert "could not read" in result.stderr

    def test_coset_limit(self) -> None:
        result = run(["fpgroup", "enumerate", "--presentation", "< x y | x^2 y^3 (x*y)^5 >", "--max-cosets", "10"])
        assert result.status == 1
        assert "max_cosets (10)" in result.stderr

    @pytest.mark.parametrize("value", ["0", "-3", "ten"])
    def test_max_cosets_must_be_positive(self, value: str) -> None:
        result = run(["fpgroup", "enumerate", "--presentation", "< x | x^2 >", "--max-cosets", value])
        assert result.status == 2
        assert "--max-cosets" in result.stderr

    def test_environment_override(self, monkeypatch: pytest.MonkeyPatch) -> None:
        monkeypatch.setenv(MAX_COSETS_ENV, "lots")
        result = run(["modular", "kn", "--n", "1"])
        assert result.status == 1
        assert MAX_COSETS_ENV in result.stderr

    @pytest.mark.parametrize(
        "argv",
        [[], ["dessin"], ["modular", "kn"], ["ends", "--group", "Z", "--rmax", "six"], ["bogus"]],
    )
    def test_usage(self, argv: List[str]) -> None:
        result = run(argv)
        assert result.status == 2
        assert "usage:" in result.stderr

    def test_threads(self) -> None:
        result = run(["--threads", "0", "ends", "--group", "Z"])
        assert result.status == 2
        assert "--threads" in result.stderr

    def test_version(self) -> None:
        result = run(["--version"])
        assert result.status == 0
        assert __version__ in result.stdout
