import json

import numpy as np
import pytest

from z2systole.cli import main
from z2systole.codes import read_check_matrix
from z2systole.complex import load_complex


def test_gen_stdout_round_trip(capsys):
    assert main(["gen", "grid-torus", "--k", "3"]) == 0
    out = capsys.readouterr().out
    data = json.loads(out)
    assert data["n"] == 2 and len(data["maximal_simplices"]) == 18
    assert out.endswith("}\n") and not out.endswith("\n\n")


@pytest.mark.parametrize(
    "argv,f",
    [
        (["cycle", "--m", "5"], (5, 5)),
        (["torus7"], (7, 21, 14)),
        (["rp2"], (6, 15, 10)),
        (["s1-x-sphere", "--p", "4", "--n", "2"], (12, 36, 24)),
        (["random", "--vertices", "8", "--top", "6"], None),
    ],
)
def test_gen_families(tmp_path, argv, f):
    out = tmp_path / "m.json"
    assert main(["gen", *argv, "-o", str(out)]) == 0
    M = load_complex(out)
    if f is not None:
        assert M.f_vector == f


def test_gen_connected_sum_and_subdivision(tmp_path):
    a = tmp_path / "a.json"
    main(["gen", "grid-torus", "--k", "3", "-o", str(a)])
    out = tmp_path / "cs.json"
    assert main(["gen", "connected-sum", "--a", str(a), "--b", str(a), "-o", str(out)]) == 0
    M = load_complex(out)
    assert M.vol == 2 * 18 - 2
    side = json.loads((tmp_path / "cs.json.alpha_star.json").read_text())
    assert side["alpha_star"]
    sd = tmp_path / "sd.json"
    assert main(["gen", "subdivision", "--input", str(a), "-o", str(sd)]) == 0
    assert load_complex(sd).vol == 6 * 18


def test_gen_missing_inputs():
    with pytest.raises(SystemExit):
        main(["gen", "connected-sum"])


def test_invariants(tmp_path):
    m = tmp_path / "t.json"
    main(["gen", "grid-torus", "--k", "4", "-o", str(m)])
    out = tmp_path / "inv.json"
    assert main(["invariants", str(m), "-o", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["betti"] == [1, 2, 1]
    assert [c["sys_alpha"]["weight"] for c in data["classes"]] == [4, 4]
    assert all(c["cut_alpha"]["weight"] == 4 and c["cut_alpha"]["certified"] for c in data["classes"])
    assert all(c["sys_dual"]["weight"] == 4 for c in data["classes"])


def test_invariants_dual_cycle(tmp_path, capsys):
    m = tmp_path / "t.json"
    main(["gen", "grid-torus", "--k", "4", "-o", str(m)])
    loop = json.dumps([[0, 1], [1, 2], [2, 3], [0, 3]])
    assert main(["invariants", str(m), "--dual-cycle", loop]) == 0
    data = json.loads(capsys.readouterr().out)
    (entry,) = data["classes"]
    assert entry["cut_alpha"]["weight"] == 4


def test_verify_sweep(tmp_path):
    out = tmp_path / "r.csv"
    assert main(["verify", "--sweep", "grid-torus", "--range", "3", "4", "--suite", "all", "-o", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# z2systole-report v1")
    assert len(lines) == 2 + 2 + 2 + 2
    again = tmp_path / "r2.csv"
    main(["verify", "--sweep", "grid-torus", "--range", "3", "4", "--suite", "all", "-o", str(again)])
    assert again.read_bytes() == out.read_bytes()


def test_verify_paper_order(tmp_path):
    m = tmp_path / "t.json"
    main(["gen", "torus7", "-o", str(m)])
    out = tmp_path / "r.csv"
    assert main(["verify", str(m), "--order", "paper", "--eps", "0.9", "-o", str(out)]) == 0


def test_css(tmp_path, capsys):
    m = tmp_path / "t.json"
    main(["gen", "grid-torus", "--k", "3", "-o", str(m)])
    prefix = tmp_path / "code"
    assert main(["css", str(m), "-o", str(prefix)]) == 0
    assert capsys.readouterr().out.startswith("[[27, 2, 3, 6]]")
    hx = read_check_matrix(f"{prefix}.hx.txt", 27)
    hz = read_check_matrix(f"{prefix}.hz.txt", 27)
    assert hx.shape == (18, 27) and hz.shape == (9, 27)
    assert not (hx.astype(np.int64) @ hz.T.astype(np.int64) % 2).any()
