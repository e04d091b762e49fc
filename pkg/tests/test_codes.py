import numpy as np
import pytest

from z2systole.complex import build_complex
from z2systole.codes import css_code, format_check_matrix, parse_check_matrix, read_check_matrix, write_check_matrix


def test_rp2_code(rp2):
    code = css_code(rp2, 1)
    assert code.parameters() == (15, 1, 3, 5)
    assert code.orthogonal
    assert "orthogonality pass" in code.summary()


def test_grid_torus_code_shapes(t4):
    code = css_code(t4, 1)
    assert code.hx.shape == (32, 48) and code.hz.shape == (16, 48)
    assert code.n_logical == 2
    assert not ((code.hx.astype(int) @ code.hz.T.astype(int)) % 2).any()


def test_trivial_homology_has_no_distances():
    disk = build_complex([[0, 1, 2], [0, 2, 3]], 2)
    code = css_code(disk, 1)
    assert code.n_logical == 0 and code.d_x is None and code.d_z is None
    assert "none" in code.summary()


def test_degree_range(t4):
    with pytest.raises(ValueError):
        css_code(t4, 2)


def test_check_matrix_round_trip(tmp_path, rng):
    H = rng.integers(0, 2, size=(7, 11)).astype(np.uint8)
    H[3] = 0
    text = format_check_matrix(H)
    assert text.splitlines()[3] == ""
    assert np.array_equal(parse_check_matrix(text, 11), H)
    write_check_matrix(H, tmp_path / "h.txt")
    assert np.array_equal(read_check_matrix(tmp_path / "h.txt", 11), H)


def test_check_matrix_format():
    H = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    assert format_check_matrix(H) == "0 2\n1 2\n"
