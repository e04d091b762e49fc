"""CSS codes from a three-term slice of the mod-2 chain complex."""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .complex import SimplicialComplex
from .homology import homology_context
from .minweight import Budget
from .systolic import MinWeightResult, cosystole, systole


@dataclass(frozen=True)
class CSSCode:
    """Qubits on k-simplices; X checks are (k+1)-simplices, Z checks (k-1)-simplices."""

    hx: np.ndarray
    hz: np.ndarray
    n_qubits: int
    n_logical: int
    d_x: MinWeightResult | None
    d_z: MinWeightResult | None
    orthogonal: bool

    def parameters(self) -> tuple[int, int, int | None, int | None]:
        dx = None if self.d_x is None else self.d_x.weight
        dz = None if self.d_z is None else self.d_z.weight
        return self.n_qubits, self.n_logical, dx, dz

    def summary(self) -> str:
        n, k, dx, dz = self.parameters()

        def flag(r):
            if r is None:
                return "none"
            return "certified" if r.certified else "upper bound"

        return (
            f"[[{n}, {k}, {dx}, {dz}]] d_X {flag(self.d_x)}, d_Z {flag(self.d_z)}, "
            f"orthogonality {'pass' if self.orthogonal else 'FAIL'}"
        )


def css_code(M: SimplicialComplex, k: int, budget: Budget | None = None) -> CSSCode:
    """``H_X`` is the transpose of the (k+1)-boundary, ``H_Z`` the k-boundary.

    ``d_X`` is the k-systole and ``d_Z`` the k-cosystole.
    """
    if not 1 <= k <= M.n - 1:
        raise ValueError(f"k must lie in 1..{M.n - 1}")
    hx = M.boundary_dense(k + 1).T.copy()
    hz = M.boundary_dense(k).copy()
    orth = not (hx.astype(np.int64) @ hz.T.astype(np.int64) % 2).any()
    h = homology_context(M, k).dim
    dx = systole(M, k, budget) if h else None
    dz = cosystole(M, k, budget) if h else None
    return CSSCode(hx, hz, M.count(k), h, dx, dz, orth)


def format_check_matrix(H: np.ndarray) -> str:
    """One line per check row listing its qubit indices."""
    return "".join(" ".join(str(int(q)) for q in np.flatnonzero(row)) + "\n" for row in H)


def parse_check_matrix(text: str, n_qubits: int) -> np.ndarray:
    rows = [line.split() for line in text.splitlines()]
    H = np.zeros((len(rows), n_qubits), dtype=np.uint8)
    for i, row in enumerate(rows):
        for q in row:
            H[i, int(q)] = 1
    return H


def write_check_matrix(H: np.ndarray, path) -> None:
    Path(path).write_text(format_check_matrix(H))


def read_check_matrix(path, n_qubits: int) -> np.ndarray:
    return parse_check_matrix(Path(path).read_text(), n_qubits)
