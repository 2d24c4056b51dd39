"""State constructors: singlet, Werner family, the translationally
invariant three-qubit family, builtin coefficient tables, and the
high-dimensional composite used for the POVM construction.

Conventions: party order is A (x) B (x) C, leftmost factor is A.  The
shift operator S cycles the parties one step, acting on amplitudes as
(S psi)_{ijk} = c_{kij}; iterating S three times is the identity.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .linalg import DensityMatrix, partial_trace, permute_subsystems
from .tolerances import TOL


@dataclass(frozen=True)
class PureState3Q:
    """Eight complex amplitudes c_{ijk}, (i,j,k) lexicographic."""

    c: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c, dtype=complex).reshape(8)
        object.__setattr__(self, "c", c)

    def norm(self) -> float:
        return float(np.linalg.norm(self.c))

    def normalized(self) -> "PureState3Q":
        n = self.norm()
        if n < 1e-14:
            raise ValueError("cannot normalize the zero state")
        return PureState3Q(self.c / n)

    def shifted(self) -> "PureState3Q":
        """Apply the party shift: (S psi)_{ijk} = c_{kij}."""
        return PureState3Q(self.c.reshape(2, 2, 2).transpose(1, 2, 0).reshape(8))

    def density(self) -> DensityMatrix:
        c = self.normalized().c
        return DensityMatrix(np.outer(c, c.conj()), (2, 2, 2))


def singlet() -> DensityMatrix:
    """(|01> - |10>)/sqrt(2) as a density matrix."""
    psi = np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2)
    return DensityMatrix(np.outer(psi, psi.conj()), (2, 2))


def werner(p: float) -> DensityMatrix:
    """p |psi-><psi-| + (1-p) I/4."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    return DensityMatrix(p * singlet().mat + (1 - p) * np.eye(4) / 4, (2, 2))


def shift_operator() -> np.ndarray:
    """8x8 party-shift permutation: (S psi)_{ijk} = c_{kij}."""
    s = np.zeros((8, 8), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                s[4 * i + 2 * j + k, 4 * k + 2 * i + j] = 1
    return s


def swap_operator() -> np.ndarray:
    """4x4 two-qubit flip V = sum |ij><ji|."""
    v = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            v[2 * i + j, 2 * j + i] = 1
    return v


def build_family(psi1: PureState3Q, p: float) -> DensityMatrix:
    """Translationally invariant mixture of the three shifted copies of
    psi1 with white noise weight (1 - p)."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} outside [0, 1]")
    if abs(psi1.norm() - 1.0) > TOL.state_norm:
        raise ValueError(f"psi1 norm {psi1.norm():.12f} not 1 within {TOL.state_norm:.1e}")
    acc = np.zeros((8, 8), dtype=complex)
    psi = psi1
    for _ in range(3):
        acc += np.outer(psi.c, psi.c.conj())
        psi = psi.shifted()
    return DensityMatrix(p * acc / 3 + (1 - p) * np.eye(8) / 8, (2, 2, 2))


_PARTY_INDEX = {"A": 0, "B": 1, "C": 2}


def reduce_pair(rho3: DensityMatrix, pair: str) -> DensityMatrix:
    """Two-qubit marginal for an ordered party pair, e.g. "AB" or "BA"."""
    if rho3.dims != (2, 2, 2):
        raise ValueError(f"expected dims (2,2,2), got {rho3.dims}")
    pair = pair.upper()
    if len(pair) != 2 or pair[0] == pair[1] or any(c not in _PARTY_INDEX for c in pair):
        raise ValueError(f"invalid party pair {pair!r}")
    i, j = _PARTY_INDEX[pair[0]], _PARTY_INDEX[pair[1]]
    reduced = partial_trace(rho3, [i, j])
    if i > j:
        v = swap_operator()
        reduced = DensityMatrix(v @ reduced.mat @ v.conj().T, (2, 2))
    return reduced


def swap_state(rho_ab: DensityMatrix) -> DensityMatrix:
    """rho_BA = V rho_AB V^dagger."""
    v = swap_operator()
    return DensityMatrix(v @ rho_ab.mat @ v.conj().T, (2, 2))


# Coefficient tables stored verbatim (unnormalized, as printed) and
# normalized on demand; order is (c000, c001, ..., c111).
_BUILTIN_COEFFS: dict[str, list[complex]] = {
    "sc1": [0.069455, 1, 1, -0.762707, 0.604546, -0.475110, -0.762707, 0],
    "b1": [1, -0.321193, -0.477021, 0.045221, -0.718592, 0.213715, -0.0482, 0],
    "b2": [1, -0.259910, -0.591007, 0.028007, -0.798924, 0.206125, -0.079214, -0.000311],
    "b3": [
        1,
        -0.252592 - 0.065698j,
        0.002913 - 0.000635j,
        0.025469 + 0.025479j,
        -0.120348 - 0.110323j,
        -0.103340 - 0.161335j,
        -0.044067 - 0.089806j,
        0.055929 - 0.044192j,
    ],
    "w": [0, 1, 1, 0, 1, 0, 0, 0],
    "ghz": [1, 0, 0, 0, 0, 0, 0, 1],
}

BUILTIN_IDS = tuple(_BUILTIN_COEFFS)


def builtin_state(state_id: str) -> PureState3Q:
    """Builtin pure three-qubit state by id (sc1, b1, b2, b3, w, ghz)."""
    try:
        coeffs = _BUILTIN_COEFFS[state_id]
    except KeyError:
        raise KeyError(f"unknown builtin state {state_id!r}; choose from {BUILTIN_IDS}") from None
    return PureState3Q(np.array(coeffs, dtype=complex))


def ring_compose(
    rho1: DensityMatrix, rho2: DensityMatrix, rho3: DensityMatrix
) -> DensityMatrix:
    """Composite rho_AB (x) rho_B'C (x) rho_C'A', regrouped so that each
    party holds a contiguous block: A~ = AA', B~ = BB', C~ = CC'.

    Output dims are the three party-block dimensions. The marginal over
    the C~ block factorizes as rho_AB (x) rho_A' (x) rho_B' in block
    order (A, A', B, B').
    """
    for r in (rho1, rho2, rho3):
        if len(r.dims) != 2:
            raise ValueError(f"each input must be bipartite, got dims {r.dims}")
    raw = DensityMatrix(
        np.kron(np.kron(rho1.mat, rho2.mat), rho3.mat),
        rho1.dims + rho2.dims + rho3.dims,
    )
    # raw subsystem order: A, B, B', C, C', A'  ->  A, A', B, B', C, C'
    grouped = permute_subsystems(raw, (0, 5, 1, 2, 3, 4))
    d = grouped.dims
    return DensityMatrix(grouped.mat, (d[0] * d[1], d[2] * d[3], d[4] * d[5]))


# --- state file (de)serialization -----------------------------------------

def state_to_json(obj: PureState3Q | DensityMatrix, p: float | None = None) -> dict:
    if isinstance(obj, PureState3Q):
        return {
            "type": "three_qubit_family",
            "c": [[z.real, z.imag] for z in obj.c],
            "p": 1.0 if p is None else float(p),
        }
    return {
        "type": "density_matrix",
        "dims": list(obj.dims),
        "re": obj.mat.real.tolist(),
        "im": obj.mat.imag.tolist(),
    }


def state_from_json(data: dict) -> tuple[PureState3Q, float] | DensityMatrix:
    """Parse the state file schema; density matrices are validated
    (non-PSD or non-unit-trace input is rejected by DensityMatrix)."""
    kind = data.get("type")
    if kind == "three_qubit_family":
        c = np.array([complex(re, im) for re, im in data["c"]])
        p = float(data.get("p", 1.0))
        return PureState3Q(c), p
    if kind == "density_matrix":
        mat = np.array(data["re"], dtype=float) + 1j * np.array(data["im"], dtype=float)
        return DensityMatrix(mat, tuple(data["dims"]))
    raise ValueError(f"unknown state file type {kind!r}")


def load_state(path) -> tuple[PureState3Q, float] | DensityMatrix:
    with open(path) as f:
        return state_from_json(json.load(f))
