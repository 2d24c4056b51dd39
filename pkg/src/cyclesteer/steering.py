"""Scenario-1 machinery: assemblages, the dichotomic steering functional
with coefficients F_{a|x} = (-1)^a b_x.sigma, its classical bound L by
exhaustive sign enumeration, the quantum value Q via per-setting trace
norms, and optimal-observable extraction.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DensityMatrix,
    ID2,
    PAULIS,
    bloch_to_obs,
    herm_eig,
    obs_to_bloch,
    tensor,
)
from .states import swap_state
from .tolerances import TOL

GOLDEN = (1 + np.sqrt(5)) / 2
MAX_ENUM_SETTINGS = 24


@dataclass(frozen=True)
class SteeringFunctional:
    """Dichotomic settings B_x = b_x . sigma with the sign coefficient
    rule F_{a|x} = (-1)^a B_x."""

    blochs: np.ndarray  # shape (m, 3)

    def __post_init__(self):
        b = np.atleast_2d(np.asarray(self.blochs, dtype=float))
        if b.shape[1] != 3:
            raise ValueError(f"expected (m, 3) Bloch array, got {b.shape}")
        object.__setattr__(self, "blochs", b)

    @property
    def m(self) -> int:
        return self.blochs.shape[0]

    def setting_operator(self, x: int) -> np.ndarray:
        return bloch_to_obs(self.blochs[x])


def icosahedron_settings() -> SteeringFunctional:
    """The six antipodal-pair directions of the regular icosahedron."""
    phi = GOLDEN
    n = np.sqrt(1 + phi**2)
    b = np.array(
        [
            [0, 1, phi],
            [0, 1, -phi],
            [1, phi, 0],
            [1, -phi, 0],
            [phi, 0, 1],
            [phi, 0, -1],
        ]
    ) / n
    return SteeringFunctional(b)


@dataclass(frozen=True)
class Assemblage:
    """Subnormalized conditional states sigma[x, a] (m settings, 2 outcomes)."""

    sigma: np.ndarray  # shape (m, 2, 2, 2) complex

    def __post_init__(self):
        s = np.asarray(self.sigma, dtype=complex)
        if s.ndim != 4 or s.shape[1:] != (2, 2, 2):
            raise ValueError(f"expected shape (m, 2, 2, 2), got {s.shape}")
        object.__setattr__(self, "sigma", s)
        rho_b = s.sum(axis=1)
        if np.abs(rho_b - rho_b[0]).max() > TOL.herm_accept:
            raise ValueError("sum_a sigma_{a|x} differs across settings")
        if abs(np.trace(rho_b[0]).real - 1.0) > TOL.herm_accept:
            raise ValueError("assemblage not normalized: sum_a tr(sigma_{a|x}) != 1")
        for x in range(s.shape[0]):
            for a in range(2):
                wmin = np.linalg.eigvalsh((s[x, a] + s[x, a].conj().T) / 2).min()
                if wmin < -TOL.psd:
                    raise ValueError(f"sigma[{x},{a}] has eigenvalue {wmin:.2e} < -{TOL.psd:.0e}")

    @property
    def m(self) -> int:
        return self.sigma.shape[0]

    def probabilities(self) -> np.ndarray:
        """p(a|x), shape (m, 2)."""
        return np.einsum("xaii->xa", self.sigma).real

    def bloch_parts(self) -> np.ndarray:
        """s_{a|x} with sigma = (p I + s.sigma)/2, shape (m, 2, 3)."""
        return np.einsum("xaij,pji->xap", self.sigma, PAULIS).real


def make_assemblage(rho_ab: DensityMatrix, directions) -> Assemblage:
    """Assemblage produced by projective measurements of A along ``directions``."""
    if rho_ab.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho_ab.dims}")
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    sig = np.empty((dirs.shape[0], 2, 2, 2), dtype=complex)
    for x, b in enumerate(dirs):
        for a in range(2):
            proj = (ID2 + (-1) ** a * bloch_to_obs(b)) / 2
            full = tensor(proj, ID2) @ rho_ab.mat
            sig[x, a] = full.reshape(2, 2, 2, 2).trace(axis1=0, axis2=2)
    return Assemblage(sig)


def _sign_strings(m: int, fix_first: bool = True):
    """Iterate blocks of +-1 sign matrices, first sign fixed to +1 by the
    a -> -a symmetry when ``fix_first``."""
    free = m - 1 if fix_first else m
    total = 1 << free
    chunk = 1 << 16
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total))
        bits = ((idx[:, None] >> np.arange(free)) & 1) * 2 - 1
        if fix_first:
            bits = np.hstack([np.ones((len(idx), 1), dtype=bits.dtype), bits])
        yield bits


def lhs_bound_L(functional: SteeringFunctional) -> tuple[float, np.ndarray]:
    """Exact classical bound L = max over sign strings of ||sum a_x b_x||,
    with the optimizing signs. Enumeration is exact; m is capped because
    L is a certified bound and must not be approximated."""
    m = functional.m
    if m > MAX_ENUM_SETTINGS:
        raise ValueError(f"m={m} exceeds enumeration cap {MAX_ENUM_SETTINGS}")
    best, best_signs = -1.0, None
    for signs in _sign_strings(m):
        norms = np.linalg.norm(signs @ functional.blochs, axis=1)
        i = int(np.argmax(norms))
        if norms[i] > best:
            best, best_signs = float(norms[i]), signs[i].copy()
    return best, best_signs


@dataclass(frozen=True)
class OptimalObservable:
    """A = identity_weight * I + bloch . sigma; degenerate eigendirections
    (|lambda| below tolerance) are dropped, which can leave a shortened
    Bloch vector or the zero vector."""

    bloch: np.ndarray
    identity_weight: float

    def operator(self) -> np.ndarray:
        return self.identity_weight * ID2 + bloch_to_obs(self.bloch)


def quantum_value_Q(
    rho_ab: DensityMatrix, functional: SteeringFunctional
) -> tuple[float, list[OptimalObservable]]:
    """Maximum quantum value Q = sum_x ||G_x||_1 with
    G_x = tr_B((I (x) B_x) rho_AB), plus the optimizing observables."""
    if rho_ab.dims != (2, 2):
        raise ValueError(f"expected a two-qubit state, got dims {rho_ab.dims}")
    q = 0.0
    observables = []
    for x in range(functional.m):
        bx = functional.setting_operator(x)
        gx_full = tensor(ID2, bx) @ rho_ab.mat
        gx = gx_full.reshape(2, 2, 2, 2).trace(axis1=1, axis2=3)
        eig = herm_eig(gx)
        q += float(np.abs(eig.eigenvalues).sum())
        ax = np.zeros((2, 2), dtype=complex)
        for lam, vec in zip(eig.eigenvalues, eig.eigenvectors.T):
            if abs(lam) > TOL.degenerate_eig:
                ax += np.sign(lam) * np.outer(vec, vec.conj())
        observables.append(
            OptimalObservable(bloch=obs_to_bloch(ax), identity_weight=float(np.trace(ax).real / 2))
        )
    return q, observables


def evaluate_functional(assemblage: Assemblage, functional: SteeringFunctional) -> float:
    """sum_x sum_a tr(F_{a|x} sigma_{a|x}) with F_{a|x} = (-1)^a b_x.sigma."""
    if assemblage.m != functional.m:
        raise ValueError(f"setting counts differ: {assemblage.m} vs {functional.m}")
    s = assemblage.bloch_parts()  # (m, 2, 3)
    signs = np.array([1.0, -1.0])
    return float(np.einsum("xap,a,xp->", s, signs, functional.blochs))


def evaluate_with_observables(
    rho_ab: DensityMatrix, functional: SteeringFunctional, observables: list[OptimalObservable]
) -> float:
    """sum_x tr((A_x (x) B_x) rho_AB) for explicit observables A_x."""
    total = 0.0
    for x, obs in enumerate(observables):
        op = tensor(obs.operator(), functional.setting_operator(x))
        total += float(np.trace(op @ rho_ab.mat).real)
    return total


@dataclass(frozen=True)
class Scenario1Report:
    L: float
    Q_ab: float
    Q_ba: float
    violates_ab: bool
    respects_ba: bool
    lhs_signs: np.ndarray
    observables_ab: list[OptimalObservable]
    setting_blochs: np.ndarray

    @property
    def one_way(self) -> bool:
        return self.violates_ab and self.respects_ba

    def to_dict(self) -> dict:
        return {
            "L": self.L,
            "Q_AB": self.Q_ab,
            "Q_BA": self.Q_ba,
            "violated": {"A_to_B": self.violates_ab, "B_to_A": not self.respects_ba},
            "a_vectors": [obs.bloch.tolist() for obs in self.observables_ab],
            "a_identity_weights": [obs.identity_weight for obs in self.observables_ab],
            "b_vectors": self.setting_blochs.tolist(),
            "lhs_signs": self.lhs_signs.tolist(),
        }


def one_way_gap_scenario1(
    rho_ab: DensityMatrix, functional: SteeringFunctional
) -> Scenario1Report:
    """Check Q(rho_AB) > L together with Q(rho_BA) <= L."""
    L, signs = lhs_bound_L(functional)
    q_ab, obs_ab = quantum_value_Q(rho_ab, functional)
    q_ba, _ = quantum_value_Q(swap_state(rho_ab), functional)
    return Scenario1Report(
        L=L,
        Q_ab=q_ab,
        Q_ba=q_ba,
        violates_ab=q_ab > L,
        respects_ba=q_ba <= L + 1e-9,
        lhs_signs=signs,
        observables_ab=obs_ab,
        setting_blochs=functional.blochs,
    )
