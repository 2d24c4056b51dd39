"""Derivative-free heuristic searches for one-way steerable family states.

Two campaigns: scenario 1 maximizes the steering-inequality gap with a
penalty on the swapped direction; scenario 2 maximizes the critical-radius
gap, with a cheap low-resolution prefilter stage feeding a full-resolution
stage. Both use a hand-rolled Nelder-Mead simplex (deterministic for fixed
start and parameters) under multi-restart with per-restart seeding.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .lhs import RadiusParams, critical_radius_bounds
from .states import PureState3Q, build_family, reduce_pair, swap_state
from .steering import icosahedron_settings, lhs_bound_L


@dataclass(frozen=True)
class NMParams:
    reflection: float = 1.0
    expansion: float = 2.0
    contraction: float = 0.5
    shrink: float = 0.5
    spread_tol: float = 1e-8
    max_iter: int = 5000
    initial_step: float = 0.25

    def __post_init__(self):
        if not (self.expansion > 1 > self.contraction > 0):
            raise ValueError("need expansion > 1 > contraction > 0")
        if not 0 < self.shrink < 1:
            raise ValueError("shrink must lie in (0, 1)")


def nelder_mead(objective, x0, params: NMParams = NMParams()):
    """Maximize ``objective`` from ``x0``; returns (x_best, f_best, iters).

    f_best is the best value over every vertex ever evaluated, so it is
    monotone in the iteration count and never below objective(x0).
    """
    x0 = np.asarray(x0, dtype=float)
    n = len(x0)
    simplex = [x0.copy()] + [x0 + params.initial_step * np.eye(n)[i] for i in range(n)]
    fvals = np.array([-objective(x) for x in simplex])  # minimize -f internally
    simplex = np.array(simplex)
    best_x, best_f = simplex[fvals.argmin()].copy(), fvals.min()

    def record(x, f):
        nonlocal best_x, best_f
        if f < best_f:
            best_f, best_x = f, x.copy()

    iters = 0
    for iters in range(1, params.max_iter + 1):
        order = np.argsort(fvals, kind="stable")
        simplex, fvals = simplex[order], fvals[order]
        if np.abs(simplex[1:] - simplex[0]).max() <= params.spread_tol:
            break
        centroid = simplex[:-1].mean(axis=0)
        xr = centroid + params.reflection * (centroid - simplex[-1])
        fr = -objective(xr)
        record(xr, fr)
        if fr < fvals[0]:
            xe = centroid + params.expansion * (xr - centroid)
            fe = -objective(xe)
            record(xe, fe)
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
        elif fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        else:
            if fr < fvals[-1]:
                xc = centroid + params.contraction * (xr - centroid)
            else:
                xc = centroid + params.contraction * (simplex[-1] - centroid)
            fc = -objective(xc)
            record(xc, fc)
            if fc < min(fr, fvals[-1]):
                simplex[-1], fvals[-1] = xc, fc
            else:
                for i in range(1, n + 1):
                    simplex[i] = simplex[0] + params.shrink * (simplex[i] - simplex[0])
                    fvals[i] = -objective(simplex[i])
                    record(simplex[i], fvals[i])
    return best_x, -best_f, iters


# --- coefficient parameterizations ----------------------------------------

PARAM_DIMS = {"real-7": 7, "real-8": 8, "complex-16": 16}


def coeffs_to_state(vec) -> PureState3Q:
    """Raw optimization vector -> normalized pure three-qubit state.

    real-7 fixes c_111 = 0; real-8 frees all real coefficients;
    complex-16 interleaves (re, im) pairs. The redundant global scale is
    removed by normalization inside this call.
    """
    vec = np.asarray(vec, dtype=float)
    if len(vec) == 7:
        c = np.append(vec, 0.0).astype(complex)
    elif len(vec) == 8:
        c = vec.astype(complex)
    elif len(vec) == 16:
        c = vec[0::2] + 1j * vec[1::2]
    else:
        raise ValueError(f"unsupported parameter vector length {len(vec)}")
    if np.linalg.norm(c) < 1e-14:
        raise ValueError("all-zero coefficient vector")
    return PureState3Q(c).normalized()


def _reduced_pair(vec) -> tuple:
    psi = coeffs_to_state(vec)
    rho_ab = reduce_pair(build_family(psi, 1.0), "AB")
    return rho_ab, swap_state(rho_ab)


# --- objectives -----------------------------------------------------------

_ICO = icosahedron_settings()
_L_ICO = lhs_bound_L(_ICO)[0]


def _pauli_data_ab(c: np.ndarray):
    """Local Bloch vectors and correlation matrix of rho_AB = tr_C of the
    p = 1 family state built from amplitudes ``c`` (normalized)."""
    t = c.reshape(2, 2, 2)
    rho = np.zeros((2, 2, 2, 2), dtype=complex)  # indices (iA, jB, iA', jB')
    for _ in range(3):
        rho += np.einsum("ijk,lmk->ijlm", t, t.conj())
        t = t.transpose(1, 2, 0)  # right shift
    rho /= 3
    from .linalg import PAULIS

    a = np.einsum("pli,ijlj->p", PAULIS, rho).real
    b = np.einsum("pmj,ijim->p", PAULIS, rho).real
    corr = np.einsum("pli,qmj,ijlm->pq", PAULIS, PAULIS, rho).real
    return a, b, corr


def objective_scenario1(coeffs, penalty: float = 2.0) -> float:
    """Q(rho_AB) - penalty * max(0, Q(rho_BA) - L) at p = 1 with the
    icosahedral settings: maximize the violation in one direction while
    penalizing any violation of the swapped direction's classical bound.

    Uses the closed form ||G_x||_1 = max(|b . b_x|, ||T b_x||) in the
    Pauli decomposition of rho_AB (tested against the generic trace-norm
    path) to keep a multi-restart search desk-scale.
    """
    psi = coeffs_to_state(coeffs)
    a, b, corr = _pauli_data_ab(psi.c)
    bx = _ICO.blochs
    q_ab = np.maximum(np.abs(bx @ b), np.linalg.norm(bx @ corr.T, axis=1)).sum()
    q_ba = np.maximum(np.abs(bx @ a), np.linalg.norm(bx @ corr, axis=1)).sum()
    return float(q_ab - penalty * max(0.0, q_ba - _L_ICO))


def _radius_midpoint(rho, params: RadiusParams) -> float:
    rep = critical_radius_bounds(rho, params)
    return (rep.r_in + rep.r_out) / 2


_PREFILTER_PARAMS = RadiusParams(meas_level=0, hidden_level=0, bisection_tol=1e-2)


def objective_scenario2_prefilter(
    coeffs, delta: float = 1.2, penalty: float = 1.0,
    radius_params: RadiusParams = _PREFILTER_PARAMS,
) -> float:
    """Cheap stage: maximize rt(BA) - rt(AB) - penalty*max(0, rt(BA)-delta)
    where rt is the coarse bracket midpoint at low polytope resolution.

    (This proxies the analytic critical-radius upper bound the original
    procedure used for preprocessing; the functional shape is identical.)
    """
    rho_ab, rho_ba = _reduced_pair(coeffs)
    rt_ab = _radius_midpoint(rho_ab, radius_params)
    rt_ba = _radius_midpoint(rho_ba, radius_params)
    return rt_ba - rt_ab - penalty * max(0.0, rt_ba - delta)


def _heaviside(x: float) -> float:
    # H(0) := 0 so exactly-critical points are not penalized
    return 1.0 if x > 0 else 0.0


def objective_scenario2_full(
    coeffs, c1: float = 1.0, c2: float = 1.0, c3: float = 0.5,
    radius_params: RadiusParams = RadiusParams(),
) -> float:
    """Full stage: with R1 = r_out(rho_AB) and R2 = r_in(rho_BA), maximize

        R2 - R1 - c1*max(0, R1-1) - c2*max(0, 1-R2)
              - c3*(H(R1-1) + H(1-R2)).
    """
    rho_ab, rho_ba = _reduced_pair(coeffs)
    r1 = critical_radius_bounds(rho_ab, radius_params).r_out
    r2 = critical_radius_bounds(rho_ba, radius_params).r_in
    return (
        r2 - r1
        - c1 * max(0.0, r1 - 1.0)
        - c2 * max(0.0, 1.0 - r2)
        - c3 * (_heaviside(r1 - 1.0) + _heaviside(1.0 - r2))
    )


@dataclass(frozen=True)
class ObjectiveSpec:
    kind: str = "scenario1"  # scenario1 | scenario2_prefilter | scenario2_full
    parameterization: str = "real-7"
    scenario1_penalty: float = 2.0
    prefilter_delta: float = 1.2
    prefilter_penalty: float = 1.0
    c1: float = 1.0
    c2: float = 1.0
    c3: float = 0.5
    meas_level: int = 0
    hidden_level: int = 2
    bisection_tol: float = 1e-3
    nm: NMParams = field(default_factory=NMParams)

    def __post_init__(self):
        if self.kind not in ("scenario1", "scenario2_prefilter", "scenario2_full"):
            raise ValueError(f"unknown objective kind {self.kind!r}")
        if self.parameterization not in PARAM_DIMS:
            raise ValueError(f"unknown parameterization {self.parameterization!r}")
        for name in ("scenario1_penalty", "prefilter_penalty", "c1", "c2", "c3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")

    @property
    def dim(self) -> int:
        return PARAM_DIMS[self.parameterization]

    def objective(self):
        if self.kind == "scenario1":
            return lambda x: objective_scenario1(x, penalty=self.scenario1_penalty)
        radius_params = RadiusParams(
            meas_level=self.meas_level,
            hidden_level=self.hidden_level,
            bisection_tol=self.bisection_tol,
        )
        if self.kind == "scenario2_prefilter":
            return lambda x: objective_scenario2_prefilter(
                x, delta=self.prefilter_delta, penalty=self.prefilter_penalty,
                radius_params=radius_params,
            )
        return lambda x: objective_scenario2_full(
            x, c1=self.c1, c2=self.c2, c3=self.c3, radius_params=radius_params
        )


@dataclass(frozen=True)
class RestartRecord:
    restart: int
    seed: list
    iters: int
    q: float
    coeffs: list

    def to_json_line(self) -> str:
        return json.dumps(
            {"restart": self.restart, "seed": self.seed, "iters": self.iters,
             "q": self.q, "coeffs": self.coeffs},
            sort_keys=True,
        )


@dataclass
class SearchResult:
    records: list
    best_q: float
    best_coeffs: np.ndarray

    @property
    def best_state(self) -> PureState3Q:
        return coeffs_to_state(self.best_coeffs)


def _load_resume(resume_path) -> dict[int, RestartRecord]:
    done = {}
    try:
        with open(resume_path) as f:
            for line in f:
                line = line.strip()
                if not line:
                    continue
                d = json.loads(line)
                done[d["restart"]] = RestartRecord(
                    restart=d["restart"], seed=d["seed"], iters=d["iters"],
                    q=d["q"], coeffs=d["coeffs"],
                )
    except FileNotFoundError:
        pass
    return done


def multi_restart(
    spec: ObjectiveSpec, restarts: int, seed: int,
    log_file=None, resume_path=None,
) -> SearchResult:
    """Run Nelder-Mead from ``restarts`` i.i.d. standard-normal starts.

    The generator is keyed on (seed, restart index), so the result is
    independent of execution order and fully reproducible. With
    ``resume_path``, restarts already present in the log are replayed
    from it instead of recomputed.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    objective = spec.objective()
    done = _load_resume(resume_path) if resume_path else {}
    records = []
    for i in range(restarts):
        if i in done:
            records.append(done[i])
            continue
        rng = np.random.default_rng([seed, i])
        x0 = rng.standard_normal(spec.dim)
        x_best, f_best, iters = nelder_mead(objective, x0, spec.nm)
        rec = RestartRecord(
            restart=i, seed=[seed, i], iters=iters, q=float(f_best),
            coeffs=[float(v) for v in x_best],
        )
        records.append(rec)
        if log_file is not None:
            log_file.write(rec.to_json_line() + "\n")
            log_file.flush()
    best = max(records, key=lambda r: r.q)
    return SearchResult(records=records, best_q=best.q, best_coeffs=np.array(best.coeffs))


def two_stage_search(
    prefilter_spec: ObjectiveSpec, full_spec: ObjectiveSpec,
    restarts: int, seed: int, top_k: int = 3, log_file=None,
) -> SearchResult:
    """Scenario-2 pipeline: cheap prefilter restarts, then the full
    radius-gap objective started from the best prefilter candidates."""
    stage1 = multi_restart(prefilter_spec, restarts, seed, log_file=log_file)
    candidates = sorted(stage1.records, key=lambda r: r.q, reverse=True)[:top_k]
    objective = full_spec.objective()
    records = []
    for rank, cand in enumerate(candidates):
        x_best, f_best, iters = nelder_mead(objective, np.array(cand.coeffs), full_spec.nm)
        rec = RestartRecord(
            restart=rank, seed=cand.seed, iters=iters, q=float(f_best),
            coeffs=[float(v) for v in x_best],
        )
        records.append(rec)
        if log_file is not None:
            log_file.write(rec.to_json_line() + "\n")
            log_file.flush()
    best = max(records, key=lambda r: r.q)
    return SearchResult(records=records, best_q=best.q, best_coeffs=np.array(best.coeffs))
