import numpy as np
import pytest

from cyclesteer.lhs import (
    GeneralFunctional,
    LhsCertificate,
    RadiusParams,
    certify_unsteerable_shrunk,
    critical_radius_bounds,
    detect_steerable,
    lhs_lp_feasible,
    one_way_report,
    radial_mix,
    radial_mix_state,
    strategies,
)
from cyclesteer.linalg import DensityMatrix, tensor
from cyclesteer.polytope import antipodal_directions, sphere_polytope
from cyclesteer.states import singlet, werner
from cyclesteer.steering import make_assemblage

rng = np.random.default_rng(21)

ICO = sphere_polytope(0)
ICO_DIRS = antipodal_directions(ICO)
HIDDEN1 = sphere_polytope(1)


def random_two_qubit(r=rng):
    g = r.standard_normal((4, 4)) + 1j * r.standard_normal((4, 4))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m), (2, 2))


def test_strategies_enumeration():
    s = strategies(3)
    assert s.shape == (8, 3)
    assert len({tuple(row) for row in s}) == 8
    assert set(s.ravel()) == {0, 1}


def test_maximally_mixed_has_trivial_lhs_model():
    rho = DensityMatrix(np.eye(4) / 4, (2, 2))
    a = make_assemblage(rho, ICO_DIRS)
    feasible, cert = lhs_lp_feasible(a, ICO, mode="restrict")
    assert feasible
    assert isinstance(cert, LhsCertificate)
    assert np.abs(cert.reconstruct() - a.sigma).max() <= 1e-8


def test_werner_below_threshold_feasible():
    a = make_assemblage(werner(0.5), ICO_DIRS)
    feasible, cert = lhs_lp_feasible(a, HIDDEN1, mode="restrict")
    assert feasible
    assert (cert.weights >= 0).all()
    assert np.isclose(cert.weights.sum(), 1.0, atol=1e-8)
    assert np.abs(cert.reconstruct() - a.sigma).max() <= 1e-8


def test_werner_above_threshold_infeasible_with_farkas():
    a = make_assemblage(werner(0.8), ICO_DIRS)
    feasible, cert = lhs_lp_feasible(a, HIDDEN1, mode="relax")
    assert not feasible
    assert isinstance(cert, GeneralFunctional)
    # Farkas closure: the assemblage value beats the exact ball bound
    assert cert.value(a) > cert.exact_lhs_bound() + 1e-7


def test_restrict_feasibility_implies_relax_feasibility():
    """The relax hull contains the restrict hull, so a restrict LHS model
    is a fortiori a relax one."""
    rho = radial_mix_state(random_two_qubit(), 0.4)
    a = make_assemblage(rho, ICO_DIRS)
    if lhs_lp_feasible(a, HIDDEN1, mode="restrict")[0]:
        assert lhs_lp_feasible(a, HIDDEN1, mode="relax")[0]


def test_bad_mode_rejected():
    a = make_assemblage(werner(0.5), ICO_DIRS)
    with pytest.raises(ValueError):
        lhs_lp_feasible(a, HIDDEN1, mode="approx")


def test_column_generation_matches_dense():
    """Force the column-generation path with many settings and compare to
    the dense decision on a state solvable both ways."""
    import cyclesteer.lhs as lhs_mod

    dirs = antipodal_directions(sphere_polytope(1))  # m = 21 > enum cap
    for p, expected in ((0.45, True), (0.99, False)):
        a = make_assemblage(werner(p), dirs)
        feasible, _ = lhs_lp_feasible(a, HIDDEN1, mode="relax")
        assert feasible is expected


def test_detect_steerable_werner():
    assert detect_steerable(werner(0.99), ICO_DIRS, HIDDEN1)[0]
    steer, func = detect_steerable(werner(0.3), ICO_DIRS, HIDDEN1)
    assert not steer and func is None


def test_detection_monotone_in_noise():
    """If detection fires at p it fires at every larger p (sampled)."""
    ps = [0.5, 0.7, 0.9, 1.0]
    flags = [detect_steerable(werner(p), ICO_DIRS, HIDDEN1)[0] for p in ps]
    for lo, hi in zip(flags, flags[1:]):
        assert hi >= lo


def test_detection_tightens_with_hidden_refinement():
    """A finer hidden polytope can only move the detected set down."""
    h2 = sphere_polytope(2)
    for p in (0.6, 0.8):
        coarse = detect_steerable(werner(p), ICO_DIRS, sphere_polytope(0))[0]
        fine = detect_steerable(werner(p), ICO_DIRS, h2)[0]
        assert fine >= coarse


def test_certify_unsteerable_shrunk_separable():
    rho = DensityMatrix(np.diag([0.4, 0.1, 0.3, 0.2]).astype(complex), (2, 2))
    assert certify_unsteerable_shrunk(rho, ICO, HIDDEN1)


def test_certify_fails_on_singlet():
    assert not certify_unsteerable_shrunk(singlet(), ICO, HIDDEN1)


def test_radial_mix_algebra():
    """On the Werner family the mix acts as p -> t p."""
    for p, t in ((0.8, 0.5), (0.6, 1.2)):
        mat, indef = radial_mix(werner(p), t)
        assert np.abs(mat - werner(min(t * p, 1.0)).mat).max() <= 1e-12 or t * p > 1
        if t * p <= 1:
            assert np.abs(mat - werner(t * p).mat).max() <= 1e-12
            assert not indef


def test_radial_mix_preserves_bob_marginal():
    rho = random_two_qubit()
    from cyclesteer.linalg import partial_trace

    rb = partial_trace(rho, [1]).mat
    for t in (0.0, 0.3, 1.0):
        mixed = radial_mix_state(rho, t)
        assert np.abs(partial_trace(mixed, [1]).mat - rb).max() <= 1e-12
    assert np.abs(radial_mix(rho, 0.0)[0] - tensor(np.eye(2) / 2, rb)).max() <= 1e-12


def test_radial_mix_indefinite_flag():
    mat, indef = radial_mix(singlet(), 2.0)
    assert indef
    with pytest.raises(ValueError):
        radial_mix_state(singlet(), 2.0)
    with pytest.raises(ValueError):
        radial_mix(singlet(), -0.1)


def test_exact_lhs_bound_vs_sampling():
    """The enumerated ball bound dominates random LHS models."""
    func = GeneralFunctional(
        offsets=rng.standard_normal((4, 2)), blochs=rng.standard_normal((4, 2, 3))
    )
    bound = func.exact_lhs_bound()
    best = -np.inf
    for _ in range(2000):
        lam = rng.integers(0, 2, 4)
        u = rng.standard_normal(3)
        u *= rng.uniform() / np.linalg.norm(u)
        val = func.offsets[np.arange(4), lam].sum() + func.blochs[np.arange(4), lam].sum(0) @ u
        best = max(best, val)
    assert best <= bound + 1e-12
    # and is attained by the best strategy with the aligned hidden state
    xs = np.arange(4)
    attained = max(
        func.offsets[xs, [(i >> x) & 1 for x in xs]].sum()
        + np.linalg.norm(func.blochs[xs, [(i >> x) & 1 for x in xs]].sum(0))
        for i in range(16)
    )
    assert np.isclose(attained, bound)


def test_critical_radius_singlet_bracket():
    rep = critical_radius_bounds(singlet(), RadiusParams(bisection_tol=5e-3))
    assert rep.steerable_detected and rep.unsteerable_certified
    assert rep.r_in <= 0.5 <= rep.r_out
    assert rep.r_out - rep.r_in < 0.2
    d = rep.to_dict()
    assert d["meas_polytope_level"] == 0 and d["hidden_polytope_level"] == 2


def test_critical_radius_unsteerable_state_vacuous_upper():
    rho = DensityMatrix(np.diag([0.4, 0.1, 0.3, 0.2]).astype(complex), (2, 2))
    rep = critical_radius_bounds(rho, RadiusParams(hidden_level=1, bisection_tol=1e-2))
    assert not rep.steerable_detected
    assert rep.r_out == rep.t_cap
    assert rep.unsteerable_certified
    assert rep.r_in >= ICO.eta * 1.0 - 1e-9  # certified at least up to t = t_cap >= 1


def test_one_way_report_symmetric_state_refuted_or_undetermined():
    rep = one_way_report(werner(1.0), werner(1.0), RadiusParams(hidden_level=1, bisection_tol=1e-2))
    # a symmetric steerable state can never be certified cyclic
    assert rep.verdict in ("refuted", "undetermined-at-this-resolution")
    assert rep.delta == rep.r2 - rep.r1
    assert set(rep.to_dict()) >= {"rho_AB", "rho_BA", "R1_out_AB", "R2_in_BA", "verdict"}
