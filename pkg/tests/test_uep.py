"""Tests for the unique-extension-property falsifier."""

from __future__ import annotations

import numpy as np
import pytest

from hyperlab import cpmaps, linalg, opsys, uep
from hyperlab.rng import make_rng, random_complex, random_hermitian, random_unitary
from hyperlab.suite import hand_certificate


def x_diag() -> np.ndarray:
    return np.diag([0.0, 1.0, 2.0]).astype(complex)


def gen(d, *mats) -> opsys.GeneratorSet:
    return opsys.GeneratorSet(d=d, generators=tuple(np.asarray(m, dtype=complex) for m in mats))


def test_hermvec_isometry():
    rng = make_rng(40)
    A = random_hermitian(rng, 5)
    v = uep.hermvec(A)
    assert v.shape == (25,)
    assert np.linalg.norm(v) == pytest.approx(np.linalg.norm(A))
    assert np.allclose(uep.unhermvec(v, 5), A, atol=1e-12)


def test_build_constraints_unitality_only():
    """With no pinned generators only unitality constrains the Choi."""
    P = uep.UepProblem(d=2, G=None)
    cs = uep.build_constraints(P)
    C = cs.to_choi_mat(cs.x_identity)
    assert np.allclose(linalg.partial_trace_first(C, 2), np.eye(2), atol=1e-10)


def test_build_constraints_identity_generator_adds_nothing():
    base = uep.build_constraints(uep.UepProblem(d=2, G=None))
    with_id = uep.build_constraints(uep.UepProblem(d=2, G=gen(2, np.eye(2))))
    assert with_id.rank == base.rank


def test_build_constraints_rank_comparison():
    X = x_diag()
    r1 = uep.build_constraints(uep.UepProblem(d=3, G=gen(3, X))).rank
    r2 = uep.build_constraints(uep.UepProblem(d=3, G=gen(3, X, np.diag([0.0, 1.0, 4.0])))).rank
    assert r1 == 18
    assert r2 == 27
    assert r2 > r1


def test_identity_choi_is_feasible():
    cs = uep.build_constraints(uep.UepProblem(d=3, G=gen(3, x_diag())))
    C = cs.to_choi_mat(cs.x_identity)
    assert np.allclose(C, cpmaps.identity_choi(3).mat, atol=1e-8)
    assert np.linalg.norm(cs.affine_residual(cs.x_identity)) <= 1e-8


def test_solve_x_only_finds_violation():
    X = x_diag()
    P = uep.UepProblem(d=3, G=gen(3, X), probes=[X @ X], seed=1, n_witnesses=2)
    rep = uep.solve(P)
    assert rep.status == "ViolationFound"
    assert rep.max_deviation >= 0.5
    assert rep.certificate is not None
    assert uep.validate_certificate(rep.certificate, P)


def test_solve_x_and_square_is_unique():
    X = x_diag()
    P = uep.UepProblem(d=3, G=gen(3, X, X @ X), probes=[X @ X @ X], seed=2, n_witnesses=2)
    rep = uep.solve(P)
    assert rep.status == "Unique-evidence"
    assert rep.max_deviation <= 1e-6


def test_solve_irreducible_polar_set_is_unique():
    rng = make_rng(41)
    T = random_complex(rng, 4, 4)
    G = gen(4, T, T.conj().T @ T, T @ T.conj().T)
    assert opsys.is_irreducible(G)
    rep = uep.solve(uep.UepProblem(d=4, G=G, probes=[T @ T], seed=3, n_witnesses=2))
    assert rep.status == "Unique-evidence"
    assert rep.max_deviation <= 1e-6


def test_probe_outside_algebra_is_labeled_freedom():
    """A probe outside C*(G) reports extension freedom, not a UEP violation."""
    X = x_diag()
    Y = np.array([[0.0, 1.0, 0.0], [1.0, 0.0, 0.0], [0.0, 0.0, 0.0]], dtype=complex)
    P = uep.UepProblem(d=3, G=gen(3, X, X @ X), probes=[Y], seed=4, n_witnesses=2)
    rep = uep.solve(P)
    assert rep.status == "Unique-evidence"
    probe = rep.deviations[0]
    assert not probe.in_algebra
    assert probe.to_json()["label"] == "extension freedom, not UEP violation"


def test_validate_certificate_accepts_hand_construction():
    X = x_diag()
    P = uep.UepProblem(d=3, G=gen(3, X), probes=[X @ X])
    choi = cpmaps.choi_from_kraus(hand_certificate())
    dev = linalg.op_norm(cpmaps.apply_choi(choi, X @ X) - X @ X)
    assert dev == pytest.approx(1.0, abs=1e-12)
    cert = uep.ViolationCertificate(choi=choi, probe=X @ X, deviation=dev, residuals={})
    assert uep.validate_certificate(cert, P)


def test_validate_certificate_rejects_identity_map():
    X = x_diag()
    P = uep.UepProblem(d=3, G=gen(3, X), probes=[X @ X])
    cert = uep.ViolationCertificate(choi=cpmaps.identity_choi(3), probe=X @ X,
                                    deviation=1.0, residuals={})
    assert not uep.validate_certificate(cert, P)  # claims a deviation it lacks


def test_validate_certificate_rejects_non_cp():
    X = x_diag()
    P = uep.UepProblem(d=3, G=gen(3, X), probes=[X @ X])
    choi = cpmaps.choi_from_kraus(hand_certificate())
    bad = cpmaps.ChoiMatrix(d=3, mat=choi.mat - 0.01 * np.eye(9))
    cert = uep.ViolationCertificate(choi=bad, probe=X @ X, deviation=1.0, residuals={})
    assert not uep.validate_certificate(cert, P)


def test_solve_is_deterministic():
    X = x_diag()
    P = uep.UepProblem(d=3, G=gen(3, X, X @ X), probes=[X @ X @ X], seed=5, n_witnesses=2)
    a = uep.solve(P).to_json()
    b = uep.solve(P).to_json()
    assert a == b


def test_self_adjoint_three_eigenvalues_violates():
    """Property from the theory: a single self-adjoint generator with at
    least three distinct eigenvalues never has the unique-extension
    property in its own C*-algebra."""
    rng = make_rng(42)
    for trial in range(3):
        Q = random_unitary(rng, 3)
        w = np.sort(rng.standard_normal(3)) * 2.0
        w[1] = w[0] + max(w[1] - w[0], 0.5)
        w[2] = w[1] + max(w[2] - w[1], 0.5)
        X = Q @ np.diag(w) @ Q.conj().T
        P = uep.UepProblem(d=3, G=gen(3, X), probes=[X @ X], seed=100 + trial,
                           n_witnesses=2, max_iter=4000)
        rep = uep.solve(P)
        assert rep.status == "ViolationFound"
        assert rep.max_deviation >= 0.1


def test_schwarz_pinning_check():
    X = x_diag()
    P = uep.UepProblem(d=3, G=gen(3, X, X @ X), probes=[])
    res = uep.schwarz_pinning_check(P, cpmaps.identity_choi(3))
    for dd in res["generator_defects"]:
        assert dd["left_norm"] <= 1e-10 and dd["right_norm"] <= 1e-10
    assert res["max_word_deviation"] <= 1e-10
