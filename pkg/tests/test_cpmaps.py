"""Tests for Choi/Kraus/Stinespring calculus and defect measurements."""

from __future__ import annotations

import numpy as np
import pytest

from hyperlab import cpmaps, linalg
from hyperlab.errors import InvalidInput, NotCompletelyPositive, NotUCP
from hyperlab.rng import make_rng, random_complex, random_ucp_kraus, random_unitary


def depolarizing_choi(d: int = 2) -> cpmaps.ChoiMatrix:
    """Phi(A) = trace(A)/d * I; Choi = (I (x) I)/d."""
    return cpmaps.ChoiMatrix(d=d, mat=np.eye(d * d, dtype=complex) / d)


def transpose_choi() -> cpmaps.ChoiMatrix:
    """Choi of the transpose map on M_2 is the swap operator."""
    C = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            E = linalg.matrix_unit(2, i, j)
            C += np.kron(E, E.T)
    return cpmaps.ChoiMatrix(d=2, mat=C)


def test_identity_choi_is_rank_one():
    C = cpmaps.identity_choi(2)
    w = np.linalg.eigvalsh(C.mat)
    assert np.trace(C.mat) == pytest.approx(2.0)
    assert np.sum(w > 1e-12) == 1
    rng = make_rng(20)
    A = random_complex(rng, 2, 2)
    assert np.allclose(cpmaps.apply_choi(C, A), A, atol=1e-12)


def test_depolarizing_kraus_rank_and_apply():
    C = depolarizing_choi()
    K = cpmaps.kraus_from_choi(C)
    assert len(K.operators) == 4
    X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    assert np.allclose(cpmaps.apply_choi(C, X), np.zeros((2, 2)), atol=1e-12)
    A = np.array([[1.0, 2.0], [3.0, 4.0]], dtype=complex)
    assert np.allclose(cpmaps.apply_choi(C, A), np.trace(A) / 2.0 * np.eye(2), atol=1e-12)


def test_choi_kraus_roundtrip():
    rng = make_rng(21)
    for _ in range(20):
        d = int(rng.integers(2, 5))
        K = cpmaps.KrausSet(d_in=d, d_out=d, operators=tuple(random_ucp_kraus(rng, d, 3)))
        C = cpmaps.choi_from_kraus(K)
        K2 = cpmaps.kraus_from_choi(C)
        C2 = cpmaps.choi_from_kraus(K2)
        assert np.linalg.norm(C.mat - C2.mat) <= 1e-8
        A = random_complex(rng, d, d)
        assert np.allclose(K.apply(A), cpmaps.apply_choi(C, A), atol=1e-10)


def test_kraus_from_choi_rejects_non_cp():
    with pytest.raises(NotCompletelyPositive):
        cpmaps.kraus_from_choi(transpose_choi())


def test_rectangular_compression_kraus():
    K = cpmaps.KrausSet(d_in=2, d_out=1, operators=(np.array([[1.0, 0.0]]),))
    A = np.array([[5.0, 1.0], [2.0, 7.0]], dtype=complex)
    assert K.apply(A)[0, 0] == pytest.approx(5.0)


def test_validate_ucp_examples():
    assert cpmaps.validate_ucp(cpmaps.identity_choi(3)) == {"cp_defect": pytest.approx(0.0),
                                                           "unital_defect": pytest.approx(0.0)}
    d = cpmaps.validate_ucp(transpose_choi())
    assert d["cp_defect"] == pytest.approx(1.0, abs=1e-12)
    # Kraus {I/2}: sum K K* = I/4, unital defect 3/4.
    half = cpmaps.KrausSet(d_in=2, d_out=2, operators=(0.5 * np.eye(2, dtype=complex),))
    dd = cpmaps.validate_ucp(cpmaps.choi_from_kraus(half))
    assert dd["unital_defect"] == pytest.approx(0.75, abs=1e-12)


def test_apply_choi_unital_and_linear():
    C = depolarizing_choi()
    assert np.allclose(cpmaps.apply_choi(C, np.eye(2)), np.eye(2), atol=1e-12)
    with pytest.raises(InvalidInput):
        cpmaps.apply_choi(C, np.eye(3))


def test_stinespring_identity():
    D = cpmaps.stinespring(cpmaps.identity_choi(2))
    assert D.r == 1
    assert D.minimal
    assert np.allclose(np.abs(D.V), np.eye(2), atol=1e-12)


def test_stinespring_depolarizing():
    D = cpmaps.stinespring(depolarizing_choi())
    assert D.r == 4
    assert D.V.shape == (8, 2)
    assert np.allclose(D.V.conj().T @ D.V, np.eye(2), atol=1e-10)
    rng = make_rng(22)
    A = random_complex(rng, 2, 2)
    assert np.allclose(D.compress(A), np.trace(A) / 2.0 * np.eye(2), atol=1e-10)


def test_stinespring_rejects_non_ucp():
    with pytest.raises(NotUCP):
        cpmaps.stinespring(transpose_choi())


def test_stinespring_roundtrip_battery():
    rng = make_rng(23)
    for _ in range(50):
        d = int(rng.integers(2, 5))
        K = cpmaps.KrausSet(d_in=d, d_out=d, operators=tuple(random_ucp_kraus(rng, d, 2)))
        D = cpmaps.stinespring(cpmaps.choi_from_kraus(K))
        for i in range(d):
            for j in range(d):
                E = linalg.matrix_unit(d, i, j)
                assert linalg.op_norm(D.compress(E) - K.apply(E)) <= 1e-8


def test_schwarz_defects_examples():
    rng = make_rng(24)
    a = random_complex(rng, 2, 2)
    dd = cpmaps.schwarz_defects(cpmaps.identity_choi(2), a)
    assert dd["left_norm"] <= 1e-12 and dd["right_norm"] <= 1e-12

    X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    dd = cpmaps.schwarz_defects(depolarizing_choi(), X)
    assert np.allclose(dd["left"], np.eye(2), atol=1e-12)
    assert dd["left_norm"] == pytest.approx(1.0)

    # Compression onto the first coordinate, a = E_10: Phi(a* a) = 1, Phi(a) = 0.
    K = cpmaps.KrausSet(d_in=2, d_out=1, operators=(np.array([[1.0, 0.0]]),))
    dd = cpmaps.schwarz_defects_kraus(K, linalg.matrix_unit(2, 1, 0))
    assert dd["left_norm"] == pytest.approx(1.0)


def test_schwarz_battery_psd():
    rng = make_rng(25)
    for _ in range(100):
        d = int(rng.integers(2, 5))
        K = cpmaps.KrausSet(d_in=d, d_out=d, operators=tuple(random_ucp_kraus(rng, d, 3)))
        a = random_complex(rng, d, d)
        dd = cpmaps.schwarz_defects_kraus(K, a)
        assert np.linalg.eigvalsh(dd["left"])[0] >= -1e-8
        assert np.linalg.eigvalsh(dd["right"])[0] >= -1e-8


def test_coinvariance_trivial_dilation():
    D = cpmaps.StinespringDilation(d=2, r=1, V=np.eye(2, dtype=complex), minimal=True)
    S = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    res = cpmaps.coinvariance_block(D, S, S)
    assert res["X_block_norm"] <= 1e-12
    assert res["compression_residual"] <= 1e-12


def test_coinvariance_homomorphic_dilation():
    rng = make_rng(26)
    U = random_unitary(rng, 3)
    u = np.zeros(2, dtype=complex)
    u[0] = 1.0
    V = np.kron(U, u.reshape(-1, 1))
    D = cpmaps.StinespringDilation(d=3, r=2, V=V, minimal=False)
    S = random_complex(rng, 3, 3)
    rho_S = V.conj().T @ np.kron(S, np.eye(2)) @ V
    res = cpmaps.coinvariance_block(D, np.kron(S, np.eye(2)), rho_S)
    assert res["X_block_norm"] <= 1e-8


def test_coinvariance_depolarizing_fails_premise():
    D = cpmaps.stinespring(depolarizing_choi())
    S = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    K = cpmaps.kraus_from_choi(depolarizing_choi())
    res = cpmaps.coinvariance_block(D, np.kron(S, np.eye(D.r)), K.apply(S))
    assert res["X_block_norm"] > 0.1  # premise Phi(SS*) = Phi(S)Phi(S)* fails here
