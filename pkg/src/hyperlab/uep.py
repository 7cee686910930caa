"""Search for UCP maps violating the unique extension property.

The question "is the identity representation the only UCP map pinned to
agree with it on a generator set G?" is decided at desk scale by searching
the spectrahedron

    { Choi matrices C : C PSD, Phi_C unital, Phi_C(g) = g for g in G u G* }

for maps that move some probe a from the generated algebra.  Searching
Choi matrices on all of M_d is sound here: a UCP map on C*(G) extends to
M_d by Arveson's extension theorem, so restricting deviation measurement
to probes inside C*(G) loses nothing, while probes outside the algebra
only witness extension freedom and are labeled as such.

The maximum of the convex function ||Phi(a) - a|| over the feasible set is
lower-bounded by maximizing linear witness functionals <W, Phi(a)>:
a handful of random Hermitian directions W plus the adaptive choice
W = Phi(a) - a from the previous round (a conditional-gradient-style
refinement).  Each linear maximization runs projected gradient ascent with
facial-rounding polish onto (PSD intersect affine); deviations are only
ever reported at certified feasible points, so "Unique-evidence" cannot be
an artifact of infeasibility drift.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import cpmaps, linalg, opsys
from .errors import Infeasible, InvalidInput
from .rng import make_rng, random_hermitian
from .serialize import matrix_to_literal

SQRT2 = np.sqrt(2.0)

# Feasibility targets for polished points.
FEAS_TOL = 1e-9
DYKSTRA_TOL = 1e-12

# A probe counts as inside the generated algebra when its projection
# residual is below this (relative) threshold.
MEMBERSHIP_RTOL = 1e-8


# ----------------------------------------------------------------------------
# Real coordinates on the space of Hermitian matrices
# ----------------------------------------------------------------------------

def hermvec(X: np.ndarray) -> np.ndarray:
    """Isometric real coordinates of Hermitian matrices (batched).

    Layout: diagonal (real), then sqrt(2) * upper-triangle real parts, then
    sqrt(2) * upper-triangle imaginary parts; the Frobenius inner product
    becomes the Euclidean dot product.
    """
    n = X.shape[-1]
    iu = np.triu_indices(n, 1)
    ar = np.arange(n)
    diag = np.real(X[..., ar, ar])
    re = SQRT2 * np.real(X[..., iu[0], iu[1]])
    im = SQRT2 * np.imag(X[..., iu[0], iu[1]])
    return np.concatenate([diag, re, im], axis=-1)


def unhermvec(x: np.ndarray, n: int) -> np.ndarray:
    iu = np.triu_indices(n, 1)
    ar = np.arange(n)
    k = len(iu[0])
    diag = x[..., :n]
    off = (x[..., n:n + k] + 1j * x[..., n + k:n + 2 * k]) / SQRT2
    M = np.zeros(x.shape[:-1] + (n, n), dtype=complex)
    M[..., ar, ar] = diag
    M[..., iu[0], iu[1]] = off
    M[..., iu[1], iu[0]] = off.conj()
    return M


# ----------------------------------------------------------------------------
# Problem statement and results
# ----------------------------------------------------------------------------

@dataclass
class UepProblem:
    """One unique-extension-property test for the identity representation."""

    d: int
    G: opsys.GeneratorSet | None
    probes: list | None = None
    tol: float = 1e-7
    max_iter: int = 20000
    seed: int = 0
    n_witnesses: int = 8
    pin_adjoints: bool = True

    def pinned_elements(self) -> list:
        if self.G is None:
            return []
        if self.pin_adjoints:
            return self.G.with_adjoints()
        return list(self.G.generators)


@dataclass
class ViolationCertificate:
    choi: cpmaps.ChoiMatrix
    probe: np.ndarray
    deviation: float  # ||Phi(a) - a|| in operator norm
    residuals: dict

    def to_json(self) -> dict:
        return {
            "choi": {
                "d": self.choi.d,
                "convention": "input-first",
                "matrix": matrix_to_literal(self.choi.mat),
            },
            "probe": matrix_to_literal(self.probe),
            "deviation": self.deviation,
            "residuals": self.residuals,
        }


@dataclass
class ProbeDeviation:
    index: int
    deviation: float
    in_algebra: bool
    projection_residual: float

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "deviation": self.deviation,
            "in_algebra": self.in_algebra,
            "projection_residual": self.projection_residual,
            "label": "uep-probe" if self.in_algebra else "extension freedom, not UEP violation",
        }


@dataclass
class UepReport:
    status: str  # "Unique-evidence" | "ViolationFound" | "NonConverged"
    deviations: list
    iterations: int
    residuals: dict
    constraint_rank: int
    rank_margin: int
    certificate: ViolationCertificate | None
    choi: cpmaps.ChoiMatrix
    seed: int
    tol: float

    @property
    def max_deviation(self) -> float:
        devs = [p.deviation for p in self.deviations if p.in_algebra]
        return max(devs) if devs else 0.0

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "deviations": [p.to_json() for p in self.deviations],
            "max_deviation": self.max_deviation,
            "iterations": self.iterations,
            "residuals": self.residuals,
            "constraint_rank": self.constraint_rank,
            "rank_margin": self.rank_margin,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "seed": self.seed,
            "tol": self.tol,
        }


# ----------------------------------------------------------------------------
# Affine constraints on the Choi matrix
# ----------------------------------------------------------------------------

@dataclass
class ConstraintSystem:
    """Real-linear equations R x = b on hermvec coordinates of the Choi.

    The system lives on a face of the PSD cone: ``face`` is an isometry
    U (d^2 x n) such that every feasible Choi matrix is U M U* with M an
    n x n PSD matrix (facial reduction; see _pinned_face).  All solver
    coordinates x are hermvec(M).  ``functional_mats`` keeps the compressed
    Hermitian functional matrix of every row (row_i . x = <F_i, M>), so the
    system can be compressed further onto sub-faces during rounding.
    """

    d: int
    n: int
    face: np.ndarray = field(repr=False)
    rows: np.ndarray = field(repr=False, default=None)
    b: np.ndarray = field(repr=False, default=None)
    rank: int = 0
    pinv: np.ndarray = field(repr=False, default=None)
    x_identity: np.ndarray = field(repr=False, default=None)
    functional_mats: np.ndarray = field(repr=False, default=None)

    @property
    def ambient_dim(self) -> int:
        """Real dimension of the space of Hermitian d^2 x d^2 matrices."""
        return self.d ** 4

    @property
    def rank_margin(self) -> int:
        return self.ambient_dim - self.rank

    def to_choi_mat(self, x: np.ndarray) -> np.ndarray:
        """Ambient d^2 x d^2 Choi matrix of a face coordinate vector."""
        M = unhermvec(x, self.n)
        return self.face @ M @ self.face.conj().T

    def compress_functional(self, F: np.ndarray) -> np.ndarray:
        """hermvec coordinates of <F, .> restricted to the face."""
        Fh = (F + F.conj().T) / 2.0
        return hermvec(self.face.conj().T @ Fh @ self.face)

    def proj_affine(self, X: np.ndarray) -> np.ndarray:
        """Orthogonal projection onto {x : R x = b} (batched)."""
        return X - (X @ self.rows.T - self.b) @ self.pinv.T

    def affine_residual(self, X: np.ndarray) -> np.ndarray:
        return np.linalg.norm(X @ self.rows.T - self.b, axis=-1)

    def proj_psd(self, X: np.ndarray) -> np.ndarray:
        M = unhermvec(X, self.n)
        w, U = np.linalg.eigh(M)
        wc = np.clip(w, 0.0, None)
        P = (U * wc[..., None, :]) @ U.conj().swapaxes(-1, -2)
        return hermvec(P)

    def psd_residual(self, X: np.ndarray) -> np.ndarray:
        w = np.linalg.eigvalsh(unhermvec(X, self.n))
        return np.clip(-w[..., 0], 0.0, None)

    def dykstra(self, X: np.ndarray, max_iter: int = 400, tol: float = DYKSTRA_TOL) -> np.ndarray:
        """Dykstra's alternating projections onto PSD and affine sets.

        Returns affine-exact points; residual PSD violation is measured
        separately by the caller.
        """
        p = np.zeros_like(X)
        q = np.zeros_like(X)
        x = X
        for _ in range(max_iter):
            y = self.proj_psd(x + p)
            p = x + p - y
            xn = self.proj_affine(y + q)
            q = y + q - xn
            gap = np.linalg.norm(y - xn, axis=-1)
            x = xn
            if np.all(gap <= tol):
                break
        return x


def _pinned_face(P: UepProblem) -> np.ndarray:
    """Isometry onto the face of the PSD cone carrying all feasible Chois.

    For any PSD matrix A in the real span of {I} u G u G* (which Phi fixes
    elementwise), a kernel vector u and a range vector x of A force

        <u, Phi(x x*) u> <= <u, Phi(A) u> / lambda = <u, A u> / lambda = 0,

    so conj(x) (x) u lies in the kernel of every feasible Choi matrix.
    Extreme-eigenvalue shifts H - lmin(H) I and lmax(H) I - H of sampled
    pinned combinations H are exactly such boundary PSD elements; the
    collected kernel directions are deflated away.  The sampling is
    deterministic and independent of the problem seed.
    """
    d = P.d
    D = d * d
    basis = [np.eye(d, dtype=complex)]
    for g in P.pinned_elements():
        g = linalg.require_square(g).astype(complex)
        for H in ((g + g.conj().T) / 2.0, (g - g.conj().T) / 2.0j):
            if linalg.maxabs(H) > 1e-14:
                basis.append(H)
    rng = make_rng(0x0FACE)
    samples = list(basis)
    for _ in range(4 * len(basis) + 8):
        c = rng.standard_normal(len(basis))
        samples.append(sum(ck * Bk for ck, Bk in zip(c, basis)))

    kernel = []
    for H in samples:
        w, V = np.linalg.eigh(H)
        scale = max(float(w[-1] - w[0]), 1e-30)
        for mu in (w - w[0], w[-1] - w):
            ker = [V[:, k] for k in range(d) if mu[k] <= 1e-12 * scale]
            rng_vecs = [V[:, k] for k in range(d) if mu[k] >= 1e-6 * scale]
            for u in ker:
                for x in rng_vecs:
                    kernel.append(np.kron(x.conj(), u))
    if not kernel:
        return np.eye(D, dtype=complex)
    # Null space of the conjugated stack = orthogonal complement of the
    # kernel vectors (<v, z> = 0 means conj(v) . z = 0).
    Kmat = np.array(kernel).conj()
    _, sv, Vh = np.linalg.svd(Kmat)
    r = int(np.sum(sv > 1e-8 * (sv[0] if sv[0] > 0 else 1.0)))
    return Vh[r:].conj().T  # D x (D - r) orthonormal complement


def build_constraints(P: UepProblem) -> ConstraintSystem:
    """Affine system: unitality plus agreement with the identity on G u G*,
    compressed onto the pinned face.

    Uses Phi(g)_{mn} = tr((g^T (x) E_nm) C) and
    (partial_trace_first C)_{mn} = tr((I (x) E_nm) C).
    """
    d = P.d
    I = np.eye(d)
    pairs = []
    for m in range(d):
        for n in range(d):
            E_nm = linalg.matrix_unit(d, n, m)
            pairs.append((np.kron(I, E_nm), 1.0 if m == n else 0.0))
    for g in P.pinned_elements():
        g = linalg.require_square(g)
        if g.shape != (d, d):
            raise InvalidInput(f"pinned element shape {g.shape} != ({d}, {d})")
        for m in range(d):
            for n in range(d):
                E_nm = linalg.matrix_unit(d, n, m)
                pairs.append((np.kron(g.T, E_nm), g[m, n]))

    face = _pinned_face(P)
    n_face = face.shape[1]

    rows = []
    b = []
    fmats = []
    ambient_rows = []
    for F, target in pairs:
        for Fp, val in (((F + F.conj().T) / 2.0, float(np.real(target))),
                        ((F - F.conj().T) / 2.0j, float(np.imag(target)))):
            ambient_rows.append(hermvec(Fp))
            Fc = face.conj().T @ Fp @ face
            rows.append(hermvec(Fc))
            fmats.append(Fc)
            b.append(val)
    R = np.array(rows)
    bv = np.array(b)

    # The reported rank is that of the ambient system (before facial
    # reduction) so that ranks of different generator sets are comparable.
    sv = np.linalg.svd(np.array(ambient_rows), compute_uv=False)
    rank = int(np.sum(sv > 1e-12 * (sv[0] if sv[0] > 0 else 1.0)))
    pinv = np.linalg.pinv(R, rcond=1e-12)

    C_id = cpmaps.identity_choi(d).mat
    x_id = hermvec(face.conj().T @ C_id @ face)
    b_scale = 1.0 + np.linalg.norm(bv)
    # The identity map must satisfy its own pinning and lie on the face;
    # failure means the system as posed has no solution.
    face_resid = linalg.frob_norm(face @ face.conj().T @ C_id @ face @ face.conj().T - C_id)
    if np.linalg.norm(R @ x_id - bv) > 1e-7 * b_scale or face_resid > 1e-7:
        raise Infeasible("identity map violates the affine constraints as assembled")

    return ConstraintSystem(d=d, n=n_face, face=face, rows=R, b=bv, rank=rank,
                            pinv=pinv, x_identity=x_id, functional_mats=np.array(fmats))


# ----------------------------------------------------------------------------
# Facial rounding: exact feasibility restoration on a low-rank face
# ----------------------------------------------------------------------------

# The feasible spectrahedron typically sits on a proper face of the PSD cone
# (the pinned problems have no Slater point), which makes plain alternating
# projections crawl sublinearly near the solution.  Rounding instead guesses
# the face U M U* from the eigenvalues of the ascent iterate, restores the
# affine constraints exactly inside the face (a small least-squares problem
# in the r x r Hermitian coordinates M), and certifies PSD by the
# eigenvalues of M.  Only certified points are ever accepted.

FACE_TAUS = (0.5, 0.1, 0.02)
FACE_RANK_CAP = 12


def _face_dykstra(RT: np.ndarray, pin: np.ndarray, b: np.ndarray,
                  m: np.ndarray, r: int, max_iter: int = 200) -> np.ndarray:
    """Dykstra on (PSD_r intersect affine) in face coordinates; returns an
    affine-exact point.  Inside the correct face the intersection usually
    has relative interior, so this converges quickly."""
    p = np.zeros_like(m)
    q = np.zeros_like(m)
    x = m
    for _ in range(max_iter):
        M = unhermvec(x + p, r)
        w, U = np.linalg.eigh(M)
        y = hermvec((U * np.clip(w, 0.0, None)[..., None, :]) @ U.conj().swapaxes(-1, -2))
        p = x + p - y
        xn = (y + q) - pin @ (RT @ (y + q) - b)
        q = y + q - xn
        gap = np.linalg.norm(y - xn)
        x = xn
        if gap <= DYKSTRA_TOL:
            break
    return x


def _face_polish(cs: ConstraintSystem, x: np.ndarray) -> list:
    """Certified feasible points near x, one per plausible face rank.

    Guesses faces from the eigenvalue profile of x, solves the affine
    system inside each face anchored at the compression of x, and returns
    only points passing the affine and PSD feasibility checks.
    """
    n = cs.n
    M = unhermvec(x, n)
    w, U = np.linalg.eigh(M)
    wmax = max(float(w[-1]), 1e-30)
    b_scale = 1.0 + float(np.linalg.norm(cs.b))
    guesses = {int(np.sum(w > tau * wmax)) for tau in FACE_TAUS}
    # The eigenvalue profile can under-estimate the feasible face, so also
    # try one rank up from each guess and the full face.
    guesses |= {r + 1 for r in guesses} | {n}
    out = []
    for r in sorted(guesses):
        if r == 0 or r > min(n, FACE_RANK_CAP):
            continue
        Ur = U[:, n - r:]
        Fc = Ur.conj().T @ (cs.functional_mats @ Ur)
        RT = hermvec(Fc)
        m0 = hermvec(Ur.conj().T @ M @ Ur)
        pin = np.linalg.pinv(RT, rcond=1e-10)
        mm = m0 - pin @ (RT @ m0 - cs.b)
        wr = np.linalg.eigvalsh(unhermvec(mm, r))
        if wr[0] < -0.05 * wmax:
            continue  # too infeasible to rescue; not worth a Dykstra run
        if wr[0] < -FEAS_TOL:
            mm = _face_dykstra(RT, pin, cs.b, mm, r)
            wr = np.linalg.eigvalsh(unhermvec(mm, r))
        aff = float(np.linalg.norm(RT @ mm - cs.b))
        if aff <= FEAS_TOL * b_scale and wr[0] >= -FEAS_TOL:
            out.append(hermvec(Ur @ unhermvec(mm, r) @ Ur.conj().T))
    return out


# ----------------------------------------------------------------------------
# Linear maximization over the spectrahedron (batched over witnesses)
# ----------------------------------------------------------------------------

def _linear_max_batch(cs: ConstraintSystem, gvecs: np.ndarray, max_iter: int,
                      polish_every: int = 25, stall_break: int = 8):
    """Maximize each linear functional g_k . x over {R x = b, PSD}.

    Projected gradient ascent (step, PSD clip, affine projection) with a
    facial-rounding harvest at every checkpoint: the raw trajectory keeps
    running, while _face_polish turns the current iterate into certified
    feasible candidates and "best" only ever moves to one of those.  Tasks
    that stop improving get their step halved (refinement) and the batch
    stops once every task has stalled stall_break checkpoints in a row.
    """
    K = gvecs.shape[0]
    x0 = cs.x_identity
    X = np.tile(x0, (K, 1))
    gnorm = np.linalg.norm(gvecs, axis=1)
    # Step ~ a modest fraction of the spectrahedron diameter per move.
    step = 0.1 * cs.d / np.maximum(gnorm, 1e-30)
    min_step = 1e-4 * cs.d / np.maximum(gnorm, 1e-30)
    best_obj = gvecs @ x0
    best_X = X.copy()
    prev_raw = best_obj.copy()
    stall = np.zeros(K, dtype=int)
    it = 0
    while it < max_iter:
        inner = min(polish_every, max_iter - it)
        for _ in range(inner):
            X = X + step[:, None] * gvecs
            X = cs.proj_psd(X)
            X = cs.proj_affine(X)
        it += inner
        raw_obj = np.einsum("kn,kn->k", gvecs, X)
        raw_gain = raw_obj > prev_raw + 1e-8 * (1.0 + np.abs(prev_raw))
        prev_raw = np.maximum(prev_raw, raw_obj)
        improved = np.zeros(K, dtype=bool)
        for k in range(K):
            # The raw objective bounds what rounding can certify here.
            if raw_obj[k] <= best_obj[k] + 1e-10:
                continue
            for z in _face_polish(cs, X[k]):
                obj = float(gvecs[k] @ z)
                if obj > best_obj[k] + 1e-10:
                    best_obj[k] = obj
                    best_X[k] = z
                    improved[k] = True
        # A task only stalls once neither the certified best nor the raw
        # trajectory is moving; step halving is reserved for that phase.
        stall = np.where(improved | raw_gain, 0, stall + 1)
        shrink = stall >= 2
        step[shrink] = np.maximum(step[shrink] * 0.5, min_step[shrink])
        if np.all(stall >= stall_break):
            break
    return best_X, best_obj, it


def _witness_gradient(cs: ConstraintSystem, a: np.ndarray, W: np.ndarray) -> np.ndarray:
    """Face-coordinate gradient of C |-> Re tr(W* Phi_C(a)) = Re tr((a^T (x) W*) C)."""
    return cs.compress_functional(np.kron(a.T, W.conj().T))


# ----------------------------------------------------------------------------
# The falsifier
# ----------------------------------------------------------------------------

def solve(P: UepProblem) -> UepReport:
    """Run the UEP search and report deviations, a certificate, or evidence
    of uniqueness.

    Deviations are support-function lower bounds max_W <W, Phi(a) - a>/||W||
    (Frobenius-normalized witnesses), evaluated only at polished feasible
    Choi matrices; the certificate deviation is re-measured in operator norm
    and revalidated by an independent code path.
    """
    if P.G is None:
        raise InvalidInput("solve requires a generator set")
    d = P.d
    cs = build_constraints(P)
    alg = opsys.generate_algebra(P.G)

    if P.probes is None:
        probes = [b.copy() for b in alg.basis]
    else:
        probes = [linalg.require_square(a) for a in P.probes]
        for a in probes:
            if a.shape != (d, d):
                raise InvalidInput(f"probe shape {a.shape} != ({d}, {d})")
    info = []
    for idx, a in enumerate(probes):
        resid = alg.projection_residual(a)
        in_alg = resid <= MEMBERSHIP_RTOL * (1.0 + linalg.frob_norm(a))
        info.append((idx, resid, in_alg))

    rng = make_rng(P.seed)
    n_w = max(1, int(P.n_witnesses))

    # Round 0: random Hermitian witnesses for every probe, in +/- pairs
    # (a witness only sees deviation directions it overlaps positively,
    # so each draw is used with both signs).
    tasks = []  # (probe_idx, W)
    for idx, a in enumerate(probes):
        for _ in range(n_w):
            W = random_hermitian(rng, d)
            W = W / max(linalg.frob_norm(W), 1e-30)
            tasks.append((idx, W))
            tasks.append((idx, -W))

    best_dev = np.zeros(len(probes))
    best_x = {idx: cs.x_identity for idx in range(len(probes))}
    total_iters = 0

    def run_tasks(task_list):
        nonlocal total_iters
        if not task_list:
            return
        gvecs = np.array([_witness_gradient(cs, probes[idx], W) for idx, W in task_list])
        bx, bobj, iters = _linear_max_batch(cs, gvecs, P.max_iter)
        total_iters += iters
        for t, (idx, W) in enumerate(task_list):
            wnorm = max(linalg.frob_norm(W), 1e-30)
            base = float(np.real(np.trace(W.conj().T @ probes[idx])))
            dev = (float(bobj[t]) - base) / wnorm
            if dev > best_dev[idx]:
                best_dev[idx] = dev
                best_x[idx] = bx[t]

    run_tasks(tasks)

    # Adaptive rounds: push the witness toward the actual deviation direction.
    for _ in range(3):
        prev = best_dev.copy()
        adaptive = []
        for idx, a in enumerate(probes):
            if best_dev[idx] <= P.tol / 10.0:
                continue
            C = cpmaps.ChoiMatrix(d=d, mat=cs.to_choi_mat(best_x[idx]))
            W = apply_choi_raw(C, a) - a
            wn = linalg.frob_norm(W)
            if wn <= P.tol / 10.0:
                continue
            adaptive.append((idx, W / wn))
        if not adaptive:
            break
        run_tasks(adaptive)
        gain = float(np.max(best_dev - prev)) if len(best_dev) else 0.0
        if gain <= max(P.tol, 0.02 * float(np.max(best_dev))):
            break

    deviations = [
        ProbeDeviation(index=idx, deviation=float(best_dev[idx]), in_algebra=in_alg,
                       projection_residual=float(resid))
        for idx, resid, in_alg in info
    ]
    on_alg = [p for p in deviations if p.in_algebra]
    max_dev = max((p.deviation for p in on_alg), default=0.0)

    if max_dev <= P.tol:
        worst_idx = on_alg[0].index if on_alg else 0
        status = "Unique-evidence"
        certificate = None
    else:
        worst_idx = max(on_alg, key=lambda p: p.deviation).index
        status = None
        certificate = None

    x_final = best_x[worst_idx]
    choi = cpmaps.ChoiMatrix(d=d, mat=cs.to_choi_mat(x_final))
    residuals = {
        "affine": float(cs.affine_residual(x_final[None, :])[0]),
        "psd": float(cs.psd_residual(x_final[None, :])[0]),
    }

    if status is None:
        if max_dev >= 10.0 * P.tol:
            a = probes[worst_idx]
            certificate = ViolationCertificate(
                choi=choi,
                probe=a,
                deviation=linalg.op_norm(apply_choi_raw(choi, a) - a),
                residuals=residuals,
            )
            if validate_certificate(certificate, P):
                status = "ViolationFound"
            else:
                certificate = None
                status = "NonConverged"
        else:
            status = "NonConverged"

    return UepReport(
        status=status,
        deviations=deviations,
        iterations=total_iters,
        residuals=residuals,
        constraint_rank=cs.rank,
        rank_margin=cs.rank_margin,
        certificate=certificate,
        choi=choi,
        seed=P.seed,
        tol=P.tol,
    )


def apply_choi_raw(C: cpmaps.ChoiMatrix, a: np.ndarray) -> np.ndarray:
    return cpmaps.apply_choi(C, a)


def validate_certificate(cert: ViolationCertificate, P: UepProblem) -> bool:
    """Independent re-check of a violation certificate (no solver state).

    The map must be UCP within 1e-7, agree with the identity on G u G*
    within 1e-7, and move the probe by at least 10x both the agreement
    residual and the problem tolerance.
    """
    defects = cpmaps.validate_ucp(cert.choi)
    if defects["cp_defect"] > 1e-7 or defects["unital_defect"] > 1e-7:
        return False
    agreement = 0.0
    for g in P.pinned_elements():
        agreement = max(agreement, linalg.op_norm(cpmaps.apply_choi(cert.choi, g) - g))
    if agreement > 1e-7:
        return False
    dev = linalg.op_norm(cpmaps.apply_choi(cert.choi, cert.probe) - cert.probe)
    if abs(dev - cert.deviation) > 1e-6 * (1.0 + dev):
        return False
    return dev >= 10.0 * max(agreement, P.tol)


def schwarz_pinning_check(P: UepProblem, C: cpmaps.ChoiMatrix, word_length: int = 4) -> dict:
    """Schwarz defects of the pinned generators plus word agreement.

    When G contains T, T*T and TT* (T = first generator), both Schwarz
    defects of T are differences of pinned quantities, so any feasible C
    has defects at the feasibility-residual level, and the multiplicative
    domain argument forces Phi to agree with the identity on all words in
    {T, T*}; the maximum word deviation over lengths <= word_length is
    reported.
    """
    if P.G is None:
        raise InvalidInput("schwarz_pinning_check requires a generator set")
    gen_defects = []
    for g in P.G.generators:
        dd = cpmaps.schwarz_defects(C, g, ucp_tol=1e-6)
        gen_defects.append({"left_norm": dd["left_norm"], "right_norm": dd["right_norm"]})
    T = P.G.generators[0]
    letters = [T, T.conj().T]
    max_word_dev = 0.0
    count = 0
    for length in range(1, word_length + 1):
        for word in itertools.product(letters, repeat=length):
            w = np.eye(P.d, dtype=complex)
            for letter in word:
                w = w @ letter
            max_word_dev = max(max_word_dev, linalg.op_norm(cpmaps.apply_choi(C, w) - w))
            count += 1
    return {
        "generator_defects": gen_defects,
        "max_word_deviation": max_word_dev,
        "words_checked": count,
    }
