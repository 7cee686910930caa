"""Finite-dimensional operator systems: generated *-algebras and commutants.

The unital *-algebra generated by a finite matrix set is computed by word
closure: orthonormalize the span of all words in the generators and their
adjoints, degree by degree, until the span stabilizes.  Irreducibility is
decided through the commutant (trivial commutant <=> the generated algebra
is all of M_d, by Burnside's theorem).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import InvalidInput, NonStabilized

# Relative singular-value threshold for rank decisions.
RANK_RTOL = 1e-9


@dataclass(frozen=True)
class GeneratorSet:
    """A finite list of d x d generators (with or without the unit)."""

    d: int
    generators: tuple
    include_unit: bool = True

    def __post_init__(self):
        if not self.generators:
            raise InvalidInput("generator set must be nonempty")
        gens = tuple(linalg.require_square(g) for g in self.generators)
        for g in gens:
            if g.shape != (self.d, self.d):
                raise InvalidInput(f"generator shape {g.shape} != ({self.d}, {self.d})")
        object.__setattr__(self, "generators", gens)

    def with_adjoints(self) -> list:
        return list(self.generators) + [g.conj().T for g in self.generators]


@dataclass
class AlgebraBasis:
    """Frobenius-orthonormal basis of a subspace of M_d."""

    d: int
    basis: list = field(default_factory=list)
    word_degree_reached: int = 0
    stabilized: bool = True

    @property
    def dim(self) -> int:
        return len(self.basis)

    def project(self, A: np.ndarray) -> np.ndarray:
        """Orthogonal projection of A onto the span of the basis."""
        P = np.zeros_like(np.asarray(A, dtype=complex))
        for b in self.basis:
            P = P + linalg.frob_inner(b, A) * b
        return P

    def projection_residual(self, A: np.ndarray) -> float:
        return linalg.frob_norm(np.asarray(A, dtype=complex) - self.project(A))


def _mgs_extend(basis: list, candidates: list, rtol: float = RANK_RTOL) -> list:
    """Extend an orthonormal basis by modified Gram-Schmidt.

    Each candidate is orthogonalized twice against the running basis
    (re-orthogonalization pass) and accepted when its residual norm stays
    above rtol relative to the candidate's own norm.
    """
    added = []
    for cand in candidates:
        v = np.asarray(cand, dtype=complex)
        scale = linalg.frob_norm(v)
        if scale == 0.0:
            continue
        for _ in range(2):
            for b in basis:
                v = v - linalg.frob_inner(b, v) * b
        nrm = linalg.frob_norm(v)
        if nrm > rtol * scale:
            v = v / nrm
            basis.append(v)
            added.append(v)
    return added


def generate_algebra(G: GeneratorSet, max_degree: int | None = None) -> AlgebraBasis:
    """Orthonormal basis of the unital *-algebra generated by G.

    Words of increasing length in G, G* (and I) are folded into the span
    until a degree adds nothing new.  Raises NonStabilized (carrying the
    partial basis) if max_degree is hit first; with the default budget of
    2 d^2 that cannot happen, since the span dimension strictly increases
    until stable and is bounded by d^2.
    """
    d = G.d
    if max_degree is None:
        max_degree = 2 * d * d
    if max_degree < 1:
        raise InvalidInput("max_degree must be >= 1")

    gens = G.with_adjoints()
    basis: list = []
    seeds = ([linalg.eye(d)] if G.include_unit else []) + gens
    new = _mgs_extend(basis, seeds)
    degree = 1
    stabilized = len(basis) == d * d
    while degree < max_degree and not stabilized:
        candidates = [w @ g for w in new for g in gens]
        new = _mgs_extend(basis, candidates)
        degree += 1
        if not new or len(basis) == d * d:
            stabilized = True
    result = AlgebraBasis(d=d, basis=basis, word_degree_reached=degree, stabilized=stabilized)
    if not stabilized:
        raise NonStabilized(
            f"word closure not stabilized at degree {max_degree} (dim {len(basis)})",
            partial=result,
        )
    return result


def commutant(G: GeneratorSet) -> AlgebraBasis:
    """Orthonormal basis of {X : Xg = gX and Xg* = g*X for all g in G}.

    Vectorizing X row-major, X g - g X = 0 becomes
    ((I (x) g^T) - (g (x) I)) vec(X) = 0; the kernel of the stacked system
    is read off from its SVD (the normal-equations shortcut squares the
    condition number and can lose the kernel for ill-scaled generators),
    with singular values below RANK_RTOL of the largest treated as zero.
    """
    d = G.d
    I = np.eye(d)
    blocks = []
    for g in G.with_adjoints():
        blocks.append(np.kron(I, g.T) - np.kron(g, I))
    M = np.vstack(blocks)
    sv, Vh = np.linalg.svd(M, full_matrices=True)[1:]
    cutoff = RANK_RTOL * (sv[0] if len(sv) and sv[0] > 0 else 1.0)
    rank = int(np.sum(sv > cutoff))
    basis = [Vh[k].conj().reshape(d, d) for k in range(rank, d * d)]
    # Eigenvector columns are orthonormal already; a re-pass guards roundoff.
    ortho: list = []
    _mgs_extend(ortho, basis)
    return AlgebraBasis(d=d, basis=ortho, word_degree_reached=0, stabilized=True)


def is_irreducible(G: GeneratorSet) -> bool:
    """True iff the commutant of G (with adjoints) is trivial."""
    return commutant(G).dim == 1
