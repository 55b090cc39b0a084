"""Concrete sequences: the worked constructions and seeded random scenarios.

Every random generator takes an explicit integer ``seed`` (or a numpy
``Generator``) and is deterministic in it.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ShapeError
from .model import OperatorSequence, WeightSequence
from .numerics import as_matrix

GENERATOR_KINDS = (
    "standard_basis_functionals",
    "random_frame_functionals",
    "interleaved_zeros",
    "random_operator_sequence",
    "explicit",
)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _complex_normal(rng, shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def gen_functional_sequence(vectors):
    """Rank-one functionals ``f -> <f, f_n>``; row ``n`` is ``f_n^*`` and ``p = 1``.

    Zero vectors are allowed and give the zero functional.
    """
    vecs = [as_matrix(v, f"vector {i + 1}") for i, v in enumerate(vectors)]
    if not vecs:
        raise ShapeError("need at least one vector")
    d = vecs[0].shape[0]
    if any(v.shape != (d, 1) for v in vecs):
        raise ShapeError("all vectors must be d x 1 with a common d")
    return OperatorSequence(np.stack([v.conj().T for v in vecs]), (1,) * len(vecs))


def gen_standard_basis(d):
    return [np.eye(d, dtype=np.complex128)[:, [j]] for j in range(d)]


def gen_random_frame(d, N, seed, condition_target=1.0):
    """``N`` vectors in C^d whose frame operator has condition number ``condition_target``.

    A complex Gaussian ``d x N`` matrix is reshaped through its SVD so the
    singular values are ``sqrt`` of a geometric ladder from 1 to
    ``condition_target``; the frame operator ``F F^*`` then has spectrum in
    ``[1, condition_target]`` with both ends attained.
    """
    if N < d:
        raise ShapeError(f"a frame for C^{d} needs at least {d} vectors, got {N}")
    if condition_target < 1:
        raise DomainError(f"condition_target must be >= 1, got {condition_target}")
    rng = _rng(seed)
    g = _complex_normal(rng, (d, N))
    u, _, vh = np.linalg.svd(g, full_matrices=False)
    if d == 1:
        sigma = np.ones(1)
    else:
        sigma = np.sqrt(np.geomspace(1.0, condition_target, d))
    f = (u * sigma) @ vh
    return [f[:, [n]] for n in range(N)]


def gen_interleaved(vectors):
    """``(f_1, 0, f_2, 0, ...)``: every vector followed by a zero vector."""
    out = []
    for v in vectors:
        v = as_matrix(v)
        out.extend([v, np.zeros_like(v)])
    return out


def gen_weights(N, lo, hi, seed, complex_phase=False):
    """Positively confined weights with ``|a_n|`` uniform in ``[lo, hi]``."""
    if lo <= 0:
        raise DomainError(f"lower magnitude must be positive, got {lo}")
    if hi < lo:
        raise DomainError(f"need lo <= hi, got {lo} > {hi}")
    rng = _rng(seed)
    mags = np.full(N, float(lo)) if lo == hi else rng.uniform(lo, hi, N)
    if complex_phase:
        mags = mags * np.exp(2j * np.pi * rng.uniform(0.0, 1.0, N))
    return WeightSequence(mags)


def gen_random_operator_sequence(d, codomain_dims, seed, scale=1.0):
    rng = _rng(seed)
    blocks = [scale * _complex_normal(rng, (dn, d)) for dn in codomain_dims]
    return OperatorSequence.from_blocks(blocks)


def gen_random_hermitian(d, seed, norm=None):
    """Random Hermitian matrix, optionally rescaled to a given spectral norm."""
    rng = _rng(seed)
    g = _complex_normal(rng, (d, d))
    h = 0.5 * (g + g.conj().T)
    if norm is not None:
        h = h * (norm / np.linalg.norm(h, 2))
        h = 0.5 * (h + h.conj().T)
    return h


def gen_random_hpd(d, seed, condition_target=10.0):
    rng = _rng(seed)
    q, _ = np.linalg.qr(_complex_normal(rng, (d, d)))
    lam = np.geomspace(1.0, condition_target, d) if d > 1 else np.ones(1)
    h = (q * lam) @ q.conj().T
    return 0.5 * (h + h.conj().T)


def gen_random_invertible(N, seed, spread=0.3):
    """Identity plus a small random perturbation; well conditioned by construction."""
    rng = _rng(seed)
    g = _complex_normal(rng, (N, N))
    return np.eye(N) + spread * g / max(1.0, np.linalg.norm(g, 2))


def gen_unitary(d, seed):
    rng = _rng(seed)
    q, r = np.linalg.qr(_complex_normal(rng, (d, d)))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def gen_block_orthogonal_pair(d, N, p1, p2, seed, rotate=False):
    """Sequences whose ranges sit in complementary coordinate blocks of C^(p1+p2).

    ``Lambda_n`` uses the first ``p1`` coordinates and ``Gamma_n`` the last
    ``p2``, for every ``n``, so ``R(Lambda_j)`` is orthogonal to
    ``R(Gamma_k)`` for all ``j, k`` and orthogonality survives any mixing
    matrix.  With ``rotate=True`` one common unitary is applied to both,
    which keeps that property while hiding the coordinate structure.
    """
    rng = _rng(seed)
    p = p1 + p2
    lam = np.zeros((N, p, d), dtype=np.complex128)
    gam = np.zeros((N, p, d), dtype=np.complex128)
    lam[:, :p1] = _complex_normal(rng, (N, p1, d))
    gam[:, p1:] = _complex_normal(rng, (N, p2, d))
    if rotate:
        q = gen_unitary(p, rng)
        lam = q @ lam
        gam = q @ gam
    return OperatorSequence(lam), OperatorSequence(gam)


@dataclass(frozen=True)
class GeneratorSpec:
    kind: str
    dim_d: int
    term_count_N: int
    seed: int = 0
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in GENERATOR_KINDS:
            raise DomainError(f"unknown generator kind {self.kind!r}")
        if self.dim_d < 1 or self.term_count_N < 1:
            raise DomainError("dimension and term count must be positive")


def build_vectors(spec):
    """Vectors for the functional-based kinds, or None for operator kinds."""
    d, n = spec.dim_d, spec.term_count_N
    if spec.kind == "standard_basis_functionals":
        if n != d:
            raise ShapeError(f"standard basis needs N = d, got N={n}, d={d}")
        return gen_standard_basis(d)
    if spec.kind == "random_frame_functionals":
        return gen_random_frame(d, n, spec.seed, spec.params.get("condition_target", 1.0))
    if spec.kind == "interleaved_zeros":
        if n % 2:
            raise ShapeError(f"interleaved sequences have an even number of terms, got {n}")
        base = spec.params.get("base", "random_frame_functionals")
        inner = GeneratorSpec(base, d, n // 2, spec.seed, spec.params)
        return gen_interleaved(build_vectors(inner))
    return None


def build_sequence(spec):
    vectors = build_vectors(spec)
    if vectors is not None:
        return gen_functional_sequence(vectors)
    if spec.kind == "random_operator_sequence":
        dims = spec.params.get("codomain_dims", [spec.dim_d] * spec.term_count_N)
        if len(dims) != spec.term_count_N:
            raise ShapeError(f"{len(dims)} codomain dims for N={spec.term_count_N}")
        return gen_random_operator_sequence(spec.dim_d, dims, spec.seed, spec.params.get("scale", 1.0))
    # explicit
    seq = OperatorSequence.from_blocks(spec.params["operators"])
    if seq.N != spec.term_count_N or seq.d != spec.dim_d:
        raise ShapeError(f"explicit operators are N={seq.N}, d={seq.d}; scenario says N={spec.term_count_N}, d={spec.dim_d}")
    return seq
