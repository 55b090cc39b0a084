"""Value types for truncated E-g-frame models.

The ambient Hilbert space is modelled as C^d and the index set as
``1..N``.  Each operator ``Lambda_n`` maps C^d into a subspace of dimension
``d_n``; to make sums across different codomains well-typed every codomain
is zero-padded to ``p = max(d_n)`` rows.  Padding is an isometric inclusion,
so norms are untouched.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ShapeError
from .numerics import as_matrix

KINDS = ("identity", "delta", "banded", "dense")
CLASSIFICATIONS = ("not_bessel_guard", "bessel_only", "frame", "tight", "parseval")


def _frozen(a):
    a = np.array(a, dtype=np.complex128)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class AmbientSpace:
    dim_d: int

    def __post_init__(self):
        if int(self.dim_d) < 1:
            raise DomainError(f"ambient dimension must be >= 1, got {self.dim_d}")


@dataclass(frozen=True)
class SubspaceFamily:
    codomain_dims: tuple

    def __post_init__(self):
        dims = tuple(int(x) for x in self.codomain_dims)
        if not dims:
            raise DomainError("a subspace family needs at least one term")
        if min(dims) < 1:
            raise DomainError(f"codomain dimensions must be positive, got {dims}")
        object.__setattr__(self, "codomain_dims", dims)

    @property
    def term_count_N(self):
        return len(self.codomain_dims)

    @property
    def pad_dim_p(self):
        return max(self.codomain_dims)


@dataclass(frozen=True, eq=False)
class OperatorSequence:
    """N operators C^d -> C^p stored as an ``(N, p, d)`` array.

    Rows ``d_n+1..p`` of operator ``n`` must be exactly zero; inputs that
    violate this are rejected rather than truncated.
    """

    operators: np.ndarray
    codomain_dims: tuple = None

    def __post_init__(self):
        ops = np.array(self.operators, dtype=np.complex128)
        if ops.ndim != 3 or 0 in ops.shape:
            raise ShapeError(f"operators must have shape (N, p, d), got {ops.shape}")
        if not np.all(np.isfinite(ops)):
            raise DomainError("operator entries must be finite")
        n_terms, p, _ = ops.shape
        dims = (p,) * n_terms if self.codomain_dims is None else self.codomain_dims
        family = SubspaceFamily(dims)
        if family.term_count_N != n_terms:
            raise ShapeError(f"{family.term_count_N} codomain dims for {n_terms} operators")
        if family.pad_dim_p != p:
            raise ShapeError(f"padded height {p} differs from max codomain dim {family.pad_dim_p}")
        for n, dn in enumerate(family.codomain_dims):
            if np.any(ops[n, dn:, :] != 0):
                raise DomainError(f"operator {n + 1} has nonzero padding rows beyond d_n={dn}")
        object.__setattr__(self, "operators", _frozen(ops))
        object.__setattr__(self, "codomain_dims", family.codomain_dims)

    @classmethod
    def from_blocks(cls, blocks):
        """Build from unpadded ``d_n x d`` matrices, zero-padding each to ``p`` rows."""
        mats = [as_matrix(b, name=f"operator {i + 1}") for i, b in enumerate(blocks)]
        if not mats:
            raise ShapeError("need at least one operator")
        d = mats[0].shape[1]
        if any(m.shape[1] != d for m in mats):
            raise ShapeError("all operators must share the ambient dimension")
        dims = tuple(m.shape[0] for m in mats)
        p = max(dims)
        ops = np.zeros((len(mats), p, d), dtype=np.complex128)
        for n, m in enumerate(mats):
            ops[n, : m.shape[0]] = m
        return cls(ops, dims)

    @property
    def N(self):
        return self.operators.shape[0]

    @property
    def p(self):
        return self.operators.shape[1]

    @property
    def d(self):
        return self.operators.shape[2]

    @property
    def space(self):
        return AmbientSpace(self.d)

    @property
    def family(self):
        return SubspaceFamily(self.codomain_dims)

    def __len__(self):
        return self.N

    def __getitem__(self, n):
        return self.operators[n]

    def with_operators(self, ops):
        """Same family, new operator array (re-validated)."""
        return OperatorSequence(ops, self.codomain_dims)

    def compose_right(self, u):
        """``{Lambda_n U}``: precompose every operator with ``U`` on C^d."""
        u = as_matrix(u, "U")
        if u.shape != (self.d, self.d):
            raise ShapeError(f"U must be {self.d}x{self.d}, got {u.shape}")
        return self.with_operators(self.operators @ u)

    def compose_left(self, u):
        """``{U Lambda_n}``; needs every codomain to be the full space (p = d_n = d)."""
        u = as_matrix(u, "U")
        if set(self.codomain_dims) != {self.d} or u.shape != (self.d, self.d):
            raise ShapeError("left composition requires H_n = H for all n and a d x d operator")
        return self.with_operators(u @ self.operators)

    def scaled(self, c):
        return self.with_operators(complex(c) * self.operators)

    def weighted(self, values):
        """``{c_n Lambda_n}`` for per-index scalars."""
        w = np.asarray(values, dtype=np.complex128).reshape(-1)
        if w.size != self.N:
            raise ShapeError(f"{w.size} weights for {self.N} operators")
        return self.with_operators(w[:, None, None] * self.operators)

    def combine(self, other, a=1.0, b=1.0):
        """``{a_n Lambda_n + b_n Gamma_n}``; scalars or length-N weights."""
        if other.N != self.N or other.d != self.d:
            raise ShapeError(f"cannot combine sequences of shapes {self.operators.shape} and {other.operators.shape}")
        p = max(self.p, other.p)
        wa = np.broadcast_to(np.asarray(a, dtype=np.complex128).reshape(-1), (self.N,))
        wb = np.broadcast_to(np.asarray(b, dtype=np.complex128).reshape(-1), (self.N,))
        ops = wa[:, None, None] * _pad(self.operators, p) + wb[:, None, None] * _pad(other.operators, p)
        dims = tuple(max(x, y) for x, y in zip(self.codomain_dims, other.codomain_dims))
        return OperatorSequence(ops, dims)

    def padded(self, p):
        return OperatorSequence(_pad(self.operators, p), self.codomain_dims)


def _pad(ops, p):
    if ops.shape[1] == p:
        return ops
    out = np.zeros((ops.shape[0], p, ops.shape[2]), dtype=np.complex128)
    out[:, : ops.shape[1]] = ops
    return out


@dataclass(frozen=True, eq=False)
class TransformMatrix:
    entries: np.ndarray
    kind_tag: str = "dense"

    def __post_init__(self):
        e = as_matrix(self.entries, "transform entries")
        if e.shape[0] != e.shape[1]:
            raise ShapeError(f"transform must be square, got {e.shape}")
        if self.kind_tag not in KINDS:
            raise DomainError(f"unknown transform kind {self.kind_tag!r}")
        if self.kind_tag == "delta":
            n = e.shape[0]
            if not np.array_equal(e, np.eye(n) - np.eye(n, k=-1)):
                raise DomainError("entries do not match the difference-matrix pattern")
        object.__setattr__(self, "entries", _frozen(e))

    @property
    def size_N(self):
        return self.entries.shape[0]

    def min_singular_value(self):
        return float(np.linalg.svd(self.entries, compute_uv=False)[-1])


@dataclass(frozen=True, eq=False)
class StackedVector:
    """Element of the padded l^2 direct sum: ``N`` blocks of height ``p``, stored ``(N, p)``."""

    blocks: np.ndarray

    def __post_init__(self):
        b = np.array(self.blocks, dtype=np.complex128)
        if b.ndim == 3 and b.shape[2] == 1:
            b = b[:, :, 0]
        if b.ndim != 2:
            raise ShapeError(f"stacked vector blocks must be (N, p) or (N, p, 1), got {b.shape}")
        object.__setattr__(self, "blocks", _frozen(b))

    @property
    def N(self):
        return self.blocks.shape[0]

    @property
    def p(self):
        return self.blocks.shape[1]

    def block(self, n):
        return self.blocks[n].reshape(-1, 1)

    def flatten(self):
        return self.blocks.reshape(-1)

    def inner(self, other):
        """``<self, other>``, linear in the first slot."""
        return complex(np.vdot(other.blocks, self.blocks))


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Positively confined scalars: ``0 < inf|a_n| <= sup|a_n| < inf``."""

    values: np.ndarray
    inf_abs: float = field(init=False)
    sup_abs: float = field(init=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=np.complex128).reshape(-1)
        if v.size == 0:
            raise DomainError("weight sequence is empty")
        if not np.all(np.isfinite(v)):
            raise DomainError("weights must be finite")
        mags = np.abs(v)
        if mags.min() <= 0:
            raise DomainError("weights must be bounded away from zero (inf |a_n| > 0)")
        v.flags.writeable = False
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "inf_abs", float(mags.min()))
        object.__setattr__(self, "sup_abs", float(mags.max()))

    @classmethod
    def ones(cls, n):
        return cls(np.ones(n))

    def __len__(self):
        return self.values.size


@dataclass(frozen=True, eq=False)
class FrameReport:
    frame_operator: np.ndarray
    lower_opt: float
    upper_opt: float
    classification: str
    hermiticity_residual: float

    def as_dict(self):
        return {
            "lower_opt": self.lower_opt,
            "upper_opt": self.upper_opt,
            "classification": self.classification,
            "hermiticity_residual": self.hermiticity_residual,
            "frame_operator": self.frame_operator,
        }


def embed(vector, family, index_n):
    """Zero-pad a ``d_n x 1`` vector of ``H_n`` into C^p (``index_n`` is 1-based)."""
    if not 1 <= index_n <= family.term_count_N:
        raise ShapeError(f"index {index_n} out of range 1..{family.term_count_N}")
    v = as_matrix(vector, "vector")
    dn = family.codomain_dims[index_n - 1]
    if v.shape != (dn, 1):
        raise ShapeError(f"expected a {dn}x1 vector for index {index_n}, got {v.shape}")
    out = np.zeros((family.pad_dim_p, 1), dtype=np.complex128)
    out[:dn] = v
    return out


def stacked_norm_sq(v):
    return float(np.sum(np.abs(v.blocks) ** 2))


@dataclass(eq=False)
class CheckReport:
    """Outcome of one verification.

    ``hypothesis_holds`` is False when the premise of a claim failed; the
    conclusion is then not asserted and ``passed`` stays True (a failed
    premise is not a counterexample).  ``details`` holds the measured
    numbers that justify the verdict.
    """

    name: str
    passed: bool
    hypothesis_holds: bool = True
    message: str = ""
    details: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "name": self.name,
            "passed": self.passed,
            "hypothesis_holds": self.hypothesis_holds,
            "message": self.message,
            "details": self.details,
        }
