# ============================================================
# 🧩 Block algebra M = ⊕ M_{n_i}(ℂ)
# Elements, positive normal forms (trace densities), centralizer
# tests and Murray–von Neumann comparison.
# ============================================================

from collections.abc import Iterable, Sequence

import numpy as np
from numpy.typing import ArrayLike

from ..errors import AlgebraMismatch, NotFaithful, NotProjection, ShapeError
from ..kernel import linalg as la
from ..kernel.linalg import DEFAULT_POLICY, TolerancePolicy

COMMUTATOR_RTOL = 1e-10
PROJECTION_TOL = 1e-9


class Algebra:
    """Finite direct sum of full complex matrix blocks."""

    __slots__ = ("block_dims",)

    def __init__(self, block_dims: Iterable[int]):
        dims = tuple(int(n) for n in block_dims)
        if not dims:
            raise ShapeError("an algebra needs at least one block")
        if any(n < 1 for n in dims):
            raise ShapeError(f"block dimensions must be ≥ 1, got {dims}")
        self.block_dims = dims

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Algebra) and other.block_dims == self.block_dims

    def __hash__(self) -> int:
        return hash(self.block_dims)

    def __repr__(self) -> str:
        return f"Algebra{self.block_dims}"

    @property
    def dimension(self) -> int:
        """Total matrix size Σ n_i."""
        return sum(self.block_dims)

    def identity(self) -> "AlgElement":
        return AlgElement(self, [np.eye(n) for n in self.block_dims])

    def zeros(self) -> "AlgElement":
        return AlgElement(self, [np.zeros((n, n)) for n in self.block_dims])

    def center_projection(self, index: int) -> "AlgElement":
        """Indicator of block `index`: a minimal central projection."""
        return AlgElement(self, [np.eye(n) * (i == index) for i, n in enumerate(self.block_dims)])


def check_same_algebra(*items: "Blockwise | PositiveForm") -> Algebra:
    algebra = items[0].algebra
    for item in items[1:]:
        if item.algebra != algebra:
            raise AlgebraMismatch(f"{item.algebra} does not match {algebra}")
    return algebra


class Blockwise:
    """One square complex matrix per block; shared shape of elements and HS vectors."""

    __slots__ = ("algebra", "blocks")

    def __init__(self, algebra: Algebra, blocks: Sequence[ArrayLike]):
        if len(blocks) != len(algebra.block_dims):
            raise ShapeError(f"{len(blocks)} blocks given for {algebra}")
        mats = []
        for n, block in zip(algebra.block_dims, blocks):
            M = la.as_matrix(block)
            if M.shape != (n, n):
                raise ShapeError(f"block of shape {M.shape} where ({n}, {n}) was expected")
            M.setflags(write=False)
            mats.append(M)
        self.algebra = algebra
        self.blocks = tuple(mats)

    def _new(self, blocks: Iterable[np.ndarray]):
        return type(self)(self.algebra, list(blocks))

    def _pair(self, other: "Blockwise") -> None:
        if type(other) is not type(self):
            raise TypeError(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        check_same_algebra(self, other)

    def __add__(self, other):
        self._pair(other)
        return self._new(a + b for a, b in zip(self.blocks, other.blocks))

    def __sub__(self, other):
        self._pair(other)
        return self._new(a - b for a, b in zip(self.blocks, other.blocks))

    def __neg__(self):
        return self._new(-a for a in self.blocks)

    def __mul__(self, scalar: complex):
        return self._new(scalar * a for a in self.blocks)

    __rmul__ = __mul__

    def adjoint(self):
        return self._new(la.dagger(a) for a in self.blocks)

    def frobenius_norm(self) -> float:
        return float(np.sqrt(sum(np.vdot(a, a).real for a in self.blocks)))

    def op_norm(self) -> float:
        return max(la.op_norm(a) for a in self.blocks)

    def allclose(self, other, atol: float = 1e-9) -> bool:
        self._pair(other)
        return all(la.op_norm(a - b) <= atol for a, b in zip(self.blocks, other.blocks))

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.algebra.block_dims})"


class AlgElement(Blockwise):
    """x ∈ M; read through right multiplication it also houses elements of M′."""

    __slots__ = ()

    def __matmul__(self, other: "AlgElement") -> "AlgElement":
        self._pair(other)
        return self._new(a @ b for a, b in zip(self.blocks, other.blocks))

    def is_projection(self, tol: float = PROJECTION_TOL) -> bool:
        return all(la.is_projection(p, tol) for p in self.blocks)

    def is_positive(self, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
        return all(la.is_psd(a, policy) for a in self.blocks)

    def ranks(self, policy: TolerancePolicy = DEFAULT_POLICY) -> tuple[int, ...]:
        return tuple(la.numerical_rank(a, policy) for a in self.blocks)


class PositiveForm:
    """ν ∈ M_{*+} through its densities: ν(x) = Σ_i tr(a_i x_i)."""

    __slots__ = ("algebra", "densities")

    def __init__(self, algebra: Algebra, densities: Sequence[ArrayLike],
                 policy: TolerancePolicy = DEFAULT_POLICY):
        if len(densities) != len(algebra.block_dims):
            raise ShapeError(f"{len(densities)} densities given for {algebra}")
        mats = []
        for n, density in zip(algebra.block_dims, densities):
            M = la.as_matrix(density, square=True)
            if M.shape != (n, n):
                raise ShapeError(f"density of shape {M.shape} where ({n}, {n}) was expected")
            M = la.project_psd(M, policy)
            M.setflags(write=False)
            mats.append(M)
        self.algebra = algebra
        self.densities = tuple(mats)

    @classmethod
    def zero(cls, algebra: Algebra) -> "PositiveForm":
        return cls(algebra, [np.zeros((n, n)) for n in algebra.block_dims])

    def __repr__(self) -> str:
        return f"PositiveForm({self.algebra.block_dims}, ‖·‖₁={self.norm_1:.6g})"

    @property
    def norm_1(self) -> float:
        """‖ν‖₁ = ν(1)."""
        return float(sum(np.trace(a).real for a in self.densities))

    def support(self, policy: TolerancePolicy = DEFAULT_POLICY) -> AlgElement:
        return AlgElement(self.algebra, [la.support_proj(a, "left", policy) for a in self.densities])

    def is_faithful(self, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
        return all(la.numerical_rank(a, policy) == a.shape[0] for a in self.densities)

    def __add__(self, other: "PositiveForm") -> "PositiveForm":
        check_same_algebra(self, other)
        return PositiveForm(self.algebra, [a + b for a, b in zip(self.densities, other.densities)])

    def __mul__(self, t: float) -> "PositiveForm":
        if t < 0:
            raise ValueError("positive forms scale by nonnegative reals only")
        return PositiveForm(self.algebra, [t * a for a in self.densities])

    __rmul__ = __mul__

    def subtract(self, other: "PositiveForm", policy: TolerancePolicy = DEFAULT_POLICY) -> "PositiveForm":
        """self − other, clipped within the tolerance window (NotPositive beyond it)."""
        check_same_algebra(self, other)
        return PositiveForm(self.algebra, [a - b for a, b in zip(self.densities, other.densities)], policy)

    def leq(self, other: "PositiveForm", tol: float = 1e-8) -> bool:
        """self ≤ other: every density difference PSD up to −tol."""
        check_same_algebra(self, other)
        for a, b in zip(self.densities, other.densities):
            w = np.linalg.eigvalsh(la.hermitian_part(b - a))
            if w.size and w[0] < -tol:
                return False
        return True

    def trace_distance(self, other: "PositiveForm") -> float:
        """‖ν − ρ‖₁ via the eigenvalues of the density differences."""
        check_same_algebra(self, other)
        return float(sum(np.sum(np.abs(np.linalg.eigvalsh(la.hermitian_part(a - b))))
                         for a, b in zip(self.densities, other.densities)))


# ------------------------------------------------------------
# 🔧 Operations
# ------------------------------------------------------------
def evaluate(nu: PositiveForm, x: AlgElement) -> complex:
    """ν(x) = Σ tr(a_i x_i)."""
    check_same_algebra(nu, x)
    return complex(sum(np.trace(a @ xi) for a, xi in zip(nu.densities, x.blocks)))


def mvn_precedes(p: AlgElement, q: AlgElement, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """p ≺ q; each block is a finite type-I factor, so this is blockwise rank order."""
    check_same_algebra(p, q)
    for name, proj in (("p", p), ("q", q)):
        if not proj.is_projection():
            raise NotProjection(f"{name} is not a projection")
    return all(rp <= rq for rp, rq in zip(p.ranks(policy), q.ranks(policy)))


def centralizer_contains(rho: PositiveForm, x: AlgElement, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """x ∈ M^ρ for faithful ρ, i.e. x_i c_i = c_i x_i in every block."""
    check_same_algebra(rho, x)
    if not rho.is_faithful(policy):
        raise NotFaithful("centralizer tests need a faithful form")
    for c, xi in zip(rho.densities, x.blocks):
        if la.op_norm(xi @ c - c @ xi) > COMMUTATOR_RTOL * la.op_norm(xi) * la.op_norm(c):
            return False
    return True


def conjugate_form(nu: PositiveForm, a: AlgElement, policy: TolerancePolicy = DEFAULT_POLICY) -> PositiveForm:
    """ν^a(x) = ν(a* x a); the density becomes a·density·a*."""
    check_same_algebra(nu, a)
    return PositiveForm(nu.algebra, [ai @ c @ la.dagger(ai) for ai, c in zip(a.blocks, nu.densities)], policy)
