# ============================================================
# 🌀 Hilbert–Schmidt standard form
# M acts by left multiplication on HS matrices, M′ by right
# multiplication. Modular data of an invertible Ω, the natural
# cone, cone representatives and the cone-change unitary.
# ============================================================

import numpy as np

from ..algebra.blocks import AlgElement, Algebra, Blockwise, PositiveForm, check_same_algebra
from ..errors import DomainError, SingularOmega
from ..kernel import linalg as la
from ..kernel.linalg import DEFAULT_POLICY, TolerancePolicy

VECTOR_RTOL = 1e-9


class HSVector(Blockwise):
    """Vector of the HS space, ⟨ξ, η⟩ = Σ tr(η_i* ξ_i)."""

    __slots__ = ()

    def norm(self) -> float:
        return self.frobenius_norm()


def hs_inner(xi: HSVector, eta: HSVector) -> complex:
    check_same_algebra(xi, eta)
    return complex(sum(np.vdot(e, x) for x, e in zip(xi.blocks, eta.blocks)))


def left_act(x: AlgElement, xi: HSVector) -> HSVector:
    check_same_algebra(x, xi)
    return HSVector(xi.algebra, [a @ v for a, v in zip(x.blocks, xi.blocks)])


def right_act(y: AlgElement, xi: HSVector) -> HSVector:
    check_same_algebra(y, xi)
    return HSVector(xi.algebra, [v @ b for b, v in zip(y.blocks, xi.blocks)])


def vector_form(xi: HSVector, policy: TolerancePolicy = DEFAULT_POLICY) -> PositiveForm:
    """The form ν_ξ(x) = ⟨xξ, ξ⟩, density ξξ*."""
    return PositiveForm(xi.algebra, [v @ la.dagger(v) for v in xi.blocks], policy)


# ------------------------------------------------------------
# 🧵 Fibres and supports
# ------------------------------------------------------------
def fibre_contains(psi: HSVector, nu: PositiveForm) -> bool:
    """ψ implements ν: ψ_i ψ_i* = a_i in every block."""
    check_same_algebra(psi, nu)
    for v, a in zip(psi.blocks, nu.densities):
        if la.op_norm(v @ la.dagger(v) - a) > VECTOR_RTOL * max(1.0, la.op_norm(a)):
            return False
    return True


def fibre_sample(nu: PositiveForm, seed: int | np.random.Generator | None = None,
                 policy: TolerancePolicy = DEFAULT_POLICY) -> HSVector:
    """√a·W with W Haar-distributed; in finite blocks the unitary orbit is the whole fibre."""
    rng = la.as_rng(seed)
    return HSVector(nu.algebra, [la.sqrt_psd(a, policy) @ la.haar_unitary(a.shape[0], rng)
                                 for a in nu.densities])


def support_left(chi: HSVector, policy: TolerancePolicy = DEFAULT_POLICY) -> AlgElement:
    """p(χ): range projection of χχ*, acting from the left."""
    return AlgElement(chi.algebra, [la.support_proj(v, "left", policy) for v in chi.blocks])


def support_right(chi: HSVector, policy: TolerancePolicy = DEFAULT_POLICY) -> AlgElement:
    """p′(χ): support of χ*χ, acting from the right."""
    return AlgElement(chi.algebra, [la.support_proj(v, "right", policy) for v in chi.blocks])


# ------------------------------------------------------------
# 🏛️ Standard form with a cyclic and separating Ω
# ------------------------------------------------------------
class StandardForm:
    """HS standard form with an invertible (cyclic and separating) Ω."""

    __slots__ = ("algebra", "omega", "policy", "_unitaries", "_inverses", "_psd")

    def __init__(self, omega: HSVector, policy: TolerancePolicy = DEFAULT_POLICY):
        unitaries, inverses = [], []
        for w in omega.blocks:
            if la.numerical_rank(w, policy) < w.shape[0]:
                raise SingularOmega("Ω must have full numerical rank in every block")
            V, _ = la.polar_left(w, policy)
            unitaries.append(V)
            inverses.append(np.linalg.inv(w))
        self.algebra = omega.algebra
        self.omega = omega
        self.policy = policy
        self._unitaries = tuple(unitaries)
        self._inverses = tuple(inverses)
        self._psd = all(la.is_psd(w, policy) for w in omega.blocks)

    @classmethod
    def default(cls, algebra: Algebra, policy: TolerancePolicy = DEFAULT_POLICY) -> "StandardForm":
        """Blockwise identity scaled to unit HS norm."""
        scale = 1.0 / np.sqrt(algebra.dimension)
        return cls(HSVector(algebra, [scale * np.eye(n) for n in algebra.block_dims]), policy)

    @property
    def omega_is_psd(self) -> bool:
        return self._psd

    @property
    def cone_unitaries(self) -> tuple[np.ndarray, ...]:
        """u = (ΩΩ*)^{-1/2}Ω per block; the cone is {m·u : m ≥ 0}."""
        return self._unitaries

    def __repr__(self) -> str:
        return f"StandardForm({self.algebra.block_dims}, psd={self._psd})"


class ModularOperators:
    """S, F, Δ, Δ^{it} and J of (M, Ω) as explicit blockwise maps."""

    def __init__(self, std: StandardForm):
        self.std = std
        policy = std.policy
        left = [w @ la.dagger(w) for w in std.omega.blocks]
        right = [la.dagger(w) @ w for w in std.omega.blocks]
        self._left = tuple(left)
        self._right = tuple(right)
        self._right_inv = tuple(la.cholesky_inverse(r) for r in right)
        self._policy = policy

    def _map(self, xi: HSVector, fn) -> HSVector:
        check_same_algebra(xi, self.std.omega)
        return HSVector(xi.algebra, [fn(i, v) for i, v in enumerate(xi.blocks)])

    def S(self, xi: HSVector) -> HSVector:
        """xΩ ↦ x*Ω, i.e. ξ ↦ Ω^{-*} ξ* Ω."""
        inv, om = self.std._inverses, self.std.omega.blocks
        return self._map(xi, lambda i, v: la.dagger(inv[i]) @ la.dagger(v) @ om[i])

    def F(self, xi: HSVector) -> HSVector:
        """x′Ω ↦ x′*Ω, i.e. ξ ↦ Ω ξ* Ω^{-*}."""
        inv, om = self.std._inverses, self.std.omega.blocks
        return self._map(xi, lambda i, v: om[i] @ la.dagger(v) @ la.dagger(inv[i]))

    def delta(self, xi: HSVector) -> HSVector:
        return self._map(xi, lambda i, v: self._left[i] @ v @ self._right_inv[i])

    def delta_power(self, xi: HSVector, alpha: float) -> HSVector:
        p = self._policy
        return self._map(xi, lambda i, v: la.psd_power(self._left[i], alpha, p) @ v
                         @ la.psd_power(self._right[i], -alpha, p))

    def delta_it(self, xi: HSVector, t: float) -> HSVector:
        p = self._policy
        return self._map(xi, lambda i, v: la.power_it(self._left[i], t, p) @ v
                         @ la.power_it(self._right[i], t, p, sign=-1))

    def J(self, xi: HSVector) -> HSVector:
        u = self.std.cone_unitaries
        return self._map(xi, lambda i, v: u[i] @ la.dagger(v) @ u[i])


def modular(std: StandardForm) -> ModularOperators:
    return ModularOperators(std)


# ------------------------------------------------------------
# 🔺 Natural cone
# ------------------------------------------------------------
def cone_rep(std: StandardForm, nu: PositiveForm) -> HSVector:
    """ξ_ν ∈ P♮: √a·u per block (√a itself when Ω ≥ 0)."""
    check_same_algebra(std.omega, nu)
    return HSVector(nu.algebra, [la.sqrt_psd(a, std.policy) @ u
                                 for a, u in zip(nu.densities, std.cone_unitaries)])


def _cone_part(std: StandardForm, xi: HSVector) -> list[np.ndarray]:
    check_same_algebra(std.omega, xi)
    return [v @ la.dagger(u) for v, u in zip(xi.blocks, std.cone_unitaries)]


def cone_contains(std: StandardForm, xi: HSVector) -> bool:
    """ξ ∈ P♮ iff ξ·u* is PSD."""
    for X in _cone_part(std, xi):
        scale = max(1.0, la.op_norm(X))
        if la.op_norm(X - la.dagger(X)) > VECTOR_RTOL * scale:
            return False
        w = np.linalg.eigvalsh(la.hermitian_part(X))
        if w.size and w[0] < -VECTOR_RTOL * scale:
            return False
    return True


def cone_split(std: StandardForm, xi: HSVector) -> tuple[HSVector, HSVector]:
    """ξ = ξ₊ − ξ₋ with ξ± ∈ P♮ orthogonal, for a J-fixed ξ."""
    plus, minus = [], []
    for X, u in zip(_cone_part(std, xi), std.cone_unitaries):
        if la.op_norm(X - la.dagger(X)) > VECTOR_RTOL * max(1.0, la.op_norm(X)):
            raise DomainError("only J-fixed vectors split into cone parts")
        w, V = np.linalg.eigh(la.hermitian_part(X))
        plus.append((V * np.clip(w, 0, None)) @ la.dagger(V) @ u)
        minus.append((V * np.clip(-w, 0, None)) @ la.dagger(V) @ u)
    return HSVector(xi.algebra, plus), HSVector(xi.algebra, minus)


def cone_unitary(std: StandardForm, omega_prime: HSVector) -> AlgElement:
    """U(Ω′, Ω) as a right-acting unitary u′ = (Ω′Ω′*)^{-1/2}Ω′, for Ω ≥ 0."""
    if not std.omega_is_psd:
        raise DomainError("the cone-change unitary is taken relative to a positive Ω")
    check_same_algebra(std.omega, omega_prime)
    return AlgElement(omega_prime.algebra, StandardForm(omega_prime, std.policy).cone_unitaries)
