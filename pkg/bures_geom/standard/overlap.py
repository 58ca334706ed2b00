# ============================================================
# 🔗 Overlap forms h_{ψ,φ}(z) = ⟨zψ, φ⟩ on the commutant
# Commutant elements are plain matrices applied by right
# multiplication; y ↦ R_y reverses products, so every polar
# identity is an operator composition on HS space.
# ============================================================

from dataclasses import dataclass

import numpy as np

from ..algebra.blocks import AlgElement, check_same_algebra
from ..kernel import linalg as la
from ..kernel.linalg import DEFAULT_POLICY, TolerancePolicy
from .form import HSVector

POSITIVITY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class OverlapForm:
    """h(R_y) = Σ tr(m_i y_i) with polar data h = |h|(· ∘ v).

    m            commutant-side density, m_i = φ_i* ψ_i
    v            right-acting partial isometry V_i from m_i = V_i |m_i|
    abs_density  density of |h|, (m_i m_i*)^{1/2} = V_i |m_i| V_i*
    s_h          support of |h|, V_i V_i*
    """

    m: AlgElement
    v: AlgElement
    abs_density: AlgElement
    s_h: AlgElement

    def __call__(self, z: AlgElement) -> complex:
        """h(R_z)."""
        check_same_algebra(self.m, z)
        return complex(sum(np.trace(m @ y) for m, y in zip(self.m.blocks, z.blocks)))

    def abs_value(self, z: AlgElement) -> complex:
        """|h|(R_z)."""
        check_same_algebra(self.m, z)
        return complex(sum(np.trace(d @ y) for d, y in zip(self.abs_density.blocks, z.blocks)))

    def compose_v(self, z: AlgElement) -> AlgElement:
        """The matrix of R_z ∘ v, i.e. V·z."""
        return self.v @ z


def build_overlap(psi: HSVector, phi: HSVector, policy: TolerancePolicy = DEFAULT_POLICY) -> OverlapForm:
    algebra = check_same_algebra(psi, phi)
    ms, vs, absd, supports = [], [], [], []
    for p, f in zip(psi.blocks, phi.blocks):
        m = la.dagger(f) @ p
        V, abs_m = la.polar_left(m, policy)
        ms.append(m)
        vs.append(V)
        absd.append(la.hermitian_part(V @ abs_m @ la.dagger(V)))
        supports.append(V @ la.dagger(V))
    return OverlapForm(
        m=AlgElement(algebra, ms),
        v=AlgElement(algebra, vs),
        abs_density=AlgElement(algebra, absd),
        s_h=AlgElement(algebra, supports),
    )


def functional_norm(h: OverlapForm) -> float:
    """‖h‖₁ = Σ nuclear_norm(m_i) = sup over commutant unitaries of |h(u)|."""
    return float(sum(la.nuclear_norm(m) for m in h.m.blocks))


def positive_by_norm(h: OverlapForm) -> bool:
    """h ≥ 0 read as h(1) = ‖h‖₁."""
    norm = functional_norm(h)
    return abs(h(h.m.algebra.identity()) - norm) <= POSITIVITY_RTOL * max(1.0, norm)


def is_positive(h: OverlapForm, policy: TolerancePolicy = DEFAULT_POLICY) -> bool:
    """h ≥ 0 iff every m_i is PSD.

    positive_by_norm reads the same property off h(1) = ‖h‖₁ as a separate test.
    """
    scale = max(1.0, h.m.op_norm())
    for m in h.m.blocks:
        if la.op_norm(m - la.dagger(m)) > POSITIVITY_RTOL * scale:
            return False
        w = np.linalg.eigvalsh(la.hermitian_part(m))
        if w.size and w[0] < -POSITIVITY_RTOL * scale:
            return False
    return True
