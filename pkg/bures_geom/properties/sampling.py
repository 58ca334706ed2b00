# ============================================================
# 🎲 Random instances for the property suites
# ============================================================

from collections.abc import Sequence

import numpy as np
from scipy import linalg as sla

from ..algebra.blocks import AlgElement, Algebra, PositiveForm
from ..kernel import linalg as la
from ..standard.form import HSVector, StandardForm


def ginibre(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    return (rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))) / np.sqrt(2)


def random_algebra(dims: Sequence[int], rng: np.random.Generator) -> Algebra:
    """One block, or two, with sizes drawn from dims."""
    first = int(rng.choice(dims))
    if rng.random() < 0.5:
        return Algebra([first])
    return Algebra([first, int(rng.choice(dims))])


def random_density(n: int, rng: np.random.Generator, rank: int | None = None, floor: float = 0.0) -> np.ndarray:
    """GG* with G of n×rank, plus floor·1, trace 1."""
    G = ginibre(n, rank if rank is not None else n, rng)
    a = G @ la.dagger(G) + floor * np.eye(n)
    return la.hermitian_part(a / np.trace(a).real)


def random_form(algebra: Algebra, rng: np.random.Generator, *, faithful: bool = False,
                rank_deficient: bool | None = None, floor: float = 0.0) -> PositiveForm:
    """Unit-trace form; rank-deficient in each block with probability ½ unless fixed."""
    weights = rng.dirichlet(np.ones(len(algebra.block_dims)))
    densities = []
    for n, w in zip(algebra.block_dims, weights):
        deficient = rank_deficient if rank_deficient is not None else rng.random() < 0.5
        rank = n if faithful or not deficient or n == 1 else int(rng.integers(1, n))
        densities.append(w * random_density(n, rng, rank, floor if faithful else 0.0))
    return PositiveForm(algebra, densities)


def commuting_pair(algebra: Algebra, rng: np.random.Generator,
                   faithful_rho: bool = False) -> tuple[PositiveForm, PositiveForm]:
    """Densities diagonal in a common random basis; some eigenvalues of ν vanish."""
    nus, rhos = [], []
    for n in algebra.block_dims:
        U = la.haar_unitary(n, rng)
        a = rng.random(n) * (rng.random(n) < 0.7)
        c = rng.random(n)
        c = c + 0.05 if faithful_rho else c * (rng.random(n) < 0.8)
        nus.append((U * a) @ la.dagger(U))
        rhos.append((U * c) @ la.dagger(U))
    return PositiveForm(algebra, nus), PositiveForm(algebra, rhos)


def random_element(algebra: Algebra, rng: np.random.Generator) -> AlgElement:
    return AlgElement(algebra, [ginibre(n, n, rng) for n in algebra.block_dims])


def random_vector(algebra: Algebra, rng: np.random.Generator, rank: int | None = None) -> HSVector:
    blocks = []
    for n in algebra.block_dims:
        r = n if rank is None else min(rank, n)
        blocks.append(ginibre(n, r, rng) @ ginibre(r, n, rng) / n)
    return HSVector(algebra, blocks)


def random_positive_invertible(algebra: Algebra, rng: np.random.Generator, spread: float = 1.0) -> AlgElement:
    """exp(spread·H) for a random Hermitian H."""
    blocks = []
    for n in algebra.block_dims:
        G = ginibre(n, n, rng)
        blocks.append(sla.expm(spread * la.hermitian_part(G) / np.sqrt(n)))
    return AlgElement(algebra, [la.hermitian_part(b) for b in blocks])


def random_unitary(algebra: Algebra, rng: np.random.Generator) -> AlgElement:
    return AlgElement(algebra, [la.haar_unitary(n, rng) for n in algebra.block_dims])


def random_omega_blocks(algebra: Algebra, rng: np.random.Generator, psd: bool) -> list[np.ndarray]:
    """Well-conditioned invertible blocks; PSD, or PSD times a Haar unitary."""
    blocks = []
    for n in algebra.block_dims:
        G = ginibre(n, n, rng)
        P = G @ la.dagger(G) / n + np.eye(n)
        blocks.append(P if psd else P @ la.haar_unitary(n, rng))
    return blocks


def random_standard_form(algebra: Algebra, rng: np.random.Generator, psd: bool | None = None,
                         policy: la.TolerancePolicy = la.DEFAULT_POLICY) -> StandardForm:
    psd = bool(rng.random() < 0.5) if psd is None else psd
    return StandardForm(HSVector(algebra, random_omega_blocks(algebra, rng, psd)), policy)


def random_projection(n: int, rank: int, rng: np.random.Generator) -> np.ndarray:
    Q = la.haar_unitary(n, rng)[:, :rank]
    return Q @ la.dagger(Q)


def split_below(form: PositiveForm, rng: np.random.Generator) -> PositiveForm:
    """Random μ with 0 ≤ μ ≤ form: density √a K √a with 0 ≤ K ≤ 1."""
    densities = []
    for a in form.densities:
        n = a.shape[0]
        U = la.haar_unitary(n, rng)
        K = (U * rng.random(n)) @ la.dagger(U)
        sa = la.sqrt_psd(a)
        densities.append(sa @ K @ sa)
    return PositiveForm(form.algebra, densities)
