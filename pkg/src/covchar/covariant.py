"""Functions on a finite group and the covariant-function machinery.

Everything here is finite-dimensional linear algebra over C: the averaging
operator mapping functions to covariant functions, the covariant norm (an L1
norm on the quotient), the operator kernel and its annihilator, minimal-norm
lifts, and quotient norms.  Complex double precision throughout; character
values are injected from exact exponents.  Identities are expected to hold to
1e-9; rank decisions use a 1e-10 relative singular-value cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .characters import Character
from .errors import DomainMismatch, NotCovariant
from .groups import FiniteGroup, Subgroup
from .haar import HaarData

COVARIANCE_TOL = 1e-9
SVD_RTOL = 1e-10
GRAM_TOL = 1e-9


class GroupFunction:
    """A complex-valued function on a finite group, stored densely by element."""

    def __init__(self, group: FiniteGroup, values):
        values = np.asarray(values, dtype=np.complex128)
        if values.shape != (group.order,):
            raise DomainMismatch(
                f"expected {group.order} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values.view(np.float64))):
            raise ValueError("function values must be finite")
        self.group = group
        self.values = values

    @classmethod
    def zeros(cls, group: FiniteGroup) -> "GroupFunction":
        return cls(group, np.zeros(group.order, dtype=np.complex128))

    @classmethod
    def delta(cls, group: FiniteGroup, x: int) -> "GroupFunction":
        x = group._check_element(x)
        v = np.zeros(group.order, dtype=np.complex128)
        v[x] = 1.0
        return cls(group, v)

    def __add__(self, other: "GroupFunction") -> "GroupFunction":
        self._same_group(other)
        return GroupFunction(self.group, self.values + other.values)

    def __sub__(self, other: "GroupFunction") -> "GroupFunction":
        self._same_group(other)
        return GroupFunction(self.group, self.values - other.values)

    def __mul__(self, scalar) -> "GroupFunction":
        return GroupFunction(self.group, self.values * scalar)

    __rmul__ = __mul__

    def _same_group(self, other) -> None:
        if other.group is not self.group:
            raise DomainMismatch("functions live on different groups")

    def serialize(self) -> dict:
        return {"re": self.values.real.tolist(), "im": self.values.imag.tolist()}

    def __repr__(self) -> str:
        return f"GroupFunction({self.group.name}, {self.values!r})"


class CovariantFunction:
    """A function with psi(x*k) = xi(k) * psi(x) for all x in G, k in N.

    The residual is measured at construction and the constructor rejects
    anything above COVARIANCE_TOL, so instances are covariant by contract.
    """

    def __init__(self, underlying: GroupFunction, character: Character,
                 tol: float = COVARIANCE_TOL):
        g = underlying.group
        if character.domain.parent is not g:
            raise DomainMismatch("character domain belongs to a different group")
        vals = underlying.values
        char_vals = character.values_on_members()
        res = 0.0
        for pos, k in enumerate(character.domain.members):
            shifted = vals[g.table[:, k]]
            res = max(res, float(np.abs(shifted - char_vals[pos] * vals).max()))
        # |psi| must be constant on cosets; implied by covariance but checked directly
        mod_res = 0.0
        for k in character.domain.members:
            mod_res = max(mod_res, float(np.abs(np.abs(vals[g.table[:, k]]) - np.abs(vals)).max()))
        if res > tol or mod_res > tol:
            raise NotCovariant(
                f"covariance residual {max(res, mod_res):.3e} exceeds {tol:.1e}"
            )
        self.underlying = underlying
        self.character = character
        self.covariance_residual = res

    @property
    def group(self) -> FiniteGroup:
        return self.underlying.group

    @property
    def values(self) -> np.ndarray:
        return self.underlying.values

    def __repr__(self) -> str:
        return f"CovariantFunction(residual={self.covariance_residual:.2e})"


class SubspaceBasis:
    """An orthonormal basis of a subspace of functions on G.

    Orthonormality is with respect to the weighted inner product
    <f, g> = u * sum_x f(x) conj(g(x)); the Gram matrix is checked at
    construction.
    """

    def __init__(self, group: FiniteGroup, vectors, weight: float = 1.0):
        self.group = group
        self.weight = float(weight)
        self.vectors = [
            v if isinstance(v, GroupFunction) else GroupFunction(group, v)
            for v in vectors
        ]
        mat = self.matrix
        gram = self.weight * (mat @ mat.conj().T)
        if mat.shape[0] and np.abs(gram - np.eye(mat.shape[0])).max() > GRAM_TOL:
            raise ValueError("basis is not orthonormal under the weighted inner product")

    @property
    def dimension(self) -> int:
        return len(self.vectors)

    @property
    def matrix(self) -> np.ndarray:
        """Basis vectors as rows, shape (dimension, |G|)."""
        if not self.vectors:
            return np.zeros((0, self.group.order), dtype=np.complex128)
        return np.array([v.values for v in self.vectors])

    def serialize(self) -> dict:
        return {
            "dimension": self.dimension,
            "vectors": [v.serialize() for v in self.vectors],
        }


# ---------------------------------------------------------------------------
# core operations
# ---------------------------------------------------------------------------

def t_xi(f: GroupFunction, xi: Character, haar: HaarData) -> CovariantFunction:
    """Average f against the conjugated character over the subgroup.

    psi(x) = v * sum_{s in N} f(x*s) * conj(xi(s)); the result is covariant
    for xi and, at the trivial character, is the coset-wise sum.
    """
    g = f.group
    if xi.domain.parent is not g:
        raise DomainMismatch("character domain belongs to a different group")
    members = np.array(xi.domain.members, dtype=np.int64)
    coeff = np.conj(xi.values_on_members())
    psi = haar.v * (f.values[g.table[:, members]] @ coeff)
    return CovariantFunction(GroupFunction(g, psi), xi)


def t_xi_matrix(g: FiniteGroup, xi: Character, haar: HaarData) -> np.ndarray:
    """The |G| x |G| matrix of t_xi acting on value vectors."""
    if xi.domain.parent is not g:
        raise DomainMismatch("character domain belongs to a different group")
    members = xi.domain.members
    vals = xi.values_on_members()
    m = np.zeros((g.order, g.order), dtype=np.complex128)
    rows = np.arange(g.order)
    for pos, s in enumerate(members):
        m[rows, g.table[:, s]] = haar.v * np.conj(vals[pos])
    return m


def t_n(f: GroupFunction, n: Subgroup, haar: HaarData) -> GroupFunction:
    """Coset-wise integral T_N(f)(xN) = v * sum_{s in N} f(x*s), on the quotient."""
    g = f.group
    if n.parent is not g:
        raise DomainMismatch("subgroup belongs to a different group")
    decomp = n.cosets
    members = np.array(n.members, dtype=np.int64)
    reps = decomp.representatives
    vals = haar.v * f.values[g.table[np.ix_(reps, members)]].sum(axis=1)
    return GroupFunction(decomp.quotient, vals)


def l1_norm(f: GroupFunction, haar: HaarData) -> float:
    """u-weighted L1 norm on G."""
    return float(haar.u * np.abs(f.values).sum())


def norm_one(psi: CovariantFunction, haar: HaarData) -> float:
    """Covariant norm: the quotient L1 norm of |psi|, which is coset-constant."""
    decomp = psi.character.domain.cosets
    return float(haar.w * np.abs(psi.values[decomp.representatives]).sum())


def translate(f: GroupFunction, direction: str, y: int) -> GroupFunction:
    """Left translate (L_y f)(z) = f(y^{-1} z) or right translate (R_y f)(z) = f(z*y)."""
    g = f.group
    y = g._check_element(y)
    if direction == "left":
        return GroupFunction(g, f.values[g.table[g.inverse[y]]])
    if direction == "right":
        return GroupFunction(g, f.values[g.table[:, y]])
    raise ValueError(f"direction must be 'left' or 'right', got {direction!r}")


def pairing(f: GroupFunction, g2: GroupFunction, haar: HaarData) -> complex:
    """Sesquilinear pairing <f, g> = u * sum_x f(x) * conj(g(x))."""
    if f.group is not g2.group:
        raise DomainMismatch("pairing requires functions on the same group")
    return complex(haar.u * np.vdot(g2.values, f.values))


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

def _nullspace_rows(mat: np.ndarray) -> np.ndarray:
    """Orthonormal rows r with mat @ r = 0, rank by relative SVD cutoff.

    Nullspace vectors are columns of V, i.e. the conjugates of vh rows.
    """
    m, n = mat.shape
    if m == 0:
        return np.eye(n, dtype=np.complex128)
    _, s, vh = np.linalg.svd(mat, full_matrices=True)
    cutoff = SVD_RTOL * (s[0] if s.size else 0.0)
    rank = int((s > cutoff).sum())
    return np.conj(vh[rank:])


def _row_space_rows(mat: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the row space of mat."""
    m, n = mat.shape
    if m == 0:
        return np.zeros((0, n), dtype=np.complex128)
    _, s, vh = np.linalg.svd(mat, full_matrices=False)
    cutoff = SVD_RTOL * (s[0] if s.size else 0.0)
    rank = int((s > cutoff).sum())
    return vh[:rank]


def _rep_row_matrix(g: FiniteGroup, n: Subgroup, xi: Character, haar: HaarData) -> np.ndarray:
    """t_xi restricted to coset representatives: a |G/N| x |G| matrix.

    Covariance makes the values on representatives determine the whole image,
    so its nullspace is exactly the kernel of t_xi.
    """
    decomp = n.cosets
    members = xi.domain.members
    vals = xi.values_on_members()
    mat = np.zeros((decomp.n_cosets, g.order), dtype=np.complex128)
    for pos, s in enumerate(members):
        mat[np.arange(decomp.n_cosets), g.table[decomp.representatives, s]] = (
            haar.v * np.conj(vals[pos])
        )
    return mat


def kernel_basis(g: FiniteGroup, n: Subgroup, xi: Character, haar: HaarData) -> SubspaceBasis:
    """Orthonormal basis of {f : t_xi(f) = 0}; dimension is |G| - |G/N|."""
    rows = _nullspace_rows(_rep_row_matrix(g, n, xi, haar))
    return SubspaceBasis(g, rows / np.sqrt(haar.u), weight=haar.u)


def linfty_xi_basis(g: FiniteGroup, n: Subgroup, xi: Character,
                    haar: HaarData | None = None) -> SubspaceBasis:
    """Orthonormal basis of {psi : R_k psi = xi(k) psi for all k in N}.

    This is the covariance condition, so the dimension is the number of
    cosets.  The optional weights fix the inner-product normalization.
    """
    u = haar.u if haar is not None else 1.0
    members = xi.domain.members
    vals = xi.values_on_members()
    blocks = []
    eye = np.eye(g.order, dtype=np.complex128)
    for pos, k in enumerate(members):
        if k == g.identity:
            continue
        perm = eye[g.table[:, k]]  # row y picks psi(y*k)
        blocks.append(perm - vals[pos] * eye)
    if blocks:
        constraint = np.vstack(blocks)
    else:
        constraint = np.zeros((0, g.order), dtype=np.complex128)
    rows = _nullspace_rows(constraint)
    return SubspaceBasis(g, rows / np.sqrt(u), weight=u)


def annihilator_basis(kernel: SubspaceBasis, haar: HaarData) -> SubspaceBasis:
    """Orthonormal basis of {g : <f, g> = 0 for all f in the kernel}."""
    rows = _nullspace_rows(np.conj(kernel.matrix))
    return SubspaceBasis(kernel.group, rows / np.sqrt(haar.u), weight=haar.u)


@dataclass
class TranslateSpan:
    """Span of the translation differences R_k(delta_x) - xi(k) delta_x.

    The span is always contained in the kernel of t_xi (asserted via the
    generator residual); whether it equals the kernel is reported, not
    asserted.
    """

    basis: SubspaceBasis
    kernel_dimension: int
    equals_kernel: bool
    generator_residual: float
    comparison_residual: float


def span_translates_basis(g: FiniteGroup, n: Subgroup, xi: Character,
                          haar: HaarData) -> TranslateSpan:
    """Basis of span{R_k f - Delta_N(k^{-1}) xi(k) f} over k in N, f in delta basis."""
    members = xi.domain.members
    vals = xi.values_on_members()
    eye = np.eye(g.order, dtype=np.complex128)
    gens = []
    for pos, k in enumerate(members):
        # R_k delta_x = delta_{x * k^{-1}}; row x is the generator for (k, x)
        shifted = eye[g.table[:, g.inverse[k]]]
        gens.append(shifted - haar.delta_N(g.inv(k)) * vals[pos] * eye)
    gen_matrix = np.vstack(gens)
    op = t_xi_matrix(g, xi, haar)
    generator_residual = float(np.abs(gen_matrix @ op.T).max())
    if generator_residual > COVARIANCE_TOL:
        raise AssertionError(
            f"translation generators leave the kernel (residual {generator_residual:.3e})"
        )
    rows = _row_space_rows(gen_matrix)
    basis = SubspaceBasis(g, rows / np.sqrt(haar.u), weight=haar.u)
    kb = kernel_basis(g, n, xi, haar)
    comparison = subspace_match_residual(basis, kb)
    equals = basis.dimension == kb.dimension and comparison <= GRAM_TOL
    return TranslateSpan(
        basis=basis,
        kernel_dimension=kb.dimension,
        equals_kernel=equals,
        generator_residual=generator_residual,
        comparison_residual=comparison,
    )


def subspace_match_residual(b1: SubspaceBasis, b2: SubspaceBasis) -> float:
    """Max projection defect between two subspaces, symmetric in both directions."""
    if b1.group is not b2.group:
        raise DomainMismatch("bases live on different groups")
    res = 0.0
    for a, b in ((b1, b2), (b2, b1)):
        if a.dimension == 0:
            continue
        if b.dimension == 0:
            res = max(res, 1.0)
            continue
        am, bm = a.matrix, b.matrix
        coeff = a.weight * (am @ bm.conj().T)
        defect = am - coeff @ bm
        norms = np.sqrt(a.weight * (np.abs(defect) ** 2).sum(axis=1))
        res = max(res, float(norms.max()))
    return res


# ---------------------------------------------------------------------------
# lifts and quotient norms
# ---------------------------------------------------------------------------

def minimal_lift(psi: CovariantFunction, haar: HaarData) -> GroupFunction:
    """A preimage of psi under t_xi attaining the covariant norm.

    Multiplies psi by h = (1/v) * indicator(coset representatives), for which
    the coset-wise integral of h is identically 1, so t_xi(lift) = psi exactly
    and the L1 norm of the lift equals norm_one(psi).
    """
    decomp = psi.character.domain.cosets
    out = np.zeros(psi.group.order, dtype=np.complex128)
    reps = decomp.representatives
    out[reps] = psi.values[reps] / haar.v
    return GroupFunction(psi.group, out)


def quotient_norm(f: GroupFunction, xi: Character, haar: HaarData) -> float:
    """Distance from f to the kernel in L1, via the quotient-isometry identity.

    Equals norm_one(t_xi(f)); the descent falsifier (l1_descent_min) may be
    used to probe that no kernel coset point does better.
    """
    return norm_one(t_xi(f, xi, haar), haar)


def l1_descent_min(f_values: np.ndarray, kernel_rows: np.ndarray, u: float,
                   restarts: int, iters: int, rng: np.random.Generator) -> float:
    """Best weighted L1 value of f + (kernel combination) found by descent.

    Normalized-subgradient descent with diminishing steps and random restarts.
    This is a falsifier, not a prover: it can only ever report a value at a
    feasible point, so a value below a claimed infimum exposes a bug.
    """
    base = float(u * np.abs(f_values).sum())
    d = kernel_rows.shape[0]
    if d == 0 or restarts < 1:
        return base
    kt = kernel_rows.T  # columns span the kernel
    ref = float(np.linalg.norm(f_values)) + 1e-12
    z = rng.standard_normal((d, restarts)) + 1j * rng.standard_normal((d, restarts))
    z *= ref * 10.0 ** rng.uniform(-1.5, 0.5, restarts)
    z[:, 0] = 0.0
    best = np.full(restarts, np.inf)
    step0 = 0.5 * ref
    for t in range(iters):
        r = f_values[:, None] + kt @ z
        h = u * np.abs(r).sum(axis=0)
        np.minimum(best, h, out=best)
        sgn = r / np.maximum(np.abs(r), 1e-300)
        grad = u * (kt.conj().T @ sgn)
        gnorm = np.sqrt((np.abs(grad) ** 2).sum(axis=0)) + 1e-300
        z = z - (step0 / np.sqrt(t + 1.0) / gnorm) * grad
    r = f_values[:, None] + kt @ z
    np.minimum(best, u * np.abs(r).sum(axis=0), out=best)
    return float(min(best.min(), base))


def kernel_descent_min(f: GroupFunction, xi: Character, haar: HaarData,
                       restarts: int = 500, iters: int = 150,
                       seed: int = 0) -> float:
    """Descent search for small L1 norms on the kernel coset of f."""
    g = f.group
    rows = _nullspace_rows(_rep_row_matrix(g, xi.domain, xi, haar))
    rng = np.random.default_rng(seed)
    return l1_descent_min(f.values, rows, haar.u, restarts, iters, rng)
