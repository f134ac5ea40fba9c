"""Bilinear forms on C(K)^tau: orthogonality, decomposition and complexification.

A form V is stored by its matrix over the canonical basis, V(b_i, b_j) = M[i][j].
Because two elements are orthogonal exactly when their orbit supports are
disjoint, V is orthogonal exactly when M vanishes between coordinates of
different orbits. Every orthogonal V can be written as

    V(x, y) = phi1(x y) + phi2(x y*)

and `decompose` builds such a pair with the functionals
psi1(x) = V(x, 1), psi2(x) = V(1, x) and psi4(x) = V(x u0*, u0).
"""

import itertools
import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

from src import linalg
from src.algebra_core import (
    ONE,
    ZERO,
    AlgebraElement,
    CRational,
    FiniteSpace,
    I,
    canonical_basis,
    coords,
    element,
    indicator,
    involution,
    is_orthogonal_pair,
    multiply,
    orthogonal_pairs,
    skew_indicator,
    u0,
    unit,
)
from src.errors import DimensionMismatch, InvariantViolation, NotOrthogonal, NotSymmetric, SpaceMismatch

# Above this many points, projection pairs and subset identities are sampled.
EXHAUSTIVE_POINTS = 12


@lru_cache(maxsize=256)
def _basis(space: FiniteSpace) -> tuple[AlgebraElement, ...]:
    return canonical_basis(space)


@lru_cache(maxsize=256)
def _products(space: FiniteSpace) -> tuple[tuple[AlgebraElement, ...], ...]:
    """b_i b_j for all canonical basis pairs."""
    basis = _basis(space)
    return tuple(tuple(multiply(bi, bj) for bj in basis) for bi in basis)


@lru_cache(maxsize=256)
def _star_products(space: FiniteSpace) -> tuple[tuple[AlgebraElement, ...], ...]:
    """b_i b_j* for all canonical basis pairs."""
    basis = _basis(space)
    return tuple(tuple(multiply(bi, involution(bj)) for bj in basis) for bi in basis)


def _skew_signs(space: FiniteSpace) -> tuple[int, ...]:
    """b_k* = sign_k b_k: +1 on s-vectors, -1 on u-vectors."""
    return tuple(-1 if b.kind == "u" else 1 for b in space.basis)


@dataclass(frozen=True)
class Functional:
    """A real-linear functional, stored by its values on the canonical basis.

    Attributes:
        space: The underlying space.
        coefficients: f(b_k) for every canonical basis element b_k.
    """

    space: FiniteSpace
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coefficients) != self.space.dim:
            raise DimensionMismatch(f"Expected {self.space.dim} coefficients, got {len(self.coefficients)}")
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))

    @classmethod
    def zero(cls, space: FiniteSpace) -> "Functional":
        return cls(space, (Fraction(0),) * space.dim)

    @classmethod
    def from_function(cls, space: FiniteSpace, fn: Callable[[AlgebraElement], Fraction]) -> "Functional":
        """Tabulates a real-linear function on the canonical basis."""
        return cls(space, tuple(Fraction(fn(b)) for b in _basis(space)))

    def __call__(self, x: AlgebraElement) -> Fraction:
        if x.space != self.space:
            raise SpaceMismatch("Functional and element live on different spaces")
        return sum((c * v for c, v in zip(self.coefficients, coords(x))), Fraction(0))

    def _check(self, other: "Functional") -> None:
        if other.space != self.space:
            raise SpaceMismatch("Functionals live on different spaces")

    def __add__(self, other: "Functional") -> "Functional":
        self._check(other)
        return Functional(self.space, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "Functional") -> "Functional":
        self._check(other)
        return Functional(self.space, tuple(a - b for a, b in zip(self.coefficients, other.coefficients)))

    def __neg__(self) -> "Functional":
        return self.scale(-1)

    def scale(self, factor) -> "Functional":
        return Functional(self.space, tuple(c * Fraction(factor) for c in self.coefficients))

    def star(self) -> "Functional":
        """The functional x -> f(x*)."""
        return Functional(self.space, tuple(c * s for c, s in zip(self.coefficients, _skew_signs(self.space))))


@dataclass(frozen=True)
class BilinearForm:
    """A real bilinear form V: A x A -> R.

    Attributes:
        space: The underlying space.
        matrix: V(b_i, b_j) over the canonical basis.
    """

    space: FiniteSpace
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        n = self.space.dim
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise DimensionMismatch(f"Expected a {n}x{n} matrix")
        object.__setattr__(self, "matrix", tuple(tuple(Fraction(v) for v in row) for row in self.matrix))

    @classmethod
    def zero(cls, space: FiniteSpace) -> "BilinearForm":
        return cls(space, linalg.zeros(space.dim, space.dim))

    @classmethod
    def from_function(
        cls, space: FiniteSpace, fn: Callable[[AlgebraElement, AlgebraElement], Fraction]
    ) -> "BilinearForm":
        """Tabulates a real-bilinear function on all canonical basis pairs."""
        basis = _basis(space)
        return cls(space, tuple(tuple(Fraction(fn(bi, bj)) for bj in basis) for bi in basis))

    def __call__(self, x: AlgebraElement, y: AlgebraElement) -> Fraction:
        if x.space != self.space or y.space != self.space:
            raise SpaceMismatch("Form and elements live on different spaces")
        cy = coords(y)
        return sum(
            (cx * sum((m * c for m, c in zip(row, cy)), Fraction(0)) for cx, row in zip(coords(x), self.matrix)),
            Fraction(0),
        )

    def transpose(self) -> "BilinearForm":
        return BilinearForm(self.space, linalg.transpose(self.matrix))

    def is_symmetric(self) -> bool:
        return self.matrix == linalg.transpose(self.matrix)


@dataclass(frozen=True)
class FormDecomposition:
    """A representation V(x, y) = phi1(x y) + phi2(x y*), checked on construction."""

    form: BilinearForm
    phi1: Functional
    phi2: Functional

    def __post_init__(self):
        if not verify_representation(self.form, self.phi1, self.phi2):
            raise InvariantViolation("phi1(xy) + phi2(xy*) does not reproduce the form")


@dataclass(frozen=True)
class ComplexForm:
    """A complex bilinear form on C(K), stored over the point basis {chi_t}.

    Attributes:
        space: The underlying space.
        matrix: W(chi_a, chi_b) for all points a, b in point order.
    """

    space: FiniteSpace
    matrix: tuple[tuple[CRational, ...], ...]

    def entry(self, a: str, b: str) -> CRational:
        return self.matrix[self.space.index(a)][self.space.index(b)]

    def __call__(self, h: Sequence[CRational], k: Sequence[CRational]) -> CRational:
        """Evaluates on complex functions given by their values in point order."""
        total = ZERO
        for hv, row in zip(h, self.matrix):
            for kv, w in zip(k, row):
                total = total + hv * kv * w
        return total


def is_orthogonal_form(V: BilinearForm) -> bool:
    """True iff V vanishes on every basis pair with disjoint orbit supports."""
    orbit = V.space.coord_orbits
    return all(
        V.matrix[i][j] == 0 for i in range(V.space.dim) for j in range(V.space.dim) if orbit[i] != orbit[j]
    )


def orthogonality_oracle(
    V: BilinearForm, trials: int = 100, seed: int = 0
) -> Optional[tuple[AlgebraElement, AlgebraElement]]:
    """Searches orthogonal pairs (x, y) with V(x, y) != 0 or V(x, y*) != 0.

    Pairs are built with disjoint orbit supports and re-checked pointwise before
    use, so the search does not rely on the matrix criterion of `is_orthogonal_form`.

    Args:
        V: The form to test.
        trials: Number of random pairs tried after the basis pairs.
        seed: Seed of the random pairs.

    Returns:
        The first counterexample found, or None.
    """
    for x, y in orthogonal_pairs(V.space, trials, seed):
        if not is_orthogonal_pair(x, y):
            raise InvariantViolation("Generated pair is not orthogonal")
        if V(x, y) != 0 or V(x, involution(y)) != 0:
            return x, y
    return None


def _require_orthogonal(V: BilinearForm) -> None:
    if not is_orthogonal_form(V):
        counterexample = orthogonality_oracle(V, trials=0)
        raise NotOrthogonal("The form is not orthogonal", counterexample)


def compose_form(g1: Functional, g2: Functional) -> BilinearForm:
    """The form (x, y) -> g1(x y) + g2(x y*)."""
    if g1.space != g2.space:
        raise SpaceMismatch("Functionals live on different spaces")
    space = g1.space
    products, star_products = _products(space), _star_products(space)
    return BilinearForm(
        space,
        tuple(
            tuple(g1(products[i][j]) + g2(star_products[i][j]) for j in range(space.dim)) for i in range(space.dim)
        ),
    )


def verify_representation(V: BilinearForm, g1: Functional, g2: Functional) -> bool:
    """Checks V(x, y) = g1(x y) + g2(x y*) on all basis pairs (hence everywhere)."""
    return compose_form(g1, g2).matrix == V.matrix


def decompose(V: BilinearForm) -> FormDecomposition:
    """Writes an orthogonal form as V(x, y) = phi1(x y) + phi2(x y*).

    Raises:
        NotOrthogonal: If V is not orthogonal; carries an orthogonal counterexample pair.
    """
    _require_orthogonal(V)
    space = V.space
    one, w = unit(space), u0(space)
    w_star = involution(w)
    psi1 = Functional.from_function(space, lambda x: V(x, one))
    psi2 = Functional.from_function(space, lambda x: V(one, x))
    psi4 = Functional.from_function(space, lambda x: V(multiply(x, w_star), w))

    quarter = Fraction(1, 4)
    f1 = (psi1.scale(2) + psi2 + psi4).scale(quarter)
    f2 = (psi1.scale(2) - psi2 - psi4).scale(quarter)
    f3 = (psi2 - psi4).scale(quarter)
    f4 = (psi4 - psi2).scale(quarter)
    decomposition = FormDecomposition(V, f1 + f4.star(), f2 + f3.star())
    logging.debug(f"Decomposed form on {space.dim} points")
    return decomposition


@dataclass(frozen=True)
class RemarkConditions:
    """The three conditions under which two pairs represent the same form."""

    sum_equal: bool
    skew_equal: bool
    skew_product_equal: bool

    @property
    def all_hold(self) -> bool:
        return self.sum_equal and self.skew_equal and self.skew_product_equal


def remark_conditions(p: tuple[Functional, Functional], q: tuple[Functional, Functional]) -> RemarkConditions:
    """Evaluates: p1 + p2 = q1 + q2, and p1 - p2 agrees with q1 - q2 on skew z and on products z w."""
    space = p[0].space
    for f in (*p, *q):
        if f.space != space:
            raise SpaceMismatch("Functionals live on different spaces")
    total = (p[0] + p[1]) - (q[0] + q[1])
    diff = (p[0] - p[1]) - (q[0] - q[1])
    skew = [skew_indicator(space, [t]) for t in space.representatives]
    return RemarkConditions(
        sum_equal=all(c == 0 for c in total.coefficients),
        skew_equal=all(diff(z) == 0 for z in skew),
        skew_product_equal=all(diff(multiply(z, w)) == 0 for z in skew for w in skew),
    )


def representation_equivalent(p: tuple[Functional, Functional], q: tuple[Functional, Functional]) -> bool:
    """True iff the pairs p and q induce the same bilinear form."""
    conditions = remark_conditions(p, q)
    same = compose_form(*p).matrix == compose_form(*q).matrix
    if same != conditions.all_hold:
        raise InvariantViolation(f"Form equality ({same}) disagrees with the uniqueness conditions {conditions}")
    return same


def _composition_system(space: FiniteSpace, with_phi2: bool, within_orbits: bool):
    """Rows of the linear map (g1[, g2]) -> compose_form(g1, g2) over selected basis pairs."""
    products, star_products = _products(space), _star_products(space)
    orbit = space.coord_orbits
    pairs = [
        (i, j)
        for i in range(space.dim)
        for j in range(space.dim)
        if not within_orbits or orbit[i] == orbit[j]
    ]
    rows = []
    for i, j in pairs:
        row = list(coords(products[i][j]))
        if with_phi2:
            row += list(coords(star_products[i][j]))
        rows.append(row)
    return pairs, rows


def representation_space_dim(V: BilinearForm) -> int:
    """Dimension of the affine set {(g1, g2) : compose_form(g1, g2) = V}.

    Cross-orbit entries vanish on both sides for orthogonal V, so only the
    within-orbit equations enter the system.
    """
    _require_orthogonal(V)
    pairs, rows = _composition_system(V.space, with_phi2=True, within_orbits=True)
    unknowns = 2 * V.space.dim
    rhs = [V.matrix[i][j] for i, j in pairs]
    if linalg.solve(rows, rhs, unknowns) is None:
        raise InvariantViolation("An orthogonal form has no (phi1, phi2) representation")
    return unknowns - linalg.rank(rows, unknowns)


def phi2_eliminable(V: BilinearForm) -> Optional[Functional]:
    """Solves V(x, y) = g(x y) exactly; returns g, or None if no such g exists."""
    pairs, rows = _composition_system(V.space, with_phi2=False, within_orbits=False)
    solution = linalg.solve(rows, [V.matrix[i][j] for i, j in pairs], V.space.dim)
    return None if solution is None else Functional(V.space, solution)


def symmetric_sa_functional(V: BilinearForm) -> Functional:
    """Returns phi(x) = V(x, 1) for a symmetric orthogonal form.

    The identity V(a, b) = phi((a b + b a) / 2) is asserted on all self-adjoint
    basis pairs.

    Raises:
        NotOrthogonal: If V is not orthogonal.
        NotSymmetric: If V(x, y) != V(y, x) for some basis pair.
    """
    _require_orthogonal(V)
    if not V.is_symmetric():
        raise NotSymmetric("The form is not symmetric")
    space = V.space
    one = unit(space)
    phi = Functional.from_function(space, lambda x: V(x, one))
    basis = _basis(space)
    self_adjoint = [basis[k] for k, b in enumerate(space.basis) if b.kind == "s"]
    half = Fraction(1, 2)
    for a, b in itertools.product(self_adjoint, repeat=2):
        if V(a, b) != phi((multiply(a, b) + multiply(b, a)) * half):
            raise InvariantViolation("V(a, b) != V((ab + ba)/2, 1) for a self-adjoint pair")
    return phi


@dataclass(frozen=True)
class Lemma23Report:
    """The three equivalent conditions on the self-adjoint part.

    Attributes:
        orthogonal_on_sa: V(a, b) = 0 for orthogonal self-adjoint a, b.
        vanishes_on_projections: V(p, q) = 0 for orthogonal projections p, q.
        unit_factorization: V(a, b) = V(a b, 1) for self-adjoint a, b.
        exhaustive: Whether all projection pairs were enumerated.
    """

    orthogonal_on_sa: bool
    vanishes_on_projections: bool
    unit_factorization: bool
    exhaustive: bool


def _submasks_ascending(mask: int) -> list[int]:
    subs = []
    sub = mask
    while True:
        subs.append(sub)
        if sub == 0:
            break
        sub = (sub - 1) & mask
    return subs[::-1]


def _projection_pairs_vanish(W: list[list[Fraction]], exhaustive: bool, budget: int, seed: int) -> bool:
    """Checks V(p_P, p_Q) = sum_{a in P, b in Q} W[a][b] = 0 over disjoint orbit sets P, Q."""
    m = len(W)
    full = (1 << m) - 1
    if exhaustive:
        for p_mask in range(1, full + 1):
            members = [a for a in range(m) if p_mask >> a & 1]
            row = [sum((W[a][b] for a in members), Fraction(0)) for b in range(m)]
            sums = {0: Fraction(0)}
            for q_mask in _submasks_ascending(full ^ p_mask)[1:]:
                low = (q_mask & -q_mask).bit_length() - 1
                sums[q_mask] = sums[q_mask & (q_mask - 1)] + row[low]
                if sums[q_mask] != 0:
                    return False
        return True
    rng = random.Random(seed)
    for _ in range(budget):
        labels = [rng.choice("PQ-") for _ in range(m)]
        value = sum((W[a][b] for a in range(m) for b in range(m) if labels[a] == "P" and labels[b] == "Q"), Fraction(0))
        if value != 0:
            return False
    return True


def lemma23_checks(V: BilinearForm, sample_budget: int = 256, seed: int = 0) -> Lemma23Report:
    """Evaluates the three self-adjoint conditions and asserts they agree.

    Orthogonal projections are the sigma-invariant 0/1 indicators, i.e. sums of
    s-vectors over sets of orbits.
    """
    space = V.space
    sa = [k for k, b in enumerate(space.basis) if b.kind == "s"]
    W = [[V.matrix[i][j] for j in sa] for i in sa]
    m = len(sa)
    exhaustive = space.dim <= EXHAUSTIVE_POINTS

    orthogonal_on_sa = all(W[a][b] == 0 for a in range(m) for b in range(m) if a != b)
    projections = _projection_pairs_vanish(W, exhaustive, sample_budget, seed)
    basis, products, one = _basis(space), _products(space), unit(space)
    factorization = all(V(basis[i], basis[j]) == V(products[i][j], one) for i in sa for j in sa)

    report = Lemma23Report(orthogonal_on_sa, projections, factorization, exhaustive)
    if exhaustive and not (orthogonal_on_sa == projections == factorization):
        raise InvariantViolation(f"Self-adjoint conditions disagree: {report}")
    if not exhaustive and orthogonal_on_sa != factorization:
        raise InvariantViolation(f"Self-adjoint conditions disagree: {report}")
    return report


def _complex_parts(space: FiniteSpace, label: str) -> tuple[AlgebraElement, AlgebraElement]:
    """chi_label = x1 + i x2 with x1, x2 in A."""
    partner = space.sigma_of(label)
    if partner == label:
        return element(space, {label: ONE}), element(space, {})
    half = Fraction(1, 2)
    x1 = element(space, {label: CRational(half), partner: CRational(half)})
    x2 = element(space, {label: I * -half, partner: I * half})
    return x1, x2


def complexify_form(V: BilinearForm) -> ComplexForm:
    """The complex-bilinear extension of V to C(K) = A + iA.

    W(x1 + i x2, y1 + i y2) = V(x1, y1) - V(x2, y2) + i [V(x1, y2) + V(x2, y1)].
    """
    space = V.space
    parts = [_complex_parts(space, p) for p in space.points]
    matrix = []
    for x1, x2 in parts:
        row = []
        for y1, y2 in parts:
            row.append(CRational(V(x1, y1) - V(x2, y2), V(x1, y2) + V(x2, y1)))
        matrix.append(tuple(row))
    return ComplexForm(space, tuple(matrix))


def is_extension_orthogonal(W: ComplexForm) -> bool:
    """True iff W(a, b*) = 0 for all disjointly supported a, b, i.e. W is diagonal."""
    n = W.space.dim
    return all(W.matrix[a][b].is_zero() for a in range(n) for b in range(n) if a != b)


@dataclass(frozen=True)
class Prop33Report:
    """Vanishing identities of an orthogonal form on indicators and skew indicators.

    Attributes:
        symmetric_vs_skew: V(chi_D, u_B) = V(u_B, chi_D) = 0 when D and B are disjoint.
        skew_vs_skew: V(u_B, u_C) = 0 when B and C are disjoint.
        localized: V((u0 u0* - u_C u_C*) u_B, u_C) = V(u_C, (u0 u0* - u_C u_C*) u_B) = 0.
        exhaustive: Whether all subsets were enumerated.
    """

    symmetric_vs_skew: bool
    skew_vs_skew: bool
    localized: bool
    exhaustive: bool

    @property
    def all_hold(self) -> bool:
        return self.symmetric_vs_skew and self.skew_vs_skew and self.localized


def _subsets(items: Sequence, exhaustive: bool, budget: int, rng: random.Random) -> list[tuple]:
    if exhaustive:
        return [tuple(c) for r in range(len(items) + 1) for c in itertools.combinations(items, r)]
    return [tuple(x for x in items if rng.random() < 0.5) for _ in range(budget)]


def prop33_identities(V: BilinearForm, sample_budget: int = 64, seed: int = 0) -> Prop33Report:
    """Checks the vanishing identities over sigma-invariant sets D and sets B, C of representatives.

    Raises:
        NotOrthogonal: If V is not orthogonal.
    """
    _require_orthogonal(V)
    space = V.space
    exhaustive = space.dim <= EXHAUSTIVE_POINTS
    rng = random.Random(seed)
    invariant_sets = [
        frozenset(p for k in chosen for p in space.orbits[k].points)
        for chosen in _subsets(range(len(space.orbits)), exhaustive, sample_budget, rng)
    ]
    rep_sets = [frozenset(c) for c in _subsets(space.representatives, exhaustive, sample_budget, rng)]
    chi = {D: indicator(space, D) for D in invariant_sets}
    u = {B: skew_indicator(space, B) for B in rep_sets}
    w = u0(space)
    ww = multiply(w, involution(w))

    symmetric_vs_skew = all(
        V(chi[D], u[B]) == 0 and V(u[B], chi[D]) == 0 for D in invariant_sets for B in rep_sets if not D & B
    )
    skew_vs_skew = all(V(u[B], u[C]) == 0 for B in rep_sets for C in rep_sets if not B & C)
    localized = True
    for B, C in itertools.product(rep_sets, repeat=2):
        e = multiply(ww - multiply(u[C], involution(u[C])), u[B])
        if V(e, u[C]) != 0 or V(u[C], e) != 0:
            localized = False
            break

    report = Prop33Report(symmetric_vs_skew, skew_vs_skew, localized, exhaustive)
    if not report.all_hold:
        raise InvariantViolation(f"Vanishing identities fail for an orthogonal form: {report}")
    return report
