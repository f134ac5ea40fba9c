"""Orthogonality preserving linear maps T: C_r(L1) -> C_r(L2).

A map is stored by its real matrix over the canonical bases; column j holds the
coordinates of T(b_j). For an orthogonality preserving (OP) map every codomain
point s reads a single domain orbit, so

    T(f)(s) = a1(s) Re f(phi(s)) + a2(s) Im f(phi(s))

with a1 = T(1) and a2 = T(i) read off at the orbit representative phi(s).
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

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
    from_coords,
    is_invertible,
    is_orthogonal_pair,
    orthogonal_pairs,
    skew_indicator,
    unit,
)
from src.errors import (
    DimensionMismatch,
    InvalidCertificate,
    InvalidStructure,
    InvariantViolation,
    MultiOrbitSupport,
    NotOPBijection,
    NotOrthogonalityPreserving,
    PreconditionFailed,
    SpaceMismatch,
)

SUPPORT_MAP_FAILURE = "support map not injective / φ(F2) ⊄ F1"


@dataclass(frozen=True)
class LinearMap:
    """A real-linear map between two function algebras.

    Attributes:
        domain: The space L1.
        codomain: The space L2.
        matrix: dim(L2) x dim(L1) rational matrix; column j = coords of T(b_j).
    """

    domain: FiniteSpace
    codomain: FiniteSpace
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        rows, cols = self.codomain.dim, self.domain.dim
        if len(self.matrix) != rows or any(len(row) != cols for row in self.matrix):
            raise DimensionMismatch(f"Expected a {rows}x{cols} matrix")
        object.__setattr__(self, "matrix", tuple(tuple(Fraction(v) for v in row) for row in self.matrix))

    @property
    def columns(self) -> tuple[tuple[Fraction, ...], ...]:
        """One column per domain basis element, also when the codomain is empty."""
        return tuple(tuple(row[j] for row in self.matrix) for j in range(self.domain.dim))


def apply(T: LinearMap, f: AlgebraElement) -> AlgebraElement:
    """Evaluates T(f)."""
    if f.space != T.domain:
        raise SpaceMismatch("Element does not live on the domain of the map")
    return from_coords(T.codomain, linalg.matvec(T.matrix, coords(f)))


def identity_map(space: FiniteSpace) -> LinearMap:
    return LinearMap(space, space, linalg.identity(space.dim))


def zero_map(domain: FiniteSpace, codomain: FiniteSpace) -> LinearMap:
    return LinearMap(domain, codomain, linalg.zeros(codomain.dim, domain.dim))


def compose(S: LinearMap, T: LinearMap) -> LinearMap:
    """Returns S o T."""
    if T.codomain != S.domain:
        raise SpaceMismatch("Codomain of T is not the domain of S")
    return LinearMap(T.domain, S.codomain, linalg.matmul(S.matrix, T.matrix))


def is_bijective(T: LinearMap) -> bool:
    return T.domain.dim == T.codomain.dim and linalg.rank(T.matrix, T.domain.dim) == T.domain.dim


def is_surjective(T: LinearMap) -> bool:
    return linalg.rank(T.matrix, T.domain.dim) == T.codomain.dim


def inverse_map(T: LinearMap) -> LinearMap:
    """The matrix inverse of a bijective map.

    Raises:
        NotOPBijection: If T is not bijective.
    """
    inverse = linalg.inverse(T.matrix) if T.domain.dim == T.codomain.dim else None
    if inverse is None:
        raise NotOPBijection("The map is not a linear bijection")
    return LinearMap(T.codomain, T.domain, inverse)


def _image_values(T: LinearMap) -> list[AlgebraElement]:
    """T(b_j) for every domain basis element."""
    return [from_coords(T.codomain, column) for column in T.columns]


def _orbits_read(T: LinearMap) -> dict[str, frozenset[int]]:
    """For every codomain point s, the domain orbits whose basis images are non-zero at s."""
    images = _image_values(T)
    orbit = T.domain.coord_orbits
    return {
        s: frozenset(orbit[j] for j, image in enumerate(images) if not image.values[i].is_zero())
        for i, s in enumerate(T.codomain.points)
    }


def _basis_witness(T: LinearMap) -> Optional[tuple[AlgebraElement, AlgebraElement]]:
    """A pair of basis elements on distinct orbits whose images are not orthogonal."""
    basis = canonical_basis(T.domain)
    images = _image_values(T)
    orbit = T.domain.coord_orbits
    for i, j in itertools.combinations(range(T.domain.dim), 2):
        if orbit[i] != orbit[j] and not is_orthogonal_pair(images[i], images[j]):
            return basis[i], basis[j]
    return None


def is_orthogonality_preserving(T: LinearMap) -> bool:
    """True iff basis elements on distinct orbits have orthogonal images.

    The result is checked against the pointwise characterization: every codomain
    point reads at most one domain orbit.
    """
    by_pairs = _basis_witness(T) is None
    by_points = all(len(orbits) <= 1 for orbits in _orbits_read(T).values())
    if by_pairs != by_points:
        raise InvariantViolation("Basis-pair and pointwise OP criteria disagree")
    return by_pairs


def op_oracle(T: LinearMap, trials: int = 100, seed: int = 0) -> Optional[tuple[AlgebraElement, AlgebraElement]]:
    """Searches orthogonal pairs (x, y) whose images T(x), T(y) are not orthogonal."""
    for x, y in orthogonal_pairs(T.domain, trials, seed):
        if not is_orthogonal_pair(x, y):
            raise InvariantViolation("Generated pair is not orthogonal")
        if not is_orthogonal_pair(apply(T, x), apply(T, y)):
            return x, y
    return None


@dataclass(frozen=True)
class PreserverStructure:
    """The (phi, T(1), T(i)) description of an OP map.

    Attributes:
        domain: The space L1.
        codomain: The space L2.
        z1: Codomain points where the row functional is non-zero.
        z3: Codomain points where the row functional vanishes.
        phi: Support map on z1, valued in fixed points and 2-cycle representatives of L1.
        a1: T(1) at every codomain point.
        a2: T(i) at every codomain point; zero on z3 and where phi is a fixed point.
    """

    domain: FiniteSpace
    codomain: FiniteSpace
    z1: tuple[str, ...]
    z3: tuple[str, ...]
    phi: dict[str, str] = field(hash=False)
    a1: dict[str, CRational] = field(hash=False)
    a2: dict[str, CRational] = field(hash=False)

    @property
    def z2(self) -> tuple[str, ...]:
        """Points of discontinuity; empty for every map between finite spaces."""
        return ()

    def validate(self) -> None:
        """Checks the normalization and tau-compatibility constraints.

        Raises:
            InvalidStructure: On the first violated constraint.
        """
        L1, L2 = self.domain, self.codomain
        if set(self.z1) & set(self.z3) or set(self.z1) | set(self.z3) != set(L2.points):
            raise InvalidStructure("z1 and z3 must partition the codomain points")
        if set(self.phi) != set(self.z1):
            raise InvalidStructure("phi must be defined exactly on z1")
        if set(self.a1) != set(L2.points) or set(self.a2) != set(L2.points):
            raise InvalidStructure("a1 and a2 must be given at every codomain point")
        targets = set(L1.fixed) | set(L1.representatives)
        for s in L2.points:
            a1, a2 = self.a1[s], self.a2[s]
            if s in self.z3:
                if not (a1.is_zero() and a2.is_zero()):
                    raise InvalidStructure(f"Weights must vanish at {s!r} in z3")
                continue
            t = self.phi[s]
            if t not in targets:
                raise InvalidStructure(f"phi({s!r}) = {t!r} is not a fixed point or 2-cycle representative")
            if a1.is_zero() and a2.is_zero():
                raise InvalidStructure(f"Weights vanish simultaneously at {s!r} in z1")
            if t in L1.fixed and not a2.is_zero():
                raise InvalidStructure(f"a2({s!r}) must be 0 since phi({s!r}) is a fixed point")
        for s in L2.points:
            partner = L2.sigma_of(s)
            if (s in self.z1) != (partner in self.z1) or self.phi.get(s) != self.phi.get(partner):
                raise InvalidStructure(f"phi is not compatible with sigma at {s!r}")
            if self.a1[partner] != self.a1[s].conjugate() or self.a2[partner] != self.a2[s].conjugate():
                raise InvalidStructure(f"Weights at {partner!r} must be the conjugates of those at {s!r}")


def reconstruct(structure: PreserverStructure) -> LinearMap:
    """Builds T(f)(s) = a1(s) Re f(phi(s)) + a2(s) Im f(phi(s)).

    Raises:
        InvalidStructure: If the structure violates its constraints.
    """
    structure.validate()
    L1, L2 = structure.domain, structure.codomain
    columns = []
    for b in L1.basis:
        values = {}
        for s in structure.z1:
            if structure.phi[s] == b.point:
                values[s] = structure.a1[s] if b.kind == "s" else structure.a2[s]
        columns.append(coords(element(L2, values)))
    if not columns:
        return zero_map(L1, L2)
    return LinearMap(L1, L2, linalg.transpose(tuple(columns)))


def analyze(T: LinearMap) -> PreserverStructure:
    """Recovers the support map and the weights of an OP map.

    Raises:
        NotOrthogonalityPreserving: If T is not OP; carries a witness pair.
        MultiOrbitSupport: If a codomain point reads two domain orbits.
    """
    witness = _basis_witness(T)
    if witness is not None:
        raise NotOrthogonalityPreserving("The map is not orthogonality preserving", witness)
    L1, L2 = T.domain, T.codomain
    read = _orbits_read(T)
    t_one = apply(T, unit(L1))
    z1, z3, phi, a1, a2 = [], [], {}, {}, {}
    for s in L2.points:
        orbits = read[s]
        if len(orbits) > 1:
            raise MultiOrbitSupport(f"Codomain point {s!r} reads orbits {sorted(orbits)}")
        a1[s] = t_one.at(s)
        if not orbits:
            z3.append(s)
            a2[s] = ZERO
            continue
        orbit = L1.orbits[next(iter(orbits))]
        z1.append(s)
        phi[s] = orbit.rep
        a2[s] = ZERO if orbit.is_fixed else apply(T, skew_indicator(L1, [orbit.rep])).at(s)
    structure = PreserverStructure(L1, L2, tuple(z1), tuple(z3), phi, a1, a2)
    if reconstruct(structure).matrix != T.matrix:
        raise InvariantViolation("The recovered structure does not reproduce the map")
    return structure


def _determinant(a1: CRational, a2: CRational) -> Fraction:
    """det [[Re a1, Re a2], [Im a1, Im a2]]."""
    return a1.re * a2.im - a2.re * a1.im


@dataclass(frozen=True)
class BiopCertificate:
    """Evidence that a map is bi-orthogonality preserving.

    Attributes:
        map: The certified map T.
        structure: analyze(T).
        orbit_map: Codomain orbit representative -> domain orbit representative (a bijection).
        determinants: The determinant at every 2-cycle representative of the codomain.
        inverse: The structure of T^-1, a map from L2 back to L1.
    """

    map: LinearMap
    structure: PreserverStructure
    orbit_map: dict[str, str] = field(hash=False)
    determinants: dict[str, Fraction] = field(hash=False)
    inverse: PreserverStructure


@dataclass(frozen=True)
class BiopDecision:
    holds: bool
    reason: Optional[str] = None
    certificate: Optional[BiopCertificate] = None


def _inverse_structure(structure: PreserverStructure, orbit_map: dict[str, str]) -> PreserverStructure:
    """Inverts every 2x2 block M_s = [[g1, e1], [g2, e2]] and every fixed-point weight."""
    L1, L2 = structure.domain, structure.codomain
    back = {t: s for s, t in orbit_map.items()}
    phi, b1, b2 = {}, {}, {}
    for t in L1.fixed:
        s = back[t]
        phi[t] = s
        b1[t] = CRational(1 / structure.a1[s].re)
        b2[t] = ZERO
    for t in L1.representatives:
        s = back[t]
        a1, a2 = structure.a1[s], structure.a2[s]
        n = linalg.inverse(((a1.re, a2.re), (a1.im, a2.im)))
        partner = L1.sigma_of(t)
        phi[t] = phi[partner] = s
        b1[t] = CRational(n[0][0], n[1][0])
        b2[t] = CRational(n[0][1], n[1][1])
        b1[partner], b2[partner] = b1[t].conjugate(), b2[t].conjugate()
    return PreserverStructure(L2, L1, L1.points, (), phi, b1, b2)


def _criterion(T: LinearMap) -> BiopDecision:
    if not is_bijective(T):
        return BiopDecision(False, "not a linear bijection")
    if not is_orthogonality_preserving(T):
        return BiopDecision(False, "not orthogonality preserving")
    structure = analyze(T)
    if structure.z3:
        return BiopDecision(False, f"T vanishes identically at {list(structure.z3)}")
    L1, L2 = T.domain, T.codomain
    orbit_map = {s: structure.phi[s] for s in L2.fixed + L2.representatives}
    injective = len(set(orbit_map.values())) == len(orbit_map)
    if not injective or any(orbit_map[s] not in L1.fixed for s in L2.fixed):
        return BiopDecision(False, SUPPORT_MAP_FAILURE)
    if any(orbit_map[s] not in L1.representatives for s in L2.representatives):
        return BiopDecision(False, "φ(O2) ⊄ O1")
    if len(orbit_map) != len(L1.orbits):
        return BiopDecision(False, "support map not surjective")
    zeros = [s for s in L2.points if structure.a1[s].is_zero()]
    if zeros:
        return BiopDecision(False, f"T(1) vanishes at {zeros}")
    determinants = {s: _determinant(structure.a1[s], structure.a2[s]) for s in L2.representatives}
    singular = [s for s, d in determinants.items() if d == 0]
    if singular:
        return BiopDecision(False, f"determinant vanishes at {singular}")
    inverse = _inverse_structure(structure, orbit_map)
    return BiopDecision(True, None, BiopCertificate(T, structure, orbit_map, determinants, inverse))


def _direct_biop(T: LinearMap) -> bool:
    """T bijective, T OP and T^-1 OP."""
    if not is_bijective(T) or not is_orthogonality_preserving(T):
        return False
    return is_orthogonality_preserving(inverse_map(T))


def is_biorthogonality_preserving(T: LinearMap) -> BiopDecision:
    """Decides bi-OP by the support-map / determinant criterion.

    The decision is cross-checked against the direct definition and, when positive,
    the certificate's inverse is checked to be a two-sided inverse.

    Returns:
        The decision; a reason when it is negative, a certificate when positive.
    """
    decision = _criterion(T)
    direct = _direct_biop(T)
    if decision.holds != direct:
        raise InvariantViolation(f"Criterion ({decision.holds}) and direct decision ({direct}) disagree")
    if decision.holds:
        invert_biop(decision.certificate)
    else:
        logging.debug(f"Map is not bi-OP: {decision.reason}")
    return decision


def invert_biop(certificate: BiopCertificate) -> LinearMap:
    """Builds S(g)(t) = b1(t) Re g(psi(t)) + b2(t) Im g(psi(t)) and checks S o T = T o S = id.

    Raises:
        InvalidCertificate: If the inverse structure is invalid or not a two-sided inverse.
    """
    T = certificate.map
    try:
        S = reconstruct(certificate.inverse)
    except InvalidStructure as e:
        raise InvalidCertificate(f"Inverse structure is invalid: {e}") from e
    if S.domain != T.codomain or S.codomain != T.domain:
        raise InvalidCertificate("Inverse structure has the wrong spaces")
    if compose(S, T).matrix != linalg.identity(T.domain.dim) or compose(T, S).matrix != linalg.identity(
        T.codomain.dim
    ):
        raise InvalidCertificate("Inverse structure is not a two-sided inverse")
    return S


def _require_op_bijection(T: LinearMap) -> None:
    if not is_bijective(T) or not is_orthogonality_preserving(T):
        raise NotOPBijection("The map is not an orthogonality preserving linear bijection")


def _invertible_grid(space: FiniteSpace, trials: int, seed: int) -> list[AlgebraElement]:
    """All invertible elements over a small grid for dim <= 3, otherwise seeded samples."""
    fixed_values = [CRational(v) for v in (-2, -1, 1, 2)]
    cycle_values = [CRational(a, b) for a in (-1, 0, 1) for b in (-1, 0, 1) if (a, b) != (0, 0)]
    choices = [fixed_values if orbit.is_fixed else cycle_values for orbit in space.orbits]
    if space.dim <= 3:
        picks = list(itertools.product(*choices))
    else:
        rng = random.Random(seed)
        picks = [tuple(rng.choice(c) for c in choices) for _ in range(trials)]
    grid = []
    for pick in picks:
        values = {}
        for orbit, value in zip(space.orbits, pick):
            values[orbit.rep] = value
            if not orbit.is_fixed:
                values[orbit.partner] = value.conjugate()
        grid.append(element(space, values))
    return grid


def inverse_preserves_invertibles_check(T: LinearMap, trials: int = 100, seed: int = 0) -> bool:
    """Checks that T^-1(g) is invertible for invertible g.

    Raises:
        NotOPBijection: If T is not an OP linear bijection.
    """
    _require_op_bijection(T)
    inverse = inverse_map(T)
    for g in _invertible_grid(T.codomain, trials, seed):
        if not is_invertible(apply(inverse, g)):
            logging.warning(f"T^-1 maps the invertible element {[str(v) for v in g.values]} to a non-invertible one")
            return False
    return True


@dataclass(frozen=True)
class RemarkReport:
    """Consequences of surjectivity for an OP map; None where not applicable.

    Attributes:
        surjective: Whether T is surjective.
        z3_empty: Z3 is empty.
        phi_o2_in_o1: phi maps 2-cycle points of L2 into 2-cycles of L1.
        weights_span: {a1(s), a2(s)} spans R^2 at the 2-cycle representatives of L2.
        phi_injective_on_o2: phi is injective on the 2-cycle representatives of L2.
        compact_vacuous: Every finite set is compact, so the compactness item holds vacuously.
        isolated_vacuous: Every point is isolated, so the accumulation item holds vacuously.
    """

    surjective: bool
    z3_empty: Optional[bool]
    phi_o2_in_o1: Optional[bool]
    weights_span: Optional[bool]
    phi_injective_on_o2: Optional[bool]
    compact_vacuous: bool = True
    isolated_vacuous: bool = True

    @property
    def all_hold(self) -> bool:
        items = (self.z3_empty, self.phi_o2_in_o1, self.weights_span, self.phi_injective_on_o2)
        return all(item is not False for item in items)


def remark_consequences_check(T: LinearMap) -> RemarkReport:
    """Evaluates what surjectivity forces on the structure of an OP map.

    Raises:
        NotOrthogonalityPreserving: If T is not OP.
    """
    structure = analyze(T)
    if not is_surjective(T):
        return RemarkReport(False, None, None, None, None)
    L1, L2 = T.domain, T.codomain
    reps = [s for s in L2.representatives if s in structure.z1]
    images = [structure.phi[s] for s in reps]
    report = RemarkReport(
        surjective=True,
        z3_empty=not structure.z3,
        phi_o2_in_o1=all(t in L1.representatives for t in images),
        weights_span=all(_determinant(structure.a1[s], structure.a2[s]) != 0 for s in reps),
        phi_injective_on_o2=len(set(images)) == len(images),
    )
    if not report.all_hold:
        raise InvariantViolation(f"Surjective OP map violates its structural consequences: {report}")
    return report


def f2_empty_implies_biop_check(T: LinearMap) -> bool:
    """Checks that an OP bijection onto a space without fixed points is bi-OP.

    Raises:
        PreconditionFailed: If T is not an OP bijection or the codomain has fixed points.
    """
    if T.codomain.fixed:
        raise PreconditionFailed("The codomain has fixed points")
    try:
        _require_op_bijection(T)
    except NotOPBijection as e:
        raise PreconditionFailed(str(e)) from e
    decision = is_biorthogonality_preserving(T)
    if not decision.holds:
        raise InvariantViolation(f"OP bijection without fixed points is not bi-OP: {decision.reason}")
    return True


def biop_witness(L1: FiniteSpace, L2: FiniteSpace) -> Optional[LinearMap]:
    """The composition map S(f)(s) = f(phi(s)) pairing fixed points and 2-cycles in order, if one exists."""
    if len(L1.fixed) != len(L2.fixed) or len(L1.representatives) != len(L2.representatives):
        return None
    phi, a1, a2 = {}, {}, {}
    for s, t in zip(L2.fixed, L1.fixed):
        phi[s], a1[s], a2[s] = t, ONE, ZERO
    for s, t in zip(L2.representatives, L1.representatives):
        partner = L2.sigma_of(s)
        phi[s] = phi[partner] = t
        a1[s] = a1[partner] = ONE
        a2[s], a2[partner] = I, -I
    return reconstruct(PreserverStructure(L1, L2, L2.points, (), phi, a1, a2))


def spaces_admit_biop(L1: FiniteSpace, L2: FiniteSpace) -> bool:
    """True iff some bi-OP map C_r(L1) -> C_r(L2) exists.

    When one exists, the composition witness is built and checked.
    """
    witness = biop_witness(L1, L2)
    if witness is None:
        return False
    if not is_biorthogonality_preserving(witness).holds:
        raise InvariantViolation("The composition witness is not bi-OP")
    return True
