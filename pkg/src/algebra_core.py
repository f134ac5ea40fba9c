"""Finite spaces with involution and the real function algebra C(K)^tau.

A `FiniteSpace` is a finite point set K with an involutive permutation sigma. The
real algebra A = C(K)^tau consists of the complex-valued functions x on K with
x(sigma(t)) = conj(x(t)); it is commutative, unital and carries the pointwise
involution x* = conj(x). Every quantity is an exact rational.

Canonical real basis (the order is normative for coordinates and documents):
first s_t = chi_t for each fixed point t in point order, then for each 2-cycle
representative t in point order the pair s_t = chi_t + chi_sigma(t) and
u_t = i (chi_t - chi_sigma(t)). The representative of a 2-cycle is the point with
the smaller index.
"""

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Optional, Sequence, Union

from src.errors import DimensionMismatch, DuplicateLabel, NonInvolutive, NotTauSymmetric, SpaceMismatch, UnknownLabel

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class CRational:
    """An exact complex rational re + i im."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    def __add__(self, other: "CRational") -> "CRational":
        other = as_crational(other)
        return CRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other: "CRational") -> "CRational":
        other = as_crational(other)
        return CRational(self.re - other.re, self.im - other.im)

    def __neg__(self) -> "CRational":
        return CRational(-self.re, -self.im)

    def __mul__(self, other: Union["CRational", Scalar]) -> "CRational":
        other = as_crational(other)
        return CRational(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def conjugate(self) -> "CRational":
        return CRational(self.re, -self.im)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def is_real(self) -> bool:
        return self.im == 0

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"{self.re}{sign}{abs(self.im)}i"


ZERO = CRational()
ONE = CRational(Fraction(1))
I = CRational(Fraction(0), Fraction(1))


def as_crational(value: Union[CRational, Scalar]) -> CRational:
    if isinstance(value, CRational):
        return value
    return CRational(Fraction(value))


@dataclass(frozen=True)
class Orbit:
    """A sigma-orbit: a fixed point, or a 2-cycle given by its representative and partner."""

    rep: str
    partner: Optional[str] = None

    @property
    def is_fixed(self) -> bool:
        return self.partner is None

    @property
    def points(self) -> tuple[str, ...]:
        return (self.rep,) if self.partner is None else (self.rep, self.partner)


@dataclass(frozen=True)
class BasisVector:
    """Descriptor of a canonical basis element: kind 's' (self-adjoint) or 'u' (skew)."""

    kind: str
    point: str
    orbit: int

    @property
    def label(self) -> str:
        return f"{self.kind}[{self.point}]"


@dataclass(frozen=True)
class FiniteSpace:
    """A finite point set with a period-2 involution.

    Attributes:
        points: Ordered point labels.
        sigma: sigma as a permutation of point indices.
    """

    points: tuple[str, ...]
    sigma: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.points)) != len(self.points):
            raise DuplicateLabel(f"Duplicate point labels in {list(self.points)}")
        n = len(self.points)
        if len(self.sigma) != n or sorted(self.sigma) != list(range(n)):
            raise NonInvolutive("sigma is not a permutation of the points")
        for i, j in enumerate(self.sigma):
            if self.sigma[j] != i:
                raise NonInvolutive(f"sigma(sigma({self.points[i]})) != {self.points[i]}")

    @cached_property
    def _index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.points)}

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"Unknown point {label!r}") from None

    def sigma_of(self, label: str) -> str:
        return self.points[self.sigma[self.index(label)]]

    @property
    def dim(self) -> int:
        """Real dimension of the algebra, equal to the number of points."""
        return len(self.points)

    @cached_property
    def fixed(self) -> tuple[str, ...]:
        return tuple(p for i, p in enumerate(self.points) if self.sigma[i] == i)

    @cached_property
    def representatives(self) -> tuple[str, ...]:
        return tuple(p for i, p in enumerate(self.points) if self.sigma[i] > i)

    @cached_property
    def images(self) -> tuple[str, ...]:
        return tuple(self.sigma_of(p) for p in self.representatives)

    @cached_property
    def orbits(self) -> tuple[Orbit, ...]:
        """Fixed-point orbits in point order, then 2-cycles in representative order."""
        return tuple(Orbit(t) for t in self.fixed) + tuple(
            Orbit(t, self.sigma_of(t)) for t in self.representatives
        )

    @cached_property
    def _orbit_of_point(self) -> dict[str, int]:
        return {p: k for k, orbit in enumerate(self.orbits) for p in orbit.points}

    def orbit_of(self, label: str) -> int:
        self.index(label)
        return self._orbit_of_point[label]

    @cached_property
    def basis(self) -> tuple[BasisVector, ...]:
        vectors = []
        for k, orbit in enumerate(self.orbits):
            vectors.append(BasisVector("s", orbit.rep, k))
            if not orbit.is_fixed:
                vectors.append(BasisVector("u", orbit.rep, k))
        return tuple(vectors)

    @cached_property
    def coord_orbits(self) -> tuple[int, ...]:
        """Orbit index of every canonical coordinate."""
        return tuple(b.orbit for b in self.basis)

    @cached_property
    def orbit_coords(self) -> tuple[tuple[int, ...], ...]:
        """Coordinate indices of every orbit."""
        return tuple(
            tuple(i for i, k in enumerate(self.coord_orbits) if k == orbit) for orbit in range(len(self.orbits))
        )

    def sigma_map(self) -> dict[str, str]:
        return {p: self.points[self.sigma[i]] for i, p in enumerate(self.points)}


def make_space(points: Sequence[str], sigma: Optional[Mapping[str, str]] = None) -> FiniteSpace:
    """Builds a validated FiniteSpace.

    Points absent from `sigma` are fixed unless they appear as the image of another
    point, in which case the reverse pairing is implied.

    Args:
        points: Ordered point labels.
        sigma: A pairing of labels; identity entries are allowed.

    Returns:
        The space with its F / O / sigma(O) partition.

    Raises:
        DuplicateLabel: If a label repeats.
        UnknownLabel: If sigma mentions a label outside `points`.
        NonInvolutive: If sigma does not describe an involution.
    """
    points = tuple(points)
    if len(set(points)) != len(points):
        raise DuplicateLabel(f"Duplicate point labels in {list(points)}")
    index = {p: i for i, p in enumerate(points)}
    explicit = dict(sigma or {})
    for a, b in explicit.items():
        for label in (a, b):
            if label not in index:
                raise UnknownLabel(f"sigma mentions unknown point {label!r}")

    images = list(range(len(points)))
    implied: dict[str, str] = {}
    for a, b in explicit.items():
        images[index[a]] = index[b]
        if b not in explicit:
            if implied.get(b, a) != a:
                raise NonInvolutive(f"{b!r} is the image of both {implied[b]!r} and {a!r}")
            implied[b] = a
    for b, a in implied.items():
        images[index[b]] = index[a]
    return FiniteSpace(points, tuple(images))


@dataclass(frozen=True)
class AlgebraElement:
    """A tau-symmetric complex-valued function on a finite space.

    Attributes:
        space: The underlying space.
        values: One exact value per point, in point order.
    """

    space: FiniteSpace
    values: tuple[CRational, ...]

    def __post_init__(self):
        if len(self.values) != self.space.dim:
            raise DimensionMismatch(f"Expected {self.space.dim} values, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(as_crational(v) for v in self.values))
        for i, j in enumerate(self.space.sigma):
            if self.values[j] != self.values[i].conjugate():
                raise NotTauSymmetric(
                    f"x({self.space.points[j]}) must equal conj(x({self.space.points[i]})), "
                    f"got {self.values[j]} and {self.values[i]}"
                )

    def at(self, label: str) -> CRational:
        return self.values[self.space.index(label)]

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        return add(self, other)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return add(self, scale(other, -1))

    def __neg__(self) -> "AlgebraElement":
        return scale(self, -1)

    def __mul__(self, other: Union["AlgebraElement", Scalar]) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return scale(self, other)

    def __rmul__(self, other: Scalar) -> "AlgebraElement":
        return scale(self, other)

    def star(self) -> "AlgebraElement":
        return involution(self)

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values)


def _check_same_space(*elements: AlgebraElement) -> FiniteSpace:
    space = elements[0].space
    for element in elements[1:]:
        if element.space != space:
            raise SpaceMismatch("Elements live on different spaces")
    return space


def element(space: FiniteSpace, values: Mapping[str, Union[CRational, Scalar]]) -> AlgebraElement:
    """Builds an element from a label -> value map; missing labels are zero."""
    for label in values:
        space.index(label)
    return AlgebraElement(space, tuple(as_crational(values.get(p, ZERO)) for p in space.points))


def zero(space: FiniteSpace) -> AlgebraElement:
    return AlgebraElement(space, (ZERO,) * space.dim)


def unit(space: FiniteSpace) -> AlgebraElement:
    return AlgebraElement(space, (ONE,) * space.dim)


def u0(space: FiniteSpace) -> AlgebraElement:
    """The skew element u_O = sum of u_t over the 2-cycle representatives."""
    return skew_indicator(space, space.representatives)


def indicator(space: FiniteSpace, labels: Iterable[str]) -> AlgebraElement:
    """chi_D for a sigma-invariant set D of points."""
    chosen = set(labels)
    return element(space, {p: ONE for p in chosen})


def skew_indicator(space: FiniteSpace, reps: Iterable[str]) -> AlgebraElement:
    """u_C = i (chi_C - chi_sigma(C)) for a set C of 2-cycle representatives."""
    values: dict[str, CRational] = {}
    for t in reps:
        if t not in space.representatives:
            raise UnknownLabel(f"{t!r} is not a 2-cycle representative")
        values[t] = I
        values[space.sigma_of(t)] = -I
    return element(space, values)


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    """Pointwise product."""
    space = _check_same_space(x, y)
    return AlgebraElement(space, tuple(a * b for a, b in zip(x.values, y.values)))


def add(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    space = _check_same_space(x, y)
    return AlgebraElement(space, tuple(a + b for a, b in zip(x.values, y.values)))


def scale(x: AlgebraElement, factor: Scalar) -> AlgebraElement:
    """Multiplies by a real scalar."""
    return AlgebraElement(x.space, tuple(v * Fraction(factor) for v in x.values))


def involution(x: AlgebraElement) -> AlgebraElement:
    """Pointwise conjugation x -> x*."""
    return AlgebraElement(x.space, tuple(v.conjugate() for v in x.values))


def coords(x: AlgebraElement) -> tuple[Fraction, ...]:
    """Real coordinates of x in the canonical basis."""
    out: list[Fraction] = []
    for orbit in x.space.orbits:
        value = x.at(orbit.rep)
        out.append(value.re)
        if not orbit.is_fixed:
            out.append(value.im)
    return tuple(out)


def from_coords(space: FiniteSpace, vector: Sequence[Scalar]) -> AlgebraElement:
    """Inverse of `coords`."""
    if len(vector) != space.dim:
        raise DimensionMismatch(f"Expected {space.dim} coordinates, got {len(vector)}")
    values: dict[str, CRational] = {}
    it = iter(vector)
    for orbit in space.orbits:
        re = Fraction(next(it))
        if orbit.is_fixed:
            values[orbit.rep] = CRational(re)
        else:
            im = Fraction(next(it))
            values[orbit.rep] = CRational(re, im)
            values[orbit.partner] = CRational(re, -im)
    return element(space, values)


def basis_element(space: FiniteSpace, k: int) -> AlgebraElement:
    return from_coords(space, [int(i == k) for i in range(space.dim)])


def canonical_basis(space: FiniteSpace) -> tuple[AlgebraElement, ...]:
    return tuple(basis_element(space, k) for k in range(space.dim))


def orbit_support(x: AlgebraElement) -> frozenset[int]:
    """Indices of the orbits on which x does not vanish."""
    return frozenset(x.space.orbit_of(p) for p, v in zip(x.space.points, x.values) if not v.is_zero())


def is_orthogonal_pair(x: AlgebraElement, y: AlgebraElement) -> bool:
    """x is orthogonal to y iff x(t) conj(y(t)) = 0 at every point."""
    _check_same_space(x, y)
    return all((a * b.conjugate()).is_zero() for a, b in zip(x.values, y.values))


def _random_orbit_vector(space: FiniteSpace, orbits: Sequence[int], rng: random.Random, bound: int) -> AlgebraElement:
    vector = [0] * space.dim
    for orbit in orbits:
        for k in space.orbit_coords[orbit]:
            vector[k] = rng.randint(-bound, bound)
    return from_coords(space, vector)


def orthogonal_pairs(
    space: FiniteSpace, trials: int, seed: int, bound: int = 4
) -> Iterator[tuple[AlgebraElement, AlgebraElement]]:
    """Yields orthogonal pairs: all basis pairs on distinct orbits, then random pairs.

    Random pairs draw integer coordinates in [-bound, bound] on two disjoint,
    non-empty sets of orbits.

    Args:
        space: The space to draw from.
        trials: Number of random pairs after the basis pairs.
        seed: Seed of the random pairs.
        bound: Coordinate bound of the random pairs.
    """
    basis = canonical_basis(space)
    orbit = space.coord_orbits
    for i, j in itertools.product(range(space.dim), repeat=2):
        if orbit[i] != orbit[j]:
            yield basis[i], basis[j]
    if len(space.orbits) < 2:
        return
    rng = random.Random(seed)
    for _ in range(trials):
        order = list(range(len(space.orbits)))
        rng.shuffle(order)
        cut = rng.randint(1, len(order) - 1)
        end = rng.randint(cut + 1, len(order))
        yield (
            _random_orbit_vector(space, order[:cut], rng, bound),
            _random_orbit_vector(space, order[cut:end], rng, bound),
        )


def is_invertible(x: AlgebraElement) -> bool:
    return all(not v.is_zero() for v in x.values)


def hermitian_split(x: AlgebraElement) -> tuple[AlgebraElement, AlgebraElement]:
    """Returns (h, k) with x = h + k, h* = h and k* = -k."""
    xs = involution(x)
    half = Fraction(1, 2)
    return scale(add(x, xs), half), scale(add(x, scale(xs, -1)), half)
