"""Seeded generators, defect injection and the property suites.

Every generator draws from a `random.Random` seeded by a `GenConfig`, so a
configuration fully determines what is generated. A suite runs one property
over `cfg.trials` trials, each with its own derived seed; the first failing
trial is shrunk by re-running it on smaller space bounds.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence

from src import documents, linalg
from src.algebra_core import (
    ZERO,
    AlgebraElement,
    CRational,
    FiniteSpace,
    coords,
    from_coords,
    hermitian_split,
    is_orthogonal_pair,
    make_space,
    orbit_support,
)
from src.config import GenConfig
from src.errors import ConfigError, IncompatibleSpaces, InvariantViolation, NotOrthogonal, OrthoformsError, UnknownSuite
from src.forms import (
    BilinearForm,
    Functional,
    compose_form,
    complexify_form,
    decompose,
    is_extension_orthogonal,
    is_orthogonal_form,
    lemma23_checks,
    orthogonality_oracle,
    phi2_eliminable,
    prop33_identities,
    representation_equivalent,
    symmetric_sa_functional,
)
from src.preservers import (
    LinearMap,
    PreserverStructure,
    analyze,
    f2_empty_implies_biop_check,
    inverse_preserves_invertibles_check,
    invert_biop,
    is_bijective,
    is_biorthogonality_preserving,
    is_orthogonality_preserving,
    op_oracle,
    reconstruct,
    remark_consequences_check,
    spaces_admit_biop,
)

# Attempts at a non-singular 2x2 weight block before the whole structure is redrawn.
DETERMINANT_ATTEMPTS = 100


def _build_space(n_fixed: int, n_cycles: int, roles: Sequence[str], prefix: str) -> FiniteSpace:
    """Labels prefix1..prefixN; the first n_fixed entries of `roles` are fixed, the rest pair up."""
    labels = [f"{prefix}{i + 1}" for i in range(n_fixed + 2 * n_cycles)]
    sigma = {roles[n_fixed + 2 * k]: roles[n_fixed + 2 * k + 1] for k in range(n_cycles)}
    return make_space(labels, sigma)


def _determinant(a1: CRational, a2: CRational) -> Fraction:
    return a1.re * a2.im - a2.re * a1.im


class SampleGenerator:
    """Draws spaces, elements, forms, structures and maps from one seeded stream.

    With `cfg.mutate` set, the form and map generators inject a single defect into
    their output: a non-zero cross-orbit form entry, or a basis image redirected to
    another orbit's image.

    Attributes:
        cfg: The generator configuration.
        rng: The random stream, seeded from `cfg`.
        last_form: The most recently generated form, kept for failure reports.
        last_map: The most recently generated map, kept for failure reports.
    """

    def __init__(self, cfg: GenConfig):
        self.cfg = cfg
        self.rng = cfg.rng()
        self.last_form: Optional[BilinearForm] = None
        self.last_map: Optional[LinearMap] = None

    def rational(self) -> Fraction:
        bound = self.cfg.bound
        return Fraction(self.rng.randint(-bound, bound), self.rng.randint(1, bound))

    def nonzero_rational(self) -> Fraction:
        while True:
            value = self.rational()
            if value:
                return value

    def complex(self) -> CRational:
        return CRational(self.rational(), self.rational())

    def seed(self) -> int:
        return self.rng.getrandbits(32)

    def space(self, allow_fixed: bool = True, prefix: str = "t") -> FiniteSpace:
        cfg = self.cfg
        max_fixed = cfg.max_fixed if allow_fixed else 0
        available = max_fixed + cfg.max_cycles
        if available == 0:
            raise ConfigError("No space fits the configured bounds")
        need = min(max(1, cfg.min_orbits, 2 if cfg.mutate else 1), available)
        while True:
            n_fixed = self.rng.randint(0, max_fixed)
            n_cycles = self.rng.randint(0, cfg.max_cycles)
            if n_fixed + n_cycles >= need:
                break
        return self.isomorphic_space(n_fixed, n_cycles, prefix)

    def isomorphic_space(self, n_fixed: int, n_cycles: int, prefix: str = "s") -> FiniteSpace:
        """A space with the given numbers of fixed points and 2-cycles, roles shuffled over the labels."""
        roles = [f"{prefix}{i + 1}" for i in range(n_fixed + 2 * n_cycles)]
        self.rng.shuffle(roles)
        return _build_space(n_fixed, n_cycles, roles, prefix)

    def element(self, space: FiniteSpace, sparse: bool = False) -> AlgebraElement:
        """A random element; with `sparse`, each orbit is left at zero with probability 1/2."""
        vector = []
        for orbit in space.orbits:
            keep = not sparse or self.rng.random() < 0.5
            vector.append(self.rational() if keep else 0)
            if not orbit.is_fixed:
                vector.append(self.rational() if keep else 0)
        return from_coords(space, vector)

    def functional(self, space: FiniteSpace) -> Functional:
        return Functional(space, tuple(self.rational() for _ in range(space.dim)))

    def _matrix(self, space: FiniteSpace) -> list[list[Fraction]]:
        return [[self.rational() for _ in range(space.dim)] for _ in range(space.dim)]

    def _finish_form(self, V: BilinearForm) -> BilinearForm:
        self.last_form = self.mutate_form(V) if self.cfg.mutate else V
        return self.last_form

    def form(self, space: FiniteSpace) -> BilinearForm:
        """An arbitrary bilinear form."""
        self.last_form = BilinearForm(space, tuple(map(tuple, self._matrix(space))))
        return self.last_form

    def orthogonal_form(self, space: FiniteSpace) -> BilinearForm:
        """compose_form of two random functionals."""
        return self._finish_form(compose_form(self.functional(space), self.functional(space)))

    def _block_matrix(self, space: FiniteSpace) -> list[list[Fraction]]:
        orbit = space.coord_orbits
        matrix = self._matrix(space)
        for i, j in itertools.product(range(space.dim), repeat=2):
            if orbit[i] != orbit[j]:
                matrix[i][j] = Fraction(0)
        return matrix

    def orthogonal_form_complete(self, space: FiniteSpace) -> BilinearForm:
        """An arbitrary matrix with every cross-orbit entry set to zero."""
        return self._finish_form(BilinearForm(space, tuple(map(tuple, self._block_matrix(space)))))

    def symmetric_orthogonal_form(self, space: FiniteSpace) -> BilinearForm:
        """M + M^T for a block-diagonal M."""
        matrix = self._block_matrix(space)
        n = space.dim
        symmetric = tuple(tuple(matrix[i][j] + matrix[j][i] for j in range(n)) for i in range(n))
        return self._finish_form(BilinearForm(space, symmetric))

    def mutate_form(self, V: BilinearForm) -> BilinearForm:
        """Sets one cross-orbit entry to a non-zero value; forms on a single orbit are returned unchanged."""
        orbit = V.space.coord_orbits
        cross = [(i, j) for i in range(V.space.dim) for j in range(V.space.dim) if orbit[i] != orbit[j]]
        if not cross:
            return V
        i, j = self.rng.choice(cross)
        matrix = [list(row) for row in V.matrix]
        matrix[i][j] += self.nonzero_rational()
        if matrix[i][j] == 0:
            matrix[i][j] = Fraction(1)
        logging.debug(f"Mutated form entry ({i}, {j})")
        return BilinearForm(V.space, tuple(map(tuple, matrix)))

    def _weights(self, real: bool, target_fixed: bool) -> tuple[CRational, CRational]:
        draw = (lambda: CRational(self.rational())) if real else self.complex
        while True:
            w1 = draw()
            w2 = ZERO if target_fixed else draw()
            if not (w1.is_zero() and w2.is_zero()):
                return w1, w2

    def structure(self, L1: FiniteSpace, L2: FiniteSpace, allow_zero: bool = True) -> PreserverStructure:
        """A random (phi, a1, a2); each codomain orbit joins z3 with probability 1/6 when allowed."""
        phi, a1, a2 = {}, {}, {}
        for s in L2.fixed + L2.representatives:
            partner = L2.sigma_of(s)
            if allow_zero and self.rng.random() < 1 / 6:
                a1[s] = a1[partner] = a2[s] = a2[partner] = ZERO
                continue
            target = self.rng.choice(L1.orbits)
            w1, w2 = self._weights(s == partner, target.is_fixed)
            phi[s] = phi[partner] = target.rep
            a1[s], a2[s] = w1, w2
            a1[partner], a2[partner] = w1.conjugate(), w2.conjugate()
        z1 = tuple(p for p in L2.points if p in phi)
        z3 = tuple(p for p in L2.points if p not in phi)
        return PreserverStructure(L1, L2, z1, z3, phi, a1, a2)

    def _finish_map(self, T: LinearMap) -> LinearMap:
        self.last_map = self.mutate_map(T) if self.cfg.mutate else T
        return self.last_map

    def op_map(self, L1: FiniteSpace, L2: FiniteSpace) -> LinearMap:
        return self._finish_map(reconstruct(self.structure(L1, L2)))

    def _invertible_block(self) -> Optional[tuple[CRational, CRational]]:
        """Complex weights (a1, a2) with det [[Re a1, Re a2], [Im a1, Im a2]] != 0, or None."""
        for _ in range(DETERMINANT_ATTEMPTS):
            w1, w2 = self.complex(), self.complex()
            if _determinant(w1, w2) != 0:
                return w1, w2
        return None

    def _invertible_real_rows(self) -> list[tuple[CRational, CRational]]:
        """Two real weight rows forming an invertible 2x2 matrix."""
        while True:
            g1, e1, g2, e2 = (self.rational() for _ in range(4))
            if g1 * e2 - e1 * g2 != 0:
                return [(CRational(g1), CRational(e1)), (CRational(g2), CRational(e2))]

    def biop_structure(self, L1: FiniteSpace, L2: FiniteSpace) -> PreserverStructure:
        """A structure satisfying the bi-OP criterion.

        Raises:
            IncompatibleSpaces: If the spaces differ in their numbers of fixed points or 2-cycles.
        """
        if len(L1.fixed) != len(L2.fixed) or len(L1.representatives) != len(L2.representatives):
            raise IncompatibleSpaces("The spaces admit no bi-orthogonality preserving map")
        while True:
            fixed_targets, cycle_targets = list(L1.fixed), list(L1.representatives)
            self.rng.shuffle(fixed_targets)
            self.rng.shuffle(cycle_targets)
            phi, a1, a2 = {}, {}, {}
            for s, t in zip(L2.fixed, fixed_targets):
                phi[s], a1[s], a2[s] = t, CRational(self.nonzero_rational()), ZERO
            complete = True
            for s, t in zip(L2.representatives, cycle_targets):
                block = self._invertible_block()
                if block is None:
                    complete = False
                    break
                partner = L2.sigma_of(s)
                phi[s] = phi[partner] = t
                a1[s], a2[s] = block
                a1[partner], a2[partner] = block[0].conjugate(), block[1].conjugate()
            if complete:
                return PreserverStructure(L1, L2, L2.points, (), phi, a1, a2)
            logging.debug("Redrawing bi-OP structure after singular blocks")

    def biop_map(self, L1: FiniteSpace, L2: FiniteSpace) -> LinearMap:
        return self._finish_map(reconstruct(self.biop_structure(L1, L2)))

    def op_bijection(self, L1: FiniteSpace, split: bool = True) -> LinearMap:
        """An OP bijection onto a freshly generated codomain.

        With `split`, a 2-cycle of L1 may be read by two fixed codomain points through
        an invertible real 2x2 block; such maps are OP bijections but not bi-OP.
        """
        labels: list[str] = []
        sigma: dict[str, str] = {}
        phi, a1, a2 = {}, {}, {}

        def new_label() -> str:
            labels.append(f"s{len(labels) + 1}")
            return labels[-1]

        for orbit in L1.orbits:
            if orbit.is_fixed:
                s = new_label()
                phi[s], a1[s], a2[s] = orbit.rep, CRational(self.nonzero_rational()), ZERO
                continue
            if split and self.rng.random() < 0.5:
                for w1, w2 in self._invertible_real_rows():
                    s = new_label()
                    phi[s], a1[s], a2[s] = orbit.rep, w1, w2
                continue
            block = None
            while block is None:
                block = self._invertible_block()
            s, partner = new_label(), new_label()
            sigma[s] = partner
            phi[s] = phi[partner] = orbit.rep
            a1[s], a2[s] = block
            a1[partner], a2[partner] = block[0].conjugate(), block[1].conjugate()

        order = labels[:]
        self.rng.shuffle(order)
        L2 = make_space(order, sigma)
        T = reconstruct(PreserverStructure(L1, L2, L2.points, (), phi, a1, a2))
        return self._finish_map(T)

    def mutate_map(self, T: LinearMap) -> LinearMap:
        """Replaces the image of one basis element by the non-zero image of a basis element on another orbit."""
        orbit = T.domain.coord_orbits
        columns = [list(c) for c in T.columns]
        choices = [
            (j, k)
            for j in range(T.domain.dim)
            for k in range(T.domain.dim)
            if orbit[j] != orbit[k] and any(columns[k])
        ]
        if not choices:
            return T
        j, k = self.rng.choice(choices)
        columns[j] = list(columns[k])
        logging.debug(f"Redirected basis image {j} to that of {k}")
        return LinearMap(T.domain, T.codomain, linalg.transpose(tuple(map(tuple, columns))))


def random_space(cfg: GenConfig) -> FiniteSpace:
    return SampleGenerator(cfg).space()


def random_element(space: FiniteSpace, cfg: GenConfig) -> AlgebraElement:
    return SampleGenerator(cfg).element(space)


def random_functional(space: FiniteSpace, cfg: GenConfig) -> Functional:
    return SampleGenerator(cfg).functional(space)


def random_orthogonal_form(space: FiniteSpace, cfg: GenConfig) -> BilinearForm:
    return SampleGenerator(cfg).orthogonal_form(space)


def random_orthogonal_form_complete(space: FiniteSpace, cfg: GenConfig) -> BilinearForm:
    return SampleGenerator(cfg).orthogonal_form_complete(space)


def random_symmetric_orthogonal_form(space: FiniteSpace, cfg: GenConfig) -> BilinearForm:
    return SampleGenerator(cfg).symmetric_orthogonal_form(space)


def random_form(space: FiniteSpace, cfg: GenConfig) -> BilinearForm:
    return SampleGenerator(cfg).form(space)


def random_structure(L1: FiniteSpace, L2: FiniteSpace, cfg: GenConfig) -> PreserverStructure:
    return SampleGenerator(cfg).structure(L1, L2)


def random_op_map(L1: FiniteSpace, L2: FiniteSpace, cfg: GenConfig) -> LinearMap:
    return SampleGenerator(cfg).op_map(L1, L2)


def random_biop_map(L1: FiniteSpace, L2: FiniteSpace, cfg: GenConfig) -> LinearMap:
    return SampleGenerator(cfg).biop_map(L1, L2)


def random_op_bijection(L1: FiniteSpace, cfg: GenConfig, split: bool = True) -> LinearMap:
    return SampleGenerator(cfg).op_bijection(L1, split)


def mutate_form(V: BilinearForm, cfg: GenConfig) -> BilinearForm:
    return SampleGenerator(cfg).mutate_form(V)


def mutate_map(T: LinearMap, cfg: GenConfig) -> LinearMap:
    return SampleGenerator(cfg).mutate_map(T)


def enumerate_spaces(max_points: int) -> list[FiniteSpace]:
    """One space per (fixed points, 2-cycles) shape with 1..max_points points."""
    spaces = []
    for n in range(1, max_points + 1):
        for n_cycles in range(n // 2 + 1):
            n_fixed = n - 2 * n_cycles
            roles = [f"t{i + 1}" for i in range(n)]
            spaces.append(_build_space(n_fixed, n_cycles, roles, "t"))
    return spaces


def enumerate_structures(
    L1: FiniteSpace,
    L2: FiniteSpace,
    real_grid: Sequence[Fraction] = (Fraction(0), Fraction(1)),
    complex_grid: Sequence[CRational] = (ZERO, CRational(1), CRational(0, 1)),
) -> Iterator[PreserverStructure]:
    """Every structure whose weights come from the given grids.

    Weights at fixed codomain points are drawn from `real_grid`, the others from
    `complex_grid`; each codomain orbit may also belong to z3.
    """
    reals = [CRational(v) for v in real_grid]
    heads = list(L2.fixed + L2.representatives)
    options = []
    for s in heads:
        values = reals if s in L2.fixed else list(complex_grid)
        choices: list[Optional[tuple[str, CRational, CRational]]] = [None]
        for target in L1.orbits:
            seconds = [ZERO] if target.is_fixed else values
            for w1, w2 in itertools.product(values, seconds):
                if not (w1.is_zero() and w2.is_zero()):
                    choices.append((target.rep, w1, w2))
        options.append(choices)
    for picks in itertools.product(*options):
        phi, a1, a2 = {}, {}, {}
        for s, pick in zip(heads, picks):
            partner = L2.sigma_of(s)
            if pick is None:
                a1[s] = a1[partner] = a2[s] = a2[partner] = ZERO
                continue
            t, w1, w2 = pick
            phi[s] = phi[partner] = t
            a1[s], a2[s] = w1, w2
            a1[partner], a2[partner] = w1.conjugate(), w2.conjugate()
        z1 = tuple(p for p in L2.points if p in phi)
        z3 = tuple(p for p in L2.points if p not in phi)
        yield PreserverStructure(L1, L2, z1, z3, phi, a1, a2)


def _pair_doc(pair: tuple[AlgebraElement, AlgebraElement]) -> list[dict]:
    return [documents.element_to_doc(x) for x in pair]


# Suite trials: each returns None on success or a counterexample document.


def _algebra_tau_symmetry(gen: SampleGenerator) -> Optional[dict]:
    space = gen.space()
    x, y = gen.element(space), gen.element(space)
    h, k = hermitian_split(x)
    products = (x * y, x + y, x.star(), h, k)
    if h + k != x or h.star() != h or k.star() != -k or from_coords(space, coords(x)) != x:
        return {"element": documents.element_to_doc(x)}
    if any(z.space != space for z in products):
        return {"element": documents.element_to_doc(x)}
    return None


def _algebra_orthogonality(gen: SampleGenerator) -> Optional[dict]:
    space = gen.space()
    x, y = gen.element(space, sparse=True), gen.element(space, sparse=True)
    if is_orthogonal_pair(x, y) != (not (orbit_support(x) & orbit_support(y))):
        return {"pair": _pair_doc((x, y))}
    return None


def _forms_soundness(gen: SampleGenerator) -> Optional[dict]:
    V = gen.orthogonal_form(gen.space())
    pair = orthogonality_oracle(V, trials=10, seed=gen.seed())
    if not is_orthogonal_form(V) or pair is not None:
        return {"form": documents.form_to_doc(V), "pair": _pair_doc(pair) if pair else None}
    return None


def _forms_completeness(gen: SampleGenerator) -> Optional[dict]:
    V = gen.orthogonal_form_complete(gen.space())
    try:
        decompose(V)
    except NotOrthogonal as e:
        pair = e.counterexample
        return {"form": documents.form_to_doc(V), "pair": _pair_doc(pair) if pair else None}
    return None


def _forms_oracle_agreement(gen: SampleGenerator) -> Optional[dict]:
    space = gen.space()
    V = gen.form(space) if gen.rng.random() < 0.5 else gen.orthogonal_form_complete(space)
    if is_orthogonal_form(V) != (orthogonality_oracle(V, trials=20, seed=gen.seed()) is None):
        return {"form": documents.form_to_doc(V)}
    return None


def _forms_representation_equivalence(gen: SampleGenerator) -> Optional[dict]:
    space = gen.space()
    p = (gen.functional(space), gen.functional(space))
    choice = gen.rng.randrange(3)
    if choice == 0:
        decomposition = decompose(compose_form(*p))
        q = (decomposition.phi1, decomposition.phi2)
    elif choice == 1:
        q = (gen.functional(space), gen.functional(space))
    else:
        q = (p[0] + gen.functional(space), p[1])
    equivalent = representation_equivalent(p, q)
    if choice == 0 and not equivalent:
        return {"p": [documents.functional_to_doc(f) for f in p], "q": [documents.functional_to_doc(f) for f in q]}
    return None


def _forms_symmetric_sa(gen: SampleGenerator) -> Optional[dict]:
    symmetric_sa_functional(gen.symmetric_orthogonal_form(gen.space()))
    return None


def _forms_lemma23(gen: SampleGenerator) -> Optional[dict]:
    V = gen.orthogonal_form_complete(gen.space())
    if gen.rng.random() < 0.5:
        V = gen.mutate_form(V)
    report = lemma23_checks(V, seed=gen.seed())
    if is_orthogonal_form(V) and not report.orthogonal_on_sa:
        return {"form": documents.form_to_doc(V)}
    return None


def _forms_complexification(gen: SampleGenerator) -> Optional[dict]:
    space = gen.space()
    if gen.rng.random() < 0.5:
        V = compose_form(gen.functional(space), Functional.zero(space))
    else:
        V = gen.orthogonal_form_complete(space)
    if is_extension_orthogonal(complexify_form(V)) != (phi2_eliminable(V) is not None):
        return {"form": documents.form_to_doc(V)}
    return None


def _forms_prop33(gen: SampleGenerator) -> Optional[dict]:
    prop33_identities(gen.orthogonal_form_complete(gen.space()), seed=gen.seed())
    return None


def _preservers_op_equivalence(gen: SampleGenerator) -> Optional[dict]:
    T = gen.op_map(gen.space(), gen.space(prefix="s"))
    if gen.rng.random() < 0.5:
        T = gen.mutate_map(T)
    if is_orthogonality_preserving(T) != (op_oracle(T, trials=20, seed=gen.seed()) is None):
        return {"map": documents.map_to_doc(T)}
    return None


def _preservers_analyze_roundtrip(gen: SampleGenerator) -> Optional[dict]:
    T = gen.op_map(gen.space(), gen.space(prefix="s"))
    structure = analyze(T)
    if reconstruct(structure).matrix != T.matrix or structure.z2:
        return {"map": documents.map_to_doc(T)}
    return None


def _preservers_reconstruct_roundtrip(gen: SampleGenerator) -> Optional[dict]:
    structure = gen.structure(gen.space(), gen.space(prefix="s"))
    T = gen._finish_map(reconstruct(structure))
    if analyze(T) != structure:
        return {"structure": documents.structure_to_doc(structure)}
    return None


def _preservers_biop_criterion(gen: SampleGenerator) -> Optional[dict]:
    L1 = gen.space()
    if gen.rng.random() < 0.5:
        T = gen.biop_map(L1, gen.isomorphic_space(len(L1.fixed), len(L1.representatives)))
        if not is_biorthogonality_preserving(T).holds:
            return {"map": documents.map_to_doc(T)}
    else:
        is_biorthogonality_preserving(gen.op_bijection(L1))
    return None


def _preservers_invert_biop(gen: SampleGenerator) -> Optional[dict]:
    L1 = gen.space()
    T = gen.biop_map(L1, gen.isomorphic_space(len(L1.fixed), len(L1.representatives)))
    decision = is_biorthogonality_preserving(T)
    if not decision.holds:
        return {"map": documents.map_to_doc(T), "reason": decision.reason}
    invert_biop(decision.certificate)
    return None


def _preservers_inverse_invertibles(gen: SampleGenerator) -> Optional[dict]:
    T = gen.op_bijection(gen.space())
    if not inverse_preserves_invertibles_check(T, trials=20, seed=gen.seed()):
        return {"map": documents.map_to_doc(T)}
    return None


def _preservers_remark(gen: SampleGenerator) -> Optional[dict]:
    T = gen.op_bijection(gen.space()) if gen.rng.random() < 0.5 else gen.op_map(gen.space(), gen.space(prefix="s"))
    if not remark_consequences_check(T).all_hold:
        return {"map": documents.map_to_doc(T)}
    return None


def _preservers_f2_empty(gen: SampleGenerator) -> Optional[dict]:
    if gen.cfg.max_cycles == 0:
        return None
    f2_empty_implies_biop_check(gen.op_bijection(gen.space(allow_fixed=False), split=False))
    return None


def _preservers_spaces_admit_biop(gen: SampleGenerator) -> Optional[dict]:
    L1, L2 = gen.space(), gen.space(prefix="s")
    expected = len(L1.fixed) == len(L2.fixed) and len(L1.representatives) == len(L2.representatives)
    twin = gen.isomorphic_space(len(L1.fixed), len(L1.representatives))
    if spaces_admit_biop(L1, L2) != expected or not spaces_admit_biop(L1, twin):
        return {"spaces": [documents.space_to_doc(L1), documents.space_to_doc(L2)]}
    return None


def _genfuzz_generator_soundness(gen: SampleGenerator) -> Optional[dict]:
    L1 = gen.space()
    gen.element(L1)
    for V in (gen.orthogonal_form(L1), gen.orthogonal_form_complete(L1), gen.symmetric_orthogonal_form(L1)):
        if not is_orthogonal_form(V):
            return {"form": documents.form_to_doc(V)}
    L2 = gen.isomorphic_space(len(L1.fixed), len(L1.representatives))
    T = gen.op_map(L1, gen.space(prefix="s"))
    if not is_orthogonality_preserving(T):
        return {"map": documents.map_to_doc(T)}
    T = gen.biop_map(L1, L2)
    if not is_biorthogonality_preserving(T).holds:
        return {"map": documents.map_to_doc(T)}
    T = gen.op_bijection(L1)
    if not (is_bijective(T) and is_orthogonality_preserving(T)):
        return {"map": documents.map_to_doc(T)}
    return None


SUITES: dict[str, Callable[[SampleGenerator], Optional[dict]]] = {
    "algebra.tau_symmetry": _algebra_tau_symmetry,
    "algebra.orthogonality": _algebra_orthogonality,
    "forms.soundness": _forms_soundness,
    "forms.completeness": _forms_completeness,
    "forms.oracle_agreement": _forms_oracle_agreement,
    "forms.representation_equivalence": _forms_representation_equivalence,
    "forms.symmetric_sa": _forms_symmetric_sa,
    "forms.lemma23": _forms_lemma23,
    "forms.complexification": _forms_complexification,
    "forms.prop33": _forms_prop33,
    "preservers.op_equivalence": _preservers_op_equivalence,
    "preservers.analyze_roundtrip": _preservers_analyze_roundtrip,
    "preservers.reconstruct_roundtrip": _preservers_reconstruct_roundtrip,
    "preservers.biop_criterion": _preservers_biop_criterion,
    "preservers.invert_biop": _preservers_invert_biop,
    "preservers.inverse_invertibles": _preservers_inverse_invertibles,
    "preservers.remark": _preservers_remark,
    "preservers.f2_empty": _preservers_f2_empty,
    "preservers.spaces_admit_biop": _preservers_spaces_admit_biop,
    "genfuzz.generator_soundness": _genfuzz_generator_soundness,
}


@dataclass(frozen=True)
class SuiteReport:
    """Outcome of one suite run.

    Attributes:
        suite: The suite name.
        seed: The master seed.
        trials: The number of trials requested.
        status: "pass" or "fail".
        counterexample: The shrunk counterexample document of the first failing trial.
    """

    suite: str
    seed: int
    trials: int
    status: str
    counterexample: Optional[dict] = None

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_doc(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "trials": self.trials,
            "status": self.status,
            "counterexample": self.counterexample,
        }


def _error_doc(error: Exception, gen: SampleGenerator) -> dict:
    """Serializes a trial that raised, with the offending pair and the last generated form or map."""
    doc = {"error": type(error).__name__, "message": str(error)}
    pair = getattr(error, "counterexample", None) or getattr(error, "witness", None)
    if pair is not None:
        doc["pair"] = _pair_doc(pair)
    if gen.last_form is not None:
        doc["form"] = documents.form_to_doc(gen.last_form)
    if gen.last_map is not None:
        doc["map"] = documents.map_to_doc(gen.last_map)
    return doc


def _run_trial(trial: Callable[[SampleGenerator], Optional[dict]], cfg: GenConfig) -> Optional[dict]:
    gen = SampleGenerator(cfg)
    try:
        return trial(gen)
    except (OrthoformsError, InvariantViolation) as e:
        return _error_doc(e, gen)


def _shrink(trial: Callable[[SampleGenerator], Optional[dict]], cfg: GenConfig, failure: dict) -> dict:
    """Re-runs a failing trial on increasingly larger bounds and keeps the first failure."""
    sizes = sorted(
        (
            (f, c)
            for f in range(cfg.max_fixed + 1)
            for c in range(cfg.max_cycles + 1)
            if f + c > 0 and (f, c) != (cfg.max_fixed, cfg.max_cycles)
        ),
        key=lambda fc: (fc[0] + fc[1], fc),
    )
    for max_fixed, max_cycles in sizes:
        try:
            smaller = cfg.with_bounds(max_fixed, max_cycles)
        except ConfigError:
            continue
        result = _run_trial(trial, smaller)
        if result is not None:
            logging.warning(f"Shrunk failure to max_fixed={max_fixed}, max_cycles={max_cycles}")
            return {**result, "max_fixed": max_fixed, "max_cycles": max_cycles, "shrunk": True}
    return {**failure, "max_fixed": cfg.max_fixed, "max_cycles": cfg.max_cycles, "shrunk": False}


def run_suite(name: str, cfg: GenConfig, on_trial: Optional[Callable[[int], None]] = None) -> SuiteReport:
    """Runs one property suite.

    Args:
        name: A key of SUITES.
        cfg: The master configuration; trial i runs with cfg.for_trial(i).
        on_trial: Called with the trial index after each trial.

    Returns:
        A pass report, or a fail report carrying the shrunk counterexample of the first failing trial.

    Raises:
        UnknownSuite: If the name is not registered.
    """
    if name not in SUITES:
        raise UnknownSuite(f"Unknown suite {name!r}; known suites: {', '.join(SUITES)}")
    trial = SUITES[name]
    for index in range(cfg.trials):
        trial_cfg = cfg.for_trial(index)
        failure = _run_trial(trial, trial_cfg)
        if on_trial is not None:
            on_trial(index)
        if failure is not None:
            logging.warning(f"Suite {name} failed at trial {index}")
            counterexample = _shrink(trial, trial_cfg, failure)
            counterexample.update(trial=index, trial_seed=trial_cfg.seed)
            return SuiteReport(name, cfg.seed, cfg.trials, "fail", counterexample)
    logging.info(f"Suite {name} passed {cfg.trials} trials")
    return SuiteReport(name, cfg.seed, cfg.trials, "pass")
