"""Tests for generators and property suites in src/genfuzz.py."""

import itertools
from unittest.mock import MagicMock

import pytest

from src import documents
from src.algebra_core import make_space
from src.config import GenConfig
from src.errors import IncompatibleSpaces, UnknownSuite
from src.forms import is_orthogonal_form
from src.genfuzz import (
    SUITES,
    SampleGenerator,
    enumerate_spaces,
    enumerate_structures,
    mutate_form,
    mutate_map,
    random_biop_map,
    random_op_bijection,
    random_op_map,
    random_orthogonal_form,
    random_space,
    run_suite,
)
from src.preservers import (
    compose,
    identity_map,
    inverse_map,
    invert_biop,
    is_bijective,
    is_biorthogonality_preserving,
    is_orthogonality_preserving,
    reconstruct,
)

SMALL = GenConfig(seed=11, max_fixed=2, max_cycles=2, trials=5)


@pytest.fixture
def mixed():
    return make_space(["t0", "t1", "t2"], {"t1": "t2"})


def test_random_space_respects_bounds():
    """Test that a single-cycle bound yields the two-point swap space."""
    space = random_space(GenConfig(max_fixed=0, max_cycles=1))

    assert space.dim == 2
    assert space.fixed == ()
    assert space.sigma_map() == {"t1": "t2", "t2": "t1"}


def test_generators_are_deterministic():
    """Test that the same configuration generates the same objects."""
    first, second = SampleGenerator(SMALL), SampleGenerator(SMALL)

    assert first.space() == second.space()
    space = first.space()
    assert first.orthogonal_form(space) == second.orthogonal_form(second.space())


def test_isomorphic_space_shape():
    """Test that isomorphic_space produces the requested orbit counts."""
    space = SampleGenerator(SMALL).isomorphic_space(1, 2)

    assert len(space.fixed) == 1
    assert len(space.representatives) == 2
    assert set(space.points) == {"s1", "s2", "s3", "s4", "s5"}


@pytest.mark.parametrize("seed", range(8))
def test_generated_objects_have_their_properties(seed):
    """Test that each generator produces objects with the promised property."""
    cfg = GenConfig(seed=seed, max_fixed=2, max_cycles=2)
    gen = SampleGenerator(cfg)
    L1 = gen.space()
    L2 = gen.isomorphic_space(len(L1.fixed), len(L1.representatives))

    assert is_orthogonal_form(random_orthogonal_form(L1, cfg))
    assert is_orthogonal_form(gen.orthogonal_form_complete(L1))
    assert gen.symmetric_orthogonal_form(L1).is_symmetric()
    assert is_orthogonality_preserving(random_op_map(L1, gen.space(prefix="s"), cfg))
    assert is_biorthogonality_preserving(random_biop_map(L1, L2, cfg)).holds
    T = random_op_bijection(L1, cfg)
    assert is_bijective(T) and is_orthogonality_preserving(T)


def test_structure_generator_is_valid(mixed):
    """Test that generated structures pass validation and reconstruct."""
    gen = SampleGenerator(SMALL)
    for _ in range(10):
        structure = gen.structure(mixed, mixed)
        structure.validate()
        assert is_orthogonality_preserving(reconstruct(structure))


def test_biop_structure_incompatible_spaces(mixed):
    """Test that spaces with different orbit counts are refused."""
    swap = make_space(["t1", "t2"], {"t1": "t2"})
    with pytest.raises(IncompatibleSpaces):
        SampleGenerator(SMALL).biop_structure(mixed, swap)


def test_mutate_form_breaks_orthogonality(mixed):
    """Test that a mutated orthogonal form is no longer orthogonal."""
    V = random_orthogonal_form(mixed, SMALL)
    assert not is_orthogonal_form(mutate_form(V, SMALL))


def test_mutate_form_single_orbit_is_unchanged():
    """Test that forms without cross-orbit entries cannot be mutated."""
    swap = make_space(["t1", "t2"], {"t1": "t2"})
    V = random_orthogonal_form(swap, SMALL)
    assert mutate_form(V, SMALL) == V


def test_mutate_map_breaks_orthogonality_preservation(mixed):
    """Test that redirecting a basis image across orbits breaks OP."""
    assert not is_orthogonality_preserving(mutate_map(identity_map(mixed), SMALL))


def test_mutating_generator_injects_defects(mixed):
    """Test that mutate=True corrupts generated forms."""
    gen = SampleGenerator(GenConfig(seed=2, mutate=True))
    assert not is_orthogonal_form(gen.orthogonal_form(mixed))


def test_enumerate_spaces():
    """Test that every (fixed, cycles) shape up to three points appears once."""
    shapes = [(len(s.fixed), len(s.representatives)) for s in enumerate_spaces(3)]
    assert shapes == [(1, 0), (2, 0), (0, 1), (3, 0), (1, 1)]


def test_enumerated_structures_agree_with_definition(mixed):
    """Test the bi-OP criterion against the direct definition on every small structure."""
    structures = list(enumerate_structures(mixed, mixed))

    decisions = [is_biorthogonality_preserving(reconstruct(s)) for s in structures]

    assert len(structures) == 55
    assert sum(d.holds for d in decisions) == 2


def test_run_suite_unknown_name():
    """Test that unregistered suite names raise UnknownSuite."""
    with pytest.raises(UnknownSuite):
        run_suite("forms.nothing", SMALL)


def test_run_suite_zero_trials_passes():
    """Test that a suite with no trials passes."""
    report = run_suite("forms.soundness", GenConfig(trials=0))
    assert report.passed
    assert report.to_doc()["counterexample"] is None


@pytest.mark.parametrize("name", ["forms.soundness", "preservers.biop_criterion", "genfuzz.generator_soundness"])
def test_run_suite_passes(name):
    """Test that suites pass on sound generators and report every trial."""
    on_trial = MagicMock()

    report = run_suite(name, SMALL, on_trial)

    assert report.status == "pass"
    assert on_trial.call_count == SMALL.trials


def test_run_suite_with_mutation_fails_with_counterexample():
    """Test that injected defects are caught and shrunk."""
    cfg = GenConfig(seed=4, trials=3, mutate=True)

    report = run_suite("forms.soundness", cfg)

    assert report.status == "fail"
    counterexample = report.counterexample
    assert counterexample["trial"] == 0
    assert counterexample["trial_seed"] == cfg.for_trial(0).seed
    assert "form" in counterexample
    assert counterexample["max_fixed"] + counterexample["max_cycles"] >= 2


def test_suite_reports_are_reproducible():
    """Test that identical seeds give byte-identical reports."""
    cfg = GenConfig(seed=9, trials=2, mutate=True)

    first = documents.dumps(run_suite("forms.completeness", cfg).to_doc())
    second = documents.dumps(run_suite("forms.completeness", cfg).to_doc())

    assert first == second


def test_suite_registry_names():
    """Test that every registered suite is namespaced by its module."""
    assert len(SUITES) == 20
    assert all(name.split(".")[0] in {"algebra", "forms", "preservers", "genfuzz"} for name in SUITES)


@pytest.mark.slow
@pytest.mark.timeout(1800)
def test_biop_criterion_matches_definition_on_all_small_spaces():
    """Test the bi-OP criterion against T, T^-1 both OP for every grid structure on spaces with up to 4 points."""
    spaces = enumerate_spaces(4)
    checked = certified = 0

    for L1, L2 in itertools.product(spaces, repeat=2):
        for structure in enumerate_structures(L1, L2):
            T = reconstruct(structure)
            direct = (
                is_bijective(T) and is_orthogonality_preserving(T) and is_orthogonality_preserving(inverse_map(T))
            )
            decision = is_biorthogonality_preserving(T)
            assert decision.holds == direct, documents.dumps(documents.map_to_doc(T))
            if decision.holds:
                S = invert_biop(decision.certificate)
                assert compose(S, T) == identity_map(L1)
                assert compose(T, S) == identity_map(L2)
                certified += 1
            checked += 1

    assert checked > 5000
    assert certified > 0


def test_raising_trial_reports_pair_and_form():
    """Test that a trial failing by an exception still serializes the form and the orthogonal pair."""
    report = run_suite("forms.prop33", GenConfig(seed=3, trials=5, mutate=True))

    assert report.status == "fail"
    counterexample = report.counterexample
    assert counterexample["error"] == "NotOrthogonal"
    assert "form" in counterexample
    assert len(counterexample["pair"]) == 2


def test_raising_trial_reports_witness_and_map():
    """Test that a map rejected by analyze is serialized together with its witness pair."""
    report = run_suite("preservers.analyze_roundtrip", GenConfig(seed=5, trials=10, mutate=True))

    assert report.status == "fail"
    counterexample = report.counterexample
    assert counterexample["error"] in {"NotOrthogonalityPreserving", "MultiOrbitSupport"}
    assert set(counterexample["map"]) == {"domain", "codomain", "matrix"}
    assert len(counterexample["pair"]) == 2
