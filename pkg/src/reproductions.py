"""The two worked examples, rebuilt and checked.

complexification: on the two-point space with sigma swapping t1 and t2, the form
V(x, y) = Re(x(t1) y(t2)) = Re((x y*)(t1)) is orthogonal, yet its complex-bilinear
extension does not vanish on (chi_t1, chi_t2).

biop: a linear bijection between five-point spaces that preserves orthogonality
while its inverse does not. The 2-cycles {t1, t1'}, {t3, t3'} and {s1, s1'} carry
explicit partner points.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from src import documents
from src.algebra_core import CRational, FiniteSpace, canonical_basis, coords, element, make_space
from src.errors import InvariantViolation
from src.forms import (
    BilinearForm,
    FormDecomposition,
    Functional,
    complexify_form,
    decompose,
    is_extension_orthogonal,
    is_orthogonal_form,
    orthogonality_oracle,
    phi2_eliminable,
    representation_equivalent,
)
from src.preservers import (
    SUPPORT_MAP_FAILURE,
    BiopDecision,
    LinearMap,
    PreserverStructure,
    analyze,
    inverse_preserves_invertibles_check,
    is_bijective,
    is_biorthogonality_preserving,
    is_orthogonality_preserving,
    remark_consequences_check,
    spaces_admit_biop,
)


VALUE_NOTE = (
    "extension_value is the complex-bilinear extension W(x1 + i x2, y1 + i y2) = V(x1, y1) - V(x2, y2)"
    " + i (V(x1, y2) + V(x2, y1)) at (chi_t1, chi_t2); formula_value plugs chi_t1, chi_t2 straight into"
    " Re(x(t1) y(t2)), which is not complex-bilinear. Both are non-zero."
)


def _check(condition: bool, message: str) -> None:
    if not condition:
        raise InvariantViolation(f"Worked example does not reproduce: {message}")


def swap_space() -> FiniteSpace:
    return make_space(["t1", "t2"], {"t1": "t2"})


def complexification_form() -> BilinearForm:
    """V(x, y) = Re(x(t1) y(t2)) on the swap space."""
    return BilinearForm.from_function(swap_space(), lambda x, y: (x.at("t1") * y.at("t2")).re)


@dataclass(frozen=True)
class ComplexificationExample:
    form: BilinearForm
    decomposition: FormDecomposition
    reference: tuple[Functional, Functional]
    extension_value: CRational
    formula_value: CRational
    extension_orthogonal: bool
    eliminable: Optional[Functional]

    def to_doc(self) -> dict:
        return {
            "example": "complexification",
            "form": documents.form_to_doc(self.form),
            "orthogonal": True,
            "decomposition": documents.decomposition_to_doc(self.decomposition),
            "equivalent_to_reference": True,
            "extension_value": [str(self.extension_value.re), str(self.extension_value.im)],
            "formula_value": [str(self.formula_value.re), str(self.formula_value.im)],
            "value_note": VALUE_NOTE,
            "extension_orthogonal": self.extension_orthogonal,
            "phi2_eliminable": self.eliminable is not None,
            "verdict": "extension orthogonal" if self.extension_orthogonal else "extension NOT orthogonal",
        }


def complexification_example() -> ComplexificationExample:
    """Rebuilds the complexification example and checks every stated outcome.

    Raises:
        InvariantViolation: If an outcome does not reproduce.
    """
    V = complexification_form()
    space = V.space
    _check(is_orthogonal_form(V), "the real form must be orthogonal")
    _check(orthogonality_oracle(V) is None, "the oracle must find no counterexample")
    decomposition = decompose(V)
    # phi1 = 0, phi2 = Re evaluation at t1
    reference = (Functional.zero(space), Functional(space, (Fraction(1), Fraction(0))))
    _check(
        representation_equivalent((decomposition.phi1, decomposition.phi2), reference),
        "the decomposition must be equivalent to (0, Re delta_t1)",
    )
    W = complexify_form(V)
    value = W.entry("t1", "t2")
    _check(not value.is_zero(), "the extension must not vanish on (chi_t1, chi_t2)")
    extension_orthogonal = is_extension_orthogonal(W)
    eliminable = phi2_eliminable(V)
    _check(not extension_orthogonal and eliminable is None, "the extension must not be orthogonal")
    chi_t1 = {"t1": CRational(1), "t2": CRational(0)}
    chi_t2 = {"t1": CRational(0), "t2": CRational(1)}
    formula_value = CRational((chi_t1["t1"] * chi_t2["t2"]).re)
    _check(not formula_value.is_zero(), "the defining formula must not vanish on (chi_t1, chi_t2)")
    logging.info(f"Complexification example reproduced: extension value {value}, formula value {formula_value}")
    return ComplexificationExample(V, decomposition, reference, value, formula_value, extension_orthogonal, eliminable)


def biop_spaces() -> tuple[FiniteSpace, FiniteSpace]:
    L1 = make_space(["t1", "t2", "t3", "t1'", "t3'"], {"t1": "t1'", "t3": "t3'"})
    L2 = make_space(["s1", "s2", "s3", "s4", "s1'"], {"s1": "s1'"})
    return L1, L2


def biop_map() -> LinearMap:
    """T(f)(s1) = f(t1), T(f)(s2) = f(t2), T(f)(s3) = Re f(t3), T(f)(s4) = Im f(t3)."""
    L1, L2 = biop_spaces()
    columns = []
    for b in canonical_basis(L1):
        f1, f3 = b.at("t1"), b.at("t3")
        image = element(
            L2,
            {"s1": f1, "s1'": f1.conjugate(), "s2": b.at("t2"), "s3": CRational(f3.re), "s4": CRational(f3.im)},
        )
        columns.append(coords(image))
    return LinearMap(L1, L2, tuple(zip(*columns)))


@dataclass(frozen=True)
class BiopExample:
    map: LinearMap
    structure: PreserverStructure
    decision: BiopDecision
    admits_biop: bool

    def to_doc(self) -> dict:
        return {
            "example": "biop",
            "map": documents.map_to_doc(self.map),
            "structure": documents.structure_to_doc(self.structure),
            "bijective": True,
            "orthogonality_preserving": True,
            "biorthogonality_preserving": self.decision.holds,
            "reason": self.decision.reason,
            "spaces_admit_biop": self.admits_biop,
            "verdict": "OP bijection, not bi-OP",
        }


def biop_example() -> BiopExample:
    """Rebuilds the preserver example and checks every stated outcome.

    Raises:
        InvariantViolation: If an outcome does not reproduce.
    """
    T = biop_map()
    L1, L2 = T.domain, T.codomain
    _check(is_bijective(T), "the map must be a linear bijection")
    _check(is_orthogonality_preserving(T), "the map must preserve orthogonality")
    structure = analyze(T)
    _check(structure.phi == {"s1": "t1", "s1'": "t1", "s2": "t2", "s3": "t3", "s4": "t3"}, "support map")
    decision = is_biorthogonality_preserving(T)
    _check(not decision.holds and decision.reason == SUPPORT_MAP_FAILURE, "the map must not be bi-OP")
    admits = spaces_admit_biop(L1, L2)
    _check(not admits, "no bi-OP map may exist between the spaces")
    _check(inverse_preserves_invertibles_check(T), "the inverse must preserve invertible elements")
    _check(remark_consequences_check(T).all_hold, "surjectivity consequences")
    logging.info("Bi-orthogonality example reproduced")
    return BiopExample(T, structure, decision, admits)
