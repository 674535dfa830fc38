"""Exact incidence algebras of finite posets over odd prime fields and the
rationals, with construction, validation and classification of their
involutions."""

from .algebra import IncidenceFunction, basis, center_basis, delta
from .classify import (ClassReport, EquivalenceWitness, class_count_formula,
                       classify_involutions, collapse_conjugator,
                       general_equivalent, inner_equivalent,
                       inner_equivalent_fast, inner_equivalent_scan,
                       run_battery)
from .fields import (PrimeField, Rationals, Scalar, SquareClassGroup,
                     square_class_count, square_class_group)
from .involutions import (CentralUnitCertificate, Involution, balancing_unit,
                          base_involution, canonical_unit,
                          central_certificate, enumerate_involutions,
                          induced_involution, make_involution,
                          solve_norm_equation)
from .morphisms import (AlgebraMap, MultiplicativeElement, compose_canonical,
                        conjugation_search, enumerate_multiplicative,
                        fractional_element, fractionality_gate, inner_equal,
                        is_fractional, mult_is_inner, transport,
                        units_mod_center)
from .posets import (ComponentAction, InvolutionDecomposition, Poset,
                     PosetMap, all_posets, anti_automorphisms, automorphisms,
                     build_poset, component_action, conjugate_involutions,
                     decompose_involution, involutions)

__version__ = "0.1.0"
