"""Exact tools for nonlinear superposition: Lie closure of polynomial vector
fields, Newton-polytope witnesses, and Riccati difference schemes."""

__version__ = "0.1.0"

from .algebra import LaurentPolynomial, TimeExpression, default_names
from .closure import (BUDGET_EXCEEDED, DEFAULT_MAX_ROUNDS, FINITE, INFINITE, ConditionRecord,
                      DecisionReport, DegreeWitness, WitnessPair, check_general, check_one_dim,
                      growth_sequence, verify_finite, witness_conditions)
from .expr import ParseError
from .fields import (DForm, SpanBasis, VectorField, add_pairwise_commutators, d_form_bracket_term,
                     from_d_form, lie_bracket, prolong, span_of, to_d_form)
from .integrators import (MatrixRiccatiSystem, PoleStepError, RiccatiCoefficients,
                          SingularMatrixError, Trajectory, evolve_family,
                          matrix_riccati_integrate,
                          matrix_riccati_oracle, matrix_riccati_step, riccati_integrate,
                          riccati_step_explicit, riccati_step_semi_implicit, uqh_step)
from .io import (SchemaError, SystemDocument, dumps_report, load_system, loads_report,
                 parse_polynomial, parse_system)
from .polytope import LatticePolytope, is_vertex_of, minkowski_sum, newton_polytope, norm_sq
from .superposition import (DegenerateConfiguration, RationalExpression, cross_ratio,
                            cross_ratio_rule, riccati_superpose, verify_rule)
