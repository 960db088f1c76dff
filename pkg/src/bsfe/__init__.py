"""Exact functional-equation calculator for localized polynomial modules.

The package computes, over the rationals and over prime fields, the
objects attached to a polynomial tuple f and its powers f^s: the Weyl
algebra action on the localized module carrying the formal symbol f^s,
verification and search of functional equations b(s) f^s = sum of
operator images, monomial splitting through normal affine semigroups,
test ideals via Cartier operators, and Newton-polyhedron multiplier
ideals, jumping numbers, V-filtrations and the zeroth Hodge ideal.

All arithmetic is exact; nothing here rounds.
"""

__version__ = "0.1.0"

from .birational import (NewtonPolyhedron, check_v_axioms, hodge_ideal_zero,
                         jump_value, jumping_numbers, lct,
                         multiplier_monomial, summand_comparison_report,
                         vfil_on_ring, vfil_summand)
from .charp import (CartierMap, PrimeFieldPoly, apply_cartier,
                    cartier_restrict, tau_level, test_ideal_monomial,
                    test_ideal_summand)
from .fs import (FeqSpec, FsContext, FsElement, fs_apply, grid_zero_test,
                 interpolate_grid_values, parse_feq_file, specialize,
                 verify_feq_formal, verify_feq_specialized)
from .graded import (GradedOperator, GradedPiece, NumericalSemigroup,
                     apply_graded, certify_denominators)
from .linalg import LinearSolution, solve_linear_exact
from .monomial import MonomialIdeal
from .multipoly import (LaurentLoc, MultiPoly, eval_poly, parse_poly,
                        poly_arith)
from .polyhedra import (PolyhedronQ, constraint, maximize_linear,
                        newton_polyhedron_facets, polyhedron,
                        polyhedron_feasible)
from .semigroup import (DiagonalGroup, Semigroup, SummandElement,
                        check_differential_summand_identity,
                        check_preserves_subring, diagonal_group_to_lattice,
                        fixes_hyperplane_check, parse_semigroup_file,
                        restrict_operator, split_beta, theta_split)
from .solver import (AnsatzSpec, BsResult, NotFoundWithinBounds,
                     divide_by_s_plus_one, minimal_exponent, mustata_lift,
                     search_feq)
from .weyl import (WeylOp, apply_localized, apply_weyl, parse_weyl,
                   preserves_ideal, weyl_commutator, weyl_multiply,
                   weyl_to_str)
