"""Triangle groups of type (p, q, infinity), their lifted automorphic
forms, and the induced maps from the hyperbolic plane to torus-knot
complements on the unit sphere in C^2.

The construction pipeline: build_group fixes matrices and domain data
for coprime (p, q); theta_map evaluates the hauptmodul on the quotient;
FormEvaluator turns it into the three forms with characters; the knot
map pairs two of them into a curve-avoiding map to C^2 whose radial
projection lands on the sphere minus the (p, q) torus knot.
"""

from .errors import (BranchError, ConvergenceError, DomainError,
                     TriknotError)
from .forms import (FormEvaluator, FormRelation, evaluator_for,
                    fit_relation_constants, verify_degree_identity,
                    winding_number)
from .knotmap import (KnotMapConfig, KnotSample, LensData, fitted_config,
                      knot_point, lens_data, match_sphere_section, psi,
                      radial_project, seifert_flow, unit_config)
from .moebius import (BASE_TANGENT, CENTER_LIFT, IDENTITY_LIFT,
                      LiftedMoebius, LogNonzero, Moebius, TangentPoint,
                      act_tangent, lift_compose, lift_gap, lift_inverse,
                      lift_power)
from .records import parse_record, print_record
from .svgtile import render_tiling, write_tiling
from .triangle import (DomainSpec, EdgeSpec, Tile, TriangleGroupData,
                       build_group, check_edge_pairings, domain_contains,
                       domain_spec, reduce_to_fundamental, sample_edge,
                       tile)
from .uniformizer import SchwarzMap, ThetaData, schwarz_map_for, theta, theta_map
from .verify import CheckResult, forms_suite, group_suite, knotmap_suite, run_suites
from .words import (Character, GroupWord, NormalForm, bezout,
                    character_kernel_report, coset_representatives,
                    format_word, normal_form, parse_word, represent,
                    standard_characters, word)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
