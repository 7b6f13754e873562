"""Exact counting of primitive integer zeros of quaternary quadratic forms."""

from .conics import conic_zeros_in_box, lattice_cover
from .config import ExperimentConfig
from .counting import (CountReport, brute_force_count, siegel_witness, sliced_count,
                       slicing_radius)
from .errors import (BadDimension, ConstraintUnsatisfiable, DegenerateEllipsoid, HeightRegimeError,
                     InvalidInput, InvariantViolation, NonClassical, NotPrimitive, QuadCountError,
                     SingularForm, TooLarge, ZeroInput)
from .experiment import BoundReport, growth_experiment, random_form, theorem_rhs
from .forms import (DualForm, QuadraticForm, RestrictedConic, build_form, diagonal_form, dual_form,
                    evaluate, form_from_json, load_form, restrict_to_hyperplane, restricted_spectrum)
from .lattices import (BoxBounds, SublatticeBasis, box_adapted_basis, hat_lattice, kernel_lattice,
                       reduced_basis)
from .lines import RationalLine, line_point_count, lines_up_to_height
from .localarith import (C_value, CharacterTable, LocalProfile, R_value, S_h_window, U_count, chi,
                         chi_q_ternary, exp_sum, frakS, gcd_inequality_holds, minor_gcd_D, pi_B, rho,
                         squarefull_part, varpi)

__version__ = "0.1.0"
