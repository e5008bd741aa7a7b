"""slicecheck: section measures of origin-symmetric star bodies and
numerical verification of slicing and stability inequalities, real and
complex, via polar and spherical-Radon formulas."""

from .bodies import StarBody, body_from_spec, contains, minkowski_functional, radial_function
from .complexgeom import (complex_hyperplane_frame, is_rtheta_invariant,
                          rtheta_apply, rtheta_symmetrize)
from .constants import SlicingConstants, ball_volume, c_nk, d_n, slicing_constants, sphere_surface
from .densities import Density, density_eval, density_from_spec
from .errors import CertificationError, InputError, UnboundedBodyError
from .grassmann import (MaxSectionResult, SearchConfig, Subspace, haar_sample,
                        max_complex_section, max_section,
                        maximize_over_grassmann, maximize_over_sphere)
from .john import SandwichEllipsoid, sandwich_ellipsoid, verify_sandwich
from .oracle import McEstimate, mc_body_measure, mc_section_measure
from .quadrature import QuadratureSpec, SphericalRule, radial_integral, sphere_rule, subsphere_rule
from .report import emit_report, parse_report, reports_to_csv
from .sections import (IntegralResult, body_measure, body_volume, complex_radon,
                       radon_transform, section_measure, section_volume)
from .verify import (ReplayStep, VerificationReport, check_km,
                     check_slicing_complex, check_slicing_real,
                     check_stability_complex, check_stability_real)

__version__ = "0.1.0"
