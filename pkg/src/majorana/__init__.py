"""Spin states as star constellations on the sphere.

Conversion between amplitude vectors and Majorana star configurations,
Husimi/Wehrl entropy quadrature, rotation-orbit geometry, the dimension-
raising Lieb-Solovej channel with its majorization patterns, and optimal
point configurations for the Wehrl, Thomson, and Tammes objectives.
"""

from .errors import (CoincidentStarsError, DegenerateTriangleError,
                     DimensionMismatchError, InputError, MajoranaError,
                     NumericalError, QuadratureConvergenceError, ZeroStateError)
from .states import (Constellation, PolygonSpec, SpinState, Star,
                     coherent_state, constellation_to_state, fidelity, overlap,
                     polygon_constellation, rotation_matrix,
                     state_to_constellation, time_reverse)
from .husimi import (QuadratureConfig, WehrlResult, husimi,
                     husimi_normalization, wehrl_entropy)
from .orbit_geometry import (TriangleData, bargmann, number_orbit_state,
                             orbit_form_closed, orbit_form_numeric,
                             orbit_form_richardson)
from .lieb_solovej import (DensityMatrix, SpectraCloud, Spectrum, SpinOperators,
                           covariance_check, in_permutation_hull, majorizes,
                           phi1, phi_iter, sample_fubini_study, spectra_cloud,
                           spectrum, spin_operators, su2_rotation)
from .sphere_opt import (ConstellationFamily, OptimizeOptions, local_maximize,
                         optimize_family, random_constellation, reproduce_table,
                         shape_signature, signatures_match, tammes_min_distance,
                         thomson_energy, wehrl_objective)

__version__ = "0.1.0"
