"""Pfaffian system of Lauricella's hypergeometric function F_A in m variables."""

__version__ = "0.1.0"

from .combinatorics import (
    Mask,
    a_coefficient,
    enumerate_masks,
    flip,
    partial_geq,
    total_less,
    weight,
)
from .connection import (
    ConnectionForm,
    GaugeData,
    build_connection,
    build_gauge,
    f_vector,
    flatness_residual,
    gauged_omega_at,
    omega_at,
    residue_hyperplane,
    residue_zero,
    residues_from_pde,
)
from .continuation import Arc, Line, Path, integrate_path, monodromy_loop
from .intersection import (
    IntersectionData,
    build_intersection,
    det_C_closed,
    phi_phi,
    phi_psi,
    psi_psi,
    verify_intersection_identities,
)
from .locus import singular_distance
from .params import ParameterSet, genericity_check
from .series import (
    SeriesOptions,
    SolutionVector,
    fa_partial_truncated,
    fa_truncated,
    pfaffian_residual,
    pochhammer,
    solution_vector,
)
