"""Wigner distributions on finite abelian and n-adic groups.

Finite groups Z_d1 x ... x Z_dk, phase-space transforms, S-states and the
positivity classification, n-adic halving and Wigner tables on Omega_n.
"""

from .errors import CapExceeded, GroupMismatch, LCAError, NonRealTable, NotASubgroup, NotTwoRegular, ZeroVector
from .groups import Group, Subgroup, enumerate_subgroups, generated_subgroup, make_group, product_group
from .phase_space import (
    PhasePoint,
    PhaseSubgroup,
    PhaseTable,
    StateVector,
    ambiguity,
    delta,
    fourier,
    random_state,
    smooth_with_subgroup,
    state,
    stft,
    wigner,
)
from .second_degree import (
    SStateSpec,
    SymmetricHom,
    cyclic_decompose,
    detect_sstate,
    enumerate_max_isotropic,
    enumerate_sstates,
    enumerate_sym_homs,
    hudson_classify,
    isotropic_group,
    make_sstate,
    wehrl_l1,
)
from .adic import NAdicNumber, SolenoidPoint, doubling_constant, nadic_halve
from .schwartz_bruhat import SchwartzBruhatFn, sb_min, sb_wigner

__version__ = "0.1.0"
