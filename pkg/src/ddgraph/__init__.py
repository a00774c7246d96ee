"""Divisible design graphs from affine designs, symplectic graphs over local rings, and brute-force verification."""

from .algebra import field_make, projective_classes, ring_make
from .construct import (
    construct1,
    params_theorem1,
    params_theorem2,
    partial_complement,
    sigma_family_make,
    sporadic28,
)
from .designs import affine_from_ag, affine_from_hadamard, affine_verify, hadamard_matrix, parallel_block_of
from .symdesigns import (
    label_assign,
    symdesign_difference_set,
    symdesign_fano,
    symdesign_null_polarity,
    symdesign_trivial,
    symdesign_verify,
)
from .symplectic import params_bg, pc_relation_check, sigma_search, symplectic_graph
from .verify import DdgParams, ddg_verify, identity_check, iso_check, partitions_discover

__version__ = "0.1.0"
