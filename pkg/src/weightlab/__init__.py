"""weightlab: exact verification of blockwise alternating weight sums.

Everything is computed in exact arithmetic: character tables over cyclotomic
fields, block idempotents over finite fields of the right degree, chain sums
as plain integers. The package never floats.
"""

from __future__ import annotations

from ._kernels import BACKEND
from .blocks import Block, BlockPartition, brauer_map, chain_block, p_blocks
from .chains import AwcReport, Chain, awc_sum, chain_orbits, kr_involution
from .chartable import CharacterTable, character_table
from .dsl import parse_group_spec
from .errors import (
    BudgetExceeded,
    CapExceeded,
    DslSyntaxError,
    InvolutionFailure,
    PTrivial,
    UnsupportedPointStructure,
    WeightlabError,
)
from .k0 import (
    K0Element,
    K0Label,
    l_pair_orbits,
    local_points,
    multiplicity,
    pair_labels,
    quintuple_involution_check,
    s111_coordinate,
    sigma_element,
    w_fixed_points,
)
from .pairs import DDeltaPair, enumerate_ddelta_pairs, pair_isomorphic
from .perm import PermGroup, Subgroup
from .session import RunConfig, Session, get_session, set_session

__version__ = "0.1.0"

__all__ = [
    "AwcReport",
    "BACKEND",
    "Block",
    "BlockPartition",
    "BudgetExceeded",
    "CapExceeded",
    "Chain",
    "CharacterTable",
    "DDeltaPair",
    "DslSyntaxError",
    "InvolutionFailure",
    "K0Element",
    "K0Label",
    "PTrivial",
    "PermGroup",
    "RunConfig",
    "Session",
    "Subgroup",
    "UnsupportedPointStructure",
    "WeightlabError",
    "awc_sum",
    "brauer_map",
    "chain_block",
    "chain_orbits",
    "character_table",
    "enumerate_ddelta_pairs",
    "get_session",
    "kr_involution",
    "l_pair_orbits",
    "local_points",
    "multiplicity",
    "p_blocks",
    "pair_isomorphic",
    "pair_labels",
    "parse_group_spec",
    "quintuple_involution_check",
    "s111_coordinate",
    "set_session",
    "sigma_element",
    "w_fixed_points",
]
