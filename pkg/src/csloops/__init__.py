"""csloops: construct and verify loops of Csörgő type.

The toolkit materializes finite 2-groups from power-commutator
presentations, runs the cocycle calculus (radicals, multiplicative parts,
the derived trilinear maps and their identities), performs the
top-to-bottom construction of loop-defining data, and verifies every
structural claim on the resulting loops at desk scale.
"""

from importlib import resources

from .cocycle import (
    CentralCyclic,
    Cocycle2,
    Mu,
    TriMap,
    check_B,
    check_fgh,
    check_inclusion_chain,
    classify_scenario,
    derive_f,
    derive_g,
    derive_h,
    is_nontrivial,
    mul_part,
    rad1,
    rad2,
    radical,
    radical3,
)
from .groupalg import (
    GroupTable,
    QuotientMap,
    Subgroup,
    abelian_invariants,
    center,
    closure,
    comm,
    commutator_sub,
    conj,
    derived,
    exponent,
    is_elementary_abelian,
    nilpotency_class_group,
    normal_core,
    quotient,
    transversal,
    upper_central_series,
)
from .construct import (
    FreeDeltaParams,
    ParamSet,
    StandardBasis,
    build_delta,
    build_f,
    build_g_form,
    build_mu,
    check_A,
    check_param_set,
    default_param_set,
    extract_param_set,
    find_standard_basis,
)
from .loops import (
    LoopTable,
    NormalSubloop,
    associator_subloop,
    check_T2,
    derived_subloop,
    inn,
    is_solvable,
    loop_center,
    loop_from_mu,
    mlt,
    nilpotency_class_loop,
    normal_closure_subloop,
    quotient_loop,
)
from .pcgroup import PcPresentation, build_group, collect, parse_pc
from .permgrp import Bsgs, contains, order, point_stabilizer, schreier_sims

__all__ = [name for name in dir() if not name.startswith("_")]


def bundled_data_path(name: str):
    """Path to a bundled data file such as 'g128_731.pc'."""
    return resources.files("csloops.data") / name
