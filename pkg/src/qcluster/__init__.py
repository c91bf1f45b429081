"""Exact computations with quantum cluster algebras at roots of unity."""

from .cyclotomic import CycContext, CycInt, CycRat, cyc_context, cycrat_div_by_int, zeta_pow
from .torus import (
    Bicharacter,
    IndexProfile,
    NotDivisible,
    TorusElement,
    component_split,
    exact_left_divide,
    in_ell_power_subring,
    in_mixed_torus,
    monomial,
    mul,
    newton_vertices,
    normalized_product,
    support,
)
from .lattice import (
    KernelData,
    check_compatible,
    check_coprime_condition,
    hnf,
    kernel_mod_ell,
    restricted_kernel,
    snf,
)
from .seed import Seed, a2_seed, ell_power_check, make_seed, mutate_btilde, mutate_lambda, mutate_seed, q_element
from .graph import ExchangeGraph, explore, export_dot, export_json, theta_subset
from .membership import (
    NotMember,
    SeedCoordinates,
    center_test,
    convert_edge,
    convert_path,
    member_central_subalgebra,
    member_intersection,
    member_mixed,
)
from .trace_ch import (
    CharPolyReport,
    TraceKind,
    newton_sigma,
    tr_reduced,
    tr_regular,
    tr_regular_center,
    tr_standard,
    trace_agreement,
    verify_cayley_hamilton,
)
from .monoid import MonoidSpec, MonoidVerdict, ch_degree_monomial, classify, group_closure, monoid_member, monomial_ch_verify
from .expr import parse_element

__version__ = "0.1.0"
