"""Model checking for existential positive queries."""

from ._epq import (
    Formula,
    Limits,
    Structure,
    canonical_query,
    classify,
    compile_unary,
    core,
    evaluate,
    find_homomorphism,
    gadget_plus,
    gadget_star,
    gdnf_from_explicit,
    gdnf_product,
    gdnf_to_explicit,
    hamiltonian_sentence,
    m_normalize,
    parse_formula,
    parse_structure,
    product,
    reduce_hamiltonian,
    reduce_sat,
    render,
    run_cli,
    structure_of_pp,
    to_pp_disjunction,
    treewidth,
)

__all__ = [name for name in dir() if not name.startswith("_")]
