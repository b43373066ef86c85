"""Variational layer potentials on finite-dimensional Hilbert spaces.

The heavy lifting lives in the compiled extension; this package re-exports
its public surface.
"""

from ._layercalc import (  # noqa: F401
    LayercalcError,
    Problem,
    QuotientSpace,
    Space,
    adjoint_problem,
    apply_l,
    boundary_operator,
    check_adjoint,
    check_bounds,
    check_green,
    check_jump,
    double_layer,
    dual_space,
    inf_sup,
    interior_residual,
    l_indicator,
    list_presets,
    make_abstract,
    make_fem,
    neumann_trace,
    newton_potential,
    preset,
    single_layer,
    solve_dirichlet_direct,
    solve_dirichlet_via_layers,
    solve_neumann_direct,
    solve_neumann_via_layers,
    swap_sides,
    trace_of_double_layer,
    verify_conditions,
    verify_equivalence,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
