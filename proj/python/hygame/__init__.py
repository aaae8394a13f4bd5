"""Two-player zero-sum hybrid games: simulation, solvers, and audits.

Thin re-export of the compiled module.  Results cross the boundary as
plain lists and dicts; wrap them in numpy yourself if you want arrays.
"""

try:
    from ._hygame import (  # installed layout: module lives inside the package
        check_equivalent,
        check_hjbi,
        check_stability,
        evaluate_cost,
        fingerprint,
        saddle_sweep,
        scenario_info,
        scenario_names,
        simulate,
        solve_constant,
        solve_periodic,
        solve_security,
    )
except ImportError:  # build-tree layout: module sits next to the package
    from _hygame import (
        check_equivalent,
        check_hjbi,
        check_stability,
        evaluate_cost,
        fingerprint,
        saddle_sweep,
        scenario_info,
        scenario_names,
        simulate,
        solve_constant,
        solve_periodic,
        solve_security,
    )

__all__ = [
    "check_equivalent",
    "check_hjbi",
    "check_stability",
    "evaluate_cost",
    "fingerprint",
    "saddle_sweep",
    "scenario_info",
    "scenario_names",
    "simulate",
    "solve_constant",
    "solve_periodic",
    "solve_security",
]

__version__ = "0.1.0"
