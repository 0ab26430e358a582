"""Online min-cost perfect matching with delays.

Thin Python layer over the C++ core: hemisphere-growing online policies,
exact offline oracles in the time-augmented metric, and the adversarial
instance families.
"""

from ._mpmd import (
    Instance,
    Matching,
    MatchRecord,
    MpmdError,
    RunReport,
    __version__,
    brute_force_opt,
    cycle_decompose,
    eval_f,
    event_time,
    expected_lower_bound_result,
    gen_appendix_b,
    gen_lower_bound,
    gen_random,
    load_instance,
    opt_bipartite,
    opt_general,
    ratio,
    realize_online,
    recurrence_ab,
    save_instance,
    simulate,
    sweep_appendix_b,
    sweep_lower_bound,
    theoretical_bound,
    verify,
)

POLICIES = ("hemisphere", "hemisphere-b", "notime-min", "notime-late", "notime-early")

__all__ = [name for name in dir() if not name.startswith("_")]
