"""Hierarchical linkage laboratory: linkage engines, clustering criteria,
brute-force optima, and adversarial instance generators."""

from _linklab import (
    Clustering,
    Dendrogram,
    DistanceSource,
    InstanceBundle,
    Merge,
    OptReport,
    avg_between,
    avg_diam,
    avg_within,
    build,
    check_metricity,
    ckmm_cost,
    clustering,
    compute_opts,
    cs_ratio_av,
    cs_ratio_dm,
    cut,
    diam,
    gen_cl_l1,
    gen_ics,
    gen_ics_augmented,
    gen_nonmetric,
    gen_random_bad,
    gen_sep,
    gen_sl_line,
    gen_sl_sep,
    gen_unbounded_av,
    harmonic,
    max_avg,
    max_avg_subset,
    max_diam,
    random_hierarchy,
    sep_av,
    sep_min,
    verify_bounds,
)

__all__ = [
    "Clustering",
    "Dendrogram",
    "DistanceSource",
    "InstanceBundle",
    "Merge",
    "OptReport",
    "avg_between",
    "avg_diam",
    "avg_within",
    "build",
    "check_metricity",
    "ckmm_cost",
    "clustering",
    "compute_opts",
    "cs_ratio_av",
    "cs_ratio_dm",
    "cut",
    "diam",
    "gen_cl_l1",
    "gen_ics",
    "gen_ics_augmented",
    "gen_nonmetric",
    "gen_random_bad",
    "gen_sep",
    "gen_sl_line",
    "gen_sl_sep",
    "gen_unbounded_av",
    "harmonic",
    "max_avg",
    "max_avg_subset",
    "max_diam",
    "random_hierarchy",
    "sep_av",
    "sep_min",
    "verify_bounds",
]
