"""Query-metered committee elections on the line.

Ground-truth instances live in :mod:`.model`; rules only ever see the
ordinal view (:mod:`.axis`) and a metered :class:`~.oracle.DistanceOracle`.
"""

from .axis import (CandidateAxis, ClusterTable, WeightedLineInstance, candidate_restrict, clusters,
                   is_single_peaked, recover_axis, trim_to_active_span)
from .exact import (EC, SC, EvaluationReport, Objective, brute_force_opt, distortion, dp_opt_line,
                    evaluate, exact_opt, reference_greedy)
from .model import (CostReport, Instance, RankingProfile, cost, derive_profile, load_instance,
                    random_instance, save_instance)
from .oracle import DistanceOracle, QueryLedger
from .rules import RULES, Election, RuleOutput, prepare, run_rule

__version__ = "0.1.0"

__all__ = [
    "CandidateAxis", "ClusterTable", "CostReport", "DistanceOracle", "EC", "Election",
    "EvaluationReport", "Instance", "Objective", "QueryLedger", "RULES", "RankingProfile",
    "RuleOutput", "SC", "WeightedLineInstance", "brute_force_opt", "candidate_restrict",
    "clusters", "cost", "derive_profile", "distortion", "dp_opt_line", "evaluate", "exact_opt",
    "is_single_peaked", "load_instance", "prepare", "random_instance", "recover_axis",
    "reference_greedy", "run_rule", "save_instance", "trim_to_active_span",
]
