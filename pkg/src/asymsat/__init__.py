"""asymsat: goal asymmetry in planning as satisfiability.

Benchmark generators (MAP, SBW, red herring), a Graphplan-style CNF
encoding, pigeonhole families, DPLL with resolution-proof extraction,
unit-propagation backdoors, size-preserving proof reductions and
constraint-graph cutset bounds.
"""

from .cnf import CnfFormula, parse_dimacs, read_dimacs
from .planning import Action, PlanningTask, asym_ratio, cost, optimal_plan, validate_plan
from .domains import InstanceSpec, build_task, map_task, red_herring_task, sbw_task
from .encoding import EncodedCnf, decode_plan, encode
from .pigeons import fphp, map_tphp, ofphp, ophp, otphp, php, sph, tphp
from .propagate import Propagator, unit_propagate
from .dpll import DpllTree, dpll
from .proofs import ResolutionProof, check_proof, extract_resolution, refute
from .backdoors import known_backdoor, minimality_report, search_optimal, verify_backdoor
from .reductions import apply_reduction, map_reduction, map_to_ofphp, t_translate_proof, transform_proof_reduction
from .analysis import constraint_graph, cutset_lower_bound, report_batch

__version__ = "0.1.0"
