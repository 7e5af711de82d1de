"""Information-theoretic security parameters for finite encryption schemes and key agreement."""

from .bounds import (check_bound103, distinguisher_advantage, impossibility, key_size_bound,
                     pope_bound)
from .cipher import CipherSpec, SpecError, channel_matrix, execute, make_spec
from .keyagree import (KASpec, check_bound303, check_relation_ka, execute_ka, ka_impossible,
                       ka_lower_bound, ka_metrics, make_ka)
from .metrics import MetricValue, SecurityReport, security_report
from .probdist import Channel, Dist, Joint, ModeError, ProbError, mutual_information, tv_distance
from .relations import check_theorem1, equivalence_diagnostics, grid_oracle
from .specio import DocumentError, load, loads, to_text
from .synth import (birkhoff_decompose, counterexample_scheme, dodis_schemes, one_time_pad,
                    scheme_from_matrix)

__version__ = "0.1.0"

__all__ = [
    "CipherSpec", "SpecError", "channel_matrix", "execute", "make_spec",
    "MetricValue", "SecurityReport", "security_report",
    "Channel", "Dist", "Joint", "ModeError", "ProbError", "mutual_information", "tv_distance",
    "check_theorem1", "equivalence_diagnostics", "grid_oracle",
    "check_bound103", "distinguisher_advantage", "impossibility", "key_size_bound", "pope_bound",
    "KASpec", "check_bound303", "check_relation_ka", "execute_ka", "ka_impossible", "ka_lower_bound",
    "ka_metrics", "make_ka",
    "birkhoff_decompose", "counterexample_scheme", "dodis_schemes", "one_time_pad", "scheme_from_matrix",
    "DocumentError", "load", "loads", "to_text",
]
