"""Fairness-aware incremental decision trees for massive, drifting streams.

Single-pass, bounded-memory binary classifiers that trade off predictive
accuracy against the statistical-parity gap of their predictions, plus a
first-test-then-train evaluation harness, a drift-adapting variant with
alternate subtrees, and a sliding-window ensemble strategy.
"""

from .adaptive import (AltState, CfahtTree, DriftConfig, DriftMonitor,
                       adapt_gamma, deterioration)
from .criteria import (ClassDist, CriterionConfig, GaussianEstimator,
                       GaussianObserver, NominalObserver, PartitionView,
                       SplitCandidate, adaptive_fair_information_gain,
                       enumerate_candidates, entropy, fair_information_gain,
                       fairness_gain, hoeffding_bound, information_gain,
                       universal_fair_information_gain, universal_fairness_gain,
                       KIND_AFIG, KIND_FIG, KIND_IG, KIND_UFIG)
from .ensemble import EnsembleConfig, SlidingWindowEnsemble
from .errors import (ConfigError, DatasetFormatError, FairstreamError,
                     SchemaError, UndefinedStatisticError)
from .evaluation import (PrequentialReport, PrequentialSummary, ReportRow,
                         boundary_correlations, compare_mcnemar,
                         run_prequential, summary_text, write_report_csv,
                         write_summary_csv)
from .fairness import (ContingencyPair, GroupCounts, discrimination, mcnemar,
                       phi_correlation, update)
from .stream import (AttributeSpec, DatasetStream, Instance, Schema,
                     load_dataset, order_by_attribute, parse_schema,
                     save_dataset)
from .tree import FahtTree, InternalNode, LeafNode, LeafStats

__version__ = "0.1.0"
