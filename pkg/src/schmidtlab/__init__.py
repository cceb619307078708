"""Exact-arithmetic laboratory for interval games on expanding maps.

White plays a two-phase cylinder strategy that forces the limit point of
the nested-interval game into the set of points whose orbit avoids a given
target; everything (endpoints, ratios, certificates) is computed in exact
rational or algebraic arithmetic, and every run is auditable from its
transcript alone.
"""

from .beta_shift import BetaSystem, d_one, greedy_digits
from .game_engine import Forfeit, GameConfig, GameTranscript, IllegalMove, run_game, validate_move, winning_check
from .intervals import Cylinder, Interval
from .map_models import (
    BetaMap,
    CantorComplementMap,
    GaussMap,
    IntegerBaseMap,
    MapModel,
    NoExpansion,
    PathologicalMap,
    check_condition_ii,
    gauss_two_step_expansion_check,
    model_from_spec,
)
from .numeric import (
    AlgebraicField,
    AlgebraicNumber,
    RefinementBudgetExceeded,
    scalar_compare,
    scalar_from_json,
    scalar_to_json,
)
from .runner import RunResult, run_avoidance, run_intersection, run_pathological_demo
from .strategies import (
    GreedyTracker,
    InterleavedWhiteStrategy,
    MasterWhiteStrategy,
    PathologicalBlack,
    PhaseBudgetExceeded,
    RandomBlack,
    SequenceGamePlan,
    avoid_finite_points,
    plan_block_size,
    sequence_game_choose,
)
from .verification import (
    AuditFailure,
    AvoidanceCertificate,
    CannotCertify,
    box_count_lower_bound,
    certify_avoidance,
    subshift_dimension_oracle,
    transcript_audit,
)

__version__ = "0.1.0"
