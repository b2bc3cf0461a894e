"""Dual-strategy propositional proof tutor with interventions and analytics."""

from .formulas import (
    And,
    Atom,
    BOTTOM,
    Bottom,
    Formula,
    Iff,
    Implies,
    Not,
    Or,
    ParseError,
    atoms,
    entails,
    evaluate,
    format_formula,
    parse,
    satisfiable,
)
from .rules import Rule, apply_rule, catalog, match, rule_by_name
from .proofs import (
    DerivedNode,
    Mode,
    ProofState,
    apply_step,
    check_completion,
    start_problem,
    switch_strategy,
)
from .prover import ProofStep, solve_from_premises
from .curriculum import (
    CurriculumConfig,
    Phase,
    Problem,
    WorkedExampleScript,
    default_curriculum,
    load_curriculum,
    solve,
    validate_curriculum,
    validate_problem,
)
from .interventions import (
    Condition,
    PromptDecision,
    PromptPolicy,
    PromptReason,
    sample_wait,
    should_prompt,
    we_placement,
)
from .scoring import ProblemScore, ScoreWeights, TestScores, nlg, problem_score, test_score
from .classifier import (
    Forest,
    GroupLabel,
    evaluate as evaluate_classifier,
    extract_features,
    predict,
    rule_baseline,
    train_forest,
)
from .analytics import (
    StatResult,
    SwitchBehavior,
    chi_square_2x2,
    classify_switch,
    group_switch_profile,
    one_way_anova,
    t_test,
)
from .events import EventRecord, EventType, dumps_event, loads_event, read_log, write_log
from .replay import replay_problem, session_report, split_by_problem
from .service import ManualClock, ServiceConfig, TutorService, group_key
from .simulate import (
    PRESETS,
    PopulationGroup,
    PopulationSpec,
    StudentPolicy,
    run_experiment,
    run_pretest,
    run_session,
)

__version__ = "0.1.0"
