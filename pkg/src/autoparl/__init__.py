"""Automated parliaments: multi-delegate deliberation with scored modification rounds."""

from autoparl.domain import (
    AnswerChain,
    Judge,
    LossRecord,
    ParliamentConfig,
    Question,
    Revision,
    ScoredRow,
    ScoreMatrix,
    SessionTranscript,
    StanceSpec,
)
from autoparl.protocol import run_session, select_winner, total_alignment
from autoparl.schedule import chain_for, plan_schedule
from autoparl.signals import (
    activation,
    emit_training_signals,
    generator_loss,
    modifier_loss,
    win_indicator,
)

__version__ = "0.1.0"

__all__ = [
    "AnswerChain",
    "Judge",
    "LossRecord",
    "ParliamentConfig",
    "Question",
    "Revision",
    "ScoreMatrix",
    "ScoredRow",
    "SessionTranscript",
    "StanceSpec",
    "activation",
    "chain_for",
    "emit_training_signals",
    "generator_loss",
    "modifier_loss",
    "plan_schedule",
    "run_session",
    "select_winner",
    "total_alignment",
    "win_indicator",
]
