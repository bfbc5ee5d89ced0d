"""Error and rejection vocabulary shared by the engine, service, and CLI."""

from __future__ import annotations

from enum import Enum


class QbgError(Exception):
    """Base class for engine errors."""


class BadPoint(QbgError):
    """A point lies outside the board."""


class InvalidMoveGeometry(QbgError):
    """Duplicate or otherwise malformed point arrangement in a move."""


class OracleTooLarge(QbgError):
    """Dense statevector would exceed the configured point cap."""


class TermExplosion(QbgError):
    """Superposition grew past the hard term ceiling."""


class NotationError(QbgError):
    """Move text does not match the notation grammar."""


class ReplayMismatch(QbgError):
    """A recorded state hash diverged during replay."""

    def __init__(self, ply: int, message: str = ""):
        self.ply = ply
        super().__init__(message or f"replay diverged at ply {ply}")


class Reason(str, Enum):
    """Machine-readable rejection codes surfaced verbatim by the service."""

    OCCUPIED = "Occupied"
    WRONG_TURN = "WrongTurn"
    BAD_CONTROL = "BadControl"
    FORBIDDEN = "Forbidden"
    KO_VIOLATION = "KoViolation"
    GAME_WISE_NOT_ALLOWED = "GameWiseNotAllowed"
    P2_VIOLATION = "P2Violation"
    J_LIMIT_EXCEEDED = "JLimitExceeded"
    MATCH_FINISHED = "MatchFinished"
    BAD_BRANCH_REF = "BadBranchRef"
    INVALID_GEOMETRY = "InvalidMoveGeometry"
    CAPTURE_INAPPLICABLE = "CaptureApproachInapplicable"


class MoveRejected(QbgError):
    """A move failed the submission pipeline; carries the rejection code."""

    def __init__(self, reason: Reason, message: str = ""):
        self.reason = reason
        super().__init__(message or reason.value)
