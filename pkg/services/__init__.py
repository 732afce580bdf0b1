"""Services package for the stt-kernel service."""

from .session_manager import Session, SessionManager, session_manager

__all__ = ["Session", "SessionManager", "session_manager"]
