"""
Session Manager for elaboration sessions.
Keeps checked environments in memory so later requests can normalize
against them without re-checking the sources.
"""

import logging
import threading
import uuid
from dataclasses import dataclass
from typing import Dict, List, Optional

from elaboration import GlobalEnv
from models.schemas import RunReport, SessionState

logger = logging.getLogger(__name__)


@dataclass
class Session:
    state: SessionState
    env: GlobalEnv
    report: RunReport


class SessionManager:
    """
    Stores elaboration sessions by id.
    Sessions live until deleted or until the process exits.
    """

    def __init__(self):
        self._sessions: Dict[str, Session] = {}
        self._lock = threading.Lock()

    def create_session(self, env: GlobalEnv, report: RunReport) -> SessionState:
        """Store a checked environment and return its metadata."""
        session_id = f"ses_{uuid.uuid4().hex[:12]}"
        state = SessionState(
            session_id=session_id,
            declarations=[entry.name for entry in env],
            errors=report.errors,
            warnings=report.warnings,
        )
        with self._lock:
            self._sessions[session_id] = Session(state, env, report)
        logger.info(f"Session created: {session_id} ({len(state.declarations)} declarations)")
        return state

    def get_session(self, session_id: str) -> Optional[Session]:
        """Get a session by ID."""
        with self._lock:
            return self._sessions.get(session_id)

    def list_sessions(self) -> List[SessionState]:
        with self._lock:
            return [s.state for s in self._sessions.values()]

    def delete_session(self, session_id: str) -> bool:
        """Drop a session; False if there was none."""
        with self._lock:
            if self._sessions.pop(session_id, None) is None:
                return False
        logger.info(f"Session deleted: {session_id}")
        return True

    def clear(self) -> None:
        with self._lock:
            self._sessions.clear()


# Singleton instance
session_manager = SessionManager()
