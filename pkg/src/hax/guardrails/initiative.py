"""Initiative tracking: who is steering the session right now.

The human always holds final authority: a human request transfers
initiative immediately, while an agent request only queues a proposal
for the human to grant. Handoffs therefore always alternate holders.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Any

from ..errors import InitiativeError


class Holder(str, Enum):
    HUMAN = "human"
    AGENT = "agent"


@dataclass(frozen=True)
class Handoff:
    timestamp: float
    from_holder: Holder
    to_holder: Holder
    cause: str

    def to_dict(self) -> dict[str, Any]:
        return {
            "timestamp": self.timestamp,
            "from_holder": self.from_holder.value,
            "to_holder": self.to_holder.value,
            "cause": self.cause,
        }


class InitiativeState:
    def __init__(self, holder: Holder = Holder.HUMAN) -> None:
        self.current_holder = holder
        self.pending_agent_requests = 0
        self.handoff_history: list[Handoff] = []

    def request(self, requester: Holder, cause: str, timestamp: float) -> None:
        """Ask for initiative. Humans take it; agents only propose."""
        if requester is self.current_holder:
            raise InitiativeError(f"{requester.value} already holds initiative")
        if requester is Holder.AGENT:
            self.pending_agent_requests += 1
            return
        self._transfer(Holder.HUMAN, cause, timestamp)

    def yield_to_agent(self, cause: str, timestamp: float) -> None:
        """Human explicitly grants initiative; clears queued agent requests."""
        if self.current_holder is not Holder.HUMAN:
            raise InitiativeError("only the holder can yield, and the human does not hold it")
        self._transfer(Holder.AGENT, cause, timestamp)
        self.pending_agent_requests = 0

    def _transfer(self, to_holder: Holder, cause: str, timestamp: float) -> None:
        self.handoff_history.append(
            Handoff(timestamp, self.current_holder, to_holder, cause)
        )
        self.current_holder = to_holder

    def to_dict(self) -> dict[str, Any]:
        return {
            "current_holder": self.current_holder.value,
            "pending_agent_requests": self.pending_agent_requests,
            "handoffs": [h.to_dict() for h in self.handoff_history],
        }
