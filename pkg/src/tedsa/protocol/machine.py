"""Round-driven party state machine.

A machine never blocks. The driver hands it messages with :meth:`receive` and
calls :meth:`step` once per round barrier; :meth:`awaiting` reports who the
machine is still waiting on.
"""

from __future__ import annotations

from typing import Any, Optional

from .errors import AbortMalformedMessage, AbortMissingMessage
from .messages import CeremonyMessage


class PartyMachine:
    schedule: tuple[str, ...] = ()

    def __init__(self, ceremony_id: str, index: int):
        self.ceremony_id = ceremony_id
        self.index = index
        self.inbox: dict[str, dict[int, CeremonyMessage]] = {tag: {} for tag in self.schedule}
        self.position = 0
        self.done = False
        self.output: Any = None

    # -- hooks for subclasses ---------------------------------------------

    def expects(self, tag: str) -> set[int]:
        """Senders this party must hear from in round ``tag``."""
        raise NotImplementedError

    def emit(self, tag: str) -> list[CeremonyMessage]:
        """Produce this party's round-``tag`` messages (earlier rounds are complete)."""
        raise NotImplementedError

    def finish(self) -> Any:
        raise NotImplementedError

    # -- driver interface ---------------------------------------------------

    def receive(self, msg: CeremonyMessage) -> None:
        if msg.ceremony_id != self.ceremony_id:
            raise AbortMalformedMessage(msg.round, msg.sender, "message from another ceremony")
        if msg.recipient not in (None, self.index):
            raise AbortMalformedMessage(msg.round, msg.sender, "misdelivered message")
        if msg.round not in self.inbox:
            raise AbortMalformedMessage(msg.round, msg.sender, "round tag not part of this ceremony")
        if msg.sender not in self.expects(msg.round):
            raise AbortMalformedMessage(msg.round, msg.sender, "unexpected sender")
        slot = self.inbox[msg.round]
        if msg.sender in slot:
            raise AbortMalformedMessage(msg.round, msg.sender, "duplicate message")
        if self.schedule.index(msg.round) >= self.position:
            raise AbortMalformedMessage(msg.round, msg.sender, "message arrived before its round")
        slot[msg.sender] = msg

    def awaiting(self) -> Optional[tuple[str, set[int]]]:
        if self.position == 0 or self.done:
            return None
        tag = self.schedule[self.position - 1]
        missing = self.expects(tag) - set(self.inbox[tag])
        return (tag, missing) if missing else None

    def step(self) -> list[CeremonyMessage]:
        if self.done:
            return []
        pending = self.awaiting()
        if pending is not None:
            tag, missing = pending
            raise AbortMissingMessage(tag, min(missing), "no message before the round barrier")
        if self.position < len(self.schedule):
            tag = self.schedule[self.position]
            self.position += 1
            return self.emit(tag)
        self.output = self.finish()
        self.done = True
        return []

    def message(self, tag: str, recipient: Optional[int], **payload: bytes) -> CeremonyMessage:
        return CeremonyMessage(self.ceremony_id, tag, self.index, recipient, payload)

    def got(self, tag: str, sender: int) -> CeremonyMessage:
        return self.inbox[tag][sender]
