"""In-process append-only ledger and commit-round simulation.

Stands in for a blockchain messaging hub: records are ordered by a strictly
increasing sequence number, never mutated, and never deleted.  Only each
participant's first record counts toward the effective commit sequence;
later commits stay stored for audit but are flagged superseded.
"""

import base64
import json
from dataclasses import dataclass, field

from .errors import InvalidInputError, ParseError, RejectedCommitError
from .sampling import ChaChaStream, int_to_key, shuffled


@dataclass(frozen=True)
class LedgerRecord:
    seq: int
    participant_id: str
    payload: bytes = b""
    superseded: bool = False


@dataclass
class Ledger:
    """Append-only commit log for a registered participant roster.

    The commit window is modeled by explicit ``close()`` rather than
    wall-clock timestamps; appends after close are rejected.
    """

    participants: frozenset
    records: list = field(default_factory=list)
    closed: bool = False

    @classmethod
    def for_participants(cls, participants):
        return cls(participants=frozenset(participants))

    def append_commit(self, participant_id, payload=b""):
        if self.closed:
            raise RejectedCommitError("commit window is closed")
        if participant_id not in self.participants:
            raise RejectedCommitError(
                "participant %r is not registered" % (participant_id,)
            )
        seen = any(r.participant_id == participant_id for r in self.records)
        record = LedgerRecord(
            seq=len(self.records),
            participant_id=participant_id,
            payload=bytes(payload),
            superseded=seen,
        )
        self.records.append(record)
        return record

    def close(self):
        self.closed = True

    def effective_commit_sequence(self):
        """First commit per participant, in ledger append order."""
        seen = set()
        out = []
        for r in self.records:
            if r.participant_id not in seen:
                seen.add(r.participant_id)
                out.append(r.participant_id)
        return out

    def save(self, path):
        """Write JSON Lines: one record per line, fields seq, participant_id, payload."""
        with open(path, "w", encoding="utf-8") as f:
            for r in self.records:
                row = {"seq": r.seq, "participant_id": r.participant_id}
                if r.payload:
                    row["payload"] = base64.b64encode(r.payload).decode("ascii")
                f.write(json.dumps(row, sort_keys=True) + "\n")

    @classmethod
    def load(cls, path, participants=None):
        """Read a JSON Lines ledger; roster defaults to the committers seen."""
        records = []
        with open(path, "r", encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    row = json.loads(line)
                    seq = int(row["seq"])
                    pid = row["participant_id"]
                    payload = base64.b64decode(row.get("payload", ""))
                except (KeyError, ValueError, TypeError) as exc:
                    raise ParseError(str(exc), line=lineno) from exc
                if records and seq <= records[-1].seq:
                    raise ParseError(
                        "seq %d not strictly increasing" % seq, line=lineno
                    )
                superseded = any(r.participant_id == pid for r in records)
                records.append(
                    LedgerRecord(seq=seq, participant_id=pid, payload=payload,
                                 superseded=superseded)
                )
        if participants is None:
            participants = {r.participant_id for r in records}
        ledger = cls(participants=frozenset(participants), records=records)
        for r in records:
            if r.participant_id not in ledger.participants:
                raise ParseError(
                    "committer %r not in roster" % (r.participant_id,)
                )
        return ledger


def simulate_commit_round(participants, commit_probability, run_seed):
    """Deterministic simulated commit phase.

    Each participant independently commits with the given probability, and
    the committers are then placed in a random chronological order.  Both
    draws come from a ChaCha20 stream keyed by ``run_seed``, so identical
    inputs always reproduce the identical commit sequence.
    """
    if not 0.0 <= commit_probability <= 1.0:
        raise InvalidInputError("commit_probability must be in [0, 1]")
    stream = ChaChaStream(int_to_key(run_seed, domain=b"commit-sim:"))
    threshold = round(commit_probability * 2 ** 64)
    committed = []
    for pid in sorted(participants):
        draw = int.from_bytes(stream.take(8), "big")
        if draw < threshold:
            committed.append(pid)
    return shuffled(committed, stream)


def ledger_from_sequence(participants, sequence):
    """Build a ledger whose effective commit sequence equals ``sequence``."""
    ledger = Ledger.for_participants(participants)
    for pid in sequence:
        ledger.append_commit(pid)
    return ledger
