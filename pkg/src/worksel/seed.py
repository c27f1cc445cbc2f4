"""Verifiable random worker selection seeded by commit ordering.

The seed is the arrangement number of the commit sequence, traversed
anti-chronologically (latest commit first), against the ascending roster.
Any party holding the ledger and the roster recomputes the identical seed,
keys the same ChaCha20 stream from it, and obtains the identical worker
set, so the whole selection is verifiable with no trusted party.
"""

import warnings
from dataclasses import dataclass, field

from .combinatorics import arrangement_number, arrangement_space
from .errors import InvalidInputError, ParseError
from .sampling import ChaChaStream, int_to_key, sample_without_replacement

LOW_ENTROPY_BITS = 64


class LowEntropyWarning(UserWarning):
    """Seed space too small to resist brute-force prediction."""


@dataclass(frozen=True)
class Seed:
    value: int
    space: int

    def __post_init__(self):
        if not 0 <= self.value < self.space:
            raise InvalidInputError(
                "seed value %d outside [0, %d)" % (self.value, self.space)
            )


@dataclass(frozen=True)
class WorkerSet:
    workers: frozenset
    method: str
    provenance: dict = field(default_factory=dict)

    def sorted_workers(self):
        return sorted(self.workers)


def check_roster(participants):
    """Validate strictly ascending, duplicate-free roster order."""
    for a, b in zip(participants, participants[1:]):
        if not a < b:
            raise InvalidInputError(
                "roster must be strictly ascending: %r !< %r" % (a, b)
            )


def derive_seed(commits, participants):
    """Seed from the effective commit sequence and the full roster.

    ``commits`` is chronological; the rank is taken over the reversed list
    so every position changes meaning whenever a new commit lands, which
    stops participants from incrementally steering the value.  An empty
    commit sequence is legal and yields seed 0.
    """
    participants = list(participants)
    check_roster(participants)
    known = set(participants)
    for pid in commits:
        if pid not in known:
            raise InvalidInputError("commit by non-participant %r" % (pid,))
    value = arrangement_number(list(reversed(list(commits))), participants)
    space = arrangement_space(len(participants))
    if space.bit_length() <= LOW_ENTROPY_BITS:
        warnings.warn(
            "seed space has only ~2^%d values; selection may be predictable "
            "for this few participants" % (space.bit_length() - 1),
            LowEntropyWarning,
            stacklevel=2,
        )
    return Seed(value=value, space=space)


def sample_workers(participants, n, seed):
    """Draw ``n`` workers from the roster, determined entirely by the seed."""
    participants = sorted(participants)
    if not 0 <= n <= len(participants):
        raise InvalidInputError(
            "cannot select %d workers from %d participants"
            % (n, len(participants))
        )
    stream = ChaChaStream(int_to_key(seed.value))
    chosen = sample_without_replacement(participants, n, stream)
    return WorkerSet(
        workers=frozenset(chosen),
        method="random",
        provenance={"seed": seed.value, "space": seed.space, "n": n},
    )


def expand_multi_commit(participants, commits_per_participant):
    """Roster of artificial participants for multi-commit seeding.

    With c commits allowed per participant, each (participant, slot) pair
    becomes one artificial ID, growing the roster to c * |P| and therefore
    the arrangement space, which is the point: more possible commit
    interleavings means more seed entropy at low participant counts.
    """
    c = commits_per_participant
    if c < 1:
        raise InvalidInputError("commits_per_participant must be >= 1")
    participants = list(participants)
    check_roster(participants)
    width = len(str(c))
    expanded = [
        "%s#%0*d" % (pid, width, slot)
        for pid in participants
        for slot in range(1, c + 1)
    ]
    expanded.sort()
    return expanded


def load_roster(path):
    """Read a roster file: one ID per line, required ascending order."""
    ids = []
    with open(path, "r", encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            pid = line.strip()
            if not pid:
                continue
            if ids and not ids[-1] < pid:
                raise ParseError(
                    "roster not strictly ascending at %r" % pid, line=lineno
                )
            ids.append(pid)
    return ids


def seed_report(seed, worker_set=None):
    """JSON-ready report; big integers rendered as decimal strings."""
    report = {"seed": str(seed.value), "space": str(seed.space)}
    if worker_set is not None:
        report["n"] = len(worker_set.workers)
        report["workers"] = worker_set.sorted_workers()
    return report
