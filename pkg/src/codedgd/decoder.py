"""Streaming peeling decoder with a partial-recovery stopping rule.

Results arrive one by one in completion-time order. Known block products
are subtracted from each incoming sum; anything that reduces to a single
unknown is recovered and the substitution cascades through the still
unresolved equations. No Gaussian elimination happens here; the decoder is
pure successive cancellation.
"""

import math
from dataclasses import dataclass

import numpy as np


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True)
class CodedResult:
    spec: "CodewordSpec"
    value: np.ndarray
    completion_time: float


def recovery_target(n_blocks, tolerance):
    """Blocks needed before an iteration may stop: ceil((1-q) * K)."""
    if not 0 <= tolerance < 1:
        raise ValueError("tolerance must be in [0, 1), got %s" % tolerance)
    return math.ceil((1 - tolerance) * n_blocks)


class RecoveryState:
    """Decoder state for one iteration."""

    def __init__(self, n_blocks, tolerance):
        self.n_blocks = n_blocks
        self.tolerance = tolerance
        self.target = recovery_target(n_blocks, tolerance)
        self.recovered = {}            # block index -> decoded vector
        self.pending = []              # [set of unresolved members, residual vector]
        self.log = []                  # line-oriented trace for regression dumps
        self.n_ingested = 0

    def is_complete(self):
        return len(self.recovered) >= self.target

    def ingest(self, result):
        """Absorb one coded result; returns the block indices it unlocked."""
        members = set(result.spec.members)
        if any(not 0 <= k < self.n_blocks for k in members):
            raise ProtocolError("member index outside [0, %d)" % self.n_blocks)
        self.n_ingested += 1
        residual = np.array(result.value, dtype=np.float64)
        unresolved = set()
        for k in members:
            if k in self.recovered:
                residual = residual - self.recovered[k]
            else:
                unresolved.add(k)
        if not unresolved:
            self.log.append("ingest %s -> duplicate, discarded" % sorted(members))
            return []
        if len(unresolved) > 1:
            self.pending.append([unresolved, residual])
            self.log.append("ingest %s -> pending %s" % (sorted(members), sorted(unresolved)))
            return []
        newly = [unresolved.pop()]
        self.recovered[newly[0]] = residual
        self.log.append("ingest %s -> recovered %d" % (sorted(members), newly[0]))
        newly.extend(self._cascade(newly[0]))
        return newly

    def _cascade(self, start):
        queue = [start]
        unlocked = []
        while queue:
            k = queue.pop()
            still_pending = []
            for eq in self.pending:
                unresolved, residual = eq
                if k in unresolved:
                    unresolved.discard(k)
                    residual = residual - self.recovered[k]
                    eq[1] = residual
                if len(unresolved) == 1:
                    j = unresolved.pop()
                    if j not in self.recovered:
                        self.recovered[j] = residual
                        self.log.append("peel -> recovered %d" % j)
                        unlocked.append(j)
                        queue.append(j)
                elif len(unresolved) == 0:
                    self.log.append("peel -> equation exhausted, discarded")
                else:
                    still_pending.append(eq)
            self.pending = still_pending
        return unlocked

    def finalize(self):
        """Recovery vector r (1 where the block product is known) and the vectors."""
        r = np.zeros(self.n_blocks, dtype=np.int8)
        for k in self.recovered:
            r[k] = 1
        return r, dict(self.recovered)

    def dump_equations(self):
        return "\n".join(self.log)


# Free-function spellings used by callers that treat the state as a value.

def ingest(state, result):
    return state.ingest(result)


def is_complete(state, tolerance=None):
    if tolerance is None:
        return state.is_complete()
    return len(state.recovered) >= recovery_target(state.n_blocks, tolerance)


def finalize(state):
    return state.finalize()
