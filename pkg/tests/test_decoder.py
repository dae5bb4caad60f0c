import itertools

import numpy as np
import pytest

from codedgd import CodedResult, CodewordSpec, RecoveryState, recovery_target
from codedgd.decoder import ProtocolError


def result(members, blocks, time=0.0, order=0):
    value = sum(blocks[k] for k in members)
    return CodedResult(CodewordSpec(0, order, tuple(members)), value, time)


def random_blocks(n_blocks, rows, rng):
    return rng.standard_normal((n_blocks, rows))


def test_degree_one_recovers_immediately():
    blocks = random_blocks(4, 3, np.random.default_rng(0))
    state = RecoveryState(4, tolerance=0.0)
    assert state.ingest(result([1], blocks)) == [1]
    assert np.array_equal(state.recovered[1], blocks[1])


def test_degree_two_peels_against_known_member():
    blocks = random_blocks(12, 5, np.random.default_rng(1))
    state = RecoveryState(12, tolerance=0.0)
    state.ingest(result([3], blocks))
    newly = state.ingest(result([3, 10], blocks))
    assert newly == [10]
    assert np.allclose(state.recovered[10], blocks[10], rtol=1e-12)


def test_example_column_peels_sequentially():
    # worker 1's codewords from the 6-entry example column: degrees 1, 2, 3.
    # The column alone only yields the degree-1 block; the rest resolve as
    # degree-1 help arrives.
    members = [(0,), (3, 10), (14, 5, 17)]
    blocks = random_blocks(20, 4, np.random.default_rng(2))
    state = RecoveryState(20, tolerance=0.0)
    unlocked = []
    for ms in members:
        unlocked += state.ingest(result(ms, blocks))
    assert set(unlocked) == {0}
    assert len(state.pending) == 2
    assert set(state.ingest(result([10], blocks))) == {10, 3}
    assert state.ingest(result([5], blocks)) == [5]
    assert set(state.ingest(result([17], blocks))) == {17, 14}
    r, vectors = state.finalize()
    assert set(np.flatnonzero(r)) == {0, 3, 10, 14, 5, 17}
    for k, v in vectors.items():
        assert np.allclose(v, blocks[k], rtol=1e-9)


def test_pending_cascade_across_equations():
    blocks = random_blocks(5, 2, np.random.default_rng(3))
    state = RecoveryState(5, tolerance=0.0)
    assert state.ingest(result([0, 1], blocks)) == []
    assert state.ingest(result([1, 2], blocks)) == []
    newly = state.ingest(result([0], blocks))
    assert set(newly) == {0, 1, 2}


def test_recovery_target_values():
    assert recovery_target(40, 0.3) == 28
    assert recovery_target(40, 0.0) == 40
    assert recovery_target(40, 0.2) == 32
    with pytest.raises(ValueError):
        recovery_target(40, 1.0)


def test_is_complete_threshold():
    blocks = random_blocks(40, 1, np.random.default_rng(4))
    state = RecoveryState(40, tolerance=0.3)
    for k in range(27):
        state.ingest(result([k], blocks))
        assert not state.is_complete()
    state.ingest(result([27], blocks))
    assert state.is_complete()


def test_finalize_all_and_none():
    blocks = random_blocks(6, 2, np.random.default_rng(5))
    full = RecoveryState(6, tolerance=0.0)
    for k in range(6):
        full.ingest(result([k], blocks))
    r, _ = full.finalize()
    assert np.all(r == 1)
    empty = RecoveryState(6, tolerance=0.0)
    r, vectors = empty.finalize()
    assert np.all(r == 0) and vectors == {}


def test_duplicate_information_discarded():
    blocks = random_blocks(3, 2, np.random.default_rng(6))
    state = RecoveryState(3, tolerance=0.0)
    state.ingest(result([0], blocks))
    state.ingest(result([1], blocks))
    assert state.ingest(result([0, 1], blocks)) == []
    assert len(state.pending) == 0


def test_member_out_of_range_rejected():
    state = RecoveryState(4, tolerance=0.0)
    bad = CodedResult(CodewordSpec(0, 0, (7,)), np.zeros(2), 0.0)
    with pytest.raises(ProtocolError):
        state.ingest(bad)


def gaussian_recoverable(equations, n_blocks):
    """Blocks whose unit vector lies in the row space of the 0/1 system."""
    if not equations:
        return set()
    a = np.zeros((len(equations), n_blocks))
    for row, members in enumerate(equations):
        a[row, list(members)] = 1.0
    rank = np.linalg.matrix_rank(a)
    recoverable = set()
    for k in range(n_blocks):
        e = np.zeros(n_blocks)
        e[k] = 1.0
        if np.linalg.matrix_rank(np.vstack([a, e])) == rank:
            recoverable.add(k)
    return recoverable


def peel_fixpoint(equations, blocks):
    state = RecoveryState(len(blocks), tolerance=0.0)
    for members in equations:
        state.ingest(result(members, blocks))
    return state


def random_rcs_equations(rng):
    """Member sets of a few workers of a small random circularly shifted code."""
    from codedgd import build_rcs, encode

    n_blocks = int(rng.integers(4, 11))
    n_workers = int(rng.integers(2, 6))
    memory = int(rng.integers(2, min(n_blocks, 6) + 1))
    degrees = []
    left = memory
    while left > 0:
        d = int(rng.integers(1, left + 1))
        degrees.append(d)
        left -= d
    mat = build_rcs(n_blocks, n_workers, memory, seed=rng)
    specs = encode(mat, degrees)
    # each worker delivers a random prefix of its message sequence, the way
    # a straggler cut off mid-iteration would
    delivered = {w: int(rng.integers(0, len(degrees) + 1)) for w in range(n_workers)}
    kept = [s.members for s in specs if s.order < delivered[s.worker]]
    return n_blocks, kept


def test_peeling_vs_gaussian_oracle_and_order_insensitivity():
    rng = np.random.default_rng(2024)
    agree = total = 0
    for _ in range(200):
        n_blocks, equations = random_rcs_equations(rng)
        blocks = random_blocks(n_blocks, 2, rng)
        reference = set(peel_fixpoint(equations, blocks).recovered)
        for _ in range(4):
            perm = list(equations)
            rng.shuffle(perm)
            assert set(peel_fixpoint(perm, blocks).recovered) == reference
        oracle = gaussian_recoverable(equations, n_blocks)
        assert reference <= oracle
        total += 1
        agree += reference == oracle
    assert agree / total >= 0.95


def test_monotone_recovery_count():
    rng = np.random.default_rng(9)
    n_blocks, equations = 8, [(0, 1), (1, 2), (2,), (3, 4, 5), (4,), (5,), (6,), (0,)]
    blocks = random_blocks(n_blocks, 3, rng)
    state = RecoveryState(n_blocks, tolerance=0.0)
    last = 0
    for members in equations:
        state.ingest(result(members, blocks))
        assert len(state.recovered) >= last
        last = len(state.recovered)
        for unresolved, _ in state.pending:
            assert len(unresolved) >= 2


def test_soundness_of_decoded_vectors():
    rng = np.random.default_rng(10)
    for _ in range(50):
        n_blocks, equations = random_rcs_equations(rng)
        blocks = random_blocks(n_blocks, 3, rng)
        state = peel_fixpoint(equations, blocks)
        for k, v in state.recovered.items():
            assert np.allclose(v, blocks[k], rtol=1e-9, atol=1e-12)


def test_equation_dump_mentions_recoveries():
    blocks = random_blocks(3, 1, np.random.default_rng(11))
    state = RecoveryState(3, tolerance=0.0)
    state.ingest(result([0], blocks))
    state.ingest(result([0, 1], blocks))
    dump = state.dump_equations()
    assert "recovered 0" in dump and "recovered 1" in dump
