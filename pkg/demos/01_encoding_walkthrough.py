"""Walk through the assignment matrix and the codewords one worker sends.

Builds a small circularly shifted assignment for 20 blocks, 20 workers and
memory 6, then shows how a degree vector [1, 2, 3] turns one worker's column
into three codewords, and how the vertical shift reorders the column.
"""

import numpy as np

from codedgd import apply_order, build_rcs, encode

K, W, M = 20, 20, 6
matrix = build_rcs(K, W, M, seed=0)

print("row shifts:", matrix.row_shifts)
print("assignment matrix (blocks, 0-based), first 8 workers:")
print(matrix.entries[:, :8])

worker = 0
col = matrix.column(worker)
print("\nworker %d holds blocks %s (top to bottom)" % (worker, col.tolist()))

degrees = [1, 2, 3]
specs = [s for s in encode(matrix, degrees) if s.worker == worker]
for s in specs:
    print("  message %d: sum of blocks %s (degree %d)"
          % (s.order + 1, list(s.members), len(s.members)))

# a vertical shift rotates every column the same way, so a straggler that
# only manages its first message contributes a different block each time
for shift in (0, 1, 3):
    shifted = apply_order(matrix, shift)
    print("shift %d -> worker %d column %s"
          % (shift, worker, shifted.column(worker).tolist()))
