"""Iteration-indexed age tracking per block and the staleness objective."""

import numpy as np


class AgeTable:
    """Ages of the K block computations plus their full history.

    Ages start at 1 (as if everything had just been recovered). Recording
    one iteration appends the age held DURING that iteration to the history
    and then advances: a recovered block resets to 1, every other age grows
    by one. `current` is therefore always the age of the upcoming iteration,
    which is what the adaptive shift selection reads.
    """

    def __init__(self, n_blocks, a_th=1):
        self.n_blocks = n_blocks
        self.a_th = a_th
        self.current = np.ones(n_blocks, dtype=np.int64)
        self._history = []

    @property
    def history(self):
        return np.array(self._history, dtype=np.int64).reshape(len(self._history), self.n_blocks)

    @property
    def n_iterations(self):
        return len(self._history)

    def update(self, r):
        r = np.asarray(r)
        if r.shape != (self.n_blocks,):
            raise ValueError("recovery vector has shape %s, expected (%d,)" % (r.shape, self.n_blocks))
        self._history.append(self.current)
        self.current = np.where(r == 1, 1, self.current + 1)
        return self

    def average_age(self, k):
        if not self._history:
            raise ValueError("no iterations recorded yet")
        return float(self.history[:, k].mean())

    def average_ages(self):
        return self.history.mean(axis=0)

    def objective(self, a_th=None):
        """Fraction of (block, iteration) pairs whose age exceeds the threshold."""
        th = self.a_th if a_th is None else a_th
        return float((self.history > th).mean())


def update_ages(table, r):
    return table.update(r)


def average_age(table, k):
    return table.average_age(k)


def objective(table, a_th=None):
    return table.objective(a_th)


def write_ages_csv(table, path):
    np.savetxt(path, table.history, fmt="%d", delimiter=",",
               header=",".join("a_%d" % (k + 1) for k in range(table.n_blocks)), comments="")


def write_summary_csv(table, path):
    avgs = table.average_ages()
    with open(path, "w") as fh:
        fh.write("block,average_age\n")
        for k, a in enumerate(avgs):
            fh.write("%d,%.12g\n" % (k + 1, a))
        fh.write("objective,%.12g\n" % table.objective())
