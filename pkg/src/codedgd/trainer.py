"""Parameter-server training loop over simulated coded workers.

Each iteration: pick the vertical shift for the current ordering policy,
encode, draw completion times, stream results into the peeling decoder in
global time order until the tolerance target is met, update the recovered
coordinate blocks of theta, and advance the age table.
"""

from dataclasses import dataclass, field

import numpy as np

from . import codec, latency
from .ages import AgeTable
from .decoder import CodedResult, RecoveryState


@dataclass(frozen=True)
class TrainConfig:
    n_blocks: int
    n_workers: int
    n_iterations: int
    eta: float
    q: float
    policy: codec.OrderPolicy
    degrees: tuple
    profile: latency.StragglerProfile
    seed: int = 0
    age_threshold: int = 0   # threshold for reported age metrics; 0 = policy's a_th (or 1)

    def __post_init__(self):
        if not 0 <= self.q < 1:
            raise ValueError("q must be in [0, 1)")
        if self.eta <= 0 or self.n_iterations < 1:
            raise ValueError("need eta > 0 and n_iterations >= 1")

    @property
    def memory(self):
        return int(sum(self.degrees))


@dataclass(frozen=True)
class IterationRecord:
    t: int
    wall_time: float
    r: np.ndarray
    train_loss: float
    test_loss: float
    shift_used: int
    recovered_count: int
    n_ingested: int
    exhausted: bool


@dataclass
class TrainResult:
    config: TrainConfig
    assignment: codec.AssignmentMatrix
    records: list
    ages: AgeTable
    theta: np.ndarray
    exhausted_iterations: list = field(default_factory=list)

    def test_losses(self):
        return np.array([rec.test_loss for rec in self.records])

    def train_losses(self):
        return np.array([rec.train_loss for rec in self.records])

    def recovery_matrix(self):
        return np.array([rec.r for rec in self.records])


def evaluate(theta, problem):
    """Mean squared error (with the 1/2 factor) on the train and test splits."""
    train = 0.5 * np.mean((problem.X_train @ theta - problem.y_train) ** 2)
    test = 0.5 * np.mean((problem.X_test @ theta - problem.y_test) ** 2)
    return float(train), float(test)


def apply_partial_update(theta, recovered, r, b, eta):
    """Gradient step on recovered blocks only; unrecovered coordinates freeze."""
    n_blocks = len(r)
    rows = theta.shape[0] // n_blocks
    out = theta.copy().reshape(n_blocks, rows)
    b_blocks = b.reshape(n_blocks, rows)
    for k, vec in recovered.items():
        out[k] -= eta * (vec - b_blocks[k])
    return out.reshape(-1)


def run_plain_gd(problem, eta, n_iterations, record_every=1):
    """Uncoded full-gradient descent, the convergence baseline."""
    theta = np.zeros(problem.d)
    trajectory = [theta.copy()]
    losses = []
    for t in range(1, n_iterations + 1):
        theta = theta - eta * (problem.W @ theta - problem.b)
        if t % record_every == 0:
            trajectory.append(theta.copy())
            losses.append(evaluate(theta, problem))
    return theta, trajectory, losses


def run_training(problem, config, assignment=None):
    """Simulate the full training run described by `config`."""
    k, n_workers = config.n_blocks, config.n_workers
    n_messages = len(config.degrees)
    ss = np.random.SeedSequence(config.seed)
    rcs_seed, latency_seed = ss.spawn(2)
    if assignment is None:
        assignment = codec.build_rcs(k, n_workers, config.memory,
                                     np.random.default_rng(rcs_seed))
    rng = np.random.default_rng(latency_seed)

    rows = problem.d // k
    theta = np.zeros(problem.d)
    ages = AgeTable(k, a_th=config.age_threshold or config.policy.a_th or 1)
    markov = config.profile.initial_markov()
    adaptive_shift = 0
    records = []
    exhausted_iterations = []

    for t in range(1, config.n_iterations + 1):
        if markov is not None:
            markov = latency.step_markov(markov, rng)
        shift = codec.shift_for_iteration(config.policy, t, config.memory, adaptive_shift)
        ordered = codec.apply_order(assignment, shift)
        specs = codec.encode(ordered, config.degrees)

        block_products = (problem.W @ theta).reshape(k, rows)

        arrivals = []
        for i in range(n_workers):
            params = latency.effective_params(config.profile, i, n_messages, markov)
            times = latency.sample_completion_times(params, rng)
            for ell in range(n_messages):
                arrivals.append((times[ell], i, specs[i * n_messages + ell]))
        arrivals.sort(key=lambda a: a[0])

        state = RecoveryState(k, config.q)
        responsive = set()
        wall_time = 0.0
        for time_s, worker, spec in arrivals:
            value = block_products[list(spec.members)].sum(axis=0)
            state.ingest(CodedResult(spec, value, time_s))
            responsive.add(worker)
            wall_time = time_s
            if state.is_complete():
                break
        exhausted = not state.is_complete()
        if exhausted:
            exhausted_iterations.append(t)

        r, recovered = state.finalize()
        theta = apply_partial_update(theta, recovered, r, problem.b, config.eta)
        train_loss, test_loss = evaluate(theta, problem)
        ages.update(r)
        if config.policy.kind == "adaptive":
            adaptive_shift = codec.select_adaptive_shift(
                assignment, ages.current, config.policy.a_th, responsive)

        records.append(IterationRecord(t, wall_time, r, train_loss, test_loss,
                                       shift, int(r.sum()), state.n_ingested, exhausted))

    return TrainResult(config, assignment, records, ages, theta, exhausted_iterations)


def write_metrics_csv(result, path):
    with open(path, "w") as fh:
        fh.write("t,wall_time,shift_used,recovered_count,train_loss,test_loss\n")
        for rec in result.records:
            fh.write("%d,%.12g,%d,%d,%.12g,%.12g\n" % (
                rec.t, rec.wall_time, rec.shift_used, rec.recovered_count,
                rec.train_loss, rec.test_loss))
