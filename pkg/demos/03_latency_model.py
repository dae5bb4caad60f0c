"""Monte-Carlo check of the shifted-exponential message completion times.

A worker draws one exponential rate per iteration; its s-th message lands at
T_s = s * (alpha + Y). The script compares the empirical distribution of T_s
against the closed-form CDF and then shows the two straggler profiles.
"""

import numpy as np

from codedgd import (LatencyParams, StragglerProfile, completion_cdf,
                     effective_params, sample_completion_times, step_markov)

rng = np.random.default_rng(0)
mu, alpha = 10.0, 0.01
params = LatencyParams(mu=mu, alpha=alpha, n_messages=3)

n = 50_000
samples = np.array([sample_completion_times(params, rng) for _ in range(n)])
for s in (1, 2, 3):
    for t in (0.05, 0.2, 0.5):
        emp = np.mean(samples[:, s - 1] <= t)
        print("P(T_%d <= %.2f)  empirical %.4f  closed form %.4f"
              % (s, t, emp, completion_cdf(t, s, mu, alpha)))

# persistent stragglers: a fixed subset pays a 1000x higher offset
profile = StragglerProfile("persistent", n_workers=6, mu=mu, alpha=alpha,
                           persistent_set=frozenset({0, 1}), alpha_straggler=10.0)
print("\npersistent profile, per-worker alpha:")
for w in range(6):
    print("  worker %d: alpha = %g" % (w, effective_params(profile, w, 3).alpha))

# Markov stragglers: each worker flips fast <-> slow with probability p
profile = StragglerProfile("markov", n_workers=6, mu=mu, alpha=alpha,
                           p=0.4, mu_slow=2.0)
model = profile.initial_markov()
for t in range(5):
    model = step_markov(model, rng)
    print("iteration %d slow set: %s" % (t + 1, np.flatnonzero(model.slow).tolist()))
