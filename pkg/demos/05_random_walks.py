# Random walks: exact return probabilities and the self-similar measure.
# Run: python3 demos/05_random_walks.py

# %%
from fractions import Fraction

from grigorchuk.groups import build_group
from grigorchuk.walks import (
    MonteCarlo, TruncatedExact, kaimanovich, monte_carlo_return, self_similar_check,
    spectral_radius_estimate, uniform, walk_stats,
)

G = build_group("(012)*")
mu = uniform(G)
stats = walk_stats(mu, 10)
for s in stats:
    print(f"n={s.n:2d} P={str(s.P):>14} H={s.H:.4f} L={s.L:.4f} support={s.support}")

# %% P(2n)^(1/2n) creeps toward 1, as amenability predicts
print(spectral_radius_estimate(stats).roots)

# %% Monte Carlo against the exact value
mc = monte_carlo_return(mu, 10, samples=200_000, seed=1)
print("P(10) exact", float(stats[10].P), "MC", mc.estimate)

# %% first-hit projection of (4/7)a + (1/7)(b+c+d) to the subtree at 0
k = kaimanovich(G)
v = self_similar_check(k, Fraction(1, 2), 1e-3, 0, TruncatedExact(30))
print("exact: TV", v.distance, "captured", float(v.estimate.captured), "passed", v.passed)
v = self_similar_check(k, Fraction(1, 2), 0.01, 0, MonteCarlo(samples=100_000, seed=0))
print("MC:    TV", v.distance, "passed", v.passed)

# %% the uniform measure and vertex 1 are not fixed points
print("uniform:", self_similar_check(mu, method=TruncatedExact(24)).distance)
print("vertex 1:", self_similar_check(k, vertex=1, method=TruncatedExact(24)).distance)
