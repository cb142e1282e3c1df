# Ball growth, contraction checks and the shared-prefix coincidence.
# Run: python3 demos/03_growth.py

# %%
import numpy as np

from grigorchuk.groups import XI, OracleSequence, build_group
from grigorchuk.growth import (
    ball_prefix_experiment, check_anti_contracting, check_contracting, enumerate_ball,
    growth_exponent_fit, paper_constants,
)

G = build_group("(012)*")
table = enumerate_ball(G, 14)
print("gamma(n):", table.ball)
print("spheres: ", table.sphere)

# %% a finite-radius slope of log log gamma against log n, diagnostic only
fit = growth_exponent_fit(table)
print("fitted slope", round(fit.alpha, 3), "vs alpha_0", round(paper_constants().alpha0, 4))
print("log gamma(n) / n:", np.round(np.log(table.ball[1:]) / np.arange(1, 15), 3))

# %% contraction on the radius-8 ball
small = enumerate_ball(G, 8)
print(check_contracting(G, small))
print(check_anti_contracting(G, small))

# %% oracles agreeing on 4 symbols have the same balls up to radius 8
cmp = ball_prefix_experiment(XI, OracleSequence.parse("0120(1)*"), 4)
print("agree up to radius", cmp.radius, ":", cmp.agree)
