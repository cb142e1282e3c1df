# Schreier graphs on tree levels and on the orbit of 0^inf.
# Run: python3 demos/04_schreier_graphs.py

# %%
from grigorchuk.groups import build_group
from grigorchuk.orbits import (
    graph_growth, inverted_orbit_growth, level_graph, orbit_graph_ball, to_edge_list,
)
from grigorchuk.tree import ZERO_RAY

G = build_group("(012)*")

# %% level 3, as a labeled edge list
g3 = level_graph(G, 3)
print(to_edge_list(g3))

# %% level graphs are paths: seen from 1^k each sphere has one vertex
for k in range(1, 9):
    g = level_graph(G, k)
    print(k, len(g.vertices), "diameter from 1^k:", len(graph_growth(g, (1,) * k)) - 1)

# %% the orbital graph of 0^inf grows linearly
ball = orbit_graph_ball(G, ZERO_RAY, 50)
print("orbit ball sizes:", graph_growth(ball)[:11], "...")

# %% inverted orbit growth Delta(n)
for n in range(11):
    rec = inverted_orbit_growth(G, ZERO_RAY, n)
    print(n, rec.delta, rec.witness)
