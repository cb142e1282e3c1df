# Generators of the first Grigorchuk group as tree automorphisms.
# Run: python3 demos/01_tree_and_generators.py

# %%
from grigorchuk import tree
from grigorchuk.groups import XI, build_group, classify_oracle

G = build_group("(012)*")
gens = G.generators
print("oracle", XI, classify_oracle(XI))

# %% wreath recursions: b = (a, c), c = (a, d), d = (1, b)
for x in "bcd":
    left, right = gens[x].sections
    print(x, "=", (left.label, right.label))

# %% action on level 3; gh means apply h first
for v in tree.level_vertices(3):
    print(v, "->", {x: tree.apply(gens[x], v) for x in "abcd"})

# %% boundary points are prefix(period) strings
p = tree.ZERO_RAY
for x in "abcd":
    print(x, p, "->", tree.apply_boundary(gens[x], p))

# %% other members of the family; here d collapses and c equals b
D = build_group("(0)*")
print("(0)*: degenerate", sorted(D.degenerate), "alias c ->", D.alias["c"])
