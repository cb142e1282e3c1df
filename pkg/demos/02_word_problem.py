# The word problem by contraction, and element orders.
# Run: python3 demos/02_word_problem.py

# %%
from grigorchuk.groups import build_group
from grigorchuk.words import is_identity, order_of, reduce, section_words

G = build_group("(012)*")

# %% reduction to alternating words, then one level of sections
w = "abcabdacbd"
r = reduce(G, w)
print(w, "reduces to", r)
print("root perm and sections:", section_words(G, r))

# %% a few relations and non-relations
for w in ["bcd", "ad" * 4, "ac" * 8, "ab" * 8, "ab" * 16]:
    print(f"{w[:24]:<24} identity={is_identity(G, w)}")

# %% orders are powers of two in this group
for w in ["ab", "ac", "ad", "abac", "abacad"]:
    print(w, order_of(G, w))

# %% the group of (01)* is not torsion
H = build_group("(01)*")
print("(01)*: order of ab", order_of(H, "ab", cap=128))
