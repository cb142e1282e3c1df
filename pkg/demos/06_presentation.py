# Checking the recursive presentation of the first Grigorchuk group.
# Run: python3 demos/06_presentation.py

# %%
import time

from grigorchuk.groups import build_group
from grigorchuk.presentations import apply_substitution, generate_relators, verify_relators
from grigorchuk.words import is_identity

G = build_group("(012)*")
print("sigma(ad) =", apply_substitution("ad"))

# %%
rs = generate_relators(6)
start = time.perf_counter()
report = verify_relators(G, rs)
print(report.checked, "relators verified in", round(time.perf_counter() - start, 2), "s")
print("lengths:", report.lengths)

# %% truncating a relator leaves a single letter, never the identity
r = rs.iterated[-1]
print(len(r[:-1]), is_identity(G, r[:-1]))
