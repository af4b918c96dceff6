"""Third and second q-central quotients of presented groups.

The descending q-central series is G^(1) = G, G^(i+1) = (G^(i))^q [G^(i), G],
and G^[i] = G / G^(i).  For finitely generated G the level-3 quotient is a
finite group of nilpotency class <= 2 and exponent dividing q^2, and this
script computes a few of them as explicit multiplication tables.
"""

from qcw import (
    SeriesParams,
    parse_presentation,
    free_presentation,
    second_quotient,
    series_step_oracle,
    third_quotient,
    to_table,
)
from qcw.qcentral import group_record

params = SeriesParams(p=2, d=1)  # q = 2

# --- free groups -----------------------------------------------------------
# For the free group of rank n the quotient is the "universal" group
# E(n, q) of order q^(2n + n(n-1)/2): every n-generator group with trivial
# third series term is one of its quotients.
for n in (1, 2, 3):
    g = third_quotient(free_presentation(n), params)
    print(f"free rank {n}: |G^[3,2]| = {g.order}")

# --- a presented group -----------------------------------------------------
# The tame local relator s t s^-1 = t^3.  Its image in E(2,2) is central of
# order 2, so the quotient halves.
demushkin = parse_presentation(
    "group D { generators: s,t; relators: s t s^-1 t^-3; }"
)
g = third_quotient(demushkin, params)
print("\ntame relator s t s^-1 t^-3 at q=2:")
for key, value in group_record(g).items():
    print(f"  {key}: {value}")

# --- the series oracle -----------------------------------------------------
# An independent check on explicit tables: H -> H^q [H, G].  Two steps from
# the whole group must reach the identity, because the construction quotients
# by the third term.
t = to_table(g)
step1 = series_step_oracle(t, set(range(t.order)), params)
step2 = series_step_oracle(t, step1, params)
print(f"\nseries steps on the table: |G| = {t.order}, |G^(2)| = {len(step1)}, |G^(3)| = {len(step2)}")

# --- level 2 ----------------------------------------------------------------
# G^[2] = G / G^q [G,G] is the mod-q abelianization; for the group above it
# is (Z/2)^2.
t2 = second_quotient(demushkin, params)
print(f"G^[2,2]: order {t2.order}, invariants {t2.abelian_invariants()}")
