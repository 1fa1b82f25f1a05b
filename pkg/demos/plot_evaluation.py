"""
Scoring an alignment against a reference
========================================

Sum-of-pairs scores and the share of conserved reference columns that a
test alignment reproduces.
"""

# %%
from segmsa import Msa, ReferenceAlignment, evaluate, sp_score

ref = Msa(("a", "b", "c"), ("GGACDEFKK", "GGACDEFKK", "GGACDEFKK"))
print("SP of the reference:", sp_score(ref))

# %%
# Flag the ACDEF block as conserved and compare a copy that shifts one row.
flags = ReferenceAlignment(ref, tuple(range(2, 7)))
shifted = Msa(ref.ids, ("GGACDEFKK-", "GGACDEFKK-", "-GGACDEFKK"))
print(evaluate(ref, flags).as_text())
print(evaluate(shifted, flags).as_text())
