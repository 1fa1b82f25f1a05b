"""
Pairwise residue alignment
==========================

Local and global alignment with affine gaps, and the bit-score scale
used everywhere else in the package.
"""

# %%
# A local alignment finds the best-scoring pair of substrings. With the
# default 11/1 gap costs a single gap costs 12, so short cores win.
from segmsa import bits, blosum62, global_align_residues, local_align

B62 = blosum62()
aln = local_align("GGWWKDEGG", "AWWKDA", B62, gap_open=11, gap_extend=1)
print("raw", aln.raw_score, "bits", round(aln.bit_score, 2))
print("x span", (aln.x_start, aln.x_end), "y span", (aln.y_start, aln.y_end))

# %%
# Bits grow linearly with the raw score and never go below zero.
for raw in (0, 10, 20, 40):
    print(raw, round(bits(raw), 2))

# %%
# Global alignment runs in linear space. Each row keeps its residues in order.
g = global_align_residues("ACDEFGHIKL", "ACEFGHKL")
print(g.top)
print(g.bottom)
print("score", g.score)
