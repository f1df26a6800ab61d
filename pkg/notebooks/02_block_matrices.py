# %% [markdown]
# # Block matrices of maximal rank
#
# Split a PSD matrix as H = [[A, B], [B*, C]]. Always
# rank H <= rank A + rank C; H is *of maximal rank* when equality holds. On
# that class three classical results for positive definite matrices carry
# over with gendet and the Moore-Penrose inverse:
#
# * Fischer: gendet H <= gendet A * gendet C, with equality iff B = 0;
# * Schur: gendet H = gendet A * gendet(H/A) with H/A = C - B* A^+ B;
# * Banachiewicz: H^+ has the usual block formula in A^+ and (H/A)^+.

# %%
import numpy as np

from psdcomplete import (
    banachiewicz_pinv,
    is_maximal_rank,
    numerical_rank,
    pinv,
    schur_complement,
    split,
    verify_fischer,
    verify_schur_det,
)
from psdcomplete.generators import random_maximal_rank

rng = np.random.default_rng(1)

# %% [markdown]
# A small example where the class matters: the all-ones 2x2 matrix has
# rank 1 but each diagonal block has rank 1, so it is not of maximal rank.
# diag(1, 0, 1) is.

# %%
print(is_maximal_rank(np.ones((2, 2)), 1), is_maximal_rank(np.diag([1.0, 0.0, 1.0]), 1))

# %% [markdown]
# A random singular example: n = 8, leading block of size 3 and rank 2,
# trailing block of rank 3.

# %%
H = random_maximal_rank(8, 3, 2, 3, rng)
A, B, C = split(H, 3)
print("ranks H, A, C:", numerical_rank(H), numerical_rank(A), numerical_rank(C))

f = verify_fischer(H, 3)
print(f"Fischer: {f.lhs:.6g} <= {f.rhs:.6g}  holds={f.holds} equality={f.equality}")

s = verify_schur_det(H, 3)
print(f"Schur:   {s.lhs:.6g} == {s.rhs:.6g}  holds={s.holds}")

scale = np.abs(np.linalg.eigvalsh(H)).max()
print("rank H/A =", numerical_rank(schur_complement(H, 3), scale=scale), " rank C =", numerical_rank(C, scale=scale))

X = banachiewicz_pinv(H, 3)
print("block formula vs eigen pseudoinverse:", np.linalg.norm(X - pinv(H)) / np.linalg.norm(pinv(H)))

# %% [markdown]
# With B = 0 the Fischer inequality becomes an equality.

# %%
H0 = random_maximal_rank(8, 3, 2, 3, rng, zero_b=True)
print(verify_fischer(H0, 3))
