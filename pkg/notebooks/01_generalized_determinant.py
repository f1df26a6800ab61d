# %% [markdown]
# # The generalized determinant
#
# For a singular Hermitian matrix the ordinary determinant is zero and says
# nothing. The generalized determinant keeps the product of the nonzero
# eigenvalues instead, i.e. the determinant of the matrix restricted to its
# range. It is 1 for the zero matrix.

# %%
import numpy as np

from psdcomplete import gendet, gendet_limit, hermitian_eig, numerical_rank
from psdcomplete.generators import random_gram

rng = np.random.default_rng(0)

# %% [markdown]
# A diagonal example first: diag(2, 3, 0) has rank 2 and generalized
# determinant 6.

# %%
H = np.diag([2.0, 3.0, 0.0])
print("rank  =", numerical_rank(H))
print("gendet =", gendet(H))
print("gendet(0) =", gendet(np.zeros((3, 3))))

# %% [markdown]
# ## The epsilon limit
#
# The same number appears as the limit of det(H + eps I) / eps^(n - r).
# `gendet_limit` evaluates that ratio at a few eps and extrapolates to
# eps = 0. It uses numpy's LU determinant, so it is independent of the
# eigensolver behind `gendet`.

# %%
H = random_gram(6, 3, rng)
r = numerical_rank(H)
limit, info = gendet_limit(H, r, full_output=True)
print("eigenvalues:", np.round(hermitian_eig(H).eigenvalues, 6))
print("ratio at eps = 1e-3, 1e-4, 1e-5:", info["values"])
print("extrapolated:", limit, " gendet:", gendet(H))

# %% [markdown]
# ## Scaling
#
# Only the r nonzero eigenvalues are scaled, so gendet(cH) = c^r gendet(H).

# %%
for c in (0.5, 2.0, 10.0):
    print(c, gendet(c * H) / gendet(H), c ** r)
