# %% [markdown]
# # Specification patterns
#
# The specified entries of a partial Hermitian matrix define a graph: an
# edge i -- j for every specified off-diagonal entry. Completion works
# clique by clique and needs the graph to be chordal (every cycle of
# length four or more has a chord).

# %%
import numpy as np

from psdcomplete import PatternGraph, clique_tree, is_chordal, maximal_cliques, mcs_order

# %% [markdown]
# A four-cycle is the smallest non-chordal graph; the test returns it as a
# witness.

# %%
C4 = PatternGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)])
print(is_chordal(C4))

# %% [markdown]
# Two triangles sharing an edge, plus a third triangle hanging off vertex
# 3. Maximum cardinality search gives a perfect elimination order, from
# which the maximal cliques follow.

# %%
G = PatternGraph.from_edges(6, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4), (3, 5), (4, 5)])
print("MCS order:", mcs_order(G))
result = is_chordal(G)
cliques = maximal_cliques(G, result.peo)
print("cliques:", cliques)

# %% [markdown]
# The clique graph joins cliques that intersect. Its maximum-weight
# spanning tree (weights = separator sizes) has the running intersection
# property, so merging cliques in breadth-first order always meets the
# already merged part exactly in the separator.

# %%
tree = clique_tree(cliques)
print("clique graph:", tree.intersection_edges)
for step in tree.merge_order:
    print(f"merge clique {step.child} into clique {step.parent} through {step.separator}")
print("running intersection:", tree.running_intersection_holds())
