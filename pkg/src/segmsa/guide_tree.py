"""Neighbor-joining guide trees."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Optional, Sequence

import numpy as np

__all__ = ["TreeNode", "neighbor_joining", "splits"]


@dataclass
class TreeNode:
    name: Optional[str] = None
    children: list = field(default_factory=list)
    length: float = 0.0

    @property
    def is_leaf(self) -> bool:
        return not self.children

    def leaves(self) -> list[str]:
        if self.is_leaf:
            return [self.name]
        return [n for c in self.children for n in c.leaves()]

    def postorder(self) -> Iterator["TreeNode"]:
        for c in self.children:
            yield from c.postorder()
        yield self

    def newick(self) -> str:
        return self._newick() + ";"

    def _newick(self) -> str:
        if self.is_leaf:
            label = self.name
        else:
            label = "(" + ",".join(f"{c._newick()}:{c.length:.6g}" for c in self.children) + ")"
        return label


def neighbor_joining(D: np.ndarray, names: Sequence[str]) -> TreeNode:
    """Saitou-Nei neighbor joining, rooted at the midpoint of the last edge.

    Negative branch-length estimates are clamped to zero. Among pairs whose
    Q-criterion ties (to 1e-9 relative), the pair with the smallest
    leaf-name labels is joined, so the result does not depend on the input
    order.
    """
    d = np.array(D, dtype=np.float64)
    k = len(names)
    if k < 2:
        raise ValueError("neighbor joining needs at least two sequences")
    if d.shape != (k, k):
        raise ValueError(f"distance matrix shape {d.shape} for {k} names")
    nodes = [TreeNode(name) for name in names]
    tags = [name for name in names]  # smallest leaf name under each active node

    while len(nodes) > 2:
        n = len(nodes)
        r = d.sum(axis=1)
        q = (n - 2) * d - r[:, None] - r[None, :]
        iu = np.triu_indices(n, 1)
        qv = q[iu]
        qmin = qv.min()
        tol = 1e-9 * max(1.0, abs(qmin))
        cands = np.flatnonzero(qv <= qmin + tol)
        i, j = min(
            ((int(iu[0][c]), int(iu[1][c])) for c in cands),
            key=lambda p: tuple(sorted((tags[p[0]], tags[p[1]]))),
        )
        dij = d[i, j]
        li = 0.5 * dij + (r[i] - r[j]) / (2 * (n - 2))
        lj = dij - li
        a, b = nodes[i], nodes[j]
        a.length, b.length = max(0.0, li), max(0.0, lj)
        if tags[j] < tags[i]:
            a, b = b, a
        joined = TreeNode(None, [a, b])
        new_row = 0.5 * (d[i] + d[j] - dij)

        keep = [x for x in range(n) if x not in (i, j)]
        d = np.vstack(
            [
                np.hstack([d[np.ix_(keep, keep)], new_row[keep][:, None]]),
                np.hstack([new_row[keep], [0.0]])[None, :],
            ]
        )
        new_tag = min(tags[i], tags[j])
        nodes = [nodes[x] for x in keep] + [joined]
        tags = [tags[x] for x in keep] + [new_tag]

    a, b = nodes
    if tags[1] < tags[0]:
        a, b = b, a
    half = max(0.0, d[0, 1]) / 2
    a.length = b.length = half
    return TreeNode(None, [a, b])


def splits(root: TreeNode) -> set[frozenset]:
    """Non-trivial bipartitions of the leaf set, as the side without the first leaf."""
    everything = frozenset(root.leaves())
    anchor = min(everything)
    out = set()
    for node in root.postorder():
        side = frozenset(node.leaves())
        if anchor in side:
            side = everything - side
        if 1 < len(side) < len(everything) - 1:
            out.add(side)
    return out
