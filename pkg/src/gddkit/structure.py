"""Reducibility: strongly connected components and the Frobenius normal form."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from gddkit.matcore import ROW, _check_axis, as_matrix, deleted_sums, scale


@dataclass(frozen=True)
class FrobeniusForm:
    """Symmetric permutation to block upper triangular form.

    ``permutation[k]`` is the original index placed at position ``k``, so
    ``A[np.ix_(p, p)]`` is block upper triangular. Block ``b`` occupies
    positions ``block_bounds[b]:block_bounds[b + 1]``.
    """

    permutation: tuple[int, ...]
    block_bounds: tuple[int, ...]

    @property
    def block_count(self) -> int:
        return len(self.block_bounds) - 1

    def blocks(self) -> list[np.ndarray]:
        """Original indices of each diagonal block, in normal-form order."""
        p = np.asarray(self.permutation, dtype=int)
        b = self.block_bounds
        return [p[b[k]:b[k + 1]] for k in range(self.block_count)]

    def block_of(self) -> np.ndarray:
        """Map from original index to the number of the block containing it."""
        owner = np.empty(len(self.permutation), dtype=int)
        for k, idx in enumerate(self.blocks()):
            owner[idx] = k
        return owner


def support_graph(a) -> list[list[int]]:
    """Adjacency lists of the digraph with an edge i->j iff i != j and a_ij != 0."""
    m = as_matrix(a)
    nz = np.abs(m) > 0
    np.fill_diagonal(nz, False)
    return [np.flatnonzero(row).tolist() for row in nz]


def strongly_connected_components(adj: list[list[int]]) -> list[list[int]]:
    """Tarjan's algorithm, iterative, visiting roots and neighbours in index order.

    Components come out in reverse topological order: a component is emitted
    only after every component reachable from it.
    """
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    components: list[list[int]] = []
    counter = 0

    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, iter(adj[root]))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, children = work[-1]
            for w in children:
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, iter(adj[w])))
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[v])
                if low[v] == index[v]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        comp.append(w)
                        if w == v:
                            break
                    components.append(sorted(comp))
    return components


def frobenius_normal_form(a) -> FrobeniusForm:
    """Blocks are the SCCs, sources first, so every coupling lies above the block diagonal."""
    comps = strongly_connected_components(support_graph(a))[::-1]
    perm: list[int] = []
    bounds = [0]
    for comp in comps:
        perm.extend(comp)
        bounds.append(len(perm))
    return FrobeniusForm(tuple(perm), tuple(bounds))


def is_irreducible(a) -> bool:
    """Single SCC for n >= 2; a 1x1 matrix counts as irreducible iff its entry is nonzero."""
    m = as_matrix(a)
    if m.shape[0] == 1:
        return bool(abs(m[0, 0]) > 0)
    return frobenius_normal_form(m).block_count == 1


def block_diagonal_part(a, form: FrobeniusForm | None = None) -> np.ndarray:
    """Copy of A keeping only entries whose row and column share a Frobenius block."""
    m = as_matrix(a)
    if form is None:
        form = frobenius_normal_form(m)
    owner = form.block_of()
    return np.where(owner[:, None] == owner[None, :], m, 0)


def tilde_sums(a, axis: str = ROW, s=None) -> np.ndarray:
    """Deleted sums taken within the diagonal blocks only, indexed like A.

    With a scaling ``s`` the matrix X^{-1}AX is formed first. Diagonal
    similarity keeps the support, so the blocks are the same either way.
    """
    _check_axis(axis)
    m = as_matrix(a)
    if s is not None:
        m = scale(m, s)
    return deleted_sums(block_diagonal_part(m), axis)
