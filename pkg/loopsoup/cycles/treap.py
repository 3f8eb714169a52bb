"""
Balanced backend: one implicit-key treap per cycle.

Position lookup, split and concatenation cost O(log ℓ) expected. Reversal
with direction negation is a lazy tag pushed down on demand. Nodes keep a
parent pointer so a vertex finds its root and position without a search, and
every subtree caches its size and its number of Up entries.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from loopsoup.cycles.base import UP, CycleSet


class _Node:
    __slots__ = ("vertex", "dir", "prio", "size", "ups", "flip", "left", "right", "parent", "label")

    def __init__(self, vertex: int, prio: float):
        self.vertex = vertex
        self.dir = UP
        self.prio = prio
        self.size = 1
        self.ups = 1
        self.flip = False
        self.left: Optional[_Node] = None
        self.right: Optional[_Node] = None
        self.parent: Optional[_Node] = None
        self.label = vertex


Tree = Optional[_Node]


def _size(t: Tree) -> int:
    return t.size if t is not None else 0


def _ups(t: Tree) -> int:
    return t.ups if t is not None else 0


def _toggle(t: _Node) -> None:
    """Reverse and negate the subtree at ``t`` (children deferred)."""
    t.left, t.right = t.right, t.left
    t.dir = -t.dir
    t.ups = t.size - t.ups
    t.flip = not t.flip


def _push(t: _Node) -> None:
    if t.flip:
        if t.left is not None:
            _toggle(t.left)
        if t.right is not None:
            _toggle(t.right)
        t.flip = False


def _pull(t: _Node) -> None:
    left, right = t.left, t.right
    t.size = 1 + _size(left) + _size(right)
    t.ups = (1 if t.dir == UP else 0) + _ups(left) + _ups(right)
    if left is not None:
        left.parent = t
    if right is not None:
        right.parent = t


def _split(t: Tree, k: int) -> tuple[Tree, Tree]:
    if t is None:
        return None, None
    _push(t)
    if _size(t.left) >= k:
        left, right = _split(t.left, k)
        t.left = right
        _pull(t)
        if left is not None:
            left.parent = None
        t.parent = None
        return left, t
    left, right = _split(t.right, k - _size(t.left) - 1)
    t.right = left
    _pull(t)
    if right is not None:
        right.parent = None
    t.parent = None
    return t, right


def _merge(a: Tree, b: Tree) -> Tree:
    if a is None:
        return b
    if b is None:
        return a
    if a.prio > b.prio:
        _push(a)
        a.right = _merge(a.right, b)
        _pull(a)
        a.parent = None
        return a
    _push(b)
    b.left = _merge(a, b.left)
    _pull(b)
    b.parent = None
    return b


def _count_up_prefix(t: Tree, k: int) -> int:
    """Up entries among the first ``k`` positions of ``t``."""
    count = 0
    while t is not None and k > 0:
        _push(t)
        left = _size(t.left)
        if k <= left:
            t = t.left
            continue
        count += _ups(t.left) + (1 if t.dir == UP else 0)
        k -= left + 1
        t = t.right
    return count


class TreapCycleSet(CycleSet[Tree]):
    backend = "treap"

    def __init__(self, n: int, seed: int = 0):
        super().__init__(n)
        prios = np.random.default_rng(seed).random(n + 1).tolist()
        self._nodes = [_Node(v, prios[v]) for v in range(n + 1)]
        self._roots: dict[int, _Node] = {v: self._nodes[v] for v in range(1, n + 1)}

    def _root_path(self, v: int) -> list[_Node]:
        path = [self._nodes[v]]
        while path[-1].parent is not None:
            path.append(path[-1].parent)  # type: ignore[arg-type]
        return path

    def _locate(self, v: int) -> tuple[int, int, int, int]:
        path = self._root_path(v)
        for node in reversed(path):
            _push(node)
        node = path[0]
        pos = _size(node.left)
        for child, parent in zip(path, path[1:]):
            if parent.right is child:
                pos += _size(parent.left) + 1
        root = path[-1]
        return root.label, pos, node.dir, root.size

    def _take(self, cid: int) -> Tree:
        return self._roots.pop(cid)

    def _install(self, seq: Tree, cid: int) -> None:
        assert seq is not None
        seq.parent = None
        seq.label = cid
        self._roots[cid] = seq

    def _split(self, seq: Tree, k: int) -> tuple[Tree, Tree]:
        return _split(seq, k)

    def _concat(self, *seqs: Tree) -> Tree:
        out: Tree = None
        for s in seqs:
            out = _merge(out, s)
        return out

    def _revneg(self, seq: Tree) -> Tree:
        if seq is not None:
            _toggle(seq)
        return seq

    def _count_up(self, cid: int, start: int, stop: int) -> int:
        root = self._roots[cid]
        return _count_up_prefix(root, stop) - _count_up_prefix(root, start)

    def listing(self, cid: int) -> list[tuple[int, int]]:
        out: list[tuple[int, int]] = []
        stack: list[_Node] = []
        t: Tree = self._roots[cid]
        while stack or t is not None:
            while t is not None:
                _push(t)
                stack.append(t)
                t = t.left
            t = stack.pop()
            out.append((t.vertex, t.dir))
            t = t.right
        return out

    def cycle_ids(self) -> list[int]:
        return list(self._roots)

    def representatives(self) -> list[tuple[int, int]]:
        return [(root.vertex, root.size) for root in self._roots.values()]
