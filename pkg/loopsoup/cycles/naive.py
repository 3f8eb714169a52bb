"""
Reference backend: one Python list per cycle.

Every operation costs O(cycle length); used as the oracle for the treap
backend and for small-n experiments.
"""

from __future__ import annotations

from loopsoup.cycles.base import UP, CycleSet

Seq = list[tuple[int, int]]


class NaiveCycleSet(CycleSet[Seq]):
    backend = "naive"

    def __init__(self, n: int):
        super().__init__(n)
        self._cycles: dict[int, Seq] = {v: [(v, UP)] for v in range(1, n + 1)}
        self._cid = list(range(n + 1))
        self._pos = [0] * (n + 1)

    def _locate(self, v: int) -> tuple[int, int, int, int]:
        cid = self._cid[v]
        seq = self._cycles[cid]
        pos = self._pos[v]
        return cid, pos, seq[pos][1], len(seq)

    def _take(self, cid: int) -> Seq:
        return self._cycles.pop(cid)

    def _install(self, seq: Seq, cid: int) -> None:
        self._cycles[cid] = seq
        for i, (v, _) in enumerate(seq):
            self._cid[v] = cid
            self._pos[v] = i

    def _split(self, seq: Seq, k: int) -> tuple[Seq, Seq]:
        return seq[:k], seq[k:]

    def _concat(self, *seqs: Seq) -> Seq:
        out: Seq = []
        for s in seqs:
            out.extend(s)
        return out

    def _revneg(self, seq: Seq) -> Seq:
        return [(v, -d) for v, d in reversed(seq)]

    def _count_up(self, cid: int, start: int, stop: int) -> int:
        return sum(1 for _, d in self._cycles[cid][start:stop] if d == UP)

    def listing(self, cid: int) -> list[tuple[int, int]]:
        return list(self._cycles[cid])

    def cycle_ids(self) -> list[int]:
        return list(self._cycles)

    def representatives(self) -> list[tuple[int, int]]:
        return [(seq[0][0], len(seq)) for seq in self._cycles.values()]
