"""First-conflict detection and conflict splitting."""
from __future__ import annotations

from typing import NamedTuple, Optional, Sequence

from .lowlevel import Constraint


class Conflict(NamedTuple):
    """Vertex conflict when ``vi == vj``; otherwise agent i moves vi->vj while j moves vj->vi between t and t+1."""

    i: int
    j: int
    vi: int
    vj: int
    t: int

    @property
    def is_vertex(self) -> bool:
        return self.vi == self.vj


def detect_first_conflict(paths: Sequence[Sequence[int]]) -> Optional[Conflict]:
    """Scan time-major, then agent pairs (i < j). Vertex conflicts at t come before edge swaps t -> t+1.

    Agents that already arrived are held at their goals.
    """
    n = len(paths)
    if n < 2:
        return None
    horizon = max(len(p) for p in paths)
    padded = [list(p) + [p[-1]] * (horizon - len(p)) for p in paths]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for t in range(horizon):
        at = [p[t] for p in padded]
        if len(set(at)) < n:
            for i, j in pairs:
                if at[i] == at[j]:
                    return Conflict(i, j, at[i], at[i], t)
        if t + 1 >= horizon:
            break
        nxt = [p[t + 1] for p in padded]
        for i, j in pairs:
            if at[i] != nxt[i] and at[i] == nxt[j] and at[j] == nxt[i]:
                return Conflict(i, j, at[i], at[j], t)
    return None


def split_conflict(c: Conflict) -> tuple[Constraint, Constraint]:
    return Constraint(c.i, c.vi, c.vj, c.t), Constraint(c.j, c.vj, c.vi, c.t)
