from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from app.errors import ContractViolation


@dataclass(frozen=True, slots=True, eq=False)
class Transition:
    s: np.ndarray
    a: np.ndarray
    r: float
    s_next: np.ndarray
    done: bool


@dataclass(frozen=True, slots=True, eq=False)
class Batch:
    """Stacked transitions: rows of ``s``, ``a``, ``s_next``; vectors ``r`` and ``done``."""

    s: np.ndarray
    a: np.ndarray
    r: np.ndarray
    s_next: np.ndarray
    done: np.ndarray

    @classmethod
    def from_transitions(cls, transitions: Sequence[Transition]) -> "Batch":
        if not transitions:
            raise ContractViolation("a batch needs at least one transition")
        return cls(
            s=np.stack([t.s for t in transitions]).astype(np.float64),
            a=np.stack([t.a for t in transitions]).astype(np.float64),
            r=np.array([t.r for t in transitions], dtype=np.float64),
            s_next=np.stack([t.s_next for t in transitions]).astype(np.float64),
            done=np.array([t.done for t in transitions], dtype=bool),
        )

    def __len__(self) -> int:
        return len(self.r)


class ReplayBuffer:
    """Bounded FIFO ring; once full, each insertion overwrites the oldest entry."""

    def __init__(self, capacity: int):
        if capacity <= 0:
            raise ContractViolation(f"capacity must be positive, got {capacity}")
        self.capacity = capacity
        self._size = 0
        self._next = 0
        self._s = self._a = self._r = self._s_next = self._done = None

    def __len__(self) -> int:
        return self._size

    def _allocate(self, t: Transition) -> None:
        n = self.capacity
        self._s = np.zeros((n, len(t.s)))
        self._a = np.zeros((n, len(t.a)))
        self._r = np.zeros(n)
        self._s_next = np.zeros((n, len(t.s_next)))
        self._done = np.zeros(n, dtype=bool)

    def push(self, t: Transition) -> None:
        if self._s is None:
            self._allocate(t)
        i = self._next
        self._s[i], self._a[i], self._r[i], self._s_next[i], self._done[i] = t.s, t.a, t.r, t.s_next, t.done
        self._next = (i + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def _oldest_first(self) -> np.ndarray:
        start = self._next if self._size == self.capacity else 0
        return (start + np.arange(self._size)) % self.capacity

    def __iter__(self) -> Iterator[Transition]:
        for i in self._oldest_first():
            yield Transition(self._s[i].copy(), self._a[i].copy(), float(self._r[i]), self._s_next[i].copy(), bool(self._done[i]))

    def gather(self, idx: np.ndarray) -> Batch:
        return Batch(self._s[idx], self._a[idx], self._r[idx], self._s_next[idx], self._done[idx])

    def sample(self, batch_size: int, rng: np.random.Generator) -> Batch:
        if self._size == 0:
            raise ContractViolation("cannot sample an empty buffer")
        return self.gather(rng.integers(0, self._size, size=batch_size))
