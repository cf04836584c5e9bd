from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True, order=True)
class Bidegree:
    i: int
    j: int

    @property
    def delta(self) -> int:
        return self.j - 2 * self.i

    @classmethod
    def from_delta(cls, i: int, delta: int) -> Bidegree:
        return cls(i, delta + 2 * i)

    def __add__(self, other: Bidegree) -> Bidegree:
        return Bidegree(self.i + other.i, self.j + other.j)

    def __str__(self) -> str:
        return f"({self.i},{self.j})"


@dataclass(frozen=True)
class Shift:
    """W[a,b]^{i,j} = W^{i-a, j-b}: a shifted space has its degrees raised by (a, b)."""
    a: int = 0
    b: int = 0

    def __add__(self, other: Shift) -> Shift:
        return Shift(self.a + other.a, self.b + other.b)

    def __neg__(self) -> Shift:
        return Shift(-self.a, -self.b)

    def apply(self, degree: Bidegree) -> Bidegree:
        return Bidegree(degree.i + self.a, degree.j + self.b)

    @property
    def delta_shift(self) -> int:
        return self.b - 2 * self.a

    def __str__(self) -> str:
        return f"[{self.a},{self.b}]"


def normalization(p: int, q: int) -> Shift:
    """Shift placing K̃h(T_{p,q}) in the directed system: [0, (p-1)(q-1)]."""
    return Shift(0, (p - 1) * (q - 1))
