"""One-cycle permutations of strands (1-indexed) and their inversion numbers."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

MAX_K = 10


class KTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class StrandPermutation:
    image: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "image", tuple(int(v) for v in self.image))
        if sorted(self.image) != list(range(1, len(self.image) + 1)):
            raise ValueError(f"{self.image} is not a permutation of 1..{len(self.image)}")

    @property
    def k(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    @classmethod
    def neat(cls, k: int) -> "StrandPermutation":
        """Strand i continues as strand i - 1, strand 1 as strand k."""
        return cls((k,) + tuple(range(1, k)))

    @classmethod
    def identity(cls, k: int) -> "StrandPermutation":
        return cls(tuple(range(1, k + 1)))

    def steps(self, a: int, b: int) -> int:
        """Smallest r >= 0 with pi^r(a) = b."""
        r, x = 0, a
        while x != b:
            x = self(x)
            r += 1
            if r > self.k:
                raise ValueError(f"{b} is not in the cycle of {a}")
        return r


def is_one_cycle(p: StrandPermutation) -> bool:
    x, length = 1, 0
    while True:
        x = p(x)
        length += 1
        if x == 1:
            return length == p.k


def displacement_defect(p: StrandPermutation) -> int:
    """(sum |pi(i) - i|) - (k - 1) minus the inversion number; never negative."""
    disp = sum(abs(v - i) for i, v in enumerate(p.image, 1))
    return disp - (p.k - 1) - inversion_number(p)


def inversion_number(p: StrandPermutation) -> int:
    img = p.image
    return sum(1 for i in range(len(img)) for j in range(i + 1, len(img)) if img[i] > img[j])


def _guard(k: int) -> None:
    if k < 2:
        raise ValueError("k must be at least 2")
    if k > MAX_K:
        raise KTooLarge(f"k={k} exceeds the enumeration guard {MAX_K}")


def _one_cycle_array(k: int) -> np.ndarray:
    """All one-cycle permutations as rows of 1-indexed images, lexicographic in cycle order."""
    rest = np.array(list(permutations(range(2, k + 1))), dtype=np.int8).reshape(-1, k - 1)
    cycles = np.hstack([np.ones((len(rest), 1), dtype=np.int8), rest])
    images = np.empty_like(cycles)
    rows = np.arange(len(cycles))[:, None]
    images[rows, cycles - 1] = np.roll(cycles, -1, axis=1)
    return images


def enumerate_one_cycle(k: int) -> list[StrandPermutation]:
    _guard(k)
    return [StrandPermutation(tuple(row)) for row in _one_cycle_array(k).tolist()]


def _inversions(images: np.ndarray) -> np.ndarray:
    k = images.shape[1]
    total = np.zeros(len(images), dtype=np.int64)
    for i in range(k - 1):
        total += (images[:, i:i + 1] > images[:, i + 1:]).sum(axis=1)
    return total


def min_inversion_stats(k: int) -> dict:
    _guard(k)
    inv = _inversions(_one_cycle_array(k))
    low = int(inv.min())
    return {"min_value": low, "count_minimizers": int((inv == low).sum())}


def minimal_connections(k: int) -> list[StrandPermutation]:
    _guard(k)
    images = _one_cycle_array(k)
    inv = _inversions(images)
    return [StrandPermutation(tuple(r)) for r in images[inv == inv.min()].tolist()]
