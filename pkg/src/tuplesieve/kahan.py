"""Compensated (Kahan) summation with fixed bucket arrays.

Workers accumulate reciprocal sums into a fixed number of buckets and
the buckets are folded in a fixed order at the end, so a given
configuration reproduces the same float bit for bit, run after run.
"""

from dataclasses import dataclass, field

__all__ = ["KahanAccumulator", "KahanBuckets", "kahan_add", "kahan_merge"]


@dataclass
class KahanAccumulator:
    total: float = 0.0
    comp: float = 0.0

    def add(self, v: float):
        # classic compensated step; zero adds are skipped so they are
        # exact identities and never fold the compensation early
        if v == 0.0:
            return
        y = v - self.comp
        t = self.total + y
        self.comp = (t - self.total) - y
        self.total = t

    def merge_from(self, other: "KahanAccumulator"):
        self.add(other.total)
        self.add(-other.comp)

    @property
    def value(self) -> float:
        return self.total


def kahan_add(acc: KahanAccumulator, v: float) -> KahanAccumulator:
    acc.add(v)
    return acc


@dataclass
class KahanBuckets:
    """Per-worker bucket array; bucket choice rotates with the item count."""

    count: int = 10000
    buckets: list = field(default_factory=list)
    items: int = 0

    def __post_init__(self):
        if not self.buckets:
            self.buckets = [KahanAccumulator() for _ in range(self.count)]

    def add_group(self, values):
        """Add one tuple's terms into a single bucket, then rotate."""
        b = self.buckets[self.items % self.count]
        for v in values:
            b.add(v)
        self.items += 1

    def fold_into(self, acc: KahanAccumulator):
        for b in self.buckets:
            acc.merge_from(b)

    def value(self) -> float:
        acc = KahanAccumulator()
        self.fold_into(acc)
        return acc.value


def kahan_merge(a: KahanBuckets, b: KahanBuckets) -> KahanBuckets:
    """Merge b into a, bucket by bucket in index order."""
    if a.count != b.count:
        raise ValueError("bucket arrays differ in size")
    for i in range(a.count):
        a.buckets[i].merge_from(b.buckets[i])
    a.items += b.items
    return a
