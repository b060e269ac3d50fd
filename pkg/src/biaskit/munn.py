"""Free inverse monoid elements as Munn trees.

A letter is a nonzero int: +k for the k-th generator, -k for its inverse.
An element is a prefix-closed set of reduced words (the tree, rooted at
the empty word) together with an end vertex in that tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable, Mapping, Sequence

Word = tuple[int, ...]


def reduce_word(letters: Iterable[int]) -> Word:
    out: list[int] = []
    for a in letters:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def invert_word(w: Word) -> Word:
    return tuple(-a for a in reversed(w))


def prefixes(w: Word) -> frozenset[Word]:
    return frozenset(w[:k] for k in range(len(w) + 1))


@dataclass(frozen=True)
class MunnTree:
    tree: frozenset[Word]
    end: Word

    @classmethod
    def generator(cls, letter: int) -> MunnTree:
        return cls(frozenset({(), (letter,)}), (letter,))

    @classmethod
    def from_word(cls, letters: Iterable[int]) -> MunnTree:
        """The element read along a (possibly unreduced) word."""
        acc = cls(frozenset({()}), ())
        for a in letters:
            acc = acc * cls.generator(a)
        return acc

    def __mul__(self, other: MunnTree) -> MunnTree:
        shifted = {reduce_word(self.end + u) for u in other.tree}
        return MunnTree(self.tree | shifted, reduce_word(self.end + other.end))

    def inverse(self) -> MunnTree:
        back = invert_word(self.end)
        return MunnTree(frozenset(reduce_word(back + u) for u in self.tree), back)

    def dom(self) -> MunnTree:
        return self.inverse() * self

    def ran(self) -> MunnTree:
        return self * self.inverse()

    @property
    def is_idempotent(self) -> bool:
        return self.end == ()

    def leq(self, other: MunnTree) -> bool:
        """Natural order: self = other * d(self), i.e. a larger tree, same end."""
        return self.end == other.end and self.tree >= other.tree

    def leaves(self) -> list[Word]:
        return sorted(w for w in self.tree if not any(len(v) == len(w) + 1 and v[:-1] == w for v in self.tree))

    def sort_key(self):
        return (len(self.tree), sorted(self.tree), self.end)

    def to_string(self, alphabet: Sequence[str]) -> str:
        """A product of range idempotents of the leaves off the end path, then the end word."""
        def word(w: Word) -> str:
            return "*".join(alphabet[abs(a) - 1] + ("'" if a < 0 else "") for a in w)

        on_path = prefixes(self.end)
        extra = [w for w in self.leaves() if w not in on_path]
        parts = [f"r({word(w)})" for w in extra]
        if self.end:
            parts.append(word(self.end))
        return "*".join(parts) if parts else "1"

    def evaluate(self, values: Mapping[int, int], mul, inv) -> int:
        """Image under the homomorphism sending letter k to ``values[k]``.

        ``mul``/``inv`` are scalar callables of the target semigroup.
        """
        def word(w: Word) -> int | None:
            acc = None
            for a in w:
                v = values[a] if a > 0 else inv(values[-a])
                acc = v if acc is None else mul(acc, v)
            return acc

        acc = None
        for w in self.leaves():
            if not w:
                continue
            u = word(w)
            e = mul(u, inv(u))
            acc = e if acc is None else mul(acc, e)
        end = word(self.end)
        if end is not None:
            acc = end if acc is None else mul(acc, end)
        if acc is None:
            raise ValueError("the identity has no value in a semigroup without a chosen unit")
        return acc
