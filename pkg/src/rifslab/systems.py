"""Expanding affine systems on the rationals.

A system is a finite family f_i(x) = r_i * x + b_i with rational
coefficients and |r_i| > 1.  Words over the index alphabet compose maps;
the inverse family contracts, and several diagnostics below (exact overlap
scan, separation of inverse branches, residue test) probe whether distinct
words can produce colliding values.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceededError, ConfigError, DomainError
from .rational import format_rational

Word = tuple[int, ...]


@dataclass(frozen=True)
class AffineMap:
    ratio: Fraction
    offset: Fraction

    def __call__(self, x: Fraction) -> Fraction:
        return self.ratio * x + self.offset

    def after(self, other: "AffineMap") -> "AffineMap":
        """Composition self(other(x))."""
        return AffineMap(self.ratio * other.ratio,
                         self.ratio * other.offset + self.offset)

    def inverse(self) -> "AffineMap":
        if self.ratio == 0:
            raise DomainError("map with ratio 0 has no inverse")
        return AffineMap(1 / self.ratio, -self.offset / self.ratio)

    def describe(self) -> str:
        return f"{format_rational(self.ratio)}*x+{format_rational(self.offset)}"


IDENTITY = AffineMap(Fraction(1), Fraction(0))


def affine_map(ratio, offset) -> AffineMap:
    return AffineMap(Fraction(ratio), Fraction(offset))


def fixed_point(m: AffineMap) -> Fraction:
    """The unique fixed point b/(1-r); undefined for ratio 1."""
    if m.ratio == 1:
        raise DomainError("map with ratio 1 has no fixed point")
    return m.offset / (1 - m.ratio)


@dataclass(frozen=True)
class Rifs:
    """A validated family of at least two distinct expanding affine maps."""

    maps: tuple[AffineMap, ...]

    def __post_init__(self):
        if len(self.maps) < 2:
            raise ConfigError("system needs at least 2 maps")
        for i, m in enumerate(self.maps):
            if abs(m.ratio) <= 1:
                raise ConfigError(
                    f"maps[{i}]: ratio magnitude must exceed 1, got "
                    f"{format_rational(m.ratio)}")
        if len(set(self.maps)) != len(self.maps):
            raise ConfigError("maps must be pairwise distinct")

    @property
    def m(self) -> int:
        return len(self.maps)

    @property
    def min_ratio_mag(self) -> Fraction:
        return min(abs(m.ratio) for m in self.maps)

    @property
    def max_ratio_mag(self) -> Fraction:
        return max(abs(m.ratio) for m in self.maps)

    @property
    def max_offset_mag(self) -> Fraction:
        return max(abs(m.offset) for m in self.maps)

    @property
    def escape_radius(self) -> Fraction:
        """Once |x| exceeds max(radius, escape_radius), every image of x is
        strictly larger in magnitude, so x can be discarded during
        enumeration.  Equals max|b| / (min|r| - 1)."""
        return self.max_offset_mag / (self.min_ratio_mag - 1)

    def dual_maps(self) -> tuple[AffineMap, ...]:
        return tuple(m.inverse() for m in self.maps)

    def describe(self) -> str:
        return "{" + ", ".join(m.describe() for m in self.maps) + "}"


def make_system(pairs) -> Rifs:
    """Build a system from (ratio, offset) pairs."""
    return Rifs(tuple(affine_map(r, b) for r, b in pairs))


def check_word(system: Rifs, word: Word) -> None:
    for idx in word:
        if not 1 <= idx <= system.m:
            raise DomainError(f"word index {idx} outside 1..{system.m}")


def compose(system: Rifs, word: Word) -> AffineMap:
    """Compose f_{i1} o f_{i2} o ... o f_{in} for word (i1, ..., in).

    Indices are 1-based.  The empty word gives the identity, which is the
    one non-expanding map allowed out of this function.
    """
    check_word(system, word)
    acc = IDENTITY
    for idx in word:
        acc = acc.after(system.maps[idx - 1])
    return acc


def common_fixed_point(system: Rifs) -> Fraction | None:
    """The shared fixed point if all maps have one, else None.

    Sharing a fixed point is equivalent to all pairs of maps commuting; a
    system with this property has a one-point inverse attractor and a
    multiplicatively generated orbit.
    """
    x0 = fixed_point(system.maps[0])
    for m in system.maps[1:]:
        if m(x0) != x0:
            return None
    return x0


def find_exact_overlaps(system: Rifs, max_word_length: int,
                        word_budget: int = 2_000_000) -> list[tuple[Word, Word]]:
    """All pairs of distinct words of length <= max_word_length composing to
    the same affine map, deduplicated up to swapping the pair.

    Word count grows like m**max_word_length; a budget guards the scan.
    """
    if max_word_length < 1:
        raise DomainError("max_word_length must be >= 1")
    total = sum(system.m**k for k in range(1, max_word_length + 1))
    if total > word_budget:
        raise BudgetExceededError(
            f"overlap scan needs {total} words, budget is {word_budget}")
    first_seen: dict[tuple[Fraction, Fraction], Word] = {}
    pairs: list[tuple[Word, Word]] = []
    for n in range(1, max_word_length + 1):
        for word in itertools.product(range(1, system.m + 1), repeat=n):
            f = compose(system, word)
            key = (f.ratio, f.offset)
            if key in first_seen:
                pairs.append((first_seen[key], word))
            else:
                first_seen[key] = word
    return pairs


def min_word_separation(system: Rifs, n: int) -> Fraction | None:
    """Minimal distance between inverse branches of equal contraction at
    level n.

    Over all pairs of distinct words of length n whose composed maps have
    equal ratio, take the distance between the inverse images of 0; return
    the minimum, or None when no two words share a ratio (an empty
    minimum, read as +infinity).  A value of 0 at level n is exactly an
    exact overlap at that length.
    """
    if n < 1:
        raise DomainError("word length must be >= 1")
    groups: dict[Fraction, list[Fraction]] = {}
    for word in itertools.product(range(1, system.m + 1), repeat=n):
        f = compose(system, word)
        # inverse image of 0 under the composed map
        groups.setdefault(f.ratio, []).append(-f.offset / f.ratio)
    best: Fraction | None = None
    for values in groups.values():
        if len(values) < 2:
            continue
        values.sort()
        for a, b in zip(values, values[1:]):
            gap = b - a
            if best is None or gap < best:
                best = gap
    return best


def has_incongruent_offsets(system: Rifs) -> bool:
    """True when all maps share one integer ratio and the integer offsets
    are pairwise incongruent modulo that ratio.

    Systems of this form keep distinct words separated at every level, so
    each point of any orbit has finitely many producing words.
    """
    r = system.maps[0].ratio
    if any(m.ratio != r for m in system.maps):
        return False
    if r.denominator != 1:
        return False
    if any(m.offset.denominator != 1 for m in system.maps):
        return False
    mod = abs(r.numerator)
    residues = {m.offset.numerator % mod for m in system.maps}
    return len(residues) == len(system.maps)


@dataclass(frozen=True)
class SystemProfile:
    """Summary diagnostics for one system, as assembled by the CLI."""

    degenerate_at: Fraction | None
    similarity_dimension: float
    similarity_residual: float
    exact_overlap_witness: tuple[Word, Word] | None
    separation_table: tuple[tuple[int, Fraction | None], ...] = field(default=())

    @property
    def separation_rates(self) -> tuple[tuple[int, float | None], ...]:
        """-log(separation)/n per level; None where the level had no
        equal-ratio pair or collapsed to 0."""
        out = []
        for n, sep in self.separation_table:
            if sep is None or sep == 0:
                out.append((n, None))
            else:
                out.append((n, -math.log(float(sep)) / n))
        return tuple(out)
