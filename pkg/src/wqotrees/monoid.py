"""Finite monoids as Cayley tables, and alphabet morphisms into them.

Elements are dense indices ``0..size-1``. ``table[x][y]`` is the product
``x*y`` with ``x`` as the left factor.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Optional, Sequence

ASSOC_CHECK_CAP = 64


class MonoidError(ValueError):
    """A table that is not a monoid, or a bad element/symbol."""


@dataclass(frozen=True)
class FiniteMonoid:
    size: int
    identity: int
    table: tuple
    names: Optional[tuple] = None
    check_cap: int = field(default=ASSOC_CHECK_CAP, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(tuple(row) for row in self.table))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(self.names))
        validate(self)

    def mul(self, x: int, y: int) -> int:
        return self.table[x][y]

    def elements(self) -> range:
        return range(self.size)

    def name(self, x: int) -> str:
        if self.names is not None:
            return self.names[x]
        return str(x)

    def index(self, name) -> int:
        """Resolve an element given by index or by name."""
        if isinstance(name, int) and not isinstance(name, bool):
            self._check(name)
            return name
        if self.names is not None and name in self.names:
            return self.names.index(name)
        raise MonoidError(f"unknown monoid element {name!r}")

    def _check(self, x) -> None:
        if not isinstance(x, int) or not 0 <= x < self.size:
            raise MonoidError(f"element {x!r} out of range 0..{self.size - 1}")

    def to_json(self) -> dict:
        out = {"size": self.size, "identity": self.identity,
               "table": [list(r) for r in self.table]}
        if self.names is not None:
            out["names"] = list(self.names)
        return out

    @classmethod
    def from_json(cls, data: dict) -> "FiniteMonoid":
        return cls(int(data["size"]), int(data["identity"]), data["table"],
                   data.get("names"))

    @classmethod
    def from_function(cls, size, identity, op, names=None) -> "FiniteMonoid":
        table = [[op(x, y) for y in range(size)] for x in range(size)]
        return cls(size, identity, table, names)


def validate(m: FiniteMonoid) -> None:
    """Raise :class:`MonoidError` on the first violated monoid axiom."""
    n = m.size
    if n < 1:
        raise MonoidError("monoid must have at least one element")
    if len(m.table) != n or any(len(row) != n for row in m.table):
        raise MonoidError(f"table must be {n}x{n}")
    for x, row in enumerate(m.table):
        for y, v in enumerate(row):
            if not isinstance(v, int) or not 0 <= v < n:
                raise MonoidError(f"table[{x}][{y}] = {v!r} is not an element")
    if not isinstance(m.identity, int) or not 0 <= m.identity < n:
        raise MonoidError(f"identity {m.identity!r} is not an element")
    if m.names is not None and len(m.names) != n:
        raise MonoidError("names must list one name per element")
    e = m.identity
    for x in range(n):
        if m.table[e][x] != x:
            raise MonoidError(f"identity law fails: 1*{x} = {m.table[e][x]}")
        if m.table[x][e] != x:
            raise MonoidError(f"identity law fails: {x}*1 = {m.table[x][e]}")
    if n > m.check_cap:
        raise MonoidError(f"size {n} exceeds associativity check cap {m.check_cap}")
    t = m.table
    for x in range(n):
        tx = t[x]
        for y in range(n):
            xy = tx[y]
            ty = t[y]
            for z in range(n):
                if t[xy][z] != tx[ty[z]]:
                    raise MonoidError(
                        f"associativity fails on ({x}, {y}, {z}): "
                        f"({x}*{y})*{z} = {t[xy][z]} but {x}*({y}*{z}) = {tx[ty[z]]}")


def product(m: FiniteMonoid, xs: Iterable[int]) -> int:
    """Left fold of the table starting at the identity."""
    t = m.table
    acc = m.identity
    for x in xs:
        m._check(x)
        acc = t[acc][x]
    return acc


def is_idempotent(m: FiniteMonoid, e: int) -> bool:
    m._check(e)
    return m.table[e][e] == e


def idempotents(m: FiniteMonoid) -> list:
    return [e for e in m.elements() if m.table[e][e] == e]


@dataclass(frozen=True)
class Morphism:
    """Map from a finite alphabet into a monoid, extended to words."""

    alphabet: tuple
    image: tuple
    codomain: FiniteMonoid

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "image", tuple(self.image))
        if len(self.alphabet) != len(self.image):
            raise MonoidError("alphabet and image differ in length")
        if len(set(self.alphabet)) != len(self.alphabet):
            raise MonoidError("duplicate symbol in alphabet")
        for a, x in zip(self.alphabet, self.image):
            if not isinstance(x, int) or not 0 <= x < self.codomain.size:
                raise MonoidError(f"symbol {a!r} maps to invalid element {x!r}")

    def symbol(self, a) -> int:
        try:
            return self.image[self.alphabet.index(a)]
        except ValueError:
            raise MonoidError(f"unknown symbol {a!r}") from None

    def to_json(self) -> dict:
        return {"alphabet": list(self.alphabet), "image": list(self.image)}

    @classmethod
    def from_json(cls, data: dict, monoid: FiniteMonoid) -> "Morphism":
        return cls(data["alphabet"], [int(x) for x in data["image"]], monoid)


def apply_morphism(mu: Morphism, word: Sequence) -> int:
    """Image of a word. A plain string is read one character per symbol."""
    return product(mu.codomain, (mu.symbol(a) for a in word))


# Small monoids used throughout tests, scripts and the corpus.

def trivial_monoid() -> FiniteMonoid:
    return FiniteMonoid(1, 0, [[0]], ["1"])


def cyclic_group(n: int) -> FiniteMonoid:
    names = ["1"] + [f"g{i}" if i > 1 else "g" for i in range(1, n)]
    return FiniteMonoid.from_function(n, 0, lambda x, y: (x + y) % n, names)


def absorbing_monoid() -> FiniteMonoid:
    """{1, a} with a*a = a."""
    return FiniteMonoid(2, 0, [[0, 1], [1, 1]], ["1", "a"])


def left_zero_monoid(k: int) -> FiniteMonoid:
    """Identity plus ``k`` left zeros: x*y = x for x != 1."""
    names = ["1"] + [chr(ord("a") + i) for i in range(k)]
    return FiniteMonoid.from_function(k + 1, 0, lambda x, y: y if x == 0 else x, names)


def capped_counter(cap: int) -> FiniteMonoid:
    """Naturals under addition, saturated at ``cap``."""
    names = [f"c{i}" for i in range(cap + 1)]
    return FiniteMonoid.from_function(cap + 1, 0, lambda x, y: min(cap, x + y), names)


def direct_product(a: FiniteMonoid, b: FiniteMonoid) -> FiniteMonoid:
    n = a.size * b.size

    def op(x, y):
        return a.table[x // b.size][y // b.size] * b.size + b.table[x % b.size][y % b.size]

    names = [f"({a.name(i)},{b.name(j)})" for i in range(a.size) for j in range(b.size)]
    return FiniteMonoid.from_function(n, a.identity * b.size + b.identity, op, names)


def transformation_monoid(gens: Sequence[Sequence[int]], degree: int) -> FiniteMonoid:
    """Monoid generated by maps on ``range(degree)``, composed left to right.

    Elements are ordered by discovery, starting with the identity map.
    """
    ident = tuple(range(degree))
    elems = [ident]
    seen = {ident: 0}
    frontier = [ident]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for f in frontier:
            for g in gens:
                h = tuple(g[f[i]] for i in range(degree))
                if h not in seen:
                    seen[h] = len(elems)
                    elems.append(h)
                    nxt.append(h)
        frontier = nxt

    def op(x, y):
        f, g = elems[x], elems[y]
        return seen[tuple(g[f[i]] for i in range(degree))]

    return FiniteMonoid.from_function(len(elems), 0, op)
