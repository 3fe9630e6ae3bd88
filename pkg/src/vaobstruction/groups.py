"""Finite abelian groups ``Z/n_1 + ... + Z/n_k`` and finite A-sets.

Elements are tuples of reduced coordinates and are enumerated in
lexicographic order; every table in the package is indexed by the position of
an element in that enumeration.  For a cyclic group an element may also be
given as a bare integer.

>>> A = FiniteAbelianGroup((4, 2))
>>> A.order, A.elements()[:3]
(8, [(0, 0), (0, 1), (1, 0)])
>>> A.double_subgroup().subgroup
[(0, 0), (2, 0)]
>>> Q, proj = A.quotient_group([(0, 0), (2, 0)])
>>> Q.cyclic_orders
(2, 2)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np
import sympy

from .solver import smith_normal_form

__all__ = [
    "FiniteAbelianGroup",
    "DoubleSubgroup",
    "ASet",
    "NotASubgroup",
    "parse_group_spec",
    "format_element",
    "parse_element",
]


class NotASubgroup(ValueError):
    """The given element list is not closed under addition and negation."""


class FiniteAbelianGroup:
    """The group ``Z/n_1 + ... + Z/n_k``.

    Args:
        cyclic_orders: the ``n_t``; each at least 1.  An empty sequence gives
            the trivial group.
    """

    def __init__(self, cyclic_orders: Sequence[int]):
        orders = tuple(int(n) for n in cyclic_orders)
        if any(n < 1 for n in orders):
            raise ValueError(f"cyclic orders must be positive: {orders}")
        self.cyclic_orders = orders or (1,)

    def __repr__(self) -> str:
        return f"FiniteAbelianGroup({self.cyclic_orders})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteAbelianGroup) and self.cyclic_orders == other.cyclic_orders

    def __hash__(self) -> int:
        return hash(self.cyclic_orders)

    @property
    def rank(self) -> int:
        return len(self.cyclic_orders)

    @cached_property
    def order(self) -> int:
        return int(np.prod(self.cyclic_orders))

    @cached_property
    def exponent(self) -> int:
        return int(np.lcm.reduce(self.cyclic_orders))

    @cached_property
    def _elements(self) -> tuple:
        return tuple(product(*(range(n) for n in self.cyclic_orders)))

    def elements(self) -> list[tuple]:
        """Lexicographic enumeration of all elements."""
        return list(self._elements)

    enumerate_elements = elements

    @cached_property
    def _radix(self) -> np.ndarray:
        r = np.ones(self.rank, dtype=np.int64)
        for t in range(self.rank - 2, -1, -1):
            r[t] = r[t + 1] * self.cyclic_orders[t + 1]
        return r

    def normalize(self, x) -> tuple:
        """Reduce an element given as int or tuple of coordinates."""
        if isinstance(x, (int, np.integer)):
            x = (int(x),)
        x = tuple(int(c) for c in x)
        if len(x) != self.rank:
            raise ValueError(f"element {x} does not match group of rank {self.rank}")
        return tuple(c % n for c, n in zip(x, self.cyclic_orders))

    def index(self, x) -> int:
        """Position of ``x`` in :meth:`elements`."""
        return int(np.dot(self.normalize(x), self._radix))

    def element(self, idx: int) -> tuple:
        return self._elements[idx]

    def label(self, idx: int):
        """Element ``idx`` as a bare int for cyclic groups, else a tuple."""
        x = self._elements[idx]
        return x[0] if self.rank == 1 else x

    def add(self, x, y) -> tuple:
        x, y = self.normalize(x), self.normalize(y)
        return tuple((a + b) % n for a, b, n in zip(x, y, self.cyclic_orders))

    def neg(self, x) -> tuple:
        return tuple((-a) % n for a, n in zip(self.normalize(x), self.cyclic_orders))

    def zero(self) -> tuple:
        return (0,) * self.rank

    @cached_property
    def coords(self) -> np.ndarray:
        """``(|A|, rank)`` array of element coordinates."""
        return np.array(self._elements, dtype=np.int64).reshape(self.order, self.rank)

    @cached_property
    def add_table(self) -> np.ndarray:
        """``add_table[a, b]`` is the index of ``element(a) + element(b)``."""
        c = self.coords
        s = (c[:, None, :] + c[None, :, :]) % np.array(self.cyclic_orders)
        return s @ self._radix

    @cached_property
    def neg_table(self) -> np.ndarray:
        c = (-self.coords) % np.array(self.cyclic_orders)
        return c @ self._radix

    def multiple(self, k: int, x) -> tuple:
        return tuple((k * a) % n for a, n in zip(self.normalize(x), self.cyclic_orders))

    # subgroups ---------------------------------------------------------

    def is_subgroup(self, elements: Iterable) -> bool:
        idx = {self.index(x) for x in elements}
        if 0 not in idx:
            return False
        arr = np.array(sorted(idx))
        sums = self.add_table[np.ix_(arr, arr)]
        return set(np.unique(sums).tolist()) <= idx and set(self.neg_table[arr].tolist()) <= idx

    def generated_subgroup(self, gens: Iterable) -> list[tuple]:
        """Subgroup generated by ``gens``, sorted."""
        members = {0}
        frontier = [0]
        gens = [self.index(g) for g in gens]
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = int(self.add_table[a, g])
                    if b not in members:
                        members.add(b)
                        nxt.append(b)
            frontier = nxt
        return [self._elements[i] for i in sorted(members)]

    def double_subgroup(self) -> "DoubleSubgroup":
        """``2A = {a + a}`` together with a transversal of ``A / 2A``."""
        doubled = [self._elements[i] for i in sorted(set(np.diag(self.add_table).tolist()))]
        return DoubleSubgroup(self, doubled, self.cosets(doubled))

    def cosets(self, subgroup: Iterable) -> list[list[tuple]]:
        """Cosets of a subgroup, each sorted, ordered by their least element."""
        sub = sorted({self.index(x) for x in subgroup})
        seen: set[int] = set()
        out = []
        for a in range(self.order):
            if a in seen:
                continue
            coset = sorted(int(self.add_table[a, b]) for b in sub)
            seen.update(coset)
            out.append([self._elements[i] for i in coset])
        return out

    def quotient_group(self, subgroup: Iterable) -> tuple["FiniteAbelianGroup", np.ndarray]:
        """Presentation of ``A / B`` and the projection table.

        The relation lattice (spanned by ``n_t e_t`` and the elements of ``B``)
        is put in Smith normal form; the invariant factors above 1 are the
        cyclic orders of the quotient.

        Returns:
            ``(quotient, proj)`` where ``proj[a]`` is the index in the quotient
            of the image of ``element(a)``.

        Raises:
            NotASubgroup: if ``subgroup`` is not closed.
        """
        sub = [self.normalize(x) for x in subgroup]
        if not self.is_subgroup(sub):
            raise NotASubgroup(f"{sub} is not a subgroup of {self}")
        k = self.rank
        rel = [[n if s == t else 0 for s in range(k)] for t, n in enumerate(self.cyclic_orders)]
        rel += [list(b) for b in sub if any(b)]
        _, diag, V, _ = smith_normal_form(np.array(rel, dtype=object))
        keep = [(col, d) for col, d in enumerate(diag) if d != 1]
        quotient = FiniteAbelianGroup([d for _, d in keep] or [1])
        if not keep:
            return quotient, np.zeros(self.order, dtype=np.int64)
        Vk = np.array([[V[r][col] for col, _ in keep] for r in range(k)], dtype=object)
        img = (self.coords.astype(object) @ Vk) % np.array([d for _, d in keep], dtype=object)
        proj = np.array([quotient.index(tuple(int(c) for c in row)) for row in img], dtype=np.int64)
        return quotient, proj

    def subgroup_presentation(self, subgroup: Iterable) -> tuple["FiniteAbelianGroup", np.ndarray]:
        """An abstract group ``G`` and the embedding table of ``G ~= B`` into ``A``.

        The preimage lattice ``L`` of ``B`` in ``Z^k`` contains ``N`` spanned
        by the ``n_t e_t``; ``B = L / N``.  A lattice basis of ``L`` comes from
        one Smith form, the invariant factors of ``N`` inside ``L`` from a second.

        Returns:
            ``(G, embed)`` with ``embed[g]`` the index in ``A`` of the image of
            ``G.element(g)``.

        Raises:
            NotASubgroup: if ``subgroup`` is not closed.

        >>> G, emb = FiniteAbelianGroup((4, 2)).subgroup_presentation([(0, 0), (2, 0), (0, 1), (2, 1)])
        >>> G.cyclic_orders, sorted(emb.tolist())
        ((2, 2), [0, 1, 4, 5])
        """
        sub = [self.normalize(x) for x in subgroup]
        if not self.is_subgroup(sub):
            raise NotASubgroup(f"{sub} is not a subgroup of {self}")
        k = self.rank
        cols = [list(b) for b in sub if any(b)]
        cols += [[n if s == t else 0 for s in range(k)] for t, n in enumerate(self.cyclic_orders)]
        gens = sympy.Matrix(cols).T
        U, d, _, _ = smith_normal_form(np.array(gens.tolist(), dtype=object))
        basis = sympy.Matrix(U.tolist()).inv() * sympy.diag(*d[:k])
        rel = basis.inv() * sympy.diag(*self.cyclic_orders)
        U2, s, _, _ = smith_normal_form(np.array(rel.tolist(), dtype=object))
        new_basis = basis * sympy.Matrix(U2.tolist()).inv()
        keep = [t for t in range(k) if s[t] != 1]
        G = FiniteAbelianGroup([s[t] for t in keep] or [1])
        if not keep:
            return G, np.zeros(1, dtype=np.int64)
        vecs = np.array([[int(new_basis[r, t]) for t in keep] for r in range(k)], dtype=object)
        img = (G.coords.astype(object) @ vecs.T) % np.array(self.cyclic_orders, dtype=object)
        embed = np.array([self.index(tuple(int(c) for c in row)) for row in img], dtype=np.int64)
        if sorted(embed.tolist()) != sorted(self.index(b) for b in sub):  # pragma: no cover
            raise ArithmeticError("subgroup presentation does not match")
        return G, embed


@dataclass(frozen=True)
class DoubleSubgroup:
    group: FiniteAbelianGroup
    subgroup: list
    cosets: list

    @property
    def transversal(self) -> list:
        return [c[0] for c in self.cosets]


class ASet:
    """A finite set with an action of a finite abelian group.

    Args:
        group: the acting group.
        carrier: labels of the set, in a fixed order.
        action: mapping ``(element, label) -> label``; given as a callable or
            as a dict keyed by ``(element tuple, label)``.
    """

    def __init__(self, group: FiniteAbelianGroup, carrier: Sequence, action):
        self.group = group
        self.carrier = list(carrier)
        pos = {s: k for k, s in enumerate(self.carrier)}
        if len(pos) != len(self.carrier):
            raise ValueError("carrier labels must be distinct")
        table = np.empty((group.order, len(self.carrier)), dtype=np.int64)
        for a, x in enumerate(group.elements()):
            for k, s in enumerate(self.carrier):
                t = action(x, s) if callable(action) else action[(x, s)]
                table[a, k] = pos[t]
        self.table = table
        self._check()

    def _check(self):
        n = len(self.carrier)
        if not np.array_equal(self.table[0], np.arange(n)):
            raise ValueError("the identity must act trivially")
        G = self.group
        lhs = self.table[G.add_table]  # (a, b, s) -> (a+b).s
        rhs = self.table[:, self.table]  # (a, b, s) -> a.(b.s)
        if not np.array_equal(lhs, rhs):
            raise ValueError("action is not compatible with addition")

    @property
    def size(self) -> int:
        return len(self.carrier)

    def act(self, x, s):
        return self.carrier[self.table[self.group.index(x), self.carrier.index(s)]]

    @classmethod
    def regular(cls, group: FiniteAbelianGroup) -> "ASet":
        return cls(group, group.elements(), lambda x, s: group.add(x, s))

    @classmethod
    def trivial(cls, group: FiniteAbelianGroup, carrier: Sequence) -> "ASet":
        return cls(group, carrier, lambda x, s: s)

    @classmethod
    def coset_space(cls, group: FiniteAbelianGroup, subgroup: Iterable, tag=0) -> "ASet":
        """``A / H`` with labels ``(tag, transversal element)``."""
        cosets = group.cosets(subgroup)
        which = {}
        for c, members in enumerate(cosets):
            for x in members:
                which[x] = c
        labels = [(tag, members[0]) for members in cosets]

        def act(x, s):
            return labels[which[group.add(x, s[1])]]

        return cls(group, labels, act)

    @classmethod
    def disjoint_union(cls, parts: Sequence["ASet"]) -> "ASet":
        group = parts[0].group
        carrier = [s for p in parts for s in p.carrier]
        owner = {s: p for p in parts for s in p.carrier}
        return cls(group, carrier, lambda x, s: owner[s].act(x, s))


# ---------------------------------------------------------------------------
# text forms


def parse_group_spec(text: str) -> FiniteAbelianGroup:
    """``"4,2"`` -> ``Z/4 + Z/2``."""
    parts = [p for p in str(text).replace(" ", "").split(",") if p]
    if not parts:
        raise ValueError("empty group specification")
    return FiniteAbelianGroup([int(p) for p in parts])


def format_element(x: tuple) -> str:
    """``(1, 0)`` -> ``"(1,0)"``; rank-one elements print as a bare integer."""
    if len(x) == 1:
        return str(x[0])
    return "(" + ",".join(str(c) for c in x) + ")"


def parse_element(text: str) -> tuple:
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    return tuple(int(c) for c in text.split(",") if c.strip() != "")
