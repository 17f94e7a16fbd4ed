"""Dirichlet characters modulo q.

A character is stored as an exponent vector on a fixed set of generators
of (Z/qZ)^*.  The group is split with the CRT into prime-power pieces; odd
prime powers are cyclic (smallest primitive root), 4 is generated by -1, and
2^k for k >= 3 is <-1> x <5>.  Pieces are ordered by increasing prime, and
for 2^k the -1 factor comes before the 5 factor.

Every value chi(n) is a root of unity of order dividing the group exponent
L, so chi is fully described by the integer table ``n -> e(n)`` with
chi(n) = exp(2 pi i e(n) / L).  All identity and equality tests go through
these integers; complex values are produced only on demand.

Characters are labelled ``"q.k"`` where k is the position of the exponent
vector in lexicographic order (first generator most significant).  Label
``q.0`` is always the principal character.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

__all__ = [
    "factorize",
    "prime_divisors",
    "euler_phi",
    "divisors",
    "UnitGroup",
    "unit_group",
    "DirichletCharacter",
    "GaussSumValue",
    "enumerate_characters",
    "character",
    "character_from_label",
    "principal_character",
    "primitive_characters",
    "conductor",
    "is_primitive",
    "primitive_inducing",
    "induce",
    "gauss_sum",
    "twisted_gauss_sum",
    "parity_kappa",
]


# ---------------------------------------------------------------------------
# elementary arithmetic


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorisation of ``n`` as ``[(p, e), ...]`` with p increasing."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def euler_phi(n: int) -> int:
    r = n
    for p, _ in factorize(n):
        r = r // p * (p - 1)
    return r


def divisors(n: int) -> list[int]:
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**j for d in ds for j in range(e + 1)]
    return sorted(ds)


def _multiplicative_order(g: int, m: int, group_order: int) -> int:
    order = group_order
    for p, _ in factorize(group_order) if group_order > 1 else []:
        while order % p == 0 and pow(g, order // p, m) == 1:
            order //= p
    return order


def _smallest_generator(m: int) -> int:
    """Smallest primitive root of the cyclic group (Z/mZ)^*, m an odd prime power."""
    phi = euler_phi(m)
    for g in range(2, m):
        if math.gcd(g, m) == 1 and _multiplicative_order(g, m, phi) == phi:
            return g
    raise ValueError(f"(Z/{m}Z)^* is not cyclic")


# ---------------------------------------------------------------------------
# group structure


@dataclass(frozen=True, eq=False)
class UnitGroup:
    """Generators, orders and discrete-log table of (Z/qZ)^*.

    ``dlog[a]`` is the exponent vector of ``a`` on ``generators`` (one row
    per residue 0..q-1); non-units have a row of -1.
    """

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]
    exponent: int
    dlog: np.ndarray = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    def units(self) -> np.ndarray:
        q = self.modulus
        return np.array([a for a in range(q) if math.gcd(a, q) == 1], dtype=np.int64)


def _local_pieces(p: int, e: int):
    """(local generators, orders, log table) for (Z/p^eZ)^*."""
    m = p**e
    if p == 2 and e == 1:
        return [], [], {1: ()}
    if p == 2 and e == 2:
        return [3], [2], {1: (0,), 3: (1,)}
    if p == 2:
        n5 = 2 ** (e - 2)
        table = {}
        x = 1
        for v in range(n5):
            table[x] = (0, v)
            table[(-x) % m] = (1, v)
            x = x * 5 % m
        return [m - 1, 5], [2, n5], table
    g = _smallest_generator(m)
    phi = euler_phi(m)
    table = {}
    x = 1
    for k in range(phi):
        table[x] = (k,)
        x = x * g % m
    return [g], [phi], table


@functools.lru_cache(maxsize=256)
def unit_group(q: int) -> UnitGroup:
    """Structure of (Z/qZ)^* in the canonical generator order."""
    if q < 1:
        raise ValueError("modulus must be a positive integer")
    pieces = []
    for p, e in factorize(q) if q > 1 else []:
        m = p**e
        gens, orders, table = _local_pieces(p, e)
        pieces.append((m, gens, orders, table))

    generators: list[int] = []
    orders: list[int] = []
    for m, gens, ords, _ in pieces:
        rest = q // m
        for g in gens:
            # lift g mod m to a residue that is 1 modulo the other factors
            generators.append(_crt(g, m, 1, rest))
        orders.extend(ords)

    rank = len(orders)
    dlog = np.full((q, max(rank, 1)), -1, dtype=np.int64)
    for a in range(q):
        if math.gcd(a, q) != 1:
            continue
        row: list[int] = []
        for m, _, _, table in pieces:
            row.extend(table[a % m])
        if rank:
            dlog[a, :] = row
    exponent = math.lcm(*orders) if orders else 1
    return UnitGroup(q, tuple(generators), tuple(orders), exponent, dlog)


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    """x with x = r1 mod m1 and x = r2 mod m2, for coprime m1, m2."""
    m = m1 * m2
    if m2 == 1:
        return r1 % m
    return (r1 + m1 * ((r2 - r1) * pow(m1, -1, m2))) % m


# ---------------------------------------------------------------------------
# characters


def _roots_of_unity(k: np.ndarray, order: int) -> np.ndarray:
    """exp(2 pi i k / order), exact on the quarter turns."""
    k = np.asarray(k) % order
    out = np.exp(2j * np.pi * k / order)
    quarter = (4 * k) % order == 0
    if np.any(quarter):
        out[quarter] = np.array([1, 1j, -1, -1j])[(4 * k[quarter]) // order]
    return out


@dataclass(frozen=True)
class DirichletCharacter:
    """Character mod ``modulus`` given by its exponents on the canonical generators."""

    modulus: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        group = unit_group(self.modulus)
        if len(self.exponents) != group.rank:
            raise ValueError(
                f"mod {self.modulus} needs {group.rank} exponents, got {len(self.exponents)}"
            )
        norm = tuple(int(k) % n for k, n in zip(self.exponents, group.orders))
        object.__setattr__(self, "exponents", norm)

    # -- structure -------------------------------------------------------
    @property
    def group(self) -> UnitGroup:
        return unit_group(self.modulus)

    @property
    def value_order(self) -> int:
        """Common order L: every value is an L-th root of unity."""
        return self.group.exponent

    @cached_property
    def index(self) -> int:
        idx = 0
        for k, n in zip(self.exponents, self.group.orders):
            idx = idx * n + k
        return idx

    @property
    def label(self) -> str:
        return f"{self.modulus}.{self.index}"

    @cached_property
    def log_table(self) -> np.ndarray:
        """Integer table e(n) for n = 0..q-1; -1 marks non-units."""
        g = self.group
        q = self.modulus
        if g.rank == 0:
            return np.array([0 if math.gcd(a, q) == 1 else -1 for a in range(q)], dtype=np.int64)
        weights = np.array([k * (g.exponent // n) for k, n in zip(self.exponents, g.orders)], dtype=np.int64)
        tab = (g.dlog @ weights) % g.exponent
        tab[g.dlog[:, 0] < 0] = -1
        tab.setflags(write=False)
        return tab

    @cached_property
    def values(self) -> np.ndarray:
        """Complex values chi(n) for n = 0..q-1."""
        tab = self.log_table
        out = np.zeros(self.modulus, dtype=complex)
        units = tab >= 0
        out[units] = _roots_of_unity(tab[units], self.value_order)
        out.setflags(write=False)
        return out

    def __call__(self, n):
        if isinstance(n, (int, np.integer)):
            return complex(self.values[int(n) % self.modulus])
        return self.values[np.asarray(n) % self.modulus]

    # -- algebra ---------------------------------------------------------
    def conj(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, tuple(-k for k in self.exponents))

    def __mul__(self, other: "DirichletCharacter") -> "DirichletCharacter":
        if not isinstance(other, DirichletCharacter):
            return NotImplemented
        if other.modulus != self.modulus:
            raise ValueError("characters must share a modulus")
        return DirichletCharacter(self.modulus, tuple(a + b for a, b in zip(self.exponents, other.exponents)))

    @property
    def is_principal(self) -> bool:
        return all(k == 0 for k in self.exponents)

    @cached_property
    def order(self) -> int:
        """Order of chi in the character group."""
        return math.lcm(*(n // math.gcd(k, n) for k, n in zip(self.exponents, self.group.orders))) if self.exponents else 1

    @property
    def is_real(self) -> bool:
        return self.order <= 2

    @cached_property
    def conductor(self) -> int:
        return conductor(self)

    @property
    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    @cached_property
    def kappa(self) -> int:
        return parity_kappa(self)

    def __repr__(self) -> str:
        return f"DirichletCharacter({self.label}, exponents={self.exponents})"


@dataclass(frozen=True)
class GaussSumValue:
    value: complex
    character: DirichletCharacter

    def __complex__(self) -> complex:
        return self.value

    def __abs__(self) -> float:
        return abs(self.value)


def character(q: int, index: int) -> DirichletCharacter:
    """Character ``q.index`` of the canonical enumeration."""
    orders = unit_group(q).orders
    total = math.prod(orders)
    if not 0 <= index < total:
        raise ValueError(f"no character {q}.{index}: there are {total} characters mod {q}")
    exps = []
    for n in reversed(orders):
        exps.append(index % n)
        index //= n
    return DirichletCharacter(q, tuple(reversed(exps)))


def character_from_label(label: str) -> DirichletCharacter:
    try:
        q_str, k_str = label.split(".")
        q, k = int(q_str), int(k_str)
    except ValueError:
        raise ValueError(f"bad character label {label!r}; expected 'q.k'") from None
    if q < 1:
        raise ValueError(f"bad modulus in label {label!r}")
    return character(q, k)


def principal_character(q: int) -> DirichletCharacter:
    return DirichletCharacter(q, (0,) * unit_group(q).rank)


def enumerate_characters(q: int) -> list[DirichletCharacter]:
    """All phi(q) characters mod q in canonical order (principal first)."""
    if q < 1:
        raise ValueError("modulus must be a positive integer")
    orders = unit_group(q).orders
    return [DirichletCharacter(q, exps) for exps in itertools.product(*(range(n) for n in orders))]


def primitive_characters(q: int) -> list[DirichletCharacter]:
    return [chi for chi in enumerate_characters(q) if chi.is_primitive]


def conductor(chi: DirichletCharacter) -> int:
    """Smallest d | q such that chi is trivial on units congruent to 1 mod d."""
    q = chi.modulus
    tab = chi.log_table
    units = np.flatnonzero(tab >= 0)
    for d in divisors(q):
        sel = units[units % d == 1 % d]
        if np.all(tab[sel] == 0):
            return d
    return q


def is_primitive(chi: DirichletCharacter) -> bool:
    return chi.is_primitive


def _from_generator_values(target_mod: int, value_at) -> DirichletCharacter:
    """Character mod ``target_mod`` whose value on each canonical generator is
    the root of unity ``exp(2 pi i r)`` with r = value_at(g) as (num, den)."""
    g = unit_group(target_mod)
    exps = []
    for gen, n in zip(g.generators, g.orders):
        num, den = value_at(gen)
        # chi(gen) has order dividing n, so num * n / den is an integer
        k, rem = divmod(num * n, den)
        if rem:
            raise ValueError("generator value has incompatible order")
        exps.append(k % n)
    return DirichletCharacter(target_mod, tuple(exps))


def primitive_inducing(chi: DirichletCharacter) -> DirichletCharacter:
    """The primitive character mod conductor(chi) that induces chi."""
    d = chi.conductor
    q = chi.modulus
    L = chi.value_order

    def value_at(b):
        a = b
        while math.gcd(a, q) != 1:
            a += d
        return int(chi.log_table[a % q]), L

    return _from_generator_values(d, value_at)


def induce(chi: DirichletCharacter, modulus: int) -> DirichletCharacter:
    """The character mod ``modulus`` (a multiple of chi's modulus) induced by chi."""
    if modulus % chi.modulus:
        raise ValueError(f"{modulus} is not a multiple of {chi.modulus}")
    L = chi.value_order
    return _from_generator_values(modulus, lambda a: (int(chi.log_table[a % chi.modulus]), L))


def gauss_sum(chi: DirichletCharacter) -> GaussSumValue:
    """tau(chi) = sum_{a=1}^{q} chi(a) e(a/q)."""
    return GaussSumValue(twisted_gauss_sum(1, chi), chi)


def twisted_gauss_sum(n: int, chi: DirichletCharacter) -> complex:
    """G(n, chi) = sum_{a=1}^{q} chi(a) e(a n / q)."""
    q = chi.modulus
    a = np.arange(1, q + 1)
    vals = chi.values[a % q]
    phases = _roots_of_unity((a * (n % q)) % q, q)
    terms = vals * phases
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def parity_kappa(chi: DirichletCharacter) -> int:
    """0 if chi(-1) = 1, 1 if chi(-1) = -1."""
    e = int(chi.log_table[(chi.modulus - 1) % chi.modulus])
    return 0 if e == 0 else 1
