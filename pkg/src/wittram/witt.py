"""p-typical Witt vectors of finite length.

Coordinates are stored in the order ``(x_0, ..., x_{m-1})`` where ``x_0`` is the
Teichmueller position.  The conventional label of ``x_j`` is ``a_{m-1-j}``, so a
vector written ``(a_{m-1}, ..., a_0)`` has the same tuple layout.  Ghost
components are ``w_k = sum_{j<=k} p^j x_j^(p^(k-j))``.

Addition, negation and multiplication evaluate universal structure polynomials
obtained by ghost recursion.  Those tables are generated once per
``(p, m, kind)`` and cached on disk.

A coefficient ring is any object with ``p``, ``zero()``, ``one()``,
``from_int(n)``, ``add``, ``sub``, ``neg``, ``mul``, ``is_zero`` and
``frobenius`` (the p-th power map); :class:`~wittram.fields.FqField` and
:class:`~wittram.fields.SeriesRing` both qualify.
"""

from __future__ import annotations

import os
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Iterable, Sequence

from .errors import CapError, ParamsMismatch, WittramError
from .fields import check_prime

MAX_M = 5
KINDS = ("add", "neg", "mul", "frobenius")
CACHE_VERSION = "wittram-structure-polys v1"

Poly = dict  # exponent tuple -> integer coefficient


@dataclass(frozen=True)
class WittParams:
    p: int
    m: int

    def __post_init__(self) -> None:
        check_prime(self.p)
        if not 1 <= self.m <= MAX_M:
            raise CapError(f"Witt length m must be in [1, {MAX_M}], got {self.m}")


# ---------------------------------------------------------------------------
# sparse integer polynomials, used only while generating tables
# ---------------------------------------------------------------------------


def _pmul(a: Poly, b: Poly, mod: int) -> Poly:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            out[e] = (out.get(e, 0) + ca * cb) % mod
    return {e: c for e, c in out.items() if c}


def _padd(a: Poly, b: Poly, mod: int, sign: int = 1) -> Poly:
    out = dict(a)
    for e, c in b.items():
        out[e] = (out.get(e, 0) + sign * c) % mod
    return {e: c for e, c in out.items() if c}


def _pscale(a: Poly, k: int, mod: int) -> Poly:
    return {e: (c * k) % mod for e, c in a.items() if (c * k) % mod}


def _ppow(a: Poly, k: int, mod: int, nvars: int) -> Poly:
    result: Poly = {(0,) * nvars: 1 % mod}
    base = a
    while k:
        if k & 1:
            result = _pmul(result, base, mod)
        k >>= 1
        if k:
            base = _pmul(base, base, mod)
    return result


def _var(i: int, nvars: int) -> Poly:
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


def _ghost(xs: Sequence[Poly], k: int, p: int, mod: int, nvars: int) -> Poly:
    """w_k of the polynomial vector ``xs`` modulo ``mod``."""
    out: Poly = {}
    for j in range(k + 1):
        term = _ppow(xs[j], p ** (k - j), mod, nvars)
        out = _padd(out, _pscale(term, p**j, mod), mod)
    return out


@dataclass(frozen=True)
class StructureTable:
    """Structure polynomials for one operation, coefficients reduced mod p.

    ``polys[k]`` is a tuple of ``(coefficient, exponents)`` pairs in sorted
    order; exponents index the input variables (``X_0..`` then ``Y_0..``).
    """

    p: int
    m: int
    kind: str
    nvars: int
    polys: tuple

    def to_text(self) -> str:
        lines = [CACHE_VERSION, f"p {self.p} m {self.m} kind {self.kind} nvars {self.nvars}"]
        for k, poly in enumerate(self.polys):
            lines.append(f"out {k} terms {len(poly)}")
            for c, e in poly:
                lines.append(" ".join([str(c)] + [str(x) for x in e]))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "StructureTable":
        lines = text.splitlines()
        if not lines or lines[0] != CACHE_VERSION:
            raise WittramError("structure polynomial cache has an unknown version header")
        head = lines[1].split()
        p, m, kind, nvars = int(head[1]), int(head[3]), head[5], int(head[7])
        polys = []
        i = 2
        for k in range(m):
            tag = lines[i].split()
            if tag[0] != "out" or int(tag[1]) != k:
                raise WittramError("malformed structure polynomial cache")
            count = int(tag[3])
            terms = []
            for line in lines[i + 1 : i + 1 + count]:
                vals = [int(v) for v in line.split()]
                terms.append((vals[0], tuple(vals[1:])))
            polys.append(tuple(terms))
            i += 1 + count
        return cls(p, m, kind, nvars, tuple(polys))


def generate_structure_polys(params: WittParams, kind: str) -> StructureTable:
    """Run the ghost recursion for ``kind`` and return the table mod p.

    Working modulo p^(k+1) at step k suffices: if S_j is known mod p then
    p^j S_j^(p^(k-j)) is known mod p^(k+1).
    """
    if kind not in KINDS:
        raise ValueError(f"unknown operation kind {kind!r}")
    p, m = params.p, params.m
    if kind in ("add", "mul"):
        nvars = 2 * m
        X = [_var(i, nvars) for i in range(m)]
        Y = [_var(m + i, nvars) for i in range(m)]
    elif kind == "neg":
        nvars = m
        X = [_var(i, nvars) for i in range(m)]
    else:
        nvars = m + 1
        X = [_var(i, nvars) for i in range(m + 1)]

    S: list[Poly] = []
    for k in range(m):
        mod = p ** (k + 1)
        if kind == "add":
            rhs = _padd(_ghost(X, k, p, mod, nvars), _ghost(Y, k, p, mod, nvars), mod)
        elif kind == "mul":
            rhs = _pmul(_ghost(X, k, p, mod, nvars), _ghost(Y, k, p, mod, nvars), mod)
        elif kind == "neg":
            rhs = _pscale(_ghost(X, k, p, mod, nvars), -1, mod)
        else:
            rhs = _ghost(X, k + 1, p, mod, nvars)
        for j in range(k):
            term = _pscale(_ppow(S[j], p ** (k - j), mod, nvars), p**j, mod)
            rhs = _padd(rhs, term, mod, sign=-1)
        pk = p**k
        sk: Poly = {}
        for e, c in rhs.items():
            if c % pk:
                raise WittramError(f"inexact division by p^{k} in {kind} recursion (p={p}, m={m})")
            c //= pk
            if c % p:
                sk[e] = c % p
        S.append(sk)
    polys = tuple(tuple(sorted((c, e) for e, c in s.items())) for s in S)
    return StructureTable(p, m, kind, nvars, polys)


# ---------------------------------------------------------------------------
# table cache
# ---------------------------------------------------------------------------


def cache_dir() -> Path:
    env = os.environ.get("WITTRAM_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "wittram"


def cache_path(p: int, m: int, kind: str, directory: Path | None = None) -> Path:
    return (directory or cache_dir()) / f"witt-{kind}-p{p}-m{m}.txt"


_TABLES: dict[tuple[int, int, str], StructureTable] = {}
_LOCK = threading.Lock()


def load_table(params: WittParams, kind: str, directory: Path | None = None) -> tuple[StructureTable, bool]:
    """Return ``(table, cache_hit)``, generating and writing the file on a miss."""
    path = cache_path(params.p, params.m, kind, directory)
    if path.exists():
        try:
            table = StructureTable.from_text(path.read_text())
            if (table.p, table.m, table.kind) == (params.p, params.m, kind):
                return table, True
        except (WittramError, ValueError, IndexError):
            pass
    table = generate_structure_polys(params, kind)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
        with os.fdopen(fd, "w") as fh:
            fh.write(table.to_text())
        os.replace(tmp, path)
    except OSError:
        pass  # an unwritable cache only costs regeneration
    return table, False


def get_table(p: int, m: int, kind: str) -> StructureTable:
    key = (p, m, kind)
    table = _TABLES.get(key)
    if table is None:
        with _LOCK:
            table = _TABLES.get(key)
            if table is None:
                table, _ = load_table(WittParams(p, m), kind)
                _TABLES[key] = table
    return table


def evaluate_table(table: StructureTable, ring: Any, inputs: Sequence[Any]) -> list:
    """Evaluate each output polynomial at ``inputs`` over ``ring``."""
    powers: list[dict[int, Any]] = [{0: ring.one(), 1: x} for x in inputs]

    def power(i: int, k: int):
        cache = powers[i]
        if k not in cache:
            half = power(i, k // 2)
            val = ring.mul(half, half)
            if k % 2:
                val = ring.mul(val, inputs[i])
            cache[k] = val
        return cache[k]

    zero_inputs = {i for i, x in enumerate(inputs) if ring.is_zero(x)}
    # exact zeros kill a monomial outright; zeros with finite precision still bound its precision
    exact = {i for i in zero_inputs if getattr(inputs[i], "prec", None) is None}
    out = []
    for poly in _with_supports(table):
        acc = ring.zero()
        for c, e, support in poly:
            if zero_inputs and not zero_inputs.isdisjoint(support):
                # the monomial vanishes identically, but may still carry precision
                if exact.isdisjoint(support):
                    mono = _monomial(ring, power, e)
                    acc = ring.add(acc, mono)
                continue
            mono = _monomial(ring, power, e)
            if c != 1:
                mono = ring.mul(ring.from_int(c), mono)
            acc = ring.add(acc, mono)
        out.append(acc)
    return out


_SUPPORTS: dict[int, tuple] = {}


def _with_supports(table: StructureTable) -> tuple:
    """The table's terms as (c, exponents, variables used), computed once per table."""
    key = id(table)
    hit = _SUPPORTS.get(key)
    if hit is None or hit[0] is not table:
        polys = tuple(tuple((c, e, tuple(i for i, k in enumerate(e) if k)) for c, e in poly)
                      for poly in table.polys)
        hit = (table, polys)
        _SUPPORTS[key] = hit
    return hit[1]


def _monomial(ring, power, e):
    mono = None
    for i, k in enumerate(e):
        if k:
            t = power(i, k)
            mono = t if mono is None else ring.mul(mono, t)
    return ring.one() if mono is None else mono


# ---------------------------------------------------------------------------
# Witt vectors
# ---------------------------------------------------------------------------


class WittVector:
    """An element of W_m(A) for a coefficient ring A of characteristic p."""

    __slots__ = ("ring", "p", "coords")

    def __init__(self, ring: Any, coords: Iterable[Any], p: int | None = None):
        self.ring = ring
        self.p = ring.p if p is None else p
        self.coords = tuple(coords)
        if len(self.coords) > MAX_M + 1:
            raise CapError(f"Witt length {len(self.coords)} exceeds the supported maximum")

    @property
    def m(self) -> int:
        return len(self.coords)

    @property
    def params(self) -> WittParams:
        return WittParams(self.p, self.m)

    def a(self, i: int):
        """The coordinate labelled a_i in ``(a_{m-1}, ..., a_0)``."""
        return self.coords[self.m - 1 - i]

    # -- constructors --------------------------------------------------------
    @classmethod
    def zero(cls, ring: Any, m: int) -> "WittVector":
        return cls(ring, [ring.zero()] * m)

    @classmethod
    def one(cls, ring: Any, m: int) -> "WittVector":
        return teichmuller(ring.one(), m, ring)

    # -- arithmetic --------------------------------------------------------------
    def _check(self, other: "WittVector") -> None:
        if not isinstance(other, WittVector):
            raise TypeError("expected a WittVector")
        if self.m != other.m or self.p != other.p or self.ring != other.ring:
            raise ParamsMismatch(
                f"Witt vectors over different rings or lengths ({self.m} vs {other.m})")

    def __add__(self, other: "WittVector") -> "WittVector":
        self._check(other)
        if self.m == 0:
            return self
        table = get_table(self.p, self.m, "add")
        return WittVector(self.ring, evaluate_table(table, self.ring, self.coords + other.coords), self.p)

    def __neg__(self) -> "WittVector":
        if self.m == 0:
            return self
        if self.p != 2:
            # for odd p, -(x_i) is again a Witt vector with ghost components -w_k
            return WittVector(self.ring, [self.ring.neg(x) for x in self.coords], self.p)
        table = get_table(self.p, self.m, "neg")
        return WittVector(self.ring, evaluate_table(table, self.ring, self.coords), self.p)

    def __sub__(self, other: "WittVector") -> "WittVector":
        return self + (-other)

    def __mul__(self, other) -> "WittVector":
        if isinstance(other, int):
            return self.int_mul(other)
        self._check(other)
        if self.m == 0:
            return self
        table = get_table(self.p, self.m, "mul")
        return WittVector(self.ring, evaluate_table(table, self.ring, self.coords + other.coords), self.p)

    def __rmul__(self, other) -> "WittVector":
        if isinstance(other, int):
            return self.int_mul(other)
        return NotImplemented

    def int_mul(self, n: int) -> "WittVector":
        """n * self by double-and-add (n may be negative)."""
        if n < 0:
            return (-self).int_mul(-n)
        result = WittVector.zero(self.ring, self.m)
        base = self
        while n:
            if n & 1:
                result = result + base
            n >>= 1
            if n:
                base = base + base
        return result

    def __pow__(self, k: int) -> "WittVector":
        if k < 0:
            raise ValueError("negative powers of Witt vectors are not supported")
        result = WittVector.one(self.ring, self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(x) for x in self.coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WittVector):
            return NotImplemented
        return self.p == other.p and self.ring == other.ring and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.p, self.coords))

    def __repr__(self) -> str:
        fmt = getattr(self.ring, "format", str)
        return "(" + ", ".join(fmt(x) for x in self.coords) + ")"

    # -- operators ------------------------------------------------------------
    def restriction(self) -> "WittVector":
        """R: W_m -> W_{m-1}, dropping the last coordinate a_0."""
        return WittVector(self.ring, self.coords[:-1], self.p)

    def verschiebung(self) -> "WittVector":
        """V: W_m -> W_{m+1}, shifting coordinates away from the Teichmueller slot."""
        return WittVector(self.ring, (self.ring.zero(),) + self.coords, self.p)

    def frobenius_endo(self) -> "WittVector":
        """The ring Frobenius of W_m(A): coordinatewise p-th power in characteristic p."""
        return WittVector(self.ring, [self.ring.frobenius(x) for x in self.coords], self.p)

    def frobenius_down(self) -> "WittVector":
        """F: W_{m+1} -> W_m, the restriction of the ring Frobenius."""
        return self.frobenius_endo().restriction()

    def frobenius_down_table(self) -> "WittVector":
        """F evaluated through the universal Frobenius polynomials (cross-check only)."""
        table = get_table(self.p, self.m - 1, "frobenius")
        return WittVector(self.ring, evaluate_table(table, self.ring, self.coords), self.p)

    def map_coords(self, fn) -> "WittVector":
        return WittVector(self.ring, [fn(x) for x in self.coords], self.p)


def teichmuller(x: Any, m: int, ring: Any) -> WittVector:
    """[x]_m = (x, 0, ..., 0)."""
    return WittVector(ring, [x] + [ring.zero()] * (m - 1))


# ---------------------------------------------------------------------------
# ghost-component oracle over integer lifts
# ---------------------------------------------------------------------------


class IntTruncPolyRing:
    """Z[t]/(t^N) with elements tuples of Python ints; exact, torsion free."""

    def __init__(self, N: int, p: int):
        self.N = N
        self.p = p

    def zero(self):
        return (0,) * self.N

    def one(self):
        return (1,) + (0,) * (self.N - 1)

    def from_int(self, n: int):
        return (n,) + (0,) * (self.N - 1)

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a):
        return tuple(-x for x in a)

    def mul(self, a, b):
        N = self.N
        out = [0] * N
        for i, x in enumerate(a):
            if x:
                for j in range(N - i):
                    if b[j]:
                        out[i + j] += x * b[j]
        return tuple(out)

    def scale(self, a, k: int):
        return tuple(k * x for x in a)

    def pow(self, a, k: int):
        result = self.one()
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            k >>= 1
            if k:
                base = self.mul(base, base)
        return result

    def exact_div(self, a, k: int):
        if any(x % k for x in a):
            raise WittramError("ghost vector does not come from an integral Witt vector")
        return tuple(x // k for x in a)

    def is_zero(self, a) -> bool:
        return not any(a)


def ghost_components(coords: Sequence, p: int, ring: IntTruncPolyRing) -> list:
    """w_k = sum_{j<=k} p^j x_j^(p^(k-j))."""
    out = []
    for k in range(len(coords)):
        acc = ring.zero()
        for j in range(k + 1):
            acc = ring.add(acc, ring.scale(ring.pow(coords[j], p ** (k - j)), p**j))
        out.append(acc)
    return out


def coords_from_ghost(ghost: Sequence, p: int, ring: IntTruncPolyRing) -> list:
    """Invert the ghost map by exact division (fails loudly if not integral)."""
    xs: list = []
    for k, w in enumerate(ghost):
        acc = w
        for j in range(k):
            acc = ring.sub(acc, ring.scale(ring.pow(xs[j], p ** (k - j)), p**j))
        xs.append(ring.exact_div(acc, p**k))
    return xs
