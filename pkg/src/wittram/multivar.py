"""Level-one filtered de Rham complex of F_q[[x_1..x_d]] with log poles along x_1...x_r.

A form is a finite sum of terms c x^a dlog x_J dx_K with c in F_q, J a subset
of the log variables {1..r}, K a subset of {r+1..d}, exponents a_i in Z for
i <= r and a_i >= 0 for i > r.  Internally every term is stored by its
*weight* w = a + 1_K and the index set S = J u K, since dx_i = x_i dlog x_i:
the term is then c x^w dlog x_S, and dlog x_i with i > r may only appear when
w_i >= 1.

Everything here is graded by the weight.  In weight w the de Rham complex is
the exterior algebra on the allowed dlog x_i, with differential the wedge by
sum_i w_i dlog x_i (mod p).  The Cartier operator lowers the weight from p u
to u and takes p-th roots of coefficients; it kills closed forms of weight
prime to p, which are exact.  As a consequence every verifier below works on
finite sets of weights, split along the chains {u, p u, p^2 u, ...}.

The ring truncation bound B applies to the weights: -B <= w_i < B for the log
variables and 0 <= w_i < B for the others.  Operations that leave this box
raise WindowOverflow; ``m_wedge(..., truncate=True)`` drops terms that leave
it upwards instead, which is the quotient by forms with some x_i-weight >= B.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import CapError, NotInDomain, WindowOverflow
from .fields import FqField, check_prime, get_field
from .filtration import INCONCLUSIVE, VerifierReport, _Checks, _run, op_map
from .linalg import Ambient, Subgroup

Weight = tuple[int, ...]
Slot = tuple[Weight, tuple[int, ...]]

MAX_D = 3
MAX_B = 8


# ---------------------------------------------------------------------------
# the ring
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SncdRing:
    """F_q[[x_1..x_d]] localized at x_1...x_r, truncated to weights below ``B``."""

    p: int
    e: int = 1
    d: int = 1
    r: int = 1
    B: int = 6

    def __post_init__(self) -> None:
        check_prime(self.p)
        if self.e < 1:
            raise CapError("e must be at least 1")
        if not 1 <= self.r <= self.d <= MAX_D:
            raise CapError(f"need 1 <= r <= d <= {MAX_D}, got r={self.r}, d={self.d}")
        if not 2 <= self.B <= MAX_B:
            raise CapError(f"truncation bound B must lie in [2, {MAX_B}], got {self.B}")

    @property
    def field(self) -> FqField:
        return get_field(self.p, self.e)

    def lower(self, i: int) -> int:
        return -self.B if i < self.r else 0

    def in_box(self, w: Weight) -> bool:
        return all(self.lower(i) <= w[i] < self.B for i in range(self.d))

    def allowed(self, w: Weight, S: Iterable[int]) -> bool:
        return all(i < self.r or w[i] >= 1 for i in S)

    def index_sets(self, w: Weight, q: int) -> list[tuple[int, ...]]:
        return [S for S in itertools.combinations(range(self.d), q) if self.allowed(w, S)]

    def weights(self, lo: Sequence[int], hi: Sequence[int]) -> list[Weight]:
        """All weights with lo_i <= w_i < hi_i, clipped to the ring box."""
        ranges = [range(max(lo[i], self.lower(i)), min(hi[i], self.B)) for i in range(self.d)]
        return [tuple(w) for w in itertools.product(*ranges)]


def chain_key(w: Weight, p: int) -> Weight:
    """The weight u with w = p^k u and p not dividing u; 0 is its own chain."""
    if not any(w):
        return w
    while all(x % p == 0 for x in w):
        w = tuple(x // p for x in w)
    return w


def _divisible(w: Weight, p: int) -> bool:
    return all(x % p == 0 for x in w)


def _merge_sign(S: tuple[int, ...], T: tuple[int, ...]) -> int:
    """Sign of sorting the concatenation S + T, or 0 when they overlap."""
    if set(S) & set(T):
        return 0
    inv = sum(1 for s in S for t in T if s > t)
    return -1 if inv % 2 else 1


# ---------------------------------------------------------------------------
# forms
# ---------------------------------------------------------------------------


class MultiForm:
    """A q-form with finitely many terms inside the ring's weight box."""

    __slots__ = ("ring", "q", "terms")

    def __init__(self, ring: SncdRing, q: int, terms: Mapping[Slot, int] | None = None,
                 truncate: bool = False):
        if not 0 <= q <= ring.d:
            raise CapError(f"degree q={q} outside [0, {ring.d}]")
        self.ring = ring
        self.q = q
        fq = ring.field
        clean: dict[Slot, int] = {}
        for (w, S), c in (terms or {}).items():
            w, S = tuple(w), tuple(S)
            if fq.is_zero(c):
                continue
            if len(S) != q or list(S) != sorted(set(S)):
                raise ValueError(f"index set {S} is not a sorted {q}-subset")
            if not ring.allowed(w, S):
                raise ValueError(f"dlog x_i with i > r needs positive x_i-weight, got {w}, {S}")
            if not ring.in_box(w):
                if truncate and all(w[i] >= ring.lower(i) for i in range(ring.d)):
                    continue
                raise WindowOverflow(f"weight {w} leaves the box of bound B={ring.B}")
            clean[(w, S)] = c
        self.terms = clean

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, ring: SncdRing, q: int) -> "MultiForm":
        return cls(ring, q)

    @classmethod
    def monomial(cls, ring: SncdRing, c: int, a: Sequence[int], J: Iterable[int] = (),
                 K: Iterable[int] = ()) -> "MultiForm":
        """c x^a dlog x_J dx_K with 1-based variable indices."""
        J = sorted(j - 1 for j in J)
        K = sorted(k - 1 for k in K)
        if any(not 0 <= j < ring.r for j in J) or any(not ring.r <= k < ring.d for k in K):
            raise ValueError("J must lie in {1..r} and K in {r+1..d}")
        if len(a) != ring.d:
            raise ValueError(f"exponent vector needs {ring.d} entries")
        if any(a[i] < 0 for i in range(ring.r, ring.d)):
            raise ValueError("exponents of non-log variables must be >= 0")
        w = tuple(a[i] + (1 if i in K else 0) for i in range(ring.d))
        return cls(ring, len(J) + len(K), {(w, tuple(J + K)): c})

    @classmethod
    def dlog(cls, ring: SncdRing, i: int) -> "MultiForm":
        """dlog x_i for a log variable i (1-based)."""
        return cls.monomial(ring, 1, [0] * ring.d, J=[i])

    @classmethod
    def coordinate(cls, ring: SncdRing, i: int) -> "MultiForm":
        """The function x_i (1-based)."""
        a = [0] * ring.d
        a[i - 1] = 1
        return cls.monomial(ring, 1, a)

    # views ------------------------------------------------------------------

    @property
    def coefficients(self) -> dict[tuple[Weight, tuple[int, ...], tuple[int, ...]], int]:
        """{(a, J, K): c} with 1-based J and K, realizing c x^a dlog x_J dx_K."""
        out = {}
        r = self.ring.r
        for (w, S), c in self.terms.items():
            J = tuple(i + 1 for i in S if i < r)
            K = tuple(i + 1 for i in S if i >= r)
            a = tuple(w[i] - (1 if i >= r and i in S else 0) for i in range(self.ring.d))
            out[(a, J, K)] = c
        return out

    def weights(self) -> set[Weight]:
        return {w for w, _ in self.terms}

    def is_zero(self) -> bool:
        return not self.terms

    def _same(self, other: "MultiForm") -> None:
        if self.ring != other.ring or self.q != other.q:
            raise ValueError("forms live in different rings or degrees")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiForm):
            return NotImplemented
        return self.ring == other.ring and self.q == other.q and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.ring, self.q, frozenset(self.terms.items())))

    def __add__(self, other: "MultiForm") -> "MultiForm":
        self._same(other)
        fq = self.ring.field
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = fq.add(out.get(k, 0), c)
        return MultiForm(self.ring, self.q, out)

    def __neg__(self) -> "MultiForm":
        fq = self.ring.field
        return MultiForm(self.ring, self.q, {k: fq.neg(c) for k, c in self.terms.items()})

    def __sub__(self, other: "MultiForm") -> "MultiForm":
        return self + (-other)

    def scale(self, c: int) -> "MultiForm":
        fq = self.ring.field
        return MultiForm(self.ring, self.q, {k: fq.mul(c, v) for k, v in self.terms.items()})

    def restrict(self, keep: Callable[[Weight], bool]) -> "MultiForm":
        return MultiForm(self.ring, self.q, {k: c for k, c in self.terms.items() if keep(k[0])})

    def __repr__(self) -> str:
        return f"MultiForm({format_multiform(self)!r})"

    def __str__(self) -> str:
        return format_multiform(self)


def format_multiform(f: MultiForm) -> str:
    if f.is_zero():
        return "0"
    fq, r = f.ring.field, f.ring.r
    parts = []
    for (a, J, K), c in sorted(f.coefficients.items()):
        factors = []
        if c != fq.one():
            factors.append(fq.format(c) if fq.e == 1 else f"({fq.format(c)})")
        for i, ai in enumerate(a):
            if ai == 1:
                factors.append(f"x{i + 1}")
            elif ai:
                factors.append(f"x{i + 1}^{ai}")
        factors.extend(f"dlog(x{j})" for j in J)
        factors.extend(f"dx{k}" for k in K)
        parts.append("*".join(factors) or "1")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------


def m_d(f: MultiForm) -> MultiForm:
    """d(c x^w dlog x_S) = c x^w (sum_i w_i dlog x_i) dlog x_S."""
    ring, fq = f.ring, f.ring.field
    if f.q == ring.d:
        raise CapError(f"d of a top-degree form (q = d = {ring.d}) leaves the complex")
    out: dict[Slot, int] = {}
    for (w, S), c in f.terms.items():
        for i in range(ring.d):
            if i in S or w[i] % ring.p == 0:
                continue
            sign = _merge_sign((i,), S)
            T = tuple(sorted(S + (i,)))
            coeff = fq.mul(fq.from_int(sign * w[i]), c)
            out[(w, T)] = fq.add(out.get((w, T), 0), coeff)
    return MultiForm(ring, f.q + 1, out)


def m_wedge(f: MultiForm, g: MultiForm, truncate: bool = False) -> MultiForm:
    """The wedge product; ``truncate`` drops terms with some weight >= B."""
    if f.ring != g.ring:
        raise ValueError("forms live in different rings")
    ring, fq = f.ring, f.ring.field
    if f.q + g.q > ring.d:
        raise CapError(f"wedge degree {f.q + g.q} exceeds d = {ring.d}")
    out: dict[Slot, int] = {}
    for (w, S), c in f.terms.items():
        for (v, T), b in g.terms.items():
            sign = _merge_sign(S, T)
            if not sign:
                continue
            u = tuple(x + y for x, y in zip(w, v))
            key = (u, tuple(sorted(S + T)))
            out[key] = fq.add(out.get(key, 0), fq.mul(fq.from_int(sign), fq.mul(c, b)))
    return MultiForm(ring, f.q + g.q, out, truncate=truncate)


def m_fil_membership(f: MultiForm, n: Sequence[int]) -> bool:
    """f in fil_n: no term has x_i-exponent below -n_i for a log variable i."""
    if len(n) != f.ring.r:
        raise ValueError(f"filtration index needs r = {f.ring.r} entries")
    return all(w[i] >= -n[i] for w, _ in f.terms for i in range(f.ring.r))


def m_is_closed(f: MultiForm) -> bool:
    return f.q == f.ring.d or m_d(f).is_zero()


def m_cartier_inverse(f: MultiForm) -> MultiForm:
    """C^{-1}(c x^w dlog x_S) = c^p x^{p w} dlog x_S."""
    ring, fq = f.ring, f.ring.field
    out = {(tuple(ring.p * x for x in w), S): fq.frobenius(c) for (w, S), c in f.terms.items()}
    return MultiForm(ring, f.q, out)


def _cartier_part(f: MultiForm) -> MultiForm:
    """C on the weights divisible by p, zero on the others (exact there on Z_1)."""
    ring, fq = f.ring, f.ring.field
    out = {}
    for (w, S), c in f.terms.items():
        if _divisible(w, ring.p):
            out[(tuple(x // ring.p for x in w), S)] = fq.frobenius_inv(c)
    return MultiForm(ring, f.q, out)


def m_cartier(f: MultiForm) -> MultiForm:
    """The Cartier operator on closed forms."""
    if not m_is_closed(f):
        raise NotInDomain("the Cartier operator needs a closed form")
    return _cartier_part(f)


def dlog_unit(ring: SncdRing, c: int, v: Weight, truncate: bool = True) -> MultiForm:
    """dlog(1 + c x^v) = sum_j (-1)^(j-1) c^j x^(j v) sum_i v_i dlog x_i, truncated at B."""
    fq = ring.field
    if not any(v) or any(x < 0 for x in v):
        raise ValueError("need a nonzero weight with nonnegative entries")
    out: dict[Slot, int] = {}
    j = 1
    while all(j * x < ring.B for x in v):
        cj = fq.mul(fq.from_int(-1 if j % 2 == 0 else 1), fq.pow(c, j))
        u = tuple(j * x for x in v)
        for i in range(ring.d):
            if v[i] % ring.p:
                out[(u, (i,))] = fq.add(out.get((u, (i,)), 0), fq.mul(fq.from_int(v[i]), cj))
        j += 1
    return MultiForm(ring, 1, out, truncate=truncate)


# ---------------------------------------------------------------------------
# windows
# ---------------------------------------------------------------------------


class MultiWindow:
    """The q-forms supported on a finite weight set, as an F_p-vector space."""

    def __init__(self, ring: SncdRing, q: int, weights: Iterable[Weight]):
        self.ring, self.q = ring, q
        ws = sorted(set(weights))
        self.weights = ws
        self.slots: list[Slot] = [(w, S) for w in ws for S in ring.index_sets(w, q)] if 0 <= q <= ring.d else []
        self.pos = {s: k for k, s in enumerate(self.slots)}
        self.e = ring.e
        self.ambient = Ambient(ring.p, (1,) * (len(self.slots) * self.e), 1)

    @property
    def D(self) -> int:
        return self.ambient.D

    def embed(self, f: MultiForm) -> np.ndarray:
        out = np.zeros(self.D, dtype=np.int64)
        fq = self.ring.field
        for slot, c in f.terms.items():
            k = self.pos.get(slot)
            if k is None:
                raise ValueError(f"term at weight {slot[0]} lies outside the window")
            out[k * self.e : (k + 1) * self.e] = fq.digits(c)
        return out

    def form(self, row: np.ndarray) -> MultiForm:
        row = np.asarray(row, dtype=np.int64).reshape(-1)
        fq = self.ring.field
        terms = {}
        for k, slot in enumerate(self.slots):
            c = fq.from_digits([int(x) % self.ring.p for x in row[k * self.e : (k + 1) * self.e]])
            if c:
                terms[slot] = c
        return MultiForm(self.ring, self.q, terms)

    def describe(self, row: np.ndarray) -> str:
        return format_multiform(self.form(row))

    def basis(self, pred: Callable[[Weight], bool] | None = None) -> list[MultiForm]:
        fq = self.ring.field
        out = []
        for slot in self.slots:
            if pred is not None and not pred(slot[0]):
                continue
            for t in range(self.e):
                unit = [0] * self.e
                unit[t] = 1
                out.append(MultiForm(self.ring, self.q, {slot: fq.from_digits(unit)}))
        return out

    def span(self, forms: Sequence[MultiForm]) -> Subgroup:
        forms = [f for f in forms if not f.is_zero()]
        if not forms or not self.D:
            return self.ambient.zero()
        return Subgroup(self.ambient, np.array([self.embed(f) for f in forms], dtype=np.int64))

    def where(self, pred: Callable[[Weight], bool]) -> Subgroup:
        return self.span(self.basis(pred))

    def full(self) -> Subgroup:
        return self.ambient.full() if self.D else self.ambient.zero()


def _fil_pred(n: Sequence[int]) -> Callable[[Weight], bool]:
    return lambda w: all(w[i] >= -n[i] for i in range(len(n)))


def _params(ring: SncdRing, **kw) -> dict:
    out = {"p": ring.p, "e": ring.e, "d": ring.d, "r": ring.r}
    out.update({k: list(v) if isinstance(v, tuple) else v for k, v in kw.items()})
    return out


def _keys(weights: Iterable[Weight], p: int, split: bool) -> list[Weight] | None:
    return sorted({chain_key(w, p) for w in weights}) if split else None


def _on_chain(weights: Iterable[Weight], key, p: int) -> list[Weight]:
    return [w for w in weights if key is None or chain_key(w, p) == key]


def _check_n(ring: SncdRing, n: Sequence[int]) -> tuple[int, ...]:
    n = tuple(int(x) for x in n)
    if len(n) != ring.r:
        raise CapError(f"filtration index needs r = {ring.r} entries, got {len(n)}")
    return n


# ---------------------------------------------------------------------------
# relative logarithmic forms
# ---------------------------------------------------------------------------


def rel_log_generators(ring: SncdRing, n: Sequence[int], q: int) -> list[MultiForm]:
    """dlog(1 + c x^w) dlog(u_2)...dlog(u_q) with w >= n on the log variables, truncated at B.

    The u_j run over the log variables x_i and the units 1 + c' x^v.  Every
    relative Milnor symbol is a convergent product of these, so their span is
    the image of the relative logarithmic forms in the truncated window.
    """
    if q == 0:
        return []
    fq = ring.field
    cs = [c for c in fq.elements() if c]
    lo = list(n) + [0] * (ring.d - ring.r)
    rel_w = [w for w in ring.weights(lo, [ring.B] * ring.d) if any(w)]
    units = [MultiForm.dlog(ring, i + 1) for i in range(ring.r)]
    units += [dlog_unit(ring, c, v) for v in ring.weights([0] * ring.d, [ring.B] * ring.d) if any(v) for c in cs]
    units = [u for u in units if not u.is_zero()]
    out = []
    for w in rel_w:
        for c in cs:
            first = dlog_unit(ring, c, w)
            if first.is_zero():
                continue
            prods = [first]
            for _ in range(q - 1):
                prods = [m_wedge(a, u, truncate=True) for a in prods for u in units]
                prods = [a for a in prods if not a.is_zero()]
            out.extend(prods)
    return out


def verify_rel_log_sequence(p: int, e: int, d: int, r: int, n: Sequence[int], q: int,
                            prec: int | None = None, split: bool = True) -> VerifierReport:
    """0 -> Omega_log(X|D_n) -> Z_1 fil_{-n} --(1-C)--> fil_{(-n)/p} -> 0 on a window.

    The source keeps the weights below B = prec and the target the weights
    below ceil(B/p), with the map y -> y - C y (the identity part truncated).
    The forms dropped from the source map onto the forms dropped from the
    target, so the cokernel is the true one and the kernel is the image of
    the relative log forms in the source window.  That image is computed
    independently from Milnor symbols.
    """
    B = 6 if prec is None else prec
    ring = SncdRing(p, e, d, r, B)
    n = _check_n(ring, n)
    if any(x < 1 for x in n):
        raise CapError("the relative log sequence needs n_i >= 1")
    if not 0 <= q <= d:
        raise CapError(f"degree q={q} outside [0, {d}]")
    H = -(-B // p)
    src_w = ring.weights(list(n) + [0] * (d - r), [B] * d)
    tgt_w = ring.weights([-(-x // p) for x in n] + [0] * (d - r), [H] * d)
    params = _params(ring, n=n, q=q, prec=B)
    if not tgt_w or not src_w:
        return VerifierReport("rel-log-sequence", params, INCONCLUSIVE, {}, "window below the filtration index")
    rel = rel_log_generators(ring, n, q)
    tgt_set = set(tgt_w)

    def body(ch: _Checks, key) -> None:
        sw, tw = _on_chain(src_w, key, p), _on_chain(tgt_w, key, p)
        Y, L = MultiWindow(ring, q, sw), MultiWindow(ring, q, tw)
        if q < d:
            Z1 = op_map(Y, MultiWindow(ring, q + 1, sw), m_d).kernel()
        else:
            Z1 = Y.full()
        phi = op_map(Y, L, lambda f: f.restrict(lambda w: w in tgt_set) - _cartier_part(f))
        img, ker = phi.image(Z1), phi.kernel(Z1)
        gens = rel if key is None else [g.restrict(lambda w: chain_key(w, p) == key) for g in rel]
        log = Y.span(gens)
        ch.add("source", Y.ambient.length())
        ch.add("z1", Z1.length())
        ch.add("target", L.ambient.length())
        ch.add("image", img.length())
        ch.add("kernel", ker.length())
        ch.add("rel_log", log.length())
        ch.subset("log forms lie in Z_1", Y, log, Z1)
        ch.subset("(1-C) kills log forms", Y, log, ker)
        ch.subset("kernel is spanned by log forms", Y, ker, log)
        ch.equal("1-C is onto fil_{(-n)/p}", L, img, L.full())

    return _run("rel-log-sequence", params, body, _keys(src_w + tgt_w, p, split))


# ---------------------------------------------------------------------------
# the Z_i / B_i ladder
# ---------------------------------------------------------------------------


def verify_zi_bi_ladder(p: int, e: int, d: int, r: int, i: int, q: int, n: Sequence[int],
                        prec: int | None = None, split: bool = True) -> VerifierReport:
    """The two short exact sequences of the Cartier ladder on fil_n, plus the Cartier isomorphism.

    0 -> Z_{i+1} fil_n -> Z_i fil_n --dC^i--> B_1 fil_{n/p^i} Omega^{q+1} -> 0
    0 -> B_i fil_n -> B_{i+1} fil_n --C^i--> B_1 fil_{n/p^i} Omega^q -> 0

    Z_k and B_k are built twice: as iterated C-preimages inside Z_1, and as
    B_1 + C^{-1}(Z_{k-1}).  The window is a box of weights that C maps into
    itself, so both constructions are exact on it.
    """
    B = 6 if prec is None else prec
    ring = SncdRing(p, e, d, r, B)
    n = _check_n(ring, n)
    if not 1 <= i <= 3:
        raise CapError("ladder step i must lie in [1, 3]")
    if not 0 <= q <= d:
        raise CapError(f"degree q={q} outside [0, {d}]")
    if any(-x < -B for x in n):
        raise CapError(f"filtration index {n} below the window bound -{B}")
    lo = [min(-x, 0) for x in n] + [0] * (d - r)
    box = ring.weights(lo, [B] * d)
    fil = _fil_pred(n)
    pi = p**i
    n_i = tuple(x // pi for x in n)
    fil_i = _fil_pred(n_i)
    box_set = set(box)
    params = _params(ring, i=i, q=q, n=n, prec=B)

    def lifts(k: int) -> Callable[[Weight], bool]:
        return lambda w: tuple(p**k * x for x in w) in box_set

    def body(ch: _Checks, key) -> None:
        ws = _on_chain(box, key, p)
        W = {t: MultiWindow(ring, t, ws) for t in (q - 1, q, q + 1) if 0 <= t <= d}
        Wq = W[q]
        dq = op_map(Wq, W[q + 1], m_d) if q + 1 in W else None
        Z1 = dq.kernel() if dq else Wq.full()
        B1 = op_map(W[q - 1], Wq, m_d).image() if q - 1 in W else Wq.ambient.zero()
        C = op_map(Wq, Wq, _cartier_part)
        Cinv_src = Wq.where(lifts(1))
        Cinv = op_map(Wq, Wq, lambda f: m_cartier_inverse(f.restrict(lifts(1))))

        # route one: iterated preimages; route two: B_1 + C^{-1}(previous)
        Z, Bk = [Wq.full(), Z1], [Wq.ambient.zero(), B1]
        Z2, B2 = [Wq.full(), Z1], [Wq.ambient.zero(), B1]
        for k in range(1, i + 1):
            Z.append(C.preimage(Z[k], Z1))
            Bk.append(C.preimage(Bk[k], Z1))
            Z2.append(B1 + Cinv.image(Z2[k].intersect(Cinv_src)))
            B2.append(B1 + Cinv.image(B2[k].intersect(Cinv_src)))
        for k in range(i + 2):
            ch.equal(f"Z_{k} two constructions agree", Wq, Z[k], Z2[k])
            ch.equal(f"B_{k} two constructions agree", Wq, Bk[k], B2[k])
        ch.subset("B_i in B_{i+1}", Wq, Bk[i], Bk[i + 1])
        ch.subset("B_{i+1} in Z_{i+1}", Wq, Bk[i + 1], Z[i + 1])
        ch.subset("Z_{i+1} in Z_i", Wq, Z[i + 1], Z[i])

        F = Wq.where(fil)
        Zi, Zi1 = Z[i].intersect(F), Z[i + 1].intersect(F)
        Bi, Bi1 = Bk[i].intersect(F), Bk[i + 1].intersect(F)
        tgt = lambda w: fil_i(w) and lifts(i)(w)
        Ci = op_map(Wq, Wq, lambda f: _power(_cartier_part, i)(f))
        ch.add("z_i", Zi.length())
        ch.add("z_i+1", Zi1.length())
        ch.add("b_i", Bi.length())
        ch.add("b_i+1", Bi1.length())

        # first sequence, into B_1 Omega^{q+1}
        if q + 1 in W:
            W1 = W[q + 1]
            B1_up = op_map(Wq, W1, m_d).image().intersect(W1.where(tgt))
            dCi = op_map(Wq, W1, lambda f: m_d(_power(_cartier_part, i)(f)))
            ch.equal("ker dC^i on Z_i fil_n is Z_{i+1} fil_n", Wq, dCi.kernel(Zi), Zi1)
            ch.equal("dC^i maps Z_i fil_n onto B_1 fil_{n/p^i}", W1, dCi.image(Zi), B1_up)
            ch.add("b1_next", B1_up.length())
            ch.truth("first sequence dims", Zi.length() - Zi1.length() == B1_up.length())
        else:
            ch.equal("Z_{i+1} = Z_i in top degree", Wq, Zi, Zi1)

        # second sequence, into B_1 Omega^q
        B1_t = B1.intersect(Wq.where(tgt))
        ch.equal("ker C^i on B_{i+1} fil_n is B_i fil_n", Wq, Ci.kernel(Bi1), Bi)
        ch.equal("C^i maps B_{i+1} fil_n onto B_1 fil_{n/p^i}", Wq, Ci.image(Bi1), B1_t)
        ch.add("b1", B1_t.length())
        ch.truth("second sequence dims", Bi1.length() - Bi.length() == B1_t.length())

        # Cartier isomorphism Omega^q fil_{n/p} -> Z_1 fil_n / B_1 fil_n
        src = Wq.where(lambda w: _fil_pred(tuple(x // p for x in n))(w) and lifts(1)(w))
        im = Cinv.image(src)
        Z1f, B1f = Z1.intersect(F), B1.intersect(F)
        ch.add("h_q", Z1f.length() - B1f.length())
        ch.subset("C^{-1} lands in Z_1 fil_n", Wq, im, Z1f)
        ch.equal("C^{-1} onto Z_1/B_1", Wq, im + B1f, Z1f)
        ch.truth("C^{-1} injective mod B_1", (im + B1f).length() - B1f.length() == src.length())

    return _run("zi-bi-ladder", params, body, _keys(box, p, split))


def _power(fn: Callable, k: int) -> Callable:
    def go(f):
        for _ in range(k):
            f = fn(f)
        return f

    return go


# ---------------------------------------------------------------------------
# Cech injectivity of 1 - C on H^2 with support at the closed point
# ---------------------------------------------------------------------------


def z1_fil_presentation(ring: SncdRing, win: MultiWindow, pred: Callable[[Weight], bool]) -> Subgroup:
    """Z_1 of the forms supported on ``pred`` via the unique presentation.

    Over a perfect field the weight-p u part is closed and the rest of Z_1 is
    exact: sum over p | w of x^w F_0 plus sum over p not dividing w of
    d(x^w F_0^{q-1}).
    """
    q = win.q
    closed = win.where(lambda w: pred(w) and _divisible(w, ring.p))
    if q == 0:
        return closed
    lower = MultiWindow(ring, q - 1, [w for w in win.weights if pred(w) and not _divisible(w, ring.p)])
    exact = op_map(lower, win, m_d).image()
    return closed + exact


def cech_one_minus_c_injectivity(p: int, e: int, n: int, m2: int, q: int, prec: int | None = None,
                                 split: bool = True) -> VerifierReport:
    """Injectivity of (1-C)^* on H^2_m(R, Z_1 fil_{(n,m2)}) -> H^2_m(R, fil_{(n,m2)}), R = F_q[[Y_1, Y_2]].

    H^2_m(R, M) is computed by the Cech complex of the cover {Y_1 != 0},
    {Y_2 != 0}: the cokernel of M_{Y_1} + M_{Y_2} -> M_{Y_1 Y_2}.  The
    localized modules are windowed to weights in [-B, B)^2, a box that C maps
    into itself, so the windowed map is the restriction of the true one.
    """
    B = 6 if prec is None else prec
    ring = SncdRing(p, e, 2, 2, B)
    if n < 0 or m2 < 0:
        raise CapError("need n >= 0 and m >= 0")
    if not 0 <= q <= 2:
        raise CapError(f"degree q={q} outside [0, 2]")
    box = ring.weights([-B, -B], [B, B])
    at_y1 = lambda w: w[1] >= -m2   # inverting Y_1 frees the Y_1-exponent
    at_y2 = lambda w: w[0] >= -n
    params = {"p": p, "e": e, "d": 2, "r": 2, "n": n, "m": m2, "q": q, "prec": B}

    def body(ch: _Checks, key) -> None:
        ws = _on_chain(box, key, p)
        win = MultiWindow(ring, q, ws)
        Z1 = op_map(win, MultiWindow(ring, q + 1, ws), m_d).kernel() if q < 2 else win.full()
        M12, N12 = Z1, win.full()
        M1, M2 = Z1.intersect(win.where(at_y1)), Z1.intersect(win.where(at_y2))
        N1, N2 = win.where(at_y1), win.where(at_y2)
        for name, pred, sub in (("Y1Y2", lambda w: True, M12), ("Y1", at_y1, M1), ("Y2", at_y2, M2)):
            ch.equal(f"Z_1 presentation on M_{name}", win, z1_fil_presentation(ring, win, pred), sub)
        theta1, theta2 = M1 + M2, N1 + N2
        h = op_map(win, win, lambda f: f - _cartier_part(f))
        ch.subset("1-C maps Cech boundaries to boundaries", win, h.image(theta1), theta2)
        pre = h.preimage(theta2, M12)
        ch.add("coker_z1fil", M12.length() - theta1.length())
        ch.add("coker_fil", N12.length() - theta2.length())
        ch.add("kernel", pre.length() - theta1.length())
        ch.subset("(1-C)^* injective", win, pre, theta1)

    return _run("cech-1-c-injectivity", params, body, _keys(box, p, split))
