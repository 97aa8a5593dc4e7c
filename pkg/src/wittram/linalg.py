"""Finite abelian p-group linear algebra on windows.

An ambient group is ``A = (+)_j Z/p^(r_j)``.  It embeds into ``(Z/p^M)^D`` by
scaling coordinate j by ``p^(M - r_j)``, and every subgroup computation below
runs there with a full-pivot Smith elimination in numpy int64.  When every
``r_j`` is 1 this is ordinary F_p linear algebra and "length" is dimension.
In general a subgroup's length is ``log_p`` of its order.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

MAX_WINDOW = 20000


def _valuations(B: np.ndarray, p: int, M: int) -> np.ndarray:
    """Entrywise p-adic valuation of entries mod p^M (zero entries get M)."""
    nz = B != 0
    v = np.where(nz, 0, M).astype(np.int64)
    for t in range(1, M):
        v += nz & (B % (p**t) == 0)
    return v


def matmul_mod(A: np.ndarray, B: np.ndarray, N: int) -> np.ndarray:
    """A @ B mod N without int64 overflow."""
    A = np.asarray(A, dtype=np.int64) % N
    B = np.asarray(B, dtype=np.int64) % N
    inner = A.shape[1] if A.ndim == 2 else len(A)
    if (N - 1) ** 2 * max(inner, 1) < 2**62:
        return (A @ B) % N
    return ((A.astype(object) @ B.astype(object)) % N).astype(np.int64)


def smith(A: np.ndarray, p: int, M: int, track: bool = False):
    """Full-pivot elimination of the rows of ``A`` over Z/p^M.

    Returns ``(pivots, U, UA)`` where ``pivots`` lists the valuations t_i of the
    diagonal entries found, ``U`` is the invertible row transform (``None``
    unless ``track``) and ``UA = U @ A`` has its first ``len(pivots)`` rows
    generating the row span and the remaining rows zero.
    """
    N = p**M
    if N > 3_000_000_000:
        raise OverflowError("modulus too large for int64 elimination")
    B = np.array(A, dtype=np.int64) % N
    k, D = B.shape
    U = np.eye(k, dtype=np.int64) if track else None
    cols = np.arange(D)
    pivots: list[int] = []
    work = B.copy()  # column-permuted copy used to locate pivots
    r = 0
    while r < k and r < D:
        sub = work[r:, r:]
        if not sub.any():
            break
        vals = _valuations(sub, p, M)
        i, j = np.unravel_index(np.argmin(vals), vals.shape)
        t = int(vals[i, j])
        i += r
        j += r
        if i != r:
            work[[r, i]] = work[[i, r]]
            B[[r, i]] = B[[i, r]]
            if track:
                U[[r, i]] = U[[i, r]]
        if j != r:
            work[:, [r, j]] = work[:, [j, r]]
            cols[[r, j]] = cols[[j, r]]
        pk = p**t
        unit = int(work[r, r]) // pk
        uinv = pow(unit, -1, N)
        work[r] = (work[r] * uinv) % N
        B[r] = (B[r] * uinv) % N
        if track:
            U[r] = (U[r] * uinv) % N
        below = work[r + 1 :, r] // pk
        if below.any():
            work[r + 1 :] = (work[r + 1 :] - np.outer(below, work[r])) % N
            B[r + 1 :] = (B[r + 1 :] - np.outer(below, B[r])) % N
            if track:
                U[r + 1 :] = (U[r + 1 :] - np.outer(below, U[r])) % N
        pivots.append(t)
        r += 1
    return pivots, U, B


@dataclass
class Ambient:
    """The group (+)_j Z/p^(r_j) with a global exponent bound M >= max r_j."""

    p: int
    exps: tuple[int, ...]
    M: int = 0

    def __post_init__(self) -> None:
        self.exps = tuple(self.exps)
        if not self.M:
            self.M = max(self.exps, default=1)
        if len(self.exps) > MAX_WINDOW:
            raise OverflowError(f"window of {len(self.exps)} slots exceeds the configured limit")
        self.scale = np.array([self.p ** (self.M - r) for r in self.exps], dtype=np.int64)

    @property
    def D(self) -> int:
        return len(self.exps)

    @property
    def N(self) -> int:
        return self.p**self.M

    def embed(self, rows) -> np.ndarray:
        """Coordinates (reduced mod p^(r_j)) to the scaled Z/p^M model."""
        R = np.array(rows, dtype=np.int64)
        if self.D == 0:
            return np.zeros((len(R) if R.ndim > 1 else 0, 0), dtype=np.int64)
        R = R.reshape(-1, self.D)
        return (R * self.scale) % self.N

    def unembed(self, rows: np.ndarray) -> np.ndarray:
        return (rows // self.scale) % (self.p ** np.array(self.exps, dtype=np.int64))

    def length(self) -> int:
        return sum(self.exps)

    def full(self) -> "Subgroup":
        if self.D == 0:
            return self.zero()
        return Subgroup(self, self.embed(np.eye(self.D, dtype=np.int64)))

    def zero(self) -> "Subgroup":
        return Subgroup(self, np.zeros((0, self.D), dtype=np.int64))


@dataclass
class Subgroup:
    """A subgroup of ``ambient`` given by generator rows in embedded coordinates."""

    ambient: Ambient
    gens: np.ndarray
    _reduced: tuple | None = field(default=None, repr=False)

    @classmethod
    def from_coords(cls, ambient: Ambient, rows) -> "Subgroup":
        return cls(ambient, ambient.embed(rows) if len(rows) else np.zeros((0, ambient.D), dtype=np.int64))

    def _reduce(self):
        if self._reduced is None:
            a = self.ambient
            if len(self.gens) == 0:
                self._reduced = ([], np.zeros((0, a.D), dtype=np.int64))
            else:
                piv, _, UA = smith(self.gens, a.p, a.M)
                self._reduced = (piv, UA[: len(piv)])
        return self._reduced

    def length(self) -> int:
        """log_p of the order."""
        piv, _ = self._reduce()
        return sum(self.ambient.M - t for t in piv)

    dim = length

    def basis(self) -> np.ndarray:
        return self._reduce()[1]

    def __add__(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.ambient, np.vstack([self.basis(), other.basis()]))

    def contains(self, rows) -> bool:
        extra = np.array(rows, dtype=np.int64).reshape(-1, self.ambient.D)
        return Subgroup(self.ambient, np.vstack([self.basis(), extra])).length() == self.length()

    def contains_subgroup(self, other: "Subgroup") -> bool:
        return (self + other).length() == self.length()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Subgroup):
            return NotImplemented
        return self.contains_subgroup(other) and other.contains_subgroup(self)

    def intersect(self, other: "Subgroup") -> "Subgroup":
        A, B = self.basis(), other.basis()
        if len(A) == 0 or len(B) == 0:
            return self.ambient.zero()
        ker = kernel_rows(np.vstack([A, -B]), self.ambient.p, self.ambient.M)
        if len(ker) == 0:
            return self.ambient.zero()
        return Subgroup(self.ambient, matmul_mod(ker[:, : len(A)], A, self.ambient.N))

    def map(self, images_of_gens: np.ndarray, target: Ambient) -> "Subgroup":
        return Subgroup(target, images_of_gens)


def kernel_rows(A: np.ndarray, p: int, M: int) -> np.ndarray:
    """Generators of {a in (Z/p^M)^k : a A = 0}."""
    A = np.asarray(A, dtype=np.int64)
    k = A.shape[0]
    if k == 0:
        return np.zeros((0, 0), dtype=np.int64)
    piv, U, _ = smith(A, p, M, track=True)
    N = p**M
    rows = [(U[i] * p ** (M - t)) % N for i, t in enumerate(piv) if t > 0]
    rows.extend(U[len(piv) :])
    if not rows:
        return np.zeros((0, k), dtype=np.int64)
    out = np.array(rows, dtype=np.int64) % N
    return out[out.any(axis=1)] if len(out) else out


class LinearMap:
    """A homomorphism between ambients, presented by the images of slot generators.

    ``matrix[j]`` is the image of the j-th unit vector of the source (in
    source coordinates) written in embedded target coordinates.  The images of
    arbitrary elements are computed by linearity on the source coordinates.
    """

    def __init__(self, source: Ambient, target: Ambient, matrix: np.ndarray):
        self.source = source
        self.target = target
        self.matrix = np.asarray(matrix, dtype=np.int64).reshape(source.D, target.D) % target.N
        if source.M != target.M:
            raise ValueError("source and target must share the exponent bound M")

    def apply_embedded(self, rows: np.ndarray) -> np.ndarray:
        """Image of embedded source rows.

        A source coordinate x_j (mod p^r_j) appears embedded as p^(M-r_j) x_j,
        so the unembedded value is recovered before multiplying.
        """
        coords = self.source.unembed(np.asarray(rows, dtype=np.int64).reshape(-1, self.source.D))
        return matmul_mod(coords, self.matrix, self.target.N)

    def image(self, sub: Subgroup | None = None) -> Subgroup:
        if sub is None:
            sub = self.source.full()
        gens = sub.basis()
        if len(gens) == 0:
            return self.target.zero()
        return Subgroup(self.target, self.apply_embedded(gens))

    def kernel(self, sub: Subgroup | None = None) -> Subgroup:
        if sub is None:
            sub = self.source.full()
        gens = sub.basis()
        if len(gens) == 0:
            return self.source.zero()
        imgs = self.apply_embedded(gens)
        ker = kernel_rows(imgs, self.source.p, self.source.M)
        if len(ker) == 0:
            return self.source.zero()
        return Subgroup(self.source, matmul_mod(ker, gens, self.source.N))

    def preimage(self, target_sub: Subgroup, sub: Subgroup | None = None) -> Subgroup:
        """{x in sub : f(x) in target_sub}."""
        if sub is None:
            sub = self.source.full()
        gens = sub.basis()
        if len(gens) == 0:
            return self.source.zero()
        imgs = self.apply_embedded(gens)
        tb = target_sub.basis()
        stacked = np.vstack([imgs, -tb]) if len(tb) else imgs
        ker = kernel_rows(stacked, self.source.p, self.source.M)
        if len(ker) == 0:
            return self.source.zero()
        return Subgroup(self.source, matmul_mod(ker[:, : len(gens)], gens, self.source.N))


class FpQuotientSpace:
    """The quotient ``num / (num cap den)`` of two subgroups of one ambient."""

    def __init__(self, num: Subgroup, den: Subgroup):
        self.num = num
        self.den = den

    @property
    def dim(self) -> int:
        return (self.num + self.den).length() - self.den.length()

    def is_zero_class(self, rows) -> bool:
        return self.den.contains(rows)

    def contains(self, rows) -> bool:
        return (self.num + self.den).contains(rows)


def span_length(ambient: Ambient, rows: Sequence) -> int:
    return Subgroup.from_coords(ambient, rows).length()
