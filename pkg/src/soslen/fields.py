"""Rings of integers of the supported field shapes.

A Field carries a verified integral basis of the maximal order: candidate
generators (q0 + q1 sqrt(m) + q2 sqrt(n) + q3 sqrt(c))/k for k in {1, 2, 4}
are tested for an integer characteristic polynomial, the module they span
is brought to a canonical triangular basis, and the result is checked
against the discriminant predicted by the conductor-discriminant formula.
A matching discriminant certifies maximality, so the construction cannot
silently return a smaller order.
"""

from __future__ import annotations

import itertools
import re
from functools import lru_cache
from math import gcd

from .radicals import (
    Embedding,
    InvalidRadicandError,
    Radical,
    Rat,
    Shape,
)

EMBEDDING_TABLE_BITS = 96


class NotIntegralError(ValueError):
    """The element is not in the ring of integers."""


def parse_descriptor(text: str) -> Shape:
    """Parse "Q", "Q(sqrt N)" or "Q(sqrt M, sqrt N)"; whitespace is free."""
    compact = re.sub(r"\s+", "", text)
    if compact == "Q":
        return Shape(())
    m = re.fullmatch(r"Q\(sqrt(\d+)\)", compact)
    if m:
        return Shape((int(m.group(1)),))
    m = re.fullmatch(r"Q\(sqrt(\d+),sqrt(\d+)\)", compact)
    if m:
        return Shape((int(m.group(1)), int(m.group(2))))
    raise InvalidRadicandError(f"cannot parse field descriptor {text!r}")


def format_descriptor(shape: Shape) -> str:
    return str(shape)


def _quadratic_disc(n: int) -> int:
    return n if n % 4 == 1 else 4 * n


def expected_discriminant(shape: Shape) -> int:
    if not shape.radicands:
        return 1
    if len(shape.radicands) == 1:
        return _quadratic_disc(shape.radicands[0])
    disc = 1
    for r in shape.basis_radicands[1:]:
        disc *= _quadratic_disc(r)
    return disc


def characteristic_polynomial(x: Radical) -> list[Rat]:
    """Coefficients of prod over embeddings of (X - sigma(x)), constant first."""
    shape = x.shape
    coeffs = [Radical.one(shape)]
    for emb in shape.embeddings:
        root = x.conjugate(emb)
        nxt = [Radical.zero(shape) for _ in range(len(coeffs) + 1)]
        for i, c in enumerate(coeffs):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - c * root
        coeffs = nxt
    out = []
    for c in coeffs:
        assert c.is_rational()
        out.append(c.coords[0])
    return out


def is_algebraic_integer(x: Radical) -> bool:
    return all(c.denominator == 1 for c in characteristic_polynomial(x))


def _echelon_basis(rows: list[list[int]], dim: int) -> list[list[int]]:
    """Canonical lower-triangular basis of the lattice spanned by rows.

    Row k of the result has its last nonzero entry at column k, a positive
    pivot, and entries below each earlier pivot reduced into [0, pivot).
    """
    pool = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = [[] for _ in range(dim)]
    for col in range(dim - 1, -1, -1):
        active = [r for r in pool if r[col] != 0]
        pool = [r for r in pool if r[col] == 0]
        if not active:
            raise ValueError("generators do not span a full-rank lattice")
        while len(active) > 1:
            active.sort(key=lambda r: abs(r[col]))
            p = active[0]
            survivors = [p]
            for r in active[1:]:
                q = r[col] // p[col]
                reduced = [a - q * b for a, b in zip(r, p)]
                if reduced[col] != 0:
                    survivors.append(reduced)
                elif any(reduced):
                    pool.append(reduced)
            if len(survivors) == 1:
                break
            active = survivors
        pivot = active[0]
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        basis[col] = pivot
    for i in range(dim):
        for j in range(i - 1, -1, -1):
            q = basis[i][j] // basis[j][j]
            if q:
                basis[i] = [a - q * b for a, b in zip(basis[i], basis[j])]
    return basis


def _invert_matrix(m: list[list[Rat]]) -> list[list[Rat]]:
    n = len(m)
    aug = [[Rat(v) for v in row] + [Rat(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Rat(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [v - f * p for v, p in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


class Field:
    """A ring of integers with its integral basis and real embeddings."""

    def __init__(self, shape: Shape) -> None:
        self.shape = shape
        self.degree = shape.degree
        self.embeddings: tuple[Embedding, ...] = shape.embeddings
        self.integral_basis: tuple[Radical, ...] = self._build_basis()
        self._prepare_membership()
        self._prepare_arithmetic()
        self.discriminant = self._trace_form_determinant()
        expected = expected_discriminant(shape)
        if self.discriminant != expected:
            raise AssertionError(
                f"basis discriminant {self.discriminant} differs from the "
                f"predicted {expected} for {shape}"
            )
        self._prepare_embedding_tables()
        self._column_cache: dict = {}

    # construction ------------------------------------------------------

    def _candidate_generators(self) -> list[Radical]:
        shape = self.shape
        d = self.degree
        seeds = [Radical.one(shape)]
        for idx in range(len(shape.radicands)):
            seeds.append(Radical.sqrt_generator(shape, idx))
        if d == 4:
            third = [Rat(0)] * 4
            third[3] = Rat(1)
            seeds.append(Radical(shape, tuple(third)))
        out = list(seeds)
        for k in (2, 4):
            for residues in itertools.product(range(k), repeat=d):
                if all(r == 0 for r in residues):
                    continue
                x = Radical(shape, tuple(Rat(r, k) for r in residues))
                if is_algebraic_integer(x):
                    out.append(x)
        return out

    def _build_basis(self) -> tuple[Radical, ...]:
        d = self.degree
        scale = {1: 1, 2: 2, 4: 4}[d]
        rows = []
        for x in self._candidate_generators():
            row = [q * scale for q in x.coords]
            assert all(v.denominator == 1 for v in row)
            rows.append([v.numerator for v in row])
        basis_rows = _echelon_basis(rows, d)
        basis = tuple(
            Radical(self.shape, tuple(Rat(v, scale) for v in row)) for row in basis_rows
        )
        assert basis[0] == Radical.one(self.shape), "1 must generate the rational part"
        for b in basis:
            assert is_algebraic_integer(b)
        return basis

    def _prepare_membership(self) -> None:
        m = [[Rat(q) for q in b.coords] for b in self.integral_basis]
        inv = _invert_matrix(m)
        den = 1
        for row in inv:
            for v in row:
                den = den * v.denominator // gcd(den, v.denominator)
        self._minv_den = den
        self._minv_int = [[int(v * den) for v in row] for row in inv]

    def _prepare_arithmetic(self) -> None:
        d = self.degree
        tensor: list[list[tuple[int, ...]]] = []
        for i in range(d):
            row = []
            for j in range(d):
                prod = self.integral_basis[i] * self.integral_basis[j]
                coords = self.coords_of(prod)
                if coords is None:
                    raise AssertionError("integral basis is not closed under products")
                row.append(coords)
            tensor.append(row)
        self._mul_tensor = tuple(tuple(r) for r in tensor)
        traces = []
        for b in self.integral_basis:
            t = b.trace()
            assert t.denominator == 1
            traces.append(t.numerator)
        self._basis_traces = tuple(traces)

    def _trace_form_determinant(self) -> int:
        d = self.degree
        gram = [[0] * d for _ in range(d)]
        for i in range(d):
            for j in range(d):
                t = (self.integral_basis[i] * self.integral_basis[j]).trace()
                assert t.denominator == 1
                gram[i][j] = t.numerator
        return _int_determinant(gram)

    def _prepare_embedding_tables(self) -> None:
        lo_tab = []
        hi_tab = []
        for emb in self.embeddings:
            lo_row = []
            hi_row = []
            for b in self.integral_basis:
                iv = b.interval(emb, EMBEDDING_TABLE_BITS)
                shift = iv.exp - EMBEDDING_TABLE_BITS
                assert shift >= 0
                lo_row.append(iv.lo_num >> shift)
                hi_row.append(-((-iv.hi_num) >> shift))
            lo_tab.append(tuple(lo_row))
            hi_tab.append(tuple(hi_row))
        self._emb_lo = tuple(lo_tab)
        self._emb_hi = tuple(hi_tab)

    # conversions ---------------------------------------------------------

    def coords_of(self, x: Radical) -> tuple[int, ...] | None:
        """Integral-basis coordinates of x, or None when x is not integral."""
        if x.shape != self.shape:
            raise ValueError("element shape does not match the field")
        den = 1
        for q in x.coords:
            den = den * q.denominator // gcd(den, q.denominator)
        u = [int(q * den) for q in x.coords]
        return self.coords_of_scaled(u, den)

    def coords_of_scaled(self, u: list[int] | tuple[int, ...], scale: int) -> tuple[int, ...] | None:
        """Coordinates of the element with radical coordinates u/scale."""
        d = self.degree
        minv = self._minv_int
        div = self._minv_den * scale
        out = []
        for i in range(d):
            s = 0
            for j in range(d):
                s += u[j] * minv[j][i]
            q, r = divmod(s, div)
            if r:
                return None
            out.append(q)
        return tuple(out)

    def element(self, x: Radical) -> OElement:
        coords = self.coords_of(x)
        if coords is None:
            raise NotIntegralError(f"{x} is not integral in {self.shape}")
        return OElement(self, coords)

    def element_from_coords(self, coords: tuple[int, ...]) -> OElement:
        return OElement(self, tuple(int(c) for c in coords))

    def radical_of_coords(self, coords: tuple[int, ...]) -> Radical:
        out = Radical.zero(self.shape)
        for c, b in zip(coords, self.integral_basis):
            if c:
                out = out + b.scale(c)
        return out

    def zero(self) -> OElement:
        return OElement(self, (0,) * self.degree)

    def one(self) -> OElement:
        return OElement(self, (1,) + (0,) * (self.degree - 1))

    # coordinate arithmetic (hot paths stay on plain int tuples) -----------

    def mul_coords(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        d = self.degree
        tensor = self._mul_tensor
        out = [0] * d
        for i in range(d):
            ai = a[i]
            if not ai:
                continue
            row = tensor[i]
            for j in range(d):
                bj = b[j]
                if not bj:
                    continue
                f = ai * bj
                t = row[j]
                for k in range(d):
                    if t[k]:
                        out[k] += f * t[k]
        return tuple(out)

    def trace_of_coords(self, coords: tuple[int, ...]) -> int:
        return sum(c * t for c, t in zip(coords, self._basis_traces))

    def interval_of_coords(
        self, coords: tuple[int, ...], emb_index: int
    ) -> tuple[int, int]:
        """Integer enclosure of the embedding value, scaled by 2^table bits."""
        lo_row = self._emb_lo[emb_index]
        hi_row = self._emb_hi[emb_index]
        lo = hi = 0
        for c, l, h in zip(coords, lo_row, hi_row):
            if c > 0:
                lo += c * l
                hi += c * h
            elif c < 0:
                lo += c * h
                hi += c * l
        return lo, hi

    def sign_of_coords(self, coords: tuple[int, ...], emb_index: int) -> int:
        """Exact sign of an integral element at the indexed embedding."""
        if not any(coords):
            return 0
        lo, hi = self.interval_of_coords(coords, emb_index)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        return self.radical_of_coords(coords).sign_at(self.embeddings[emb_index])

    def coords_totally_nonneg(self, coords: tuple[int, ...]) -> bool:
        return all(
            self.sign_of_coords(coords, e) >= 0 for e in range(len(self.embeddings))
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Field):
            return NotImplemented
        return self.shape == other.shape

    def __hash__(self) -> int:
        return hash(self.shape)

    def __repr__(self) -> str:
        return f"Field({self.shape})"


def _int_determinant(m: list[list[int]]) -> int:
    n = len(m)
    if n == 1:
        return m[0][0]
    det = 0
    for j in range(n):
        if m[0][j] == 0:
            continue
        minor = [row[:j] + row[j + 1 :] for row in m[1:]]
        det += (-1) ** j * m[0][j] * _int_determinant(minor)
    return det


@lru_cache(maxsize=None)
def make_field(shape: Shape) -> Field:
    return Field(shape)


def field_from_descriptor(text: str) -> Field:
    return make_field(parse_descriptor(text))


class OElement:
    """An algebraic integer as integer coordinates over the integral basis."""

    __slots__ = ("field", "coords")

    def __init__(self, field: Field, coords: tuple[int, ...]) -> None:
        if len(coords) != field.degree:
            raise ValueError("coordinate count must equal the field degree")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coords", tuple(coords))

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError("OElement values are immutable")

    def _check(self, other: OElement) -> None:
        if self.field != other.field:
            raise ValueError("operands must live in the same field")

    def __add__(self, other: OElement) -> OElement:
        self._check(other)
        return OElement(self.field, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: OElement) -> OElement:
        self._check(other)
        return OElement(self.field, tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> OElement:
        return OElement(self.field, tuple(-a for a in self.coords))

    def __mul__(self, other: OElement) -> OElement:
        self._check(other)
        return OElement(self.field, self.field.mul_coords(self.coords, other.coords))

    def square(self) -> OElement:
        return OElement(self.field, self.field.mul_coords(self.coords, self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def trace(self) -> int:
        return self.field.trace_of_coords(self.coords)

    def to_radical(self) -> Radical:
        return self.field.radical_of_coords(self.coords)

    def sign_at_index(self, emb_index: int) -> int:
        return self.field.sign_of_coords(self.coords, emb_index)

    def is_totally_nonnegative(self) -> bool:
        return self.field.coords_totally_nonneg(self.coords)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OElement):
            return NotImplemented
        return self.field == other.field and self.coords == other.coords

    def __hash__(self) -> int:
        return hash((self.field.shape.radicands, self.coords))

    def __str__(self) -> str:
        return str(self.to_radical())

    def __repr__(self) -> str:
        return f"OElement({self.field.shape}, {self.coords})"
