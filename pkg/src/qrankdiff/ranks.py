"""Overpartition enumeration and rank statistics.

This module is the combinatorial ground truth: nothing here touches the
Lambert-series code except :func:`rank_diff_series` with ``source="analytic"``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .pseries import QSeries

DEFAULT_CAP = 40


class CapExceeded(ValueError):
    """Enumeration requested beyond the configured size cap."""


@dataclass(frozen=True)
class Overpartition:
    """Parts as ``(value, overlined)`` pairs, nonincreasing by value.

    Within a value the overlined copy (if any) comes first.
    """

    parts: tuple[tuple[int, bool], ...] = ()

    def __post_init__(self):
        seen_bar = set()
        prev = None
        for v, bar in self.parts:
            if v < 1:
                raise ValueError(f"parts must be positive, got {v}")
            if prev is not None and v > prev:
                raise ValueError("parts must be nonincreasing")
            if bar:
                if v in seen_bar:
                    raise ValueError(f"part {v} overlined more than once")
                seen_bar.add(v)
            prev = v

    @property
    def weight(self) -> int:
        return sum(v for v, _ in self.parts)

    @property
    def largest(self) -> int:
        return self.parts[0][0] if self.parts else 0

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        if not self.parts:
            return "()"
        return " + ".join(f"{v}̅" if bar else str(v) for v, bar in self.parts)


def enumerate_overpartitions(n: int, cap: int = DEFAULT_CAP) -> list[Overpartition]:
    """All overpartitions of n, each exactly once."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > cap:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap}")
    return [Overpartition(p) for p in _generate(n, n)]


def _generate(n: int, largest: int) -> Iterator[tuple]:
    # choose the multiplicity of the biggest value v <= largest, then recurse below v
    if n == 0:
        yield ()
        return
    for v in range(min(n, largest), 0, -1):
        for k in range(n // v, 0, -1):
            for rest in _generate(n - k * v, v - 1):
                plain = ((v, False),) * k
                yield ((v, True),) + plain[1:] + rest
                yield plain + rest


def m2_rank(lam: Overpartition) -> int:
    """``ceil(l/2) - #parts + #(odd non-overlined parts) - chi``."""
    if not lam.parts:
        return 0
    big = lam.largest
    odd_plain = sum(1 for v, bar in lam.parts if v % 2 and not bar)
    # chi: largest part is odd and has no overlined copy
    chi = 1 if big % 2 and not lam.parts[0][1] else 0
    return (big + 1) // 2 - len(lam) + odd_plain - chi


def dyson_rank(lam: Overpartition) -> int:
    """Largest part minus number of parts."""
    return lam.largest - len(lam)


RANKS = {"m2": m2_rank, "dyson": dyson_rank}


def _rank_fn(kind: str):
    try:
        return RANKS[kind]
    except KeyError:
        raise ValueError(f"unknown rank kind {kind!r}; expected one of {sorted(RANKS)}") from None


@dataclass
class RankTable:
    """``counts[(s, n)]`` = number of overpartitions of n with rank = s mod ``modulus``."""

    modulus: int
    max_n: int
    counts: dict[tuple[int, int], int] = field(default_factory=dict)
    kind: str = "m2"

    def row(self, n: int) -> list[int]:
        return [self.counts.get((s, n), 0) for s in range(self.modulus)]

    def total(self, n: int) -> int:
        return sum(self.row(n))


def count_table(kind: str, ell: int, max_n: int, cap: int = DEFAULT_CAP) -> RankTable:
    """Residue counts by enumeration; the n = 0 row is zero by convention."""
    rank = _rank_fn(kind)
    if max_n > cap:
        raise CapExceeded(f"max_n={max_n} exceeds enumeration cap {cap}")
    table = RankTable(ell, max_n, kind=kind)
    for s in range(ell):
        table.counts[(s, 0)] = 0
    for n in range(1, max_n + 1):
        row = [0] * ell
        for lam in _generate(n, n):
            row[rank(Overpartition(lam)) % ell] += 1
        for s in range(ell):
            table.counts[(s, n)] = row[s]
    return table


def rank_counts(kind: str, n: int, cap: int = DEFAULT_CAP) -> dict[int, int]:
    """Histogram rank -> number of overpartitions of n (enumeration)."""
    rank = _rank_fn(kind)
    hist: dict[int, int] = {}
    for lam in enumerate_overpartitions(n, cap):
        r = rank(lam)
        hist[r] = hist.get(r, 0) + 1
    return hist


def tally_table(kind: str, ell: int, max_n: int) -> RankTable:
    """Residue counts from generating products, without listing overpartitions.

    Overpartitions are grouped by largest part L.  Parts below L contribute
    ``prod (1 + z^w q^j) / (1 - z^w' q^j)`` where the z-weights record each
    part's contribution to the rank; the largest part is placed separately
    so that its overline/chi status and the ``L``-dependent term are exact.
    Polynomials in z are reduced modulo ``z^ell - 1``.
    """
    _rank_fn(kind)
    N = max_n + 1
    # pool[n][r]: overpartitions of n using parts < L, rank contribution r mod ell
    pool = [[0] * ell for _ in range(N)]
    pool[0][0] = 1
    rows = [[0] * ell for _ in range(N)]

    def add_shifted(src, dst, offset, w):
        for m in range(N - offset):
            s_row = src[m]
            d_row = dst[m + offset]
            for r in range(ell):
                c = s_row[r]
                if c:
                    d_row[(r + w) % ell] += c

    for L in range(1, N):
        if kind == "dyson":
            w_bar, w_plain, head, chi = -1, -1, L, 0
        else:
            w_bar, w_plain = -1, (0 if L % 2 else -1)
            head, chi = (L + 1) // 2, L % 2
        for k in range(1, (N - 1) // L + 1):
            # L as the largest part, k copies, all plain (chi applies) or first overlined
            add_shifted(pool, rows, k * L, head + k * w_plain - chi)
            add_shifted(pool, rows, k * L, head + w_bar + (k - 1) * w_plain)
        grown = [row[:] for row in pool]
        for k in range(1, (N - 1) // L + 1):
            add_shifted(pool, grown, k * L, k * w_plain)
            add_shifted(pool, grown, k * L, w_bar + (k - 1) * w_plain)
        pool = grown
    table = RankTable(ell, max_n, kind=kind)
    for n in range(N):
        for s in range(ell):
            table.counts[(s, n)] = rows[n][s] if n else 0
    return table


SOURCES = ("enumeration", "analytic", "tally")


def residue_series(kind: str, ell: int, s: int, N: int, source: str = "analytic") -> QSeries:
    """``sum_n Nbar(s, ell, n) q^n`` to order N."""
    if source == "analytic" and kind == "m2":
        from .lambert import gf_m2_residue

        return gf_m2_residue(s, ell, N)
    if source == "enumeration":
        table = count_table(kind, ell, N - 1)
    elif source in ("tally", "analytic"):
        table = tally_table(kind, ell, N - 1)
    else:
        raise ValueError(f"unknown source {source!r}")
    return QSeries([table.counts[(s, n)] for n in range(N)], 0, N)


def rank_diff_series(kind: str, ell: int, s: int, t: int, d: int, N: int,
                     source: str = "analytic") -> QSeries:
    """``sum_n (Nbar(s, ell, ell n + d) - Nbar(t, ell, ell n + d)) q^n`` to order N."""
    if not (0 <= s < ell and 0 <= t < ell and 0 <= d < ell):
        raise ValueError("need 0 <= s, t, d < ell")
    M = ell * (N - 1) + d + 1
    diff = residue_series(kind, ell, s, M, source) - residue_series(kind, ell, t, M, source)
    return diff.extract_progression(ell, d)
