"""Closed-form codimension bounds for the bad loci, and their aggregation.

Two families of strata are tracked: conditions tested at a point off the
ramification divisor and conditions tested at a point on it.  The final
lower bound subtracts M from the minimum of the first list and M - 1
from the minimum of the second, then takes the smaller number.  The
closed form xi(M) = (M-9)(M-8)/2 + 12 is kept as a separate function so
the aggregation can be cross-checked against it independently.

Known edge case: at M = 10 the aggregation yields 12 (via the on-ram
entry (M-5)(M-4)/2 + 6 = 21 minus 9) while xi(10) = 13.  The mismatch is
reported, never patched over.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb


class StrataError(ValueError):
    pass


def xi(M: int) -> int:
    """The quadratic lower-bound function (M-9)(M-8)/2 + 12."""
    if M < 9:
        raise StrataError(f"xi is defined for M >= 9, got {M}")
    return (M - 9) * (M - 8) // 2 + 12


# condition name -> closed form, split by point location
_OFF_RAM = {
    "R0.1": lambda M: comb(M + 1, 2),
    "R0.2": lambda M: comb(M + 2, 2),
    "R2.1": lambda M: (M - 4) * (M - 3) // 2 + 5,
}

_ON_RAM = {
    "R0.1": lambda M: comb(M + 1, 2),
    "R0.2": lambda M: comb(M + 2, 2),
    "R1.2": lambda M: comb(M, 2),
    "R2.2": lambda M: (M - 4) * (M - 3) // 2 + 4,
    "R2.3": lambda M: (M - 5) * (M - 4) // 2 + 6,
    "R2^2-reducible-quadric": lambda M: comb(M + 2, 2),
    "R2^2-square-pencil": lambda M: (M + 4) * (M + 1) // 2 - 1,
    "R2^2-rank-pencil": lambda M: (M - 9) * (M - 6) // 2 + 20,
    "R2^2-cone": lambda M: (M - 8) * (M - 5) // 2 + 17,
}


def regular_prefix_bound(M: int, d: int) -> int:
    """Codimension bound for failure of regularity first at prefix length d."""
    if d < 2:
        raise StrataError("prefix bounds start at d = 2")
    return comb(M + 1, d)


@dataclass(frozen=True)
class CodimTable:
    M: int
    off_ram: dict
    on_ram: dict
    r0_prefix: dict  # d -> binom(M+1, d), 2 <= d <= M-1 (all admissible m)
    bound_a: int
    bound_b: int
    theorem2: int
    xi: int

    @property
    def matches_xi(self) -> bool:
        return self.theorem2 == self.xi

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "off_ram": dict(self.off_ram),
            "on_ram": dict(self.on_ram),
            "r0_prefix": {str(d): v for d, v in self.r0_prefix.items()},
            "bound_a": self.bound_a,
            "bound_b": self.bound_b,
            "theorem2": self.theorem2,
            "xi": self.xi,
            "matches_xi": self.matches_xi,
        }


def condition_codims(M: int) -> CodimTable:
    """All per-condition codimension bounds for the given M, plus aggregates."""
    if M < 10:
        raise StrataError(f"the bounds assume M >= 10, got {M}")
    off = {name: f(M) for name, f in _OFF_RAM.items()}
    on = {name: f(M) for name, f in _ON_RAM.items()}
    prefix = {d: regular_prefix_bound(M, d) for d in range(2, M)}
    bound_a = min(off.values()) - M
    bound_b = min(on.values()) - (M - 1)
    return CodimTable(
        M=M,
        off_ram=off,
        on_ram=on,
        r0_prefix=prefix,
        bound_a=bound_a,
        bound_b=bound_b,
        theorem2=min(bound_a, bound_b),
        xi=xi(M),
    )


def theorem2_bound(M: int) -> int:
    """Aggregated lower bound: min(off-ram min - M, on-ram min - (M-1))."""
    return condition_codims(M).theorem2


@dataclass(frozen=True)
class CrossCheckRow:
    M: int
    theorem2: int
    xi: int

    @property
    def equal(self) -> bool:
        return self.theorem2 == self.xi


def cross_check(m_lo: int, m_hi: int) -> list[CrossCheckRow]:
    """Compare the aggregated bound against xi(M) for every M in the range."""
    if not 10 <= m_lo <= m_hi:
        raise StrataError("need 10 <= M_lo <= M_hi")
    return [CrossCheckRow(M, theorem2_bound(M), xi(M)) for M in range(m_lo, m_hi + 1)]
