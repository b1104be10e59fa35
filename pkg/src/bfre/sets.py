"""Tagged representation of per-cell solution sets.

Every set this solver manipulates is one of four shapes: empty, a single
point, an unordered pair of points, or a closed interval.  Intersections of
these shapes stay within the family, which is what makes the whole resolution
machinery finite.

All membership and identity tests are tolerance-snapped: values closer than
eps are treated as equal, so endpoint coincidences survive float noise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import tolerance

EMPTY = "empty"
POINT = "point"
PAIR = "pair"
INTERVAL = "interval"


@dataclass(frozen=True, slots=True)
class SetForm:
    """One of: empty set, {lo}, {lo, hi}, or [lo, hi]."""

    kind: str
    lo: float = math.nan
    hi: float = math.nan

    # -- constructors -----------------------------------------------------

    @staticmethod
    def empty() -> "SetForm":
        return _EMPTY

    @staticmethod
    def point(v: float) -> "SetForm":
        return SetForm(POINT, v, v)

    @staticmethod
    def pair(v1: float, v2: float, eps=None) -> "SetForm":
        """Two-point set; collapses to a point when the values coincide."""
        eps = tolerance.resolve(eps)
        if v1 > v2:
            v1, v2 = v2, v1
        if v2 - v1 <= eps:
            return SetForm(POINT, v1, v1)
        return SetForm(PAIR, v1, v2)

    @staticmethod
    def interval(lo: float, hi: float, eps=None) -> "SetForm":
        """Closed interval; collapses to a point when degenerate.

        A crossed interval (lo > hi beyond tolerance) is empty.
        """
        eps = tolerance.resolve(eps)
        if lo > hi + eps:
            return _EMPTY
        if hi - lo <= eps:
            return SetForm(POINT, lo, lo)
        return SetForm(INTERVAL, lo, hi)

    # -- queries -----------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self.kind == EMPTY

    @property
    def is_point(self) -> bool:
        return self.kind == POINT

    @property
    def is_pair(self) -> bool:
        return self.kind == PAIR

    @property
    def is_interval(self) -> bool:
        return self.kind == INTERVAL

    def minimum(self) -> float:
        if self.is_empty:
            raise ValueError("minimum of empty set")
        return self.lo

    def maximum(self) -> float:
        if self.is_empty:
            raise ValueError("maximum of empty set")
        return self.hi

    def contains(self, v: float, eps=None) -> bool:
        eps = tolerance.resolve(eps)
        if self.kind == EMPTY:
            return False
        if self.kind == INTERVAL:
            return self.lo - eps <= v <= self.hi + eps
        if self.kind == POINT:
            return abs(v - self.lo) <= eps
        return abs(v - self.lo) <= eps or abs(v - self.hi) <= eps

    def values(self) -> tuple[float, ...]:
        """Finite member list; only meaningful for point/pair forms."""
        if self.kind == POINT:
            return (self.lo,)
        if self.kind == PAIR:
            return (self.lo, self.hi)
        raise ValueError(f"values() on {self.kind} form")

    # -- algebra -----------------------------------------------------------

    def intersect(self, other: "SetForm", eps=None) -> "SetForm":
        eps = tolerance.resolve(eps)
        if self.kind == EMPTY or other.kind == EMPTY:
            return _EMPTY
        if self.kind == POINT:
            return self if other.contains(self.lo, eps) else _EMPTY
        if other.kind == POINT:
            return other if self.contains(other.lo, eps) else _EMPTY
        if self.kind == PAIR:
            kept = [v for v in (self.lo, self.hi) if other.contains(v, eps)]
            if not kept:
                return _EMPTY
            if len(kept) == 1:
                return SetForm(POINT, kept[0], kept[0])
            return SetForm(PAIR, kept[0], kept[1])
        if other.kind == PAIR:
            return other.intersect(self, eps)
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        return SetForm.interval(lo, hi, eps)

    def issubset(self, other: "SetForm", eps=None) -> bool:
        eps = tolerance.resolve(eps)
        if self.kind == EMPTY:
            return True
        if other.kind == EMPTY:
            return False
        if self.kind in (POINT, PAIR):
            return all(other.contains(v, eps) for v in self.values())
        # proper interval fits only inside an interval
        if other.kind != INTERVAL:
            return False
        return other.lo - eps <= self.lo and self.hi <= other.hi + eps

    def same(self, other: "SetForm", eps=None) -> bool:
        """Set equality up to tolerance."""
        eps = tolerance.resolve(eps)
        if self.kind != other.kind:
            return False
        if self.kind == EMPTY:
            return True
        return abs(self.lo - other.lo) <= eps and abs(self.hi - other.hi) <= eps

    def snap(self, targets, eps=None) -> "SetForm":
        """Replace stored values by any target they match within eps.

        Used to pin restricted-cell endpoints exactly onto the column bounds.
        """
        eps = tolerance.resolve(eps)
        if self.kind == EMPTY:
            return self

        def pin(v):
            for tgt in targets:
                if abs(v - tgt) <= eps:
                    return tgt
            return v

        lo, hi = pin(self.lo), pin(self.hi)
        if self.kind == INTERVAL:
            return SetForm.interval(lo, hi, eps)
        if self.kind == PAIR:
            return SetForm.pair(lo, hi, eps)
        return SetForm(POINT, lo, lo)

    # -- formatting ---------------------------------------------------------

    def __str__(self):
        if self.kind == EMPTY:
            return "∅"
        if self.kind == POINT:
            return "{%s}" % _fmt(self.lo)
        if self.kind == PAIR:
            return "{%s,%s}" % (_fmt(self.lo), _fmt(self.hi))
        return "[%s,%s]" % (_fmt(self.lo), _fmt(self.hi))

    def to_json(self):
        if self.kind == EMPTY:
            return {"kind": EMPTY}
        if self.kind == INTERVAL:
            return {"kind": INTERVAL, "lo": self.lo, "hi": self.hi}
        return {"kind": self.kind, "values": list(self.values())}

    @staticmethod
    def parse(text: str) -> "SetForm":
        """Inverse of str(); accepts the same four spellings."""
        text = text.strip()
        if text in ("∅", "{}", "empty"):
            return _EMPTY
        if text.startswith("[") and text.endswith("]"):
            lo, hi = (float(v) for v in text[1:-1].split(","))
            return SetForm.interval(lo, hi)
        if text.startswith("{") and text.endswith("}"):
            vals = [float(v) for v in text[1:-1].split(",")]
            if len(vals) == 1:
                return SetForm.point(vals[0])
            if len(vals) == 2:
                return SetForm.pair(vals[0], vals[1])
        raise ValueError(f"unparseable set form: {text!r}")


def _fmt(v: float) -> str:
    s = f"{v:.6g}"
    return "0" if s == "-0" else s


_EMPTY = SetForm(EMPTY)
