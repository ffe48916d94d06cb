"""Index pairs (l, m): finite cases and the three symbolic families."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidIndex, UnsupportedCase
from .exactmath import MultiPoly, var
from .tables import BOUND_THRESHOLD, FAMILIES, FAMILY_OFFSET, QUASI_THRESHOLD

L = var("l")


@dataclass(frozen=True)
class ModeCase:
    """A finite pair such as "11" or a family "l1" = (l, l-1)."""

    key: str

    def __post_init__(self):
        if self.key in FAMILIES:
            return
        if len(self.key) != 2 or not self.key.isdigit():
            raise UnsupportedCase(f"unknown case key {self.key!r}")
        l, m = int(self.key[0]), int(self.key[1])
        if (l == 0 and m != 1) or abs(l - m) > 1:
            raise InvalidIndex(f"invalid index pair ({l}, {m})")

    @property
    def is_family(self) -> bool:
        return self.key in FAMILIES

    @property
    def l(self) -> MultiPoly | int:
        return L if self.is_family else int(self.key[0])

    @property
    def m(self) -> MultiPoly | int:
        return L + FAMILY_OFFSET[self.key] if self.is_family else int(self.key[1])

    @property
    def l_poly(self) -> MultiPoly:
        return L if self.is_family else MultiPoly.const(int(self.key[0]))

    @property
    def m_poly(self) -> MultiPoly:
        return L + FAMILY_OFFSET[self.key] if self.is_family else MultiPoly.const(int(self.key[1]))

    @property
    def l_min(self) -> int:
        """Smallest l covered (the family threshold for the error bounds)."""
        return BOUND_THRESHOLD[self.key] if self.is_family else int(self.key[0])

    @property
    def heun_key(self) -> str:
        return self.key if self.key in ("10", "11", "21") else "generic"

    @property
    def quasi_key(self) -> tuple[str, int | None]:
        """Table row for the quasisolution and the l-value to substitute."""
        if self.is_family:
            return self.key, None
        l, m = int(self.key[0]), int(self.key[1])
        if l >= QUASI_THRESHOLD:
            return {-1: "l1", 0: "l2", 1: "l3"}[m - l], l
        return self.key, None

    @property
    def label(self) -> str:
        if self.is_family:
            off = {"l1": "l-1", "l2": "l", "l3": "l+1"}[self.key]
            return f"(l>={self.l_min}, {off})"
        return f"({self.key[0]},{self.key[1]})"

    def __str__(self):
        return self.label


def case(l: int, m: int) -> ModeCase:
    return ModeCase(f"{l}{m}")


HEUN_CASES = tuple(ModeCase(k) for k in ("10", "11", "12", "21", "22", "23", "32", "33",
                                          "l1", "l2", "l3"))
