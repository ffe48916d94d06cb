"""Certificate record returned by every sign/stability check."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Kind(str, Enum):
    SIGN = "Sign"
    ROOT_NEGATIVITY = "RootNegativity"
    WALL = "Wall"
    BOUND_A = "BoundA"
    BOUND_B = "BoundB"
    BOUND_E0 = "BoundE0"
    CLOSURE = "Closure"
    POINCARE_LIMITS = "PoincareLimits"
    HYPERGEOM_DECAY = "HypergeomDecay"


class Verdict(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"


@dataclass(frozen=True)
class Certificate:
    kind: Kind
    verdict: Verdict
    witness: dict[str, Any] = field(default_factory=dict)
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "verdict": self.verdict.value,
            "message": self.message,
            "witness": _jsonable(self.witness),
        }


def make(kind: Kind, ok: bool, message: str = "", **witness: Any) -> Certificate:
    return Certificate(kind, Verdict.PASS if ok else Verdict.FAIL, dict(witness), message)


def _jsonable(obj: Any) -> Any:
    # Polynomials and rationals serialize through their canonical text.
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Certificate):
        return obj.to_json()
    if isinstance(obj, (bool, int, float, str)) or obj is None:
        return obj
    return str(obj)
