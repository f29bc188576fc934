"""Result object returned by every ``verify_*`` routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional


def jsonable(x: Any) -> Any:
    """Convert exact and numeric values to JSON-friendly objects."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return float(f"{x:.15g}")
    if isinstance(x, complex):
        return {"re": float(f"{x.real:.15g}"), "im": float(f"{x.imag:.15g}")}
    if hasattr(x, "to_dict"):
        return x.to_dict()
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    try:
        return jsonable(complex(x))
    except (TypeError, ValueError):
        return str(x)


@dataclass
class VerificationReport:
    name: str
    params: dict
    ok: bool
    checked: int
    first_mismatch: Optional[dict] = None
    details: dict = field(default_factory=dict)
    tolerance: Optional[float] = None

    def __bool__(self) -> bool:
        return self.ok

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "params": jsonable(self.params),
            "ok": self.ok,
            "checked": self.checked,
            "first_mismatch": jsonable(self.first_mismatch),
            "details": jsonable(self.details),
        }
        if self.tolerance is not None:
            out["tolerance"] = self.tolerance
        return out

    def summary(self) -> str:
        if self.ok:
            return f"{self.name}: ok ({self.checked} checked)"
        return f"{self.name}: MISMATCH {self.first_mismatch}"


def mismatch(index, left, right, **extra) -> dict:
    out = {"index": index, "left": left, "right": right}
    out.update(extra)
    return out
