"""Three-valued answers for identities that are only checkable up to a truncation order."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any


class Status(str, Enum):
    PROVED = "proved"
    REFUTED = "refuted"
    UNKNOWN = "unknown_up_to"


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check.

    ``witness`` is an exact monomial (or other short exact datum) backing a
    PROVED or REFUTED answer. ``order`` is the truncation order the answer was
    obtained at. ``data`` carries check-specific extras (ranks, constants,
    minimal jet orders) and is serialized as-is.
    """

    status: Status
    witness: str | None = None
    order: int | None = None
    data: dict[str, Any] = field(default_factory=dict, compare=False)

    @classmethod
    def proved(cls, witness=None, order=None, **data) -> Verdict:
        return cls(Status.PROVED, None if witness is None else str(witness), order, data)

    @classmethod
    def refuted(cls, witness=None, order=None, **data) -> Verdict:
        return cls(Status.REFUTED, None if witness is None else str(witness), order, data)

    @classmethod
    def unknown(cls, order: int, **data) -> Verdict:
        return cls(Status.UNKNOWN, None, order, data)

    @property
    def is_proved(self) -> bool:
        return self.status is Status.PROVED

    @property
    def is_refuted(self) -> bool:
        return self.status is Status.REFUTED

    @property
    def is_unknown(self) -> bool:
        return self.status is Status.UNKNOWN

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"status": self.status.value}
        if self.witness is not None:
            out["witness"] = self.witness
        if self.order is not None:
            out["order"] = self.order
        for key in sorted(self.data):
            out[key] = _plain(self.data[key])
        return out

    def __str__(self) -> str:
        text = self.status.value
        if self.status is Status.UNKNOWN:
            text = f"unknown_up_to({self.order})"
        if self.witness is not None:
            text += f" [{self.witness}]"
        return text


def _plain(value):
    if isinstance(value, Verdict):
        return value.to_dict()
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


def both(a: Verdict, b: Verdict, order: int | None = None) -> Verdict:
    """Conjunction: refuted beats unknown beats proved."""
    if a.is_refuted:
        return a
    if b.is_refuted:
        return b
    if a.is_unknown:
        return a
    if b.is_unknown:
        return b
    return Verdict.proved(order=order if order is not None else a.order)


def all_of(*verdicts: Verdict) -> Verdict:
    out = verdicts[0]
    for v in verdicts[1:]:
        out = both(out, v)
    return out


def any_of(*verdicts: Verdict) -> Verdict:
    """Disjunction: proved beats unknown beats refuted."""
    for v in verdicts:
        if v.is_proved:
            return v
    for v in verdicts:
        if v.is_unknown:
            return v
    return verdicts[-1]


def negate(v: Verdict) -> Verdict:
    if v.is_proved:
        return Verdict(Status.REFUTED, v.witness, v.order, v.data)
    if v.is_refuted:
        return Verdict(Status.PROVED, v.witness, v.order, v.data)
    return v
