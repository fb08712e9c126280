"""Outcome records for a single inequality instance."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

HOLDS = "Holds"
EQUALITY = "Equality"
FAILS = "Fails"
VACUOUS = "Vacuous"
STATUSES = (HOLDS, EQUALITY, FAILS, VACUOUS)


def judge(lhs, rhs, relation: str) -> str:
    """Status of ``lhs <relation> rhs`` evaluated exactly."""
    if relation == "<=":
        return HOLDS if lhs < rhs else EQUALITY if lhs == rhs else FAILS
    if relation == ">=":
        return HOLDS if lhs > rhs else EQUALITY if lhs == rhs else FAILS
    if relation == "<":
        return HOLDS if lhs < rhs else FAILS
    if relation == "=":
        return EQUALITY if lhs == rhs else FAILS
    raise ValueError(f"unknown relation {relation!r}")


@dataclass(frozen=True)
class Verdict:
    check_id: str
    lhs: Fraction
    rhs: Fraction
    relation: str
    status: str
    witness: dict = field(default_factory=dict, compare=False)
    detail: dict = field(default_factory=dict, compare=False)

    @property
    def ok(self) -> bool:
        return self.status != FAILS

    def to_json(self) -> dict:
        out = {
            "check_id": self.check_id,
            "status": self.status,
            "relation": self.relation,
            "lhs": _rat(self.lhs),
            "rhs": _rat(self.rhs),
            "poset": self.witness.get("poset"),
            "params": self.witness.get("params", {}),
        }
        if self.detail:
            out["detail"] = self.detail
        return out


def _rat(q) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def product_verdict(check_id: str, lhs, rhs, relation: str, witness: dict | None = None, **detail) -> Verdict:
    """Verdict for an inequality stated in product form (never vacuous)."""
    lhs, rhs = Fraction(lhs), Fraction(rhs)
    return Verdict(check_id, lhs, rhs, relation, judge(lhs, rhs, relation), witness or {}, detail)


def ratio_verdict(check_id: str, num, den, bound, relation: str, witness: dict | None = None, **detail) -> Verdict:
    """Verdict for ``num / den <relation> bound`` with ``den >= 0``.

    Decided in cross-multiplied form.  With a zero denominator the ratio is
    undefined: the verdict is Vacuous when the product form still holds and
    Fails otherwise, so a genuine product-form violation is never hidden.
    """
    num, den, bound = Fraction(num), Fraction(den), Fraction(bound)
    if den < 0:
        raise ValueError("denominator must be nonnegative")
    product_status = judge(num, bound * den, relation)
    if den == 0:
        status = FAILS if product_status == FAILS else VACUOUS
        return Verdict(check_id, num, bound * den, relation, status, witness or {}, detail)
    return Verdict(check_id, num / den, bound, relation, product_status, witness or {}, detail)
