"""
The library lending rules as standard deontic logic, in every scope reading of the conditional norms

    r: the borrower returns the book by the date due
    p: disciplinary action is taken against the borrower

    1. O(r)                                  the book shall be returned
    2. O(r -> ~p)   or   r -> O(~p)          then no disciplinary action shall be taken
    3. O(~r -> p)   or   ~r -> O(p)          otherwise disciplinary action shall be taken
    4. ~r                                    the book is not returned

Reading rule 2 with wide scope and rule 3 with narrow scope is the standard reconstruction
of the contrary-to-duty contradiction.
"""
from dataclasses import dataclass

import pandas

from normcheck.models import ChisholmRow
from normcheck.sdl.formula import Impl, Neg, Obligation, Proposition, SdlFormula
from normcheck.sdl.tableau import consistent, entails
from normcheck.utils.annotations import List, Tuple

RETURNED = Proposition("r")
DISCIPLINED = Proposition("p")


class Scope():
    WIDE = "wide"
    NARROW = "narrow"


def conditional_norm(condition: SdlFormula, obligation: SdlFormula, scope: str) -> SdlFormula:
    """`O(condition -> obligation)` in wide scope, `condition -> O(obligation)` in narrow scope"""
    if scope == Scope.WIDE:
        return Obligation(Impl(condition, obligation))
    return Impl(condition, Obligation(obligation))


@dataclass(frozen=True)
class ChisholmEncoding:
    rule2_scope: str
    rule3_scope: str
    formulas: Tuple[SdlFormula, ...]

    @property
    def label(self) -> Tuple[str, str]:
        return (self.rule2_scope, self.rule3_scope)

    @property
    def name(self) -> str:
        return "{0}/{1}".format(self.rule2_scope, self.rule3_scope)

    def without(self, position: int) -> List[SdlFormula]:
        """The formulas other than the one at `position` (1-based)"""
        return [formula for index, formula in enumerate(self.formulas, start=1) if index != position]


def chisholm_encodings() -> List[ChisholmEncoding]:
    """The four (rule 2 scope, rule 3 scope) readings, wide before narrow"""
    encodings = []
    for rule2_scope in (Scope.WIDE, Scope.NARROW):
        for rule3_scope in (Scope.WIDE, Scope.NARROW):
            encodings.append(ChisholmEncoding(rule2_scope, rule3_scope, (
                Obligation(RETURNED),
                conditional_norm(RETURNED, Neg(DISCIPLINED), rule2_scope),
                conditional_norm(Neg(RETURNED), DISCIPLINED, rule3_scope),
                Neg(RETURNED)
            )))
    return encodings


def chisholm_report(serial: bool = True, node_budget: int = None) -> List[ChisholmRow]:
    """
    Checks the consistency of every encoding and whether its formula 2 or 3 follows from the other three
    """
    rows = []
    for encoding in chisholm_encodings():
        result = consistent(encoding.formulas, serial=serial, node_budget=node_budget)
        rows.append(ChisholmRow(
            encoding,
            result,
            formula2_entailed=entails(encoding.without(2), encoding.formulas[1], serial=serial, node_budget=node_budget),
            formula3_entailed=entails(encoding.without(3), encoding.formulas[2], serial=serial, node_budget=node_budget),
            logic="KD" if serial else "K"
        ))
    return rows


def paradox_reproduced(rows: List[ChisholmRow]) -> bool:
    """True when the wide/narrow reading is the only inconsistent one"""
    unsatisfiable = [row.encoding.label for row in rows if not row.result.satisfiable]
    return unsatisfiable == [(Scope.WIDE, Scope.NARROW)]


def report_table(rows: List[ChisholmRow]) -> str:
    frame = pandas.DataFrame([
        {
            "rule 2": row.encoding.rule2_scope,
            "rule 3": row.encoding.rule3_scope,
            "verdict": row.verdict,
            "witness": "{count} world(s)".format(count=len(row.result.model.worlds)) if row.result.model is not None else "{count} step(s)".format(count=len(row.result.certificate)),
            "notes": "; ".join(row.notes) or "-"
        }
        for row in rows
    ])
    return frame.to_string(index=False)
