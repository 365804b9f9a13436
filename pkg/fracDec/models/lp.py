from fractions import Fraction
from typing import Any, Dict, Literal, Tuple

from fracDec.models.base import FracDecModel


class Certificate(FracDecModel):
    """
    Verifiable verdict of the feasibility system {x >= 0, A x = 1}.

    Attributes:
        kind: feasible | infeasible.
        solution: column index -> nonnegative value (feasible).
        farkas: row index -> multiplier y with y^T A <= 0 columnwise and y^T 1 > 0 (infeasible).
        pivots: simplex pivots spent.
    """

    kind: Literal["feasible", "infeasible"]
    solution: Dict[int, Fraction] = {}
    farkas: Dict[int, Fraction] = {}
    pivots: int = 0


class LPInstance(FracDecModel):
    """
    Feasibility system {x >= 0, A x = rhs}.

    Attributes:
        rows: row labels, edge ranks for a full instance.
        cols: column labels, cliques for a full instance.
        columns: per column, row index -> coefficient.
        rhs: right-hand side, all ones.
    """

    rows: Tuple[Any, ...]
    cols: Tuple[Any, ...]
    columns: Tuple[Dict[int, int], ...]
    rhs: Tuple[Fraction, ...]

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.rows), len(self.cols)
