from fractions import Fraction
from typing import Tuple

from fracDec.models.base import FracDecModel


class CoeffMatrix(FracDecModel):
    """
    Upper-triangular system of the missing-edge decomposition of K_{rq}^r - e.

    a[t][i] is the number of q-cliques through an edge f with |f & e| = t whose intersection with e has
    i vertices: C(r - t, i - t) * C(n - 2r + t, q - r - i + t).
    """

    r: int
    q: int
    n: int
    a: Tuple[Tuple[int, ...], ...]


class WeightVector(FracDecModel):
    """
    w[i] is the weight of every q-clique meeting the missing edge in i vertices; A w = 1.
    """

    r: int
    q: int
    w: Tuple[Fraction, ...]
