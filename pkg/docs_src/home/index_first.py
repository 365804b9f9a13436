from fractions import Fraction

from fracDec.hypercore import complete_minus
from fracDec.logger import init_logging
from fracDec.lporacle import build_feasibility_lp, feasible, verify_certificate
from fracDec.matchdist import decompose_minus_matching, deficiency_report
from fracDec.packing import validate
from fracDec.symdecomp import missing_edge_packing, solve_weights

init_logging("INFO")

# weights of the K_4^3 decomposition of K_12^3 minus one edge, by intersection size with the missing edge
print(solve_weights(4, 3).w)  # (19/168, 3/28, 1/8)

P = missing_edge_packing(4, 3, [0, 1, 2])
assert validate(P).passed

# K_16 minus one edge into triangles through the matching construction
report = deficiency_report(16, 2, 3, [[0, 1]], Fraction(1, 2))
assert report.passed
assert validate(decompose_minus_matching(16, 2, 3, [[0, 1]])).passed

# the same host through the exact LP oracle
L = build_feasibility_lp(complete_minus(8, 2, [[0, 1]]), 3)
certificate = feasible(L)
assert verify_certificate(L, certificate)
