import time

from triknot.forms import FormEvaluator
from triknot.moebius import LogNonzero, TangentPoint
from triknot.triangle import build_group
from triknot.words import GroupWord

g = build_group(3, 5)
ev = FormEvaluator(g)
w = GroupWord((("b", 1), ("a", 1), ("b", -2), ("a", 2)))
pt = TangentPoint(complex(-0.293529413166146, 0.42847492707455),
                  LogNonzero(log_mod=-0.36303494503356837,
                             arg=-1.9920359294123973))
t0 = time.time()
for tag in ("a", "b", "inf"):
    r = ev.automorphy_residual(tag, w, pt)
    print(tag, "%.3e" % r, "%.1fs" % (time.time() - t0))
