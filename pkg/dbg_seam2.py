import cmath, math, time
from triknot.triangle import build_group
from triknot.uniformizer import SchwarzMap, theta_map, _LOCAL_USE_W

# seam check: ring just outside the patch trust radius, generic route
# (theta_map reduces first) vs direct patch series continuation
for (p, q) in ((2, 3), (2, 5), (3, 4), (3, 5)):
    g = build_group(p, q)
    sm = SchwarzMap(g)
    worst = 0.0
    worst_d = 0.0
    for tag, v, m in (("a", g.vertex_a, p), ("b", g.vertex_b, q)):
        for j in range(24):
            w = 0.125 * cmath.exp(2j * math.pi * (j + 0.37) / 24)
            z = (v - w * v.conjugate()) / (1 - w)
            th_p, dth_p = sm._vertex_value(tag, z)
            val = theta_map(g, z)
            th_g, dth_g = val.value, val.derivative
            err = abs(th_p - th_g) / max(1.0, abs(th_g))
            errd = abs(dth_p - dth_g) / max(1.0, abs(dth_g))
            worst = max(worst, err)
            worst_d = max(worst_d, errd)
    print(f"({p},{q}) seam |dtheta|: {worst:.3e}  |ddtheta'|: {worst_d:.3e}")

# invert totality inside the patch: returns instantly, equals the series
g = build_group(2, 3)
sm = SchwarzMap(g)
v = g.vertex_b
for rr in (0.05, 0.01, 0.002):
    w = rr * cmath.exp(0.61j)
    z = (v - w * v.conjugate()) / (1 - w)
    t0 = time.time()
    t, sp = sm.invert(z)
    th, dth = sm._vertex_value("b", z)
    print(f"r={rr}: invert-vs-patch {abs(t - th):.2e} {abs(sp - 1.0 / dth):.2e}"
          f"  ({time.time() - t0:.3f}s)")
