import random, time
from triknot.triangle import build_group
from triknot.forms import FormEvaluator
from triknot.moebius import TangentPoint, LogNonzero
from triknot.words import GroupWord

def random_word(rng, maxlen):
    n = rng.randint(1, maxlen)
    out = []
    for _ in range(n):
        letter = rng.choice("ab")
        e = rng.choice((-2, -1, 1, 2))
        out.append((letter, e))
    return GroupWord(tuple(out))

for (p, q) in ((2, 3), (2, 5), (3, 4), (3, 5)):
    t0 = time.time()
    g = build_group(p, q)
    ev = FormEvaluator(g)
    rng = random.Random(20260816)
    words = [random_word(rng, 8) for _ in range(50)]
    pts = [TangentPoint(complex(rng.uniform(-0.9, 0.9), rng.uniform(0.35, 2.2)),
                        LogNonzero(rng.uniform(-0.4, 0.4), rng.uniform(-2.5, 2.5)))
           for _ in range(20)]
    worst = 0.0
    worst_at = None
    for tag in ("a", "b", "inf"):
        for w in words:
            for z in pts:
                r = ev.automorphy_residual(tag, w, z)
                if r > worst:
                    worst = r
                    worst_at = (tag, w, z)
    print(f"({p},{q}) worst residual {worst:.3e} in {time.time()-t0:.1f}s")
    if worst > 1e-7:
        print("   at", worst_at)
