"""Hecke-type triangle groups of signature (p, q, infinity) on the upper
half plane.

The group is generated by two elliptic elements

    A0 = ((2 cos(pi/p), 1), (-1, 0)),   B0 = ((0, 1), (-1, 2 cos(pi/q))),

of orders p and q fixing a = -cos(pi/p) + i sin(pi/p) and
b = cos(pi/q) + i sin(pi/q).  Their product gives the parabolic
gamma0 = (alpha0 beta0)^-1 : z -> z + lambda with
lambda = 2(cos(pi/p) + cos(pi/q)).

Three fundamental domains are built as explicit DomainSpec values:

  D       quadrangle with vertices d = 0, a, cusp, b; strip
          -cos(pi/p) < x < cos(pi/q) outside two circles of radii
          1/(2 cos(pi/p)), 1/(2 cos(pi/q)) through 0;
  D1      triangle union its mirror across x = -cos(pi/p); the strip
          [-2cos(pi/p)-cos(pi/q), cos(pi/q)] above two unit circles;
  Dprime  union of the pq translates alpha0^i beta0^j (D), a fundamental
          domain for the commutator subgroup.

Boundary convention: each edge pairing has a closed source edge and an
open image edge, so group orbits meet a domain exactly once and point
reduction is a function.  At p = 2 the circle of radius 1/(2 cos(pi/p))
degenerates to the line x = 0 and the edge predicates switch accordingly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConvergenceError, DomainError
from .moebius import IDENTITY, LiftedMoebius, Moebius
from .words import (GroupWord, IDENTITY_WORD, bezout, commutator,
                    format_word, normal_form, word)

_TOL = 1e-9
_STEP_BOUND = 10 ** 6
_LINE_EPS = 1e-12  # cos(pi/p) below this means the circle edge is a line


@dataclass(frozen=True)
class TriangleGroupData:
    p: int
    q: int
    r: int
    k_o: Fraction
    p1: int
    q1: int
    lam: float
    cp: float
    sp: float
    cq: float
    sq: float
    A0: Moebius
    B0: Moebius
    gamma0: Moebius
    alpha_lift: LiftedMoebius
    beta_lift: LiftedMoebius
    vertex_a: complex
    vertex_b: complex
    vertex_d: complex
    area_over_pi: Fraction

    @property
    def is_modular(self) -> bool:
        return (self.p, self.q) == (2, 3)


def build_group(p: int, q: int) -> TriangleGroupData:
    if not (isinstance(p, int) and isinstance(q, int)):
        raise DomainError("p, q must be integers")
    if not (2 <= p < q):
        raise DomainError("need 2 <= p < q, got (%r, %r)" % (p, q))
    if math.gcd(p, q) != 1:
        raise DomainError("p and q must be coprime")
    p1, q1 = bezout(p, q)
    r = p * q - p - q
    cp, sp = math.cos(math.pi / p), math.sin(math.pi / p)
    cq, sq = math.cos(math.pi / q), math.sin(math.pi / q)
    if cp < _LINE_EPS:
        cp = 0.0
    a0 = Moebius(2 * cp, 1.0, -1.0, 0.0)
    b0 = Moebius(0.0, 1.0, -1.0, 2 * cq)
    gamma0 = mat_power(a0.compose(b0), -1)
    g = TriangleGroupData(
        p=p, q=q, r=r, k_o=Fraction(p * q, r), p1=p1, q1=q1,
        lam=2 * (cp + cq), cp=cp, sp=sp, cq=cq, sq=sq,
        A0=a0, B0=b0, gamma0=gamma0,
        alpha_lift=LiftedMoebius(a0, 0), beta_lift=LiftedMoebius(b0, 0),
        vertex_a=complex(-cp, sp), vertex_b=complex(cq, sq),
        vertex_d=0j,
        area_over_pi=Fraction(1) - Fraction(1, p) - Fraction(1, q))
    assert g.area_over_pi == Fraction(r, p * q) == 1 / g.k_o
    assert _is_pm_identity(mat_power(a0, p), 1e-10)
    assert _is_pm_identity(mat_power(b0, q), 1e-10)
    assert abs(a0.apply(g.vertex_a) - g.vertex_a) < 1e-12
    assert abs(b0.apply(g.vertex_b) - g.vertex_b) < 1e-12
    assert abs(gamma0.apply(1j) - (1j + g.lam)) < 1e-12
    return g


def _is_pm_identity(m: Moebius, tol: float) -> bool:
    s = 1.0 if m.a >= 0 else -1.0
    return max(abs(s * m.a - 1), abs(s * m.b), abs(s * m.c), abs(s * m.d - 1)) < tol


def mat_power(m: Moebius, n: int) -> Moebius:
    if n < 0:
        return mat_power(m.inverse(), -n)
    out = IDENTITY
    for _ in range(n):
        out = out.compose(m)
    return out


def psl_order(m: Moebius, nmax: int = 200) -> int | None:
    """Smallest n >= 1 with m^n = +-identity, or None if none up to nmax."""
    cur = m
    for n in range(1, nmax + 1):
        if _is_pm_identity(cur, 1e-10):
            return n
        cur = cur.compose(m)
    return None


def word_matrix(g: TriangleGroupData, w: GroupWord) -> Moebius:
    """Image of an abstract word under alpha -> A0, beta -> B0; letters act
    left to right as a matrix product, so the leftmost letter acts last."""
    out = IDENTITY
    for gen, exp in w.letters:
        base = g.A0 if gen == "a" else g.B0
        out = out.compose(mat_power(base, exp))
    return out


def apply_extended(m: Moebius, v: complex | None) -> complex | None:
    """Moebius action extended to the boundary; None encodes infinity."""
    if v is None:
        return None if abs(m.c) < 1e-14 else complex(m.a / m.c)
    if v.imag > 0:
        return m.apply(v)
    den = m.c * v + m.d
    if abs(den) < 1e-14:
        return None
    return (m.a * v + m.b) / den


# ---------------------------------------------------------------------------
# fundamental domains


@dataclass(frozen=True)
class EdgeSpec:
    """One geodesic boundary edge.  kind 'line' has params (x0,), kind
    'arc' has params (center, radius) with the center on the real axis.
    Endpoints may be ideal: a real number, or None for infinity."""

    name: str
    kind: str
    params: tuple[float, ...]
    start: complex
    end: complex | None
    closed: bool


@dataclass(frozen=True)
class DomainSpec:
    tag: str
    p: int
    q: int
    vertices: tuple[complex | None, ...]
    edges: tuple[EdgeSpec, ...]
    pairings: tuple[tuple[str, str, GroupWord], ...]
    copies: tuple[GroupWord, ...]

    def edge(self, name: str) -> EdgeSpec:
        for e in self.edges:
            if e.name == name:
                return e
        raise DomainError("no edge named %r" % name)

    def to_record(self) -> dict:
        return {
            "tag": self.tag, "p": self.p, "q": self.q,
            "vertices": [_pt_record(v) for v in self.vertices],
            "edges": [{
                "name": e.name, "kind": e.kind, "params": list(e.params),
                "start": _pt_record(e.start), "end": _pt_record(e.end),
                "closed": e.closed,
            } for e in self.edges],
            "pairings": [{"source": s, "target": t, "word": format_word(w)}
                         for s, t, w in self.pairings],
            "copies": [format_word(w) for w in self.copies],
        }


def _pt_record(v: complex | None):
    return "inf" if v is None else complex(v)


def domain_spec(g: TriangleGroupData, tag: str) -> DomainSpec:
    if tag == "D":
        return _spec_d(g)
    if tag == "D1":
        return _spec_d1(g)
    if tag == "Dprime":
        return _spec_dprime(g)
    raise DomainError("unknown domain tag %r (want D, D1 or Dprime)" % tag)


def _edges_d(g: TriangleGroupData) -> tuple[EdgeSpec, ...]:
    a, b = g.vertex_a, g.vertex_b
    if g.p == 2:
        ad = EdgeSpec("ad", "line", (0.0,), a, 0.0, True)
    else:
        ad = EdgeSpec("ad", "arc", (-1 / (2 * g.cp), 1 / (2 * g.cp)), a, 0.0, True)
    return (
        ad,
        EdgeSpec("ac", "line", (-g.cp,), a, None, False),
        EdgeSpec("bc", "line", (g.cq,), b, None, True),
        EdgeSpec("bd", "arc", (1 / (2 * g.cq), 1 / (2 * g.cq)), b, 0.0, False),
    )


def _spec_d(g: TriangleGroupData) -> DomainSpec:
    return DomainSpec(
        tag="D", p=g.p, q=g.q,
        vertices=(0j, g.vertex_a, None, g.vertex_b),
        edges=_edges_d(g),
        pairings=(("ad", "ac", word(("a", 1))), ("bc", "bd", word(("b", 1)))),
        copies=(IDENTITY_WORD,))


def _spec_d1(g: TriangleGroupData) -> DomainSpec:
    x_l = -2 * g.cp - g.cq
    v_l = complex(x_l, g.sq)  # mirror image of b across x = -cos(pi/p)
    a, b = g.vertex_a, g.vertex_b
    return DomainSpec(
        tag="D1", p=g.p, q=g.q,
        vertices=(None, v_l, a, b),
        edges=(
            EdgeSpec("Lv", "line", (x_l,), v_l, None, True),
            EdgeSpec("E1", "arc", (-2 * g.cp, 1.0), v_l, a, True),
            EdgeSpec("E2", "arc", (0.0, 1.0), a, b, False),
            EdgeSpec("Rv", "line", (g.cq,), b, None, False),
        ),
        pairings=(
            ("Lv", "Rv", word(("b", -1), ("a", -1))),  # gamma0: z -> z + lambda
            ("E1", "E2", word(("a", -1))),
        ),
        copies=(IDENTITY_WORD,))


# neighbouring translate of D across each edge of D
_CROSS = {"ad": ("a", -1), "ac": ("a", 1), "bc": ("b", -1), "bd": ("b", 1)}


def _spec_dprime(g: TriangleGroupData) -> DomainSpec:
    """Union of the pq translates alpha^i beta^j (D).  A copy edge is an
    interior wall when crossing it lands in another copy; the remaining
    edges form the boundary, paired by commutator-subgroup elements."""
    copies = tuple(word(("a", i), ("b", j))
                   for i in range(g.p) for j in range(g.q))
    base = _spec_d(g)
    edges: list[EdgeSpec] = []
    pairings: list[tuple[str, str, GroupWord]] = []
    for c in copies:
        i, j = _abel_pair(c, g.p, g.q)
        for e in base.edges:
            u = c * word(_CROSS[e.name])
            i2, j2 = _abel_pair(u, g.p, g.q)
            rep = word(("a", i2), ("b", j2))
            f = u * rep.inverse()
            if _is_pm_identity(word_matrix(g, f), _TOL):
                continue  # interior wall between two copies
            name = "%d,%d:%s" % (i, j, e.name)
            edges.append(EdgeSpec(name, e.kind, e.params, e.start, e.end, e.closed))
            if e.closed:
                partner = "%d,%d:%s" % (i2, j2, _partner_name(e.name))
                pairings.append((name, partner, f.inverse()))
    return DomainSpec(tag="Dprime", p=g.p, q=g.q,
                      vertices=base.vertices, edges=tuple(edges),
                      pairings=tuple(pairings), copies=copies)


def _partner_name(name: str) -> str:
    return {"ad": "ac", "ac": "ad", "bc": "bd", "bd": "bc"}[name]


def _abel_pair(w: GroupWord, p: int, q: int) -> tuple[int, int]:
    da = sum(e for gen, e in w.letters if gen == "a")
    db = sum(e for gen, e in w.letters if gen == "b")
    return da % p, db % q


# ---------------------------------------------------------------------------
# membership


def _margins_d(g: TriangleGroupData, z: complex) -> list[float]:
    x = z.real
    out = [x + g.cp if g.p > 2 else x, g.cq - x,
           abs(z - 1 / (2 * g.cq)) - 1 / (2 * g.cq)]
    if g.p > 2:
        out.append(abs(z + 1 / (2 * g.cp)) - 1 / (2 * g.cp))
    return out


def _contains_d(g: TriangleGroupData, z: complex, tol: float) -> bool:
    m = _margins_d(g, z)
    if min(m) < -tol:
        return False
    if min(m) > tol:
        return True
    if g.p == 2:
        on_ad = abs(z.real) <= tol and z.imag <= g.sp + tol
    else:
        on_ad = abs(m[3]) <= tol
    on_bc = abs(m[1]) <= tol
    return on_ad or on_bc


def _contains_d1(g: TriangleGroupData, z: complex, tol: float) -> bool:
    x_l = -2 * g.cp - g.cq
    m = [z.real - x_l, g.cq - z.real, abs(z) - 1, abs(z + 2 * g.cp) - 1]
    if min(m) < -tol:
        return False
    if min(m) > tol:
        return True
    on_lv = abs(m[0]) <= tol
    on_e1 = abs(m[3]) <= tol and z.real <= -g.cp + tol
    return on_lv or on_e1


def domain_contains(g: TriangleGroupData, dom: DomainSpec, z: complex,
                    tol: float = _TOL) -> bool:
    """Membership with the closed-source/open-image boundary convention.
    Points within tol of an open edge count as on it (excluded) unless they
    also sit on a closed edge, so the answer is only approximate inside the
    tol band around the boundary."""
    if z.imag <= 0:
        raise DomainError("point must lie in the upper half plane")
    if dom.tag == "D":
        return _contains_d(g, z, tol)
    if dom.tag == "D1":
        return _contains_d1(g, z, tol)
    if dom.tag == "Dprime":
        return any(_contains_d(g, word_matrix(g, c).inverse().apply(z), tol)
                   for c in dom.copies)
    raise DomainError("unknown domain tag %r" % dom.tag)


# ---------------------------------------------------------------------------
# edge geometry


def copy_chart(g: TriangleGroupData, dom: DomainSpec,
               edge_name: str) -> Moebius | None:
    """Dprime edges store their geometry in the chart of the copy named by
    the edge prefix; this is the word matrix moving that chart into H^2.
    None for edges already in the base chart."""
    if dom.tag == "Dprime" and ":" in edge_name:
        ij = edge_name.split(":")[0]
        i, j = (int(s) for s in ij.split(","))
        return word_matrix(g, word(("a", i), ("b", j)))
    return None


def sample_edge(dom: DomainSpec, name: str, count: int) -> list[complex]:
    """count points on the edge, ideal endpoints excluded.  Dprime edge
    geometry is stored in the copy's own chart; push samples forward with
    copy_chart to place them on the actual boundary of D'."""
    e = dom.edge(name)
    if count < 1:
        raise DomainError("count must be >= 1")
    if e.kind == "line":
        x0 = e.params[0]
        y0 = e.start.imag
        if e.end is None:
            ys = [y0 * 1.45 ** k for k in range(count)]
        elif e.end.imag > 0:
            ys = [y0 + (e.end.imag - y0) * k / max(count - 1, 1) for k in range(count)]
        else:
            ys = [y0 * 0.55 ** k for k in range(count)]
        return [complex(x0, y) for y in ys]
    cx, rad = e.params
    t0 = math.atan2(e.start.imag, e.start.real - cx)
    if e.end is None:
        raise DomainError("arc edge cannot end at infinity")
    t1 = math.atan2(max(e.end.imag, 0.0), e.end.real - cx)
    pts = []
    for k in range(count):
        if e.end.imag > 0:
            t = t0 + (t1 - t0) * k / max(count - 1, 1)
        else:
            t = t0 + (t1 - t0) * k / count  # exclude the ideal endpoint
        pts.append(complex(cx + rad * math.cos(t), rad * math.sin(t)))
    return pts


def edge_distance(g: TriangleGroupData, dom: DomainSpec, name: str,
                  z: complex) -> float:
    """Distance from z to the edge carrier, plus any overshoot beyond the
    edge's endpoint range.  For Dprime edges the point is pulled back to
    the base copy first, so the figure is measured in the base chart."""
    if dom.tag == "Dprime" and ":" in name:
        ij, base_name = name.split(":")
        i, j = (int(s) for s in ij.split(","))
        c = word_matrix(g, word(("a", i), ("b", j)))
        return edge_distance(g, _spec_d(g), base_name, c.inverse().apply(z))
    e = dom.edge(name)
    if e.kind == "line":
        d = abs(z.real - e.params[0])
        lo = 0.0 if (e.end is not None and e.end.imag <= 0) else e.start.imag
        hi = math.inf if e.end is None else max(e.start.imag, e.end.imag)
        if e.end is not None and e.end.imag <= 0:
            hi = e.start.imag
        return d + max(lo - z.imag, 0.0) + max(z.imag - hi, 0.0)
    cx, rad = e.params
    d = abs(abs(z - cx) - rad)
    t = math.atan2(z.imag, z.real - cx)
    t0 = math.atan2(e.start.imag, e.start.real - cx)
    t1 = math.atan2(max(e.end.imag, 0.0), e.end.real - cx)
    lo, hi = min(t0, t1), max(t0, t1)
    return d + max(lo - t, 0.0) + max(t - hi, 0.0)


def check_edge_pairings(g: TriangleGroupData, dom: DomainSpec,
                        samples: int = 10, tol: float = _TOL) -> dict:
    """Each pairing word must map its source edge onto the target edge;
    checked at sampled points."""
    results = []
    worst = 0.0
    for src, dst, w in dom.pairings:
        m = word_matrix(g, w)
        pts = sample_edge(dom, src, samples)
        chart = copy_chart(g, dom, src)
        if chart is not None:
            pts = [chart.apply(z) for z in pts]
        dmax = max(edge_distance(g, dom, dst, m.apply(z)) for z in pts)
        worst = max(worst, dmax)
        results.append({"source": src, "target": dst, "word": format_word(w),
                        "max_distance": dmax, "ok": dmax <= tol})
    return {"tag": dom.tag, "pairings": results, "worst": worst,
            "passed": all(r["ok"] for r in results)}


# ---------------------------------------------------------------------------
# reduction


def reduce_to_fundamental(g: TriangleGroupData, z: complex,
                          tol: float = _TOL) -> tuple[complex, GroupWord]:
    """Move z into D1 by strip translations and inversions in the two unit
    circles.  Returns (reduced point, word w) with w(reduced) = z; the word
    is written in generator letters, leftmost acting last.  Each circle
    step strictly increases Im z, which is the termination argument."""
    if z.imag <= 0:
        raise DomainError("point must lie in the upper half plane")
    x_l = -2 * g.cp - g.cq
    letters: list[tuple[str, int]] = []
    cur = z
    for _ in range(_STEP_BOUND):
        if _contains_d1(g, cur, tol):
            return cur, GroupWord(tuple(letters))
        k = math.floor((cur.real - x_l) / g.lam)
        if k != 0:
            cur -= k * g.lam
            # undo with gamma0^k = (beta^-1 alpha^-1)^k
            step = (("b", -1), ("a", -1)) if k > 0 else (("a", 1), ("b", 1))
            letters.extend(step * abs(k))
            continue
        if abs(cur) < 1 - tol:
            cur = g.A0.apply(cur)
            letters.append(("a", -1))
        elif abs(cur + 2 * g.cp) < 1 - tol:
            cur = g.A0.inverse().apply(cur)
            letters.append(("a", 1))
        else:
            # inside the strip, on neither circle's inside, yet not a
            # member: cur sits in the tol band of an open edge; move it to
            # the closed partner
            if abs(cur.real - g.cq) <= tol:
                cur -= g.lam
                letters.extend((("b", -1), ("a", -1)))
            else:
                cur = g.A0.apply(cur)
                letters.append(("a", -1))
    raise ConvergenceError("reduction did not terminate; z = %r is too close "
                           "to the boundary circle at infinity" % (z,))


# ---------------------------------------------------------------------------
# commutator subgroup


def xi_word(i: int, j: int) -> GroupWord:
    return commutator(word(("a", i)), word(("b", j)))


def eta_word(k: int, j: int) -> GroupWord:
    return commutator(word(("a", 1)), word(("a", k), ("b", j), ("a", -k)))


def commutator_generators(g: TriangleGroupData, family: str) -> list[GroupWord]:
    """(p-1)(q-1) free generators of the commutator subgroup: family 'xi'
    gives [alpha^i, beta^j], family 'eta' gives [alpha, alpha^k beta^j
    alpha^-k]."""
    if family == "xi":
        return [xi_word(i, j) for i in range(1, g.p) for j in range(1, g.q)]
    if family == "eta":
        return [eta_word(k, j) for k in range(g.p - 1) for j in range(1, g.q)]
    raise DomainError("family must be 'xi' or 'eta'")


def conjugation_identity_check(g: TriangleGroupData) -> dict:
    """Word identities for conjugates of the xi generators,

        alpha xi(i,j) alpha^-1 = xi(i+1,j) xi(1,j)^-1,
        beta  xi(i,j) beta^-1  = xi(i,1)^-1 xi(i,j+1),

    plus the telescoping product eta(i-1,j)...eta(0,j) = xi(i,j), all
    verified through knot-group normal forms."""
    p, q = g.p, g.q
    al, be = word(("a", 1)), word(("b", 1))
    checks = []

    def record(kind, i, j, lhs, rhs):
        ok = normal_form(lhs, p, q) == normal_form(rhs, p, q)
        checks.append({"identity": kind, "i": i, "j": j, "ok": ok})

    for i in range(1, p - 1):
        for j in range(1, q):
            record("alpha-conjugation", i, j,
                   al * xi_word(i, j) * al.inverse(),
                   xi_word(i + 1, j) * xi_word(1, j).inverse())
    for i in range(1, p):
        for j in range(1, q - 1):
            record("beta-conjugation", i, j,
                   be * xi_word(i, j) * be.inverse(),
                   xi_word(i, 1).inverse() * xi_word(i, j + 1))
    for i in range(1, p):
        for j in range(1, q):
            prod = IDENTITY_WORD
            for k in range(i - 1, -1, -1):
                prod = prod * eta_word(k, j)
            record("telescoping", i, j, prod, xi_word(i, j))
    return {"p": p, "q": q, "checks": checks,
            "passed": all(c["ok"] for c in checks)}


# ---------------------------------------------------------------------------
# tiling


@dataclass(frozen=True)
class Tile:
    word: GroupWord
    mat: Moebius
    polygons: tuple[tuple[complex | None, ...], ...]


def tile(g: TriangleGroupData, dom: DomainSpec, radius: int) -> list[Tile]:
    """Translates h(dom) over all words h of length <= radius, one tile per
    distinct group element.  Elements are deduplicated by their matrix up
    to sign (alpha^-1 = alpha when p = 2).  For Dprime each copy yields its
    own polygon; radius there counts letters in the commutator generators
    xi, whose translates tile by the commutator subgroup."""
    if radius < 0:
        raise DomainError("radius must be >= 0")
    if dom.tag == "Dprime":
        gens = [(format_word(w), w) for w in commutator_generators(g, "xi")]
        alphabet = [w for _, w in gens] + [w.inverse() for _, w in gens]
    else:
        alphabet = [word(("a", 1)), word(("a", -1)),
                    word(("b", 1)), word(("b", -1))]
    seen: dict[tuple, GroupWord] = {}
    order: list[tuple[GroupWord, Moebius]] = []
    frontier: list[tuple[GroupWord, Moebius]] = [(IDENTITY_WORD, IDENTITY)]
    _note_tile(seen, order, IDENTITY_WORD, IDENTITY)
    for _ in range(radius):
        nxt = []
        for w, m in frontier:
            for step in alphabet:
                w2 = w * step
                m2 = m.compose(word_matrix(g, step))
                if _note_tile(seen, order, w2, m2):
                    nxt.append((w2, m2))
        frontier = nxt
    copy_mats = [word_matrix(g, c) for c in dom.copies]
    tiles = []
    for w, m in order:
        polys = tuple(
            tuple(apply_extended(m.compose(cm), v) for v in dom.vertices)
            for cm in copy_mats)
        tiles.append(Tile(word=w, mat=m, polygons=polys))
    return tiles


def _matrix_key(m: Moebius) -> tuple:
    vals = (m.a, m.b, m.c, m.d)
    for v in vals:
        if v > _TOL:
            break
        if v < -_TOL:
            vals = tuple(-x for x in vals)
            break
    return tuple(round(v / (10 * _TOL)) for v in vals)


def _note_tile(seen, order, w: GroupWord, m: Moebius) -> bool:
    key = _matrix_key(m)
    if key in seen:
        return False
    seen[key] = w
    order.append((w, m))
    return True
