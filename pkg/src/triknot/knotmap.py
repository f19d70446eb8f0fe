"""The map Psi into C^2, the singular curve, and the sphere picture.

Psi sends a tangent point to the pair of form values (f_b, f_a).  Its
image avoids the curve c_b z1^q + c_a z2^p = 0 because plugging Psi into
the curve polynomial reproduces the cusp form value, which vanishes
nowhere on the tangent space.  The positive reals act by

    lam . (z1, z2) = (lam^(p/r) z1, lam^(q/r) z2),

and each orbit meets the unit sphere once, so a radial projection moves
any Psi image onto S^3 minus the torus knot K cut out by the curve.  The
circle subgroup of the same action is the Seifert flow

    h_t = (e^(2 pi i p t) z1, e^(2 pi i q t) z2),

whose time 1/r generates the cyclic group presenting the lens space
quotient of S^3.

Two curve conventions coexist: unit coefficients for standalone knot
sampling, fitted (c_b, c_a) for Psi images.  A config flag selects one;
mixing them would corrupt every residual downstream.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .errors import ConvergenceError, DomainError
from .forms import FormEvaluator, fit_relation_constants
from .moebius import (BASE_TANGENT, LiftedMoebius, LogNonzero, Moebius,
                      TangentPoint, act_tangent)
from .triangle import TriangleGroupData, reduce_to_fundamental
from .words import bezout, represent, subgroup_gr_generators, word

_SPHERE_TOL = 1e-10
_PROJECT_TOL = 1e-14
_PROJECT_ITERS = 60


@dataclass(frozen=True)
class KnotMapConfig:
    """Curve coefficients, action weights, and the optional evaluator
    behind Psi.  The weights p/r, q/r come straight from the group."""

    group: TriangleGroupData
    c_a: complex
    c_b: complex
    convention: str = "fitted"
    evaluator: FormEvaluator | None = None

    def __post_init__(self):
        if self.group.r < 1:
            raise DomainError("the action weights need r = pq - p - q >= 1")
        if self.convention not in ("fitted", "unit"):
            raise DomainError("curve convention must be 'fitted' or 'unit', "
                              "got %r" % (self.convention,))

    @property
    def weights(self) -> tuple[Fraction, Fraction]:
        g = self.group
        return (Fraction(g.p, g.r), Fraction(g.q, g.r))


def fitted_config(ev: FormEvaluator) -> KnotMapConfig:
    """Config with the curve coefficients fitted from the relation
    f_inf = c_a f_a^p + c_b f_b^q; the fit validates itself on a sample."""
    rel = fit_relation_constants(ev)
    return KnotMapConfig(group=ev.group, c_a=rel.c_a, c_b=rel.c_b,
                         convention="fitted", evaluator=ev)


def unit_config(group: TriangleGroupData) -> KnotMapConfig:
    return KnotMapConfig(group=group, c_a=1.0 + 0j, c_b=1.0 + 0j,
                         convention="unit", evaluator=None)


@dataclass(frozen=True)
class KnotSample:
    """A point of C^2 with its curve value; on_sphere certifies the unit
    norm within 1e-10."""

    z1: complex
    z2: complex
    on_sphere: bool
    f_value: complex

    def __post_init__(self):
        if self.on_sphere:
            err = abs(abs(self.z1) ** 2 + abs(self.z2) ** 2 - 1.0)
            if err >= _SPHERE_TOL:
                raise DomainError("sample claims the unit sphere but is off "
                                  "by %g" % (err,))


def psi(cfg: KnotMapConfig, pt: TangentPoint) -> tuple[complex, complex]:
    """(f_b, f_a) at the tangent point, in exactly that component order."""
    if cfg.evaluator is None:
        raise DomainError("psi needs a config with an attached evaluator; "
                          "build one with fitted_config")
    return (cfg.evaluator.eval_form("b", pt), cfg.evaluator.eval_form("a", pt))


def curve_f(cfg: KnotMapConfig, z1: complex, z2: complex) -> complex:
    """c_b z1^q + c_a z2^p, or z1^q + z2^p under the unit convention."""
    p, q = cfg.group.p, cfg.group.q
    if cfg.convention == "unit":
        return z1 ** q + z2 ** p
    return cfg.c_b * z1 ** q + cfg.c_a * z2 ** p


def scale_action(cfg: KnotMapConfig, lam: float,
                 z1: complex, z2: complex) -> tuple[complex, complex]:
    """lam . (z1, z2) for lam > 0 with the weights p/r, q/r."""
    if lam <= 0:
        raise DomainError("the radial action takes positive reals")
    wp, wq = cfg.weights
    return (lam ** float(wp) * z1, lam ** float(wq) * z2)


def radial_project(cfg: KnotMapConfig, z1: complex, z2: complex) -> KnotSample:
    """The unique point of the R_+ orbit through (z1, z2) on the unit
    sphere.  The squared norm along the orbit is a two-term power sum in
    lam with positive exponents, strictly increasing from 0 to infinity,
    so a bracketed Newton solve cannot miss."""
    a = abs(z1) ** 2
    b = abs(z2) ** 2
    if a == 0.0 and b == 0.0:
        raise DomainError("the origin is not on any R_+ orbit")
    g = cfg.group
    ep = 2.0 * g.p / g.r
    eq = 2.0 * g.q / g.r

    def norm2(lam: float) -> float:
        return a * lam ** ep + b * lam ** eq

    lo = hi = 1.0
    while norm2(hi) < 1.0:
        hi *= 2.0
    while norm2(lo) > 1.0:
        lo /= 2.0
    lam = math.sqrt(lo * hi)
    for _ in range(_PROJECT_ITERS):
        f = norm2(lam) - 1.0
        if abs(f) < _PROJECT_TOL:
            break
        if f > 0:
            hi = lam
        else:
            lo = lam
        d = a * ep * lam ** (ep - 1.0) + b * eq * lam ** (eq - 1.0)
        lam_new = lam - f / d
        # keep the iterate inside the bracket; bisect when Newton leaves
        if not lo < lam_new < hi:
            lam_new = 0.5 * (lo + hi)
        lam = lam_new
    else:
        raise ConvergenceError("radial projection did not reach %g within "
                               "%d iterations" % (_PROJECT_TOL, _PROJECT_ITERS))
    w1, w2 = scale_action(cfg, lam, z1, z2)
    return KnotSample(z1=w1, z2=w2, on_sphere=True,
                      f_value=curve_f(cfg, w1, w2))


def knot_point(p: int, q: int, t: float) -> KnotSample:
    """The standard parametrization of the (p,q) torus knot on S^3 under
    the unit-coefficient convention: radii solve a1^2 + a1^(2q/p) = 1,
    and the phase offset pi/p on the second coordinate puts the point on
    the curve z1^q + z2^p = 0 for every t."""
    a1 = _knot_radius(p, q)
    a2 = a1 ** (q / p)
    z1 = a1 * cmath.exp(2j * math.pi * p * t)
    z2 = a2 * cmath.exp(1j * (2.0 * math.pi * q * t + math.pi / p))
    return KnotSample(z1=z1, z2=z2, on_sphere=True,
                      f_value=z1 ** q + z2 ** p)


def _knot_radius(p: int, q: int) -> float:
    """Root of a1^2 + a1^(2q/p) = 1 in (0, 1); the left side is strictly
    increasing there, from 0 to 2."""
    e = 2.0 * q / p
    lo, hi = 0.0, 1.0
    a = 0.7
    for _ in range(_PROJECT_ITERS):
        f = a * a + a ** e - 1.0
        if abs(f) < _PROJECT_TOL:
            return a
        if f > 0:
            hi = a
        else:
            lo = a
        d = 2.0 * a + e * a ** (e - 1.0)
        a_new = a - f / d
        if not lo < a_new < hi:
            a_new = 0.5 * (lo + hi)
        a = a_new
    raise ConvergenceError("knot radius solve stalled at %r" % (a,))


def seifert_flow(p: int, q: int, t: float,
                 z1: complex, z2: complex) -> tuple[complex, complex]:
    """h_t (z1, z2) = (e^(2 pi i p t) z1, e^(2 pi i q t) z2)."""
    return (cmath.exp(2j * math.pi * p * t) * z1,
            cmath.exp(2j * math.pi * q * t) * z2)


@dataclass(frozen=True)
class LensData:
    """The lens space swallowing S^3 under the 1/r Seifert rotation:
    L(r, lens_param), the quotient by the cyclic group generated by the
    diagonal rotation with exact phases (p/r, q/r)."""

    r: int
    lens_param: int
    h_phases: tuple[Fraction, Fraction]
    fixed_point_free: bool

    def h_power(self, k: int) -> tuple[Fraction, Fraction]:
        """Phases of h_(1/r)^k as exact rotation numbers."""
        return ((self.h_phases[0] * k) % 1, (self.h_phases[1] * k) % 1)


def lens_data(p: int, q: int) -> LensData:
    p1, q1 = bezout(p, q)
    r = p * q - p - q
    param = (p * (q1 - p1 + p * p1)) % r if r > 1 else 0
    if math.gcd(p, r) != 1 or math.gcd(q, r) != 1:
        raise DomainError("r shares a factor with p or q; the rotation "
                          "would fix points on S^3")
    phases = (Fraction(p, r), Fraction(q, r))
    # free action: every nontrivial power rotates both coordinates, so a
    # fixed point would need both to vanish, which the sphere forbids
    free = all((phases[0] * k) % 1 != 0 and (phases[1] * k) % 1 != 0
               for k in range(1, r))
    data = LensData(r=r, lens_param=param, h_phases=phases,
                    fixed_point_free=free)
    assert data.h_power(r) == (Fraction(0), Fraction(0))
    return data


# ---------------------------------------------------------------------------
# sampling suites


def random_tangent_samples(count: int, seed: int = 0) -> list[TangentPoint]:
    """Tangent points on the lifted orbit through the base point (i, 1):
    random group elements in Iwasawa coordinates (rotation, dilation,
    shear) applied to the base point, each with a random deck branch so
    the fiber direction is sampled too."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        th = rng.uniform(-math.pi, math.pi)
        s = math.exp(rng.uniform(-0.8, 0.8))
        x = rng.uniform(-1.5, 1.5)
        rot = Moebius(math.cos(th), math.sin(th), -math.sin(th), math.cos(th))
        an = Moebius(s, s * x, 0.0, 1.0 / s)
        lifted = LiftedMoebius(rot.compose(an), rng.randint(-1, 1))
        out.append(act_tangent(lifted, BASE_TANGENT))
    return out


def psi_curve_residuals(cfg: KnotMapConfig, count: int = 100,
                        seed: int = 0) -> float:
    """Worst relative gap between curve_f(psi(pt)) and the cusp form value
    over seeded generic tangent points; identically zero in exact
    arithmetic by the relation lemma."""
    if cfg.evaluator is None:
        raise DomainError("the residual suite needs an attached evaluator")
    ev = cfg.evaluator
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(count):
        z = complex(rng.uniform(-0.9, 0.9), rng.uniform(0.35, 2.2))
        pt = TangentPoint(z, LogNonzero(rng.uniform(-0.4, 0.4),
                                        rng.uniform(-2.5, 2.5)))
        z1, z2 = psi(cfg, pt)
        fi = ev.eval_form("inf", pt)
        worst = max(worst, abs(curve_f(cfg, z1, z2) - fi) / abs(fi))
    return worst


@dataclass(frozen=True)
class SphereSectionReport:
    samples: int
    max_sphere_error: float
    min_curve_abs: float
    congruent_max_diff: float
    distinct_pairs: int
    min_separation: float
    passed: bool


def match_sphere_section(cfg: KnotMapConfig, samples: int = 200,
                         seed: int = 0) -> SphereSectionReport:
    """Finite shadow of the section property: radially projected Psi
    images of orbit samples land on S^3 without touching the curve,
    G-congruent inputs collapse to one output, and inputs whose reduced
    base points differ stay separated."""
    if cfg.evaluator is None:
        raise DomainError("the section probe needs an attached evaluator")
    g = cfg.group
    pts = random_tangent_samples(samples, seed)
    projected = []
    max_sphere = 0.0
    min_curve = math.inf
    for pt in pts:
        z1, z2 = psi(cfg, pt)
        min_curve = min(min_curve, abs(curve_f(cfg, z1, z2)))
        sample = radial_project(cfg, z1, z2)
        max_sphere = max(max_sphere, abs(abs(sample.z1) ** 2
                                         + abs(sample.z2) ** 2 - 1.0))
        projected.append(sample)
    # congruent inputs: push a sample through the subgroup generators
    congruent = 0.0
    for pt in pts[:5]:
        base_val = psi(cfg, pt)
        for gen in subgroup_gr_generators(g.p, g.q, g.r):
            moved = act_tangent(represent(gen, g), pt)
            val = psi(cfg, moved)
            scale = max(abs(base_val[0]), abs(base_val[1]))
            congruent = max(congruent,
                            math.hypot(abs(val[0] - base_val[0]),
                                       abs(val[1] - base_val[1])) / scale)
    # separation of samples with distinct reduced base points
    reduced = [reduce_to_fundamental(g, pt.z)[0] for pt in pts]
    min_sep = math.inf
    distinct = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if abs(reduced[i] - reduced[j]) <= 1e-3:
                continue
            distinct += 1
            d = math.hypot(abs(projected[i].z1 - projected[j].z1),
                           abs(projected[i].z2 - projected[j].z2))
            min_sep = min(min_sep, d)
    passed = (max_sphere < _SPHERE_TOL and min_curve > 0.0
              and congruent < 1e-8 and min_sep > 1e-6)
    return SphereSectionReport(samples=samples, max_sphere_error=max_sphere,
                               min_curve_abs=min_curve,
                               congruent_max_diff=congruent,
                               distinct_pairs=distinct,
                               min_separation=min_sep, passed=passed)


def central_period_gap(cfg: KnotMapConfig, pt: TangentPoint) -> float:
    """|psi(c~^r pt) - psi(pt)| relative; c~^r lies in the character
    kernel, so Psi cannot see it."""
    g = cfg.group
    lift = represent(word(("a", g.p * g.r)), g)
    moved = act_tangent(lift, pt)
    v1 = psi(cfg, pt)
    v2 = psi(cfg, moved)
    scale = max(abs(v1[0]), abs(v1[1]))
    return math.hypot(abs(v2[0] - v1[0]), abs(v2[1] - v1[1])) / scale
