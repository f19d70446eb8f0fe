"""The invariant uniformizer theta: H^2 -> C for a (p, q, infinity)
triangle group, normalized by theta(a) = 0 (multiplicity p), theta(b) = 1
(multiplicity q) and a simple pole at the cusp.

Construction: the Schwarz map of the hypergeometric equation with
parameters aH = bH = (1 - 1/p - 1/q)/2, cH = 1 - 1/p maps the upper half
t-plane onto a curvilinear triangle with angles pi/p, pi/q, 0.  A fixed
Moebius normalizer N sends its vertices to a, b, infinity; the composite
s = N o (y2/y1) is the inverse of theta on the base triangle.  theta
itself is computed by damped Newton inversion of s (seeded from a cached
anchor set that grows by continuation), by Schwarz reflection across the
mirror line x = -cos(pi/p) on the other half of D1, and from a fitted
Fourier-Laurent series in u = exp(2 pi i z / lambda) high in the cusp.

Branch conventions: all fractional powers are principal, with real
arguments t < 0 or t > 1 nudged to the upper side of the cut (Arg t = +pi
for t < 0, Arg(1-t) = -pi for t > 1), matching the limit from the upper
half t-plane.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

import mpmath

from .errors import ConvergenceError, DomainError
from .triangle import TriangleGroupData, reduce_to_fundamental, word_matrix
from .words import GroupWord

_SERIES_RADIUS = 0.7
_WIDE_RADIUS = 0.84
_LOG_MIN = 1.12
_MAX_TERMS = 600
_EULER_GAMMA = 0.5772156649015329
_NEWTON_TOL = 1e-12
_NEWTON_NEAR = 3e-8
_NEWTON_ITERS = 50
_VERTEX_TOL = 1e-9
_SINGULAR_GUARD = 1e-30
_LOCAL_FIT_W = 0.45
_LOCAL_USE_W = 0.12
_LOCAL_ORDER = 14
_LOCAL_SAMPLES = 64
_CUSP_ORDER = 10  # keep Laurent coefficients c_k for k = -1 .. 10
_FIT_SAMPLES = 256


def _nudge(t: complex) -> complex:
    if t.imag == 0.0 and (t.real < 0.0 or t.real > 1.0):
        return complex(t.real, 1e-300)
    return t


def _gauss_series(a: float, b: float, c: float, t: complex) -> complex:
    term = 1.0 + 0j
    total = term
    for n in range(_MAX_TERMS):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * t
        total += term
        if abs(term) <= 1e-17 * abs(total):
            return total
    raise ConvergenceError("hypergeometric series did not converge at t=%r" % (t,))


_DIGAMMA_CACHE: dict[float, float] = {}


def _digamma(x: float) -> float:
    got = _DIGAMMA_CACHE.get(x)
    if got is None:
        got = _DIGAMMA_CACHE[x] = float(mpmath.digamma(x))
    return got


def _log_connection(a: float, c: float, t: complex) -> complex:
    """2F1(a, a; c; t) for |t| > 1 in the equal-parameter (logarithmic)
    case, assuming c - a - n is never a nonpositive integer:

        G(c)/(G(a) G(c-a)) (-t)^-a sum_k (a)_k (a-c+1)_k / (k!)^2 t^-k
            * (log(-t) + 2 psi(k+1) - psi(a+k) - psi(c-a-k))
    """
    lead = math.gamma(c) / (math.gamma(a) * math.gamma(c - a)) * (-t) ** (-a)
    lg = cmath.log(-t)
    h = -2.0 * _EULER_GAMMA - _digamma(a) - _digamma(c - a)
    term = 1.0 + 0j
    total = term * (lg + h)
    for n in range(_MAX_TERMS):
        h += 2.0 / (n + 1.0) - 1.0 / (a + n) + 1.0 / (c - a - n - 1.0)
        term *= (a + n) * (a - c + 1.0 + n) / ((n + 1.0) ** 2 * t)
        piece = term * (lg + h)
        total += piece
        if abs(piece) <= 1e-17 * abs(total):
            return lead * total
    raise ConvergenceError("logarithmic 2F1 series did not converge at t=%r" % (t,))


def _taylor_pair(a: float, b: float, c: float, zeta: complex,
                 f0: complex, f1: complex, h: complex) -> tuple[complex, complex]:
    """(F, F') at zeta + h given (F, F') at the ordinary point zeta, by
    the Taylor recursion of the hypergeometric equation
    t(1-t) F'' + (c - (a+b+1) t) F' - ab F = 0."""
    A = zeta * (1.0 - zeta)
    Ap = 1.0 - 2.0 * zeta
    B = c - (a + b + 1.0) * zeta
    ck, ck1 = f0, f1
    F = f0
    Fp = f1
    pw = 1.0 + 0j
    for k in range(_MAX_TERMS):
        pw *= h
        ck2 = (-(k + 1.0) * (Ap * k + B) * ck1 + (k + a) * (k + b) * ck) \
            / (A * (k + 2.0) * (k + 1.0))
        term_f = ck1 * pw
        term_fp = (k + 2.0) * ck2 * pw
        F += term_f
        Fp += term_fp
        if abs(term_f) <= 1e-17 * abs(F) and abs(term_fp) <= 1e-17 * abs(Fp):
            return F, Fp
        ck, ck1 = ck1, ck2
    raise ConvergenceError("Taylor continuation stalled at zeta=%r h=%r"
                           % (zeta, h))


def _segment_distance(p0: complex, p1: complex, q: complex) -> float:
    d = p1 - p0
    den = d.real * d.real + d.imag * d.imag
    if den == 0.0:
        return abs(q - p0)
    u = ((q - p0).real * d.real + (q - p0).imag * d.imag) / den
    return abs(p0 + min(1.0, max(0.0, u)) * d - q)


def _taylor_continued(a: float, b: float, c: float, t: complex) -> complex:
    """2F1 by stepping the hypergeometric equation along a path from the
    series disc out to t; covers the crossover annulus around |t| = 1
    where none of the fractional-linear connections converge quickly."""
    zeta = 0.65 * t / abs(t)
    f = _gauss_series(a, b, c, zeta)
    fp = a * b / c * _gauss_series(a + 1.0, b + 1.0, c + 1.0, zeta)
    stops = []
    if _segment_distance(zeta, t, 1.0) < 0.32:
        # detour over the singular point, on the side of the cut t lies on
        stops.append(complex(1.0, 0.5 if t.imag >= 0.0 else -0.5))
    stops.append(t)
    for goal in stops:
        for _ in range(64):
            d = goal - zeta
            room = 0.3 * min(abs(zeta), abs(1.0 - zeta))
            if abs(d) <= room:
                f, fp = _taylor_pair(a, b, c, zeta, f, fp, d)
                zeta = goal
                break
            h = d / abs(d) * room
            f, fp = _taylor_pair(a, b, c, zeta, f, fp, h)
            zeta += h
        else:
            raise ConvergenceError("Taylor continuation did not reach t=%r"
                                   % (t,))
    return f


def hyp2f1(a: float, b: float, c: float, t: complex) -> complex:
    """Gauss 2F1 on the principal branch.  Direct series for |t| <= 0.7,
    Pfaff and the 1-t connection where they converge, the logarithmic 1/t
    expansion for large |t| when a = b, and Taylor continuation of the
    hypergeometric equation in the remaining annulus around e^(+-i pi/3)."""
    if c <= 0 and c == int(c):
        raise DomainError("c must not be a nonpositive integer")
    t = _nudge(complex(t))
    if abs(t) <= _SERIES_RADIUS:
        return _gauss_series(a, b, c, t)
    w = t / (t - 1.0)
    if abs(w) <= _SERIES_RADIUS:
        return (1.0 - t) ** (-a) * _gauss_series(a, c - b, c, w)
    s = c - a - b
    split = abs(s - round(s)) > 1e-9
    if abs(1.0 - t) <= _SERIES_RADIUS and split:
        g = math.gamma
        c1 = g(c) * g(s) / (g(c - a) * g(c - b))
        c2 = g(c) * g(-s) / (g(a) * g(b))
        return (c1 * _gauss_series(a, b, 1.0 - s, 1.0 - t)
                + c2 * (1.0 - t) ** s * _gauss_series(c - a, c - b, 1.0 + s, 1.0 - t))
    if a == b and abs(t) >= _LOG_MIN:
        ca = c - a
        if abs(ca - round(ca)) > 1e-9:
            return _log_connection(a, c, t)
    if abs(t) <= _WIDE_RADIUS:
        return _gauss_series(a, b, c, t)
    if abs(w) <= _WIDE_RADIUS:
        return (1.0 - t) ** (-a) * _gauss_series(a, c - b, c, w)
    if abs(1.0 - t) <= _WIDE_RADIUS and split:
        g = math.gamma
        c1 = g(c) * g(s) / (g(c - a) * g(c - b))
        c2 = g(c) * g(-s) / (g(a) * g(b))
        return (c1 * _gauss_series(a, b, 1.0 - s, 1.0 - t)
                + c2 * (1.0 - t) ** s * _gauss_series(c - a, c - b, 1.0 + s, 1.0 - t))
    return _taylor_continued(a, b, c, t)


@dataclass(frozen=True)
class ThetaData:
    value: complex
    derivative: complex
    reduced: complex
    word: GroupWord


class SchwarzMap:
    """Forward map s (inverse of theta on the base triangle) and its
    Newton inversion, for one group.  Immutable parameters; the anchor
    cache and the cusp fit are lazily built behind a lock and only speed
    things up."""

    def __init__(self, group: TriangleGroupData):
        p, q = group.p, group.q
        self.group = group
        self.aH = (1.0 - 1.0 / p - 1.0 / q) / 2.0
        self.bH = self.aH
        self.cH = 1.0 - 1.0 / p
        g = math.gamma
        aH, cH = self.aH, self.cH
        self.rho = (g(2 - cH) * g(cH - aH) ** 2) / (g(cH) * g(1 - aH) ** 2)
        # third vertex: modulus from the logarithmic connection at infinity
        # (equal exponents), direction e^{i pi/p} from the t^{1/p} cone at 0
        self.v = cmath.exp(1j * math.pi / p) * (
            g(2 - cH) * g(aH) * g(cH - aH) / (g(cH) * g(aH + 1 - cH) * g(1 - aH)))
        a, b = group.vertex_a, group.vertex_b
        rho, v = self.rho, self.v
        # Moebius sending (0, rho, v) to (a, b, infinity)
        self.nA = (b - a) * (rho - v) + a * rho
        self.nB = -a * v * rho
        self.nC = rho + 0j
        self.nD = -v * rho
        self.nDet = self.nA * self.nD - self.nB * self.nC
        self.y_fit = 1.2 * group.lam
        self.y_switch = 1.35 * group.lam
        self._lock = threading.RLock()
        self._anchors: list[tuple[complex, complex]] = []
        self._buckets: dict[tuple[int, int], list[int]] = {}
        self._grid_ready = False
        self._cusp: list[complex] | None = None
        self._vertex: dict[str, tuple[complex, int, list[complex]]] = {}
        self._vertex_building: set[str] = set()

    # -- forward direction ---------------------------------------------

    def _forward(self, t: complex) -> tuple[complex, complex]:
        """(s(t), s'(t)) for Im t >= 0, unguarded."""
        t = _nudge(complex(t))
        aH, bH, cH = self.aH, self.bH, self.cH
        y1 = hyp2f1(aH, bH, cH, t)
        y2 = t ** (1.0 - cH) * hyp2f1(aH - cH + 1, bH - cH + 1, 2.0 - cH, t)
        s0 = y2 / y1
        wr = (1.0 - cH) * t ** (-cH) * (1.0 - t) ** (cH - aH - bH - 1.0)
        s0p = wr / (y1 * y1)
        den = self.nC * s0 + self.nD
        s = (self.nA * s0 + self.nB) / den
        sp = self.nDet / (den * den) * s0p
        return s, sp

    def forward(self, t: complex) -> complex:
        """s(t).  For Im t < 0 the map is extended by the reflection
        matching the mirror half of D1: s(conj t) mirrored across
        x = -cos(pi/p)."""
        t = complex(t)
        if t.imag < 0:
            return -2 * self.group.cp - self.forward(t.conjugate()).conjugate()
        if abs(t) < _SINGULAR_GUARD or abs(t - 1) < _SINGULAR_GUARD:
            raise DomainError("t = %r is within %g of a hypergeometric "
                              "singular point; the value would lose precision"
                              % (t, _SINGULAR_GUARD))
        return self._forward(t)[0]

    def forward_prime(self, t: complex) -> complex:
        t = complex(t)
        if t.imag < 0:
            return self.forward_prime(t.conjugate()).conjugate()
        if abs(t) < _SINGULAR_GUARD or abs(t - 1) < _SINGULAR_GUARD:
            raise DomainError("t = %r is within %g of a singular point"
                              % (t, _SINGULAR_GUARD))
        return self._forward(t)[1]

    # -- anchor cache ----------------------------------------------------

    @staticmethod
    def _bucket_key(z: complex) -> tuple[int, int]:
        return (round(z.real / 0.25), round(math.log(z.imag) / 0.35))

    def _add_anchor(self, t: complex, z: complex):
        with self._lock:
            self._anchors.append((t, z))
            self._buckets.setdefault(self._bucket_key(z), []).append(
                len(self._anchors) - 1)

    def _nearest_anchor(self, z: complex) -> tuple[complex, complex]:
        kx, ky = self._bucket_key(z)
        best, best_d = None, math.inf
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for idx in self._buckets.get((kx + dx, ky + dy), ()):
                    t0, z0 = self._anchors[idx]
                    d = abs(z - z0)
                    if d < best_d:
                        best, best_d = (t0, z0), d
        if best is not None:
            return best
        # no nearby bucket: fall back to a global scan in the log chart
        ly = math.log(z.imag)
        for t0, z0 in self._anchors:
            d = (z.real - z0.real) ** 2 + (ly - math.log(z0.imag)) ** 2
            if d < best_d:
                best, best_d = (t0, z0), d
        return best

    def _ensure_grid(self):
        with self._lock:
            if self._grid_ready:
                return
            self._grid_ready = True  # set first: _forward never recurses here
            candidates: list[complex] = []
            radii = [10.0 ** (-3 + 6 * k / 24) for k in range(25)]
            for rr in radii:
                for m in range(1, 14):
                    candidates.append(rr * cmath.exp(1j * math.pi * m / 14))
                candidates.append(complex(rr, 0.0))
                candidates.append(complex(-rr, 0.0))
            candidates.extend(complex(0.05 + 0.09 * k, 0.0) for k in range(11))
            for t in candidates:
                try:
                    z, _ = self._forward(t)
                except (ConvergenceError, OverflowError, ZeroDivisionError):
                    continue
                if z.imag > 1e-12 and abs(z) < 1e6:
                    self._add_anchor(t, z)
            if not self._anchors:
                raise ConvergenceError("anchor grid construction failed")

    # -- inversion -------------------------------------------------------

    @staticmethod
    def _clamp_t(t: complex) -> complex:
        """Newton iterates may dip below the real axis only across the
        (0, 1) segment, which is analytic; below the cuts the principal
        evaluation would continue onto the mirror sheet and converge to
        a false preimage."""
        if t.imag < 0 and not 0.0 < t.real < 1.0:
            return complex(t.real, 0.0)
        return t

    def _newton(self, z: complex, t0: complex) -> tuple[complex, complex] | None:
        t = self._clamp_t(complex(t0))
        best: tuple[float, complex, complex] | None = None
        for _ in range(_NEWTON_ITERS):
            try:
                s, sp = self._forward(t)
            except (ConvergenceError, DomainError, OverflowError,
                    ZeroDivisionError):
                break
            err = s - z
            if abs(err) <= _NEWTON_TOL * (1.0 + abs(z)):
                return t, sp
            if best is None or abs(err) < best[0]:
                best = (abs(err), t, sp)
            if sp == 0:
                break
            step = err / sp
            # damping: do not let one step overshoot the scale of t
            for _ in range(60):
                t_new = self._clamp_t(t - step)
                try:
                    s_new, _ = self._forward(t_new)
                except (ConvergenceError, DomainError, OverflowError,
                        ZeroDivisionError):
                    step /= 2
                    continue
                if abs(s_new - z) < abs(err):
                    break
                step /= 2
                if abs(step) < 1e-18 * (1 + abs(t)):
                    t_new = t
                    break
            else:
                t_new = t
            if t_new == t:
                break
            t = t_new
        # near the triangle vertices the forward map is evaluated with a
        # small absolute noise floor, so a fully stalled iterate within
        # _NEWTON_NEAR of the target is still the correct preimage
        if best is not None and best[0] <= _NEWTON_NEAR * (1.0 + abs(z)):
            return best[1], best[2]
        return None

    def _patch_region(self, z: complex) -> tuple[str, complex, float, float] | None:
        """(tag, vertex, shift, |w|) for the nearest vertex copy when z is
        within the patch seeding range."""
        g = self.group
        best = None
        for tag, v, shift in (("a", g.vertex_a, 0.0),
                              ("b", g.vertex_b, 0.0),
                              ("b", g.vertex_b, g.lam)):
            if tag in self._vertex_building:
                continue
            zz = z + shift
            aw = abs((zz - v) / (zz - v.conjugate()))
            if aw <= 2.5 * _LOCAL_USE_W and (best is None or aw < best[3]):
                best = (tag, v, shift, aw)
        return best

    def _patch_invert(self, z: complex) -> tuple[complex, complex] | None:
        """Inside a patch the series IS the inversion: t pinches to the
        vertex value faster than double precision can resolve, so Newton
        through t is hopeless there and unnecessary."""
        got = self._patch_region(z)
        if got is None or got[3] > _LOCAL_USE_W:
            return None
        tag, v, shift, aw = got
        th, dth = self._vertex_value(tag, z + shift)
        if dth == 0:
            raise DomainError("the uniformizer derivative vanishes at the "
                              "vertices; no finite inversion data at %r" % (z,))
        return th, 1.0 / dth

    def _push_out_of_patch(self, z: complex) -> complex:
        """Move z radially (in the vertex disc coordinate) to just outside
        the patch trust region; midpoint anchors inside it are useless
        because the patch already answers there without anchoring."""
        got = self._patch_region(z)
        if got is None or got[3] >= 1.5 * _LOCAL_USE_W:
            return z
        tag, v, shift, aw = got
        zz = z + shift
        w = (zz - v) / (zz - v.conjugate())
        rho = 1.5 * _LOCAL_USE_W
        w = complex(rho) if w == 0 else w * (rho / abs(w))
        zz = (v - w * v.conjugate()) / (1 - w)
        return complex(zz.real - shift, zz.imag)

    def invert(self, z: complex, _depth: int = 0) -> tuple[complex, complex]:
        """Solve s(t) = z with Im t >= 0; returns (t, s'(t)).  z must lie
        in the closed base triangle side x >= -cos(pi/p).  Failures fall
        back to continuation: solve a midpoint first, then retry.  Near
        the triangle vertices the forward map is evaluated with an
        absolute noise floor, so the residual there is noise limited."""
        if z.imag <= 0:
            raise DomainError("can only invert at points in the upper half plane")
        direct = self._patch_invert(z)
        if direct is not None:
            return direct
        region = self._patch_region(z)
        if region is not None:
            tag, _, shift, _ = region
            got = self._newton(z, self._vertex_value(tag, z + shift)[0])
            if got is not None:
                t, sp = got
                self._add_anchor(t, z)
                return t, sp
        self._ensure_grid()
        t0, z0 = self._nearest_anchor(z)
        got = self._newton(z, t0)
        if got is not None:
            t, sp = got
            self._add_anchor(t, z)
            return t, sp
        if _depth >= 48:
            raise ConvergenceError(
                "Newton inversion failed after %d iterations at tolerance %g: "
                "target z=%r, nearest seed t0=%r (maps to %r)"
                % (_NEWTON_ITERS, _NEWTON_TOL, z, t0, z0))
        # midpoint in the (x, log y) chart between the best seed and the goal
        zm = self._snap_to_delta(complex((z.real + z0.real) / 2,
                                         math.sqrt(z.imag * z0.imag)))
        zm = self._push_out_of_patch(zm)
        self.invert(zm, _depth + 1)
        return self.invert(z, _depth + 1)

    # -- cusp regime -----------------------------------------------------

    def _ensure_cusp(self):
        with self._lock:
            if self._cusp is not None:
                return
            g = self.group
            lam = g.lam
            n = _FIT_SAMPLES
            x_l = -2 * g.cp - g.cq
            vals = []
            for j in range(n):
                z = complex(x_l + j * lam / n, self.y_fit)
                vals.append(self._value_below_switch(z)[0])
            # theta = sum c_k u^k; on the fit circle u = u0 * rho_y * w^j,
            # so the DFT bin k holds n * c_k * (u0 rho_y)^k
            u0 = cmath.exp(2j * math.pi * x_l / lam)
            rho_y = math.exp(-2 * math.pi * self.y_fit / lam)
            coeffs = []
            for k in range(-1, _CUSP_ORDER + 1):
                acc = 0j
                for j in range(n):
                    acc += vals[j] * cmath.exp(-2j * math.pi * j * k / n)
                coeffs.append(acc / (n * (u0 * rho_y) ** k * 1.0))
            self._cusp = coeffs

    def _cusp_eval(self, z: complex) -> tuple[complex, complex]:
        self._ensure_cusp()
        lam = self.group.lam
        u = cmath.exp(2j * math.pi * z / lam)
        if u == 0:
            # the leading u^-1 term exceeds float range
            raise OverflowError("theta overflows at %r" % (z,))
        th = 0j
        dth = 0j
        for k in range(-1, _CUSP_ORDER + 1):
            c = self._cusp[k + 1]
            uk = u ** k
            th += c * uk
            dth += k * c * uk
        return th, dth * 2j * math.pi / lam

    def theta_log(self, z: complex) -> tuple[complex, complex, complex]:
        """(log theta, log(theta - 1), log theta') on one fixed branch,
        analytic on the whole region above the cusp switch line: none of
        the three has a zero there, and the region is simply connected,
        so each log is single valued up to the one overall 2 pi k chosen
        here.  Stays finite where theta itself overflows."""
        if z.imag < self.y_switch:
            raise DomainError("the log form is only defined above the "
                              "cusp switch line, got %r" % (z,))
        self._ensure_cusp()
        lam = self.group.lam
        cm = self._cusp[0]
        ell = 2j * math.pi * z / lam
        u = cmath.exp(ell) if ell.real > -700.0 else 0j
        s_th = 0j
        s_dth = 0j
        upow = u
        for k in range(0, _CUSP_ORDER + 1):
            ck = self._cusp[k + 1] / cm
            s_th += ck * upow
            s_dth -= k * ck * upow
            upow *= u
        base = cmath.log(cm) - ell
        lt = base + cmath.log(1.0 + s_th)
        lt1 = base + cmath.log(1.0 + s_th - u / cm)
        ltp = base + cmath.log(-2j * math.pi / lam) + cmath.log(1.0 + s_dth)
        return lt, lt1, ltp

    # -- assembled value on reduced points --------------------------------

    # -- vertex patches ----------------------------------------------------

    def _ensure_vertex(self, tag: str):
        """Fit theta near a vertex as a series in u = w^m, where
        w = (z - v)/(z - conj v) and m is the vertex order: theta is
        invariant under the elliptic rotation there, and it is analytic
        on all of H^2, so the series holds on any |w| < 1 circle."""
        with self._lock:
            if tag in self._vertex:
                return
            self._vertex_building.add(tag)
            try:
                g = self.group
                v = g.vertex_a if tag == "a" else g.vertex_b
                m = g.p if tag == "a" else g.q
                n = _LOCAL_SAMPLES
                u_fit = _LOCAL_FIT_W ** m
                us = [u_fit * cmath.exp(2j * math.pi * j / n) for j in range(n)]
                vals = []
                for u in us:
                    w = u ** (1.0 / m)
                    zj = (v - w * v.conjugate()) / (1.0 - w)
                    vals.append(theta_map(g, zj).value)
                coeffs = []
                for k in range(_LOCAL_ORDER + 1):
                    acc = 0j
                    for j in range(n):
                        acc += vals[j] * cmath.exp(-2j * math.pi * j * k / n)
                    coeffs.append(acc / (n * u_fit ** k))
                self._vertex[tag] = (v, m, coeffs)
            finally:
                self._vertex_building.discard(tag)

    def _vertex_value(self, tag: str, z: complex) -> tuple[complex, complex]:
        self._ensure_vertex(tag)
        v, m, coeffs = self._vertex[tag]
        w = (z - v) / (z - v.conjugate())
        u = w ** m
        th = coeffs[0]
        da = 0j
        uk = 1.0 + 0j
        for k in range(1, _LOCAL_ORDER + 1):
            da += k * coeffs[k] * uk
            uk *= u
            th += coeffs[k] * uk
        dw = (v - v.conjugate()) / (z - v.conjugate()) ** 2
        return th, da * m * w ** (m - 1) * dw

    def _vertex_eval(self, z: complex) -> tuple[complex, complex] | None:
        """Patch values near the vertex copies on the folded strip, or
        None away from them.  The patches carry the full accuracy of the
        series fit; the Newton route loses the derivative near the
        vertices because t is critical there."""
        g = self.group
        for tag, v, shift in (("a", g.vertex_a, 0.0),
                              ("b", g.vertex_b, 0.0),
                              ("b", g.vertex_b, g.lam)):
            zz = z + shift
            if abs(zz - v) <= _VERTEX_TOL:
                return (0j, 0j) if tag == "a" else (1.0 + 0j, 0j)
            if tag in self._vertex_building:
                continue
            w = (zz - v) / (zz - v.conjugate())
            if abs(w) <= _LOCAL_USE_W:
                return self._vertex_value(tag, zz)
        return None

    # -- assembled value on reduced points --------------------------------

    def _snap_to_delta(self, z: complex) -> complex:
        """Nudge near-boundary dust into the closed base triangle; Newton
        handles a sliver across the unit circle arc, but targets beyond
        the straight edges would sit across the forward branch cuts."""
        g = self.group
        for _ in range(2):
            z = complex(min(max(z.real, -g.cp), g.cq), z.imag)
            r = abs(z)
            if r < 1.0:
                z /= r
        return z

    def _delta_value(self, z: complex) -> tuple[complex, complex]:
        """(theta, theta') on the triangle side x >= -cos(pi/p).
        Reduction leaves at most ~1e-12 of boundary dust after the strip
        fold, well under the evaluation tolerance."""
        return self._delta_value_clean(self._snap_to_delta(z))

    def _delta_value_clean(self, z: complex) -> tuple[complex, complex]:
        t, sp = self.invert(z)
        return t, 1.0 / sp

    def _value_below_switch(self, z: complex) -> tuple[complex, complex]:
        g = self.group
        # theta is invariant under z -> z + lambda with unit derivative,
        # so fold strip overshoot (reduction can exceed a closed edge by
        # its tolerance band) back exactly
        for _ in range(3):
            if z.real > g.cq:
                z -= g.lam
            elif z.real < -2 * g.cp - g.cq:
                z += g.lam
            else:
                break
        got = self._vertex_eval(z)
        if got is not None:
            return got
        if z.real >= -g.cp - 1e-12:
            return self._delta_value(z)
        zm = -2 * g.cp - z.conjugate()
        t, dt = self._delta_value(zm)
        return t.conjugate(), -dt.conjugate()

    def value_at_reduced(self, z: complex) -> tuple[complex, complex]:
        """(theta(z), theta'(z)) for z in (a neighborhood of) D1."""
        if z.imag >= self.y_switch:
            return self._cusp_eval(z)
        return self._value_below_switch(z)


_SCHWARZ_CACHE: dict[tuple[int, int], SchwarzMap] = {}
_CACHE_LOCK = threading.Lock()


def schwarz_map_for(group: TriangleGroupData) -> SchwarzMap:
    key = (group.p, group.q)
    with _CACHE_LOCK:
        got = _SCHWARZ_CACHE.get(key)
        if got is None:
            got = SchwarzMap(group)
            _SCHWARZ_CACHE[key] = got
        return got


def theta_map(group: TriangleGroupData, z: complex) -> ThetaData:
    """Full evaluation: reduce z to D1, evaluate there, pull the
    derivative back along the reducing word w (w(reduced) = z) by
    theta'(z) = theta'(reduced) / w'(reduced)."""
    s = schwarz_map_for(group)
    z_red, w = reduce_to_fundamental(group, complex(z))
    th, dth = s.value_at_reduced(z_red)
    if w.letters:
        dth = dth / word_matrix(group, w).derivative(z_red)
    return ThetaData(value=th, derivative=dth, reduced=z_red, word=w)


def theta(group: TriangleGroupData, z: complex) -> complex:
    return theta_map(group, z).value


def theta_prime(group: TriangleGroupData, z: complex) -> complex:
    return theta_map(group, z).derivative
