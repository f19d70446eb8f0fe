"""Moebius transformations of H^2 and the universal cover of PSL(2,R).

An element of the universal cover is modeled as a pair (mat, m): a signed
unimodular 2x2 real matrix together with an integer branch for the
continuous argument

    phi(z) = Arg(c z + d) + 2 pi m,     Arg in (-pi, pi],

which is continuous on the upper half plane: c z + d only meets the
negative real axis when c = 0 and d < 0, and then phi is constant.  The
lifted derivative at z is the element of the universal cover of C^* with
log-modulus -2 log|c z + d| and argument -2 phi(z).  The center generator
(counter-clockwise rotation by 2 pi in every fiber) is (-I, -1) in this
chart; that identity is asserted in the tests, not assumed here.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from .errors import BranchError, DomainError

_DET_TOL = 1e-12
_TWO_PI = 2.0 * math.pi

# Branch rounding tolerance for lift composition: analytically the residual
# is an exact multiple of pi, the tolerance only absorbs float noise.
_BRANCH_TOL = 1e-6

_BASE_POINT = 1j


@dataclass(frozen=True)
class Moebius:
    """A real 2x2 matrix with determinant 1. The sign is retained (it is
    relevant lift data); the PSL2 action ignores it."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        det = self.a * self.d - self.b * self.c
        if det <= 0:
            raise DomainError("matrix must have positive determinant, got det=%r" % det)
        if abs(det - 1.0) > 1e-9:
            raise DomainError("matrix is not unimodular: det=%r" % det)
        if abs(det - 1.0) > _DET_TOL:
            s = 1.0 / math.sqrt(det)
            object.__setattr__(self, "a", self.a * s)
            object.__setattr__(self, "b", self.b * s)
            object.__setattr__(self, "c", self.c * s)
            object.__setattr__(self, "d", self.d * s)

    def apply(self, z: complex) -> complex:
        if z.imag <= 0:
            raise DomainError("point %r is not in the upper half plane" % (z,))
        return (self.a * z + self.b) / (self.c * z + self.d)

    def derivative(self, z: complex) -> complex:
        w = self.c * z + self.d
        return 1.0 / (w * w)

    def compose(self, other: "Moebius") -> "Moebius":
        return Moebius(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "Moebius":
        return Moebius(self.d, -self.b, -self.c, self.a)

    def neg(self) -> "Moebius":
        return Moebius(-self.a, -self.b, -self.c, -self.d)

    @property
    def trace(self) -> float:
        return self.a + self.d

    def is_identity(self, tol: float = 1e-12) -> bool:
        """True for +-identity (the trivial element of PSL2)."""
        return (abs(self.b) <= tol and abs(self.c) <= tol
                and abs(self.a - self.d) <= tol)


IDENTITY = Moebius(1.0, 0.0, 0.0, 1.0)


@dataclass(frozen=True)
class MoebiusClass:
    """Conjugacy class data: kind is 'elliptic', 'parabolic' or 'hyperbolic'.
    For elliptic: rotation angle in (0, 2pi) and the fixed point in H^2.
    For parabolic: the fixed point on the boundary (math.inf when c = 0)."""

    kind: str
    angle: float | None = None
    fixed_point: complex | float | None = None


def classify(g: Moebius) -> MoebiusClass:
    if g.is_identity(1e-12):
        raise DomainError("cannot classify +-identity")
    tr = abs(g.trace)
    if tr < 2.0 - 1e-10:
        # elliptic: fixed point is the upper root of c z^2 + (d - a) z - b = 0
        disc = math.sqrt(4.0 - tr * tr)
        z0 = complex((g.a - g.d) / (2.0 * g.c), disc / (2.0 * abs(g.c)))
        # rotation angle at the fixed point = argument of the derivative there
        ang = (-2.0 * cmath.phase(g.c * z0 + g.d)) % _TWO_PI
        return MoebiusClass("elliptic", angle=ang, fixed_point=z0)
    if tr <= 2.0 + 1e-10:
        if abs(g.c) < 1e-14:
            return MoebiusClass("parabolic", fixed_point=math.inf)
        return MoebiusClass("parabolic", fixed_point=complex((g.a - g.d) / (2.0 * g.c), 0.0))
    return MoebiusClass("hyperbolic")


@dataclass(frozen=True)
class LogNonzero:
    """An element of the universal cover of C^*: a log-modulus and an
    unbounded argument. Projection to C^* is exp(log_mod + i arg)."""

    log_mod: float
    arg: float

    def mul(self, other: "LogNonzero") -> "LogNonzero":
        return LogNonzero(self.log_mod + other.log_mod, self.arg + other.arg)

    def inv(self) -> "LogNonzero":
        return LogNonzero(-self.log_mod, -self.arg)

    def power(self, k) -> "LogNonzero":
        k = float(k)
        return LogNonzero(k * self.log_mod, k * self.arg)

    @property
    def value(self) -> complex:
        return cmath.exp(complex(self.log_mod, self.arg))


UNIT_LOG = LogNonzero(0.0, 0.0)


@dataclass(frozen=True)
class TangentPoint:
    """A point of H^2 x (universal cover of C^*)."""

    z: complex
    w: LogNonzero

    def __post_init__(self):
        if self.z.imag <= 0:
            raise DomainError("tangent point %r is not over the upper half plane" % (self.z,))


BASE_TANGENT = TangentPoint(_BASE_POINT, UNIT_LOG)


@dataclass(frozen=True)
class LiftedMoebius:
    mat: Moebius
    m: int

    def phi(self, z: complex) -> float:
        return cmath.phase(complex(self.mat.c) * z + self.mat.d) + _TWO_PI * self.m

    def apply(self, z: complex) -> complex:
        return self.mat.apply(z)

    def lifted_derivative(self, z: complex) -> LogNonzero:
        if z.imag <= 0:
            raise DomainError("point %r is not in the upper half plane" % (z,))
        w = self.mat.c * z + self.mat.d
        return LogNonzero(-2.0 * math.log(abs(w)), -2.0 * self.phi(z))


IDENTITY_LIFT = LiftedMoebius(IDENTITY, 0)

# Center generator: rotation by +2 pi in every fiber.
CENTER_LIFT = LiftedMoebius(Moebius(-1.0, 0.0, 0.0, -1.0), -1)


def _solve_branch(mat: Moebius, target: float) -> LiftedMoebius:
    """Find the lift of +-mat whose phi at the base point i equals target.
    The difference target - Arg(c i + d) is an exact multiple of pi up to
    float noise; an even multiple keeps the sign of mat, an odd one flips it."""
    w = complex(mat.c) * _BASE_POINT + mat.d
    a0 = cmath.phase(w)
    k = round((target - a0) / math.pi)
    if abs(target - a0 - k * math.pi) > _BRANCH_TOL:
        raise BranchError(
            "branch residual %.3e exceeds tolerance" % abs(target - a0 - k * math.pi))
    if k % 2 == 0:
        return LiftedMoebius(mat, k // 2)
    mat = mat.neg()
    a1 = cmath.phase(-w)
    m = round((target - a1) / _TWO_PI)
    if abs(target - a1 - m * _TWO_PI) > _BRANCH_TOL:
        raise BranchError("branch residual after sign flip exceeds tolerance")
    return LiftedMoebius(mat, m)


def lift_compose(g2: LiftedMoebius, g1: LiftedMoebius) -> LiftedMoebius:
    """The unique lift of the matrix product with phi(z) = phi2(g1 z) + phi1(z)."""
    target = g2.phi(g1.apply(_BASE_POINT)) + g1.phi(_BASE_POINT)
    return _solve_branch(g2.mat.compose(g1.mat), target)


def lift_gap(g1: LiftedMoebius, g2: LiftedMoebius) -> tuple[float, float]:
    """(matrix deviation, phi deviation at the base point).  The (mat, m)
    representation is not unique: when c underflows across zero with d < 0
    the principal argument jumps by 2 pi and m compensates, so raw field
    comparison misidentifies equal elements.  Two representations of the
    same lift give a small matrix deviation after sign alignment and a phi
    gap near zero; a genuine branch slip shows up as a multiple of pi."""
    m1, m2 = g1.mat, g2.mat
    dot = m1.a * m2.a + m1.b * m2.b + m1.c * m2.c + m1.d * m2.d
    s = -1.0 if dot < 0 else 1.0
    dev = max(abs(m1.a - s * m2.a), abs(m1.b - s * m2.b),
              abs(m1.c - s * m2.c), abs(m1.d - s * m2.d))
    return dev, g1.phi(_BASE_POINT) - g2.phi(_BASE_POINT)


def lift_inverse(g: LiftedMoebius) -> LiftedMoebius:
    inv = g.mat.inverse()
    target = -g.phi(inv.apply(_BASE_POINT))
    return _solve_branch(inv, target)


def lift_power(g: LiftedMoebius, n: int) -> LiftedMoebius:
    if n < 0:
        return lift_power(lift_inverse(g), -n)
    out = IDENTITY_LIFT
    for _ in range(n):
        out = lift_compose(g, out)
    return out


def act_tangent(g: LiftedMoebius, pt: TangentPoint) -> TangentPoint:
    return TangentPoint(g.apply(pt.z), g.lifted_derivative(pt.z).mul(pt.w))
