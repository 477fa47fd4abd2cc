"""Unit-quaternion arithmetic for SU(2).

Group elements are unit quaternions w + x*i + y*j + z*k.  The matrix trace
of the corresponding SU(2) matrix is 2*w, the center is {1, -1}, and the
rotation angle of an element is arccos(w) in [0, pi].  Every constructor
renormalizes, so |norm - 1| stays below 1e-12 through arbitrarily long
chains of operations.

All values are immutable and all functions are pure; random sampling takes
an explicit numpy Generator.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

__all__ = [
    "SU2",
    "ONE",
    "MINUS_ONE",
    "I",
    "J",
    "K",
    "E1",
    "E2",
    "E3",
    "commutator",
    "exp_axis_angle",
    "exp_tangent",
    "geodesic",
    "geodesic_distance",
    "haar_random",
    "align_conjugator",
    "AlignmentError",
]


def _clamp(value: float, lo: float = -1.0, hi: float = 1.0) -> float:
    return lo if value < lo else hi if value > hi else value


class SU2:
    """An element of SU(2), stored as a renormalized unit quaternion."""

    __slots__ = ("w", "x", "y", "z")

    def __init__(self, w: float, x: float, y: float, z: float):
        n = math.sqrt(w * w + x * x + y * y + z * z)
        if not 0.5 < n < 2.0:
            raise ValueError(f"quaternion norm {n!r} too far from 1 to renormalize")
        self.w = w / n
        self.x = x / n
        self.y = y / n
        self.z = z / n

    # -- basic algebra ------------------------------------------------

    def __mul__(self, other: "SU2") -> "SU2":
        aw, ax, ay, az = self.w, self.x, self.y, self.z
        bw, bx, by, bz = other.w, other.x, other.y, other.z
        return SU2(
            aw * bw - ax * bx - ay * by - az * bz,
            aw * bx + ax * bw + ay * bz - az * by,
            aw * by - ax * bz + ay * bw + az * bx,
            aw * bz + ax * by - ay * bx + az * bw,
        )

    def inverse(self) -> "SU2":
        return SU2(self.w, -self.x, -self.y, -self.z)

    def __neg__(self) -> "SU2":
        return SU2(-self.w, -self.x, -self.y, -self.z)

    def conjugate_by(self, g: "SU2") -> "SU2":
        """g * self * g^-1."""
        return g * self * g.inverse()

    def power(self, k: int) -> "SU2":
        """Integer power by exact angle scaling (no multiplicative drift)."""
        vn = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if vn == 0.0:
            return ONE if (self.w > 0.0 or k % 2 == 0) else MINUS_ONE
        theta = math.atan2(vn, self.w)
        kt = k * theta
        s = math.sin(kt) / vn
        return SU2(math.cos(kt), s * self.x, s * self.y, s * self.z)

    # -- geometry -----------------------------------------------------

    @property
    def trace(self) -> float:
        return 2.0 * self.w

    def angle(self) -> float:
        """Rotation angle arccos(w), clamped into [0, pi]."""
        return math.acos(_clamp(self.w))

    def axis(self) -> tuple[float, float, float]:
        """Unit 3-vector direction of the imaginary part.

        Raises ValueError for the central elements +-1, whose axis is
        undefined.
        """
        vn = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if vn == 0.0:
            raise ValueError("central element has no axis")
        return (self.x / vn, self.y / vn, self.z / vn)

    def norm(self) -> float:
        return math.sqrt(self.w**2 + self.x**2 + self.y**2 + self.z**2)

    def dist(self, other: "SU2") -> float:
        """Euclidean norm of the 4-vector difference."""
        return math.sqrt(
            (self.w - other.w) ** 2
            + (self.x - other.x) ** 2
            + (self.y - other.y) ** 2
            + (self.z - other.z) ** 2
        )

    def dot(self, other: "SU2") -> float:
        return self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z

    def is_central(self, tol: float = 1e-9) -> bool:
        """True iff within `tol` (4-vector distance) of +1 or -1."""
        d = math.sqrt(self.x**2 + self.y**2 + self.z**2)
        return min(math.hypot(self.w - 1.0, d), math.hypot(self.w + 1.0, d)) < tol

    # -- conversions --------------------------------------------------

    def to_list(self) -> list[float]:
        return [self.w, self.x, self.y, self.z]

    @classmethod
    def from_seq(cls, seq: Sequence[float]) -> "SU2":
        if len(seq) != 4:
            raise ValueError(f"expected 4 components, got {len(seq)}")
        return cls(float(seq[0]), float(seq[1]), float(seq[2]), float(seq[3]))

    def __repr__(self) -> str:
        return f"SU2({self.w:+.6f}, {self.x:+.6f}, {self.y:+.6f}, {self.z:+.6f})"


ONE = SU2(1.0, 0.0, 0.0, 0.0)
MINUS_ONE = SU2(-1.0, 0.0, 0.0, 0.0)
I = SU2(0.0, 1.0, 0.0, 0.0)
J = SU2(0.0, 0.0, 1.0, 0.0)
K = SU2(0.0, 0.0, 0.0, 1.0)

E1 = (1.0, 0.0, 0.0)
E2 = (0.0, 1.0, 0.0)
E3 = (0.0, 0.0, 1.0)


def commutator(a: SU2, b: SU2) -> SU2:
    """a * b * a^-1 * b^-1."""
    return a * b * a.inverse() * b.inverse()


def exp_axis_angle(axis: Sequence[float], theta: float) -> SU2:
    """cos(theta) + sin(theta) * (axis . (i, j, k)) for a unit axis."""
    ax, ay, az = axis
    n = math.sqrt(ax * ax + ay * ay + az * az)
    if abs(n - 1.0) > 1e-9:
        raise ValueError(f"axis norm {n!r} is not 1")
    s = math.sin(theta)
    return SU2(math.cos(theta), s * ax / n, s * ay / n, s * az / n)


def exp_tangent(v: Sequence[float]) -> SU2:
    """Exponential of the pure quaternion with components v (any length)."""
    vx, vy, vz = v
    n = math.sqrt(vx * vx + vy * vy + vz * vz)
    if n == 0.0:
        return ONE
    s = math.sin(n) / n
    return SU2(math.cos(n), s * vx, s * vy, s * vz)


def geodesic(u: SU2, v: SU2, t: float) -> SU2:
    """Constant-speed shortest path on the unit 3-sphere.

    Antipodal endpoints are rejected: there is no preferred shortest path,
    and callers are expected to route around -1 explicitly.
    """
    d = _clamp(u.dot(v))
    if d < -1.0 + 1e-9:
        raise ValueError("geodesic between antipodal elements is not unique")
    omega = math.acos(d)
    if omega < 1e-9:
        # nearly identical endpoints: normalized linear interpolation
        return SU2(
            (1 - t) * u.w + t * v.w,
            (1 - t) * u.x + t * v.x,
            (1 - t) * u.y + t * v.y,
            (1 - t) * u.z + t * v.z,
        )
    so = math.sin(omega)
    cu = math.sin((1 - t) * omega) / so
    cv = math.sin(t * omega) / so
    return SU2(
        cu * u.w + cv * v.w,
        cu * u.x + cv * v.x,
        cu * u.y + cv * v.y,
        cu * u.z + cv * v.z,
    )


def geodesic_distance(u: SU2, v: SU2) -> float:
    """Arc length between u and v on the unit 3-sphere, in [0, pi]."""
    return math.acos(_clamp(u.dot(v)))


def haar_random(rng: np.random.Generator) -> SU2:
    """Uniform element of SU(2): a normalized 4-dimensional Gaussian."""
    while True:
        v = rng.standard_normal(4)
        n = math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2 + v[3] ** 2)
        if n > 1e-6:
            return SU2(v[0] / n, v[1] / n, v[2] / n, v[3] / n)


class AlignmentError(ValueError):
    """Raised when two elements cannot be conjugated onto each other."""


def _orthogonal_axis(a: tuple[float, float, float]) -> tuple[float, float, float]:
    # smallest-index coordinate axis closest to orthogonal, then projected
    dots = [abs(a[0]), abs(a[1]), abs(a[2])]
    i = dots.index(min(dots))
    e = [0.0, 0.0, 0.0]
    e[i] = 1.0
    d = a[i]
    v = (e[0] - d * a[0], e[1] - d * a[1], e[2] - d * a[2])
    n = math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
    return (v[0] / n, v[1] / n, v[2] / n)


def align_conjugator(c0: SU2, c1: SU2, trace_tol: float = 1e-9) -> SU2:
    """An element g with g * c0 * g^-1 = c1, for trace-equal c0, c1.

    Conjugation rotates the axis and preserves the angle, so the
    construction rotates axis(c0) onto axis(c1) about their cross product
    (for anti-parallel axes: by pi about a deterministic orthogonal axis).
    Raises AlignmentError when the traces differ beyond `trace_tol` or the
    resulting conjugation fails to land on c1 within 1e-10.
    """
    if abs(c0.trace - c1.trace) > trace_tol:
        raise AlignmentError(
            f"traces {c0.trace!r} and {c1.trace!r} differ beyond {trace_tol}"
        )
    if c0.dist(c1) < 1e-12:
        return ONE
    a0 = c0.axis()
    a1 = c1.axis()
    d = _clamp(a0[0] * a1[0] + a0[1] * a1[1] + a0[2] * a1[2])
    cx = a0[1] * a1[2] - a0[2] * a1[1]
    cy = a0[2] * a1[0] - a0[0] * a1[2]
    cz = a0[0] * a1[1] - a0[1] * a1[0]
    cn = math.sqrt(cx * cx + cy * cy + cz * cz)
    if cn < 1e-15:
        if d > 0.0:
            g = ONE
        else:
            g = exp_axis_angle(_orthogonal_axis(a0), math.pi / 2.0)
    else:
        psi = math.atan2(cn, d)
        g = exp_axis_angle((cx / cn, cy / cn, cz / cn), psi / 2.0)
    if c0.conjugate_by(g).dist(c1) > 1e-10:
        raise AlignmentError("conjugation failed to align the pair within 1e-10")
    return g
