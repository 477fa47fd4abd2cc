"""Solvers, samplers, and path continuation for the commutator equation.

The commutator map mu(A, B) = A B A^-1 B^-1 on SU(2) x SU(2) is onto, and
every fiber is connected; the fiber over -1 is exactly the set of pairs
with tr(A) = tr(B) = tr(AB) = 0.  This module provides:

* a closed-form section of mu (solve_commutator), built from a trace-zero
  normal form plus a conjugation, so canonical representatives are exact
  and reproducible;
* a Newton projector onto a fiber with analytic Jacobian
  (project_pair_to_fiber), the inner loop of all path tracking;
* exact randomizing moves inside a fiber (randomize_in_fiber);
* within-fiber path search (connect_in_fiber) and moving-fiber
  continuation (continue_fiber, fiber_path).

Trace identity used as the algebraic oracle throughout:
tr([A, B]) = tr(A)^2 + tr(B)^2 + tr(AB)^2 - tr(A) tr(B) tr(AB) - 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .su2 import (
    MINUS_ONE,
    ONE,
    SU2,
    align_conjugator,
    commutator,
    exp_axis_angle,
    exp_tangent,
    geodesic,
    geodesic_distance,
    haar_random,
)

__all__ = [
    "fricke_trace",
    "solve_commutator",
    "project_pair_to_fiber",
    "sample_fiber",
    "randomize_in_fiber",
    "random_centralizer_element",
    "snap_commuting_pair",
    "connect_in_fiber",
    "continue_fiber",
    "fiber_path",
    "FiberPath",
    "ProjectionError",
    "ContinuationError",
    "FiberConnectError",
]

Pair = tuple[SU2, SU2]


class ProjectionError(RuntimeError):
    """Projection onto a commutator fiber failed to converge."""


class ContinuationError(RuntimeError):
    """Moving-fiber continuation diverged; `t` holds the failing parameter."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (t={t:.6f})")
        self.t = t


class FiberConnectError(RuntimeError):
    """No within-fiber path found at the configured bisection depth."""


def fricke_trace(ta: float, tb: float, tab: float) -> float:
    """Trace of [A, B] from the traces of A, B, and AB.

    Inputs must lie in [-2, 2] (the SU(2) trace range).
    """
    for name, value in (("ta", ta), ("tb", tb), ("tab", tab)):
        if not -2.0 - 1e-9 <= value <= 2.0 + 1e-9:
            raise ValueError(f"{name}={value!r} outside the SU(2) trace range [-2, 2]")
    return ta * ta + tb * tb + tab * tab - ta * tb * tab - 2.0


def solve_commutator(c: SU2) -> Pair:
    """A pair (A, B) with [A, B] = c, exact up to rounding.

    For c away from 1, take the trace-zero normal form A = i,
    B = -cos(theta/2) i + sin(theta/2) j with theta the angle of c (this
    gives tr([A, B]) = 2 cos(theta) by the trace identity), then conjugate
    the pair so the commutator's axis matches c.
    """
    if c.dist(ONE) < 1e-12:
        return (ONE, ONE)
    theta = c.angle()
    a = SU2(0.0, 1.0, 0.0, 0.0)
    b = SU2(0.0, -math.cos(theta / 2.0), math.sin(theta / 2.0), 0.0)
    g = align_conjugator(commutator(a, b), c, trace_tol=1e-8)
    return (a.conjugate_by(g), b.conjugate_by(g))


# -- Newton projection onto a fiber ------------------------------------

def _quat(u: SU2) -> tuple[float, float, float, float]:
    return (u.w, u.x, u.y, u.z)


def _qmul(a, b):
    aw, ax, ay, az = a
    bw, bx, by, bz = b
    return (
        aw * bw - ax * bx - ay * by - az * bz,
        aw * bx + ax * bw + ay * bz - az * by,
        aw * by - ax * bz + ay * bw + az * bx,
        aw * bz + ax * by - ay * bx + az * bw,
    )


def _qconj_by(g, v):
    gw, gx, gy, gz = g
    return _qmul(_qmul(g, v), (gw, -gx, -gy, -gz))


_BASIS = ((0.0, 1.0, 0.0, 0.0), (0.0, 0.0, 1.0, 0.0), (0.0, 0.0, 0.0, 1.0))


def project_pair_to_fiber(
    a: SU2,
    b: SU2,
    c: SU2,
    *,
    tol: float = 1e-12,
    max_iter: int = 60,
) -> tuple[SU2, SU2, float, bool]:
    """Move (a, b) onto the fiber [A, B] = c by damped Gauss-Newton.

    Tangent perturbations A <- exp(xi) A, B <- exp(eta) B have analytic
    derivatives of the commutator:

        dM(xi)  = (xi - Ad_{ABA^-1} xi) M
        dM(eta) = (Ad_A eta) M - M eta

    Returns (a, b, residual, converged); never raises.
    """
    cq = np.array(_quat(c))

    def residual(p: SU2, q: SU2) -> tuple[np.ndarray, SU2]:
        m = commutator(p, q)
        return np.array(_quat(m)) - cq, m

    r, m = residual(a, b)
    best = float(np.linalg.norm(r))
    for _ in range(max_iter):
        if best <= tol:
            return a, b, best, True
        mq = _quat(m)
        gq = _quat(m * b)  # A B A^-1
        aq = _quat(a)
        jac = np.empty((4, 6))
        for i, e in enumerate(_BASIS):
            ad = _qconj_by(gq, e)
            col = _qmul(
                (e[0] - ad[0], e[1] - ad[1], e[2] - ad[2], e[3] - ad[3]), mq
            )
            jac[:, i] = col
            ad = _qconj_by(aq, e)
            left = _qmul(ad, mq)
            right = _qmul(mq, e)
            jac[:, 3 + i] = (
                left[0] - right[0],
                left[1] - right[1],
                left[2] - right[2],
                left[3] - right[3],
            )
        delta, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        scale = 1.0
        improved = False
        for _ in range(10):
            pa = exp_tangent(scale * delta[0:3]) * a
            pb = exp_tangent(scale * delta[3:6]) * b
            rc, mc = residual(pa, pb)
            nc = float(np.linalg.norm(rc))
            if nc < best:
                a, b, r, m, best = pa, pb, rc, mc, nc
                improved = True
                break
            scale *= 0.5
        if not improved:
            break
    return a, b, best, best <= tol


def random_centralizer_element(u: SU2, rng: np.random.Generator) -> SU2:
    """A random element commuting with u (Haar when u is central)."""
    if u.is_central(1e-12):
        return haar_random(rng)
    return exp_axis_angle(u.axis(), rng.uniform(-math.pi, math.pi))


def randomize_in_fiber(a: SU2, b: SU2, rng: np.random.Generator, rounds: int = 2) -> Pair:
    """Exact moves inside the fiber of [a, b].

    Right multiplication of one component by an element of the other's
    centralizer leaves the commutator unchanged, as does conjugating the
    pair by anything commuting with the commutator value.  Composing the
    three one-parameter families with random angles spreads a point across
    the fiber without leaving it.
    """
    c = commutator(a, b)
    for _ in range(rounds):
        b = b * random_centralizer_element(a, rng)
        a = a * random_centralizer_element(b, rng)
        g = random_centralizer_element(c, rng)
        a = a.conjugate_by(g)
        b = b.conjugate_by(g)
    return a, b


def sample_fiber(
    c: SU2,
    rng: np.random.Generator,
    tol: float = 1e-12,
    max_iter: int = 100,
    restarts: int = 8,
) -> Pair:
    """A random pair with [A, B] = c within tol.

    Randomized start followed by Newton projection; for c at the identity
    the fiber is the commuting pairs, sampled exactly on a random maximal
    torus.  Raises ProjectionError if no restart converges in budget.
    """
    if c.dist(ONE) < 1e-12:
        v = rng.standard_normal(3)
        axis = tuple(v / np.linalg.norm(v))
        return (
            exp_axis_angle(axis, rng.uniform(-math.pi, math.pi)),
            exp_axis_angle(axis, rng.uniform(-math.pi, math.pi)),
        )
    for _ in range(restarts):
        a, b, res, ok = project_pair_to_fiber(
            haar_random(rng), haar_random(rng), c, tol=tol, max_iter=max_iter
        )
        if ok:
            return a, b
    raise ProjectionError(
        f"fiber projection failed after {restarts} restarts (last residual {res:.3e})"
    )


def snap_commuting_pair(a: SU2, b: SU2) -> Pair:
    """Nearest convenient exactly-commuting pair to a nearly-commuting one.

    The element with the smaller angle is re-axed onto the other's maximal
    torus, which keeps the move small whenever [a, b] is nearly 1.
    """
    if a.is_central(1e-12) or b.is_central(1e-12):
        return a, b
    move_second = b.angle() <= a.angle()
    anchor, moved = (a, b) if move_second else (b, a)
    ux, uy, uz = anchor.axis()
    dot = moved.x * ux + moved.y * uy + moved.z * uz
    sign = 1.0 if dot >= 0.0 else -1.0
    vn = math.sqrt(moved.x**2 + moved.y**2 + moved.z**2)
    snapped = SU2(moved.w, sign * vn * ux, sign * vn * uy, sign * vn * uz)
    return (a, snapped) if move_second else (snapped, b)


# -- within-fiber connectivity -----------------------------------------

def _pair_step(p: Pair, q: Pair) -> float:
    return max(geodesic_distance(p[0], q[0]), geodesic_distance(p[1], q[1]))


def _project_or_none(pair: Pair, c: SU2, tol: float) -> Pair | None:
    a, b, _, ok = project_pair_to_fiber(pair[0], pair[1], c, tol=tol)
    return (a, b) if ok else None


def _contraction_axis(moving: SU2, fixed: SU2) -> tuple[float, float, float]:
    vn = math.sqrt(moving.x**2 + moving.y**2 + moving.z**2)
    if vn > 1e-12:
        return moving.axis()
    if not fixed.is_central(1e-12):
        return fixed.axis()
    return (1.0, 0.0, 0.0)


def _torus_contract(fixed: SU2, moving: SU2, first: bool, max_step: float) -> list[Pair]:
    # moving -> 1 along a maximal torus shared with `fixed`
    theta = moving.angle()
    if theta < 1e-15:
        return []
    axis = _contraction_axis(moving, fixed)
    steps = max(1, math.ceil(theta / max_step))
    out = []
    for i in range(1, steps + 1):
        m = exp_axis_angle(axis, theta * (1 - i / steps))
        out.append((fixed, m) if first else (m, fixed))
    return out


def _commuting_stratum_route(p0: Pair, p1: Pair, max_step: float) -> list[Pair]:
    """Explicit path between two (nearly) commuting pairs through (1, 1)."""
    a0, b0 = snap_commuting_pair(*p0)
    a1, b1 = snap_commuting_pair(*p1)
    # (a0, b0) -> (a0, 1) -> (1, 1) -> (1, b1) -> (a1, b1)
    nodes: list[Pair] = [p0, (a0, b0)]
    nodes += _torus_contract(a0, b0, True, max_step)
    nodes += _torus_contract(ONE, a0, False, max_step)
    back: list[Pair] = [p1, (a1, b1)]
    back += _torus_contract(a1, b1, True, max_step)
    back += _torus_contract(ONE, a1, False, max_step)
    nodes += list(reversed(back))
    # drop exactly duplicated consecutive nodes (snap may be a no-op)
    deduped = [nodes[0]]
    for node in nodes[1:]:
        prev = deduped[-1]
        if prev[0].dist(node[0]) + prev[1].dist(node[1]) > 1e-15:
            deduped.append(node)
    return deduped


def _bisect_in_fiber(
    left: Pair,
    right: Pair,
    c: SU2,
    *,
    tol: float,
    max_step: float,
    depth: int,
) -> list[Pair]:
    if _pair_step(left, right) <= max_step:
        return [left, right]
    if depth <= 0:
        raise FiberConnectError("bisection depth exhausted")
    try:
        mid = (geodesic(left[0], right[0], 0.5), geodesic(left[1], right[1], 0.5))
    except ValueError as exc:  # antipodal coordinate
        raise FiberConnectError(str(exc))
    projected = _project_or_none(mid, c, tol)
    if projected is None:
        raise FiberConnectError("midpoint projection failed")
    a = _bisect_in_fiber(left, projected, c, tol=tol, max_step=max_step, depth=depth - 1)
    b = _bisect_in_fiber(projected, right, c, tol=tol, max_step=max_step, depth=depth - 1)
    return a + b[1:]


def _conjugation_leg(pair: Pair, g: SU2, max_step: float) -> list[Pair]:
    """Nodes conjugating `pair` by the one-parameter path from 1 to g."""
    if g.is_central(1e-12):
        # conjugation by a central element is the identity map
        return [pair]
    theta = g.angle()
    axis = g.axis()
    steps = max(1, math.ceil(2.0 * theta / max_step))
    out = []
    for i in range(steps + 1):
        gi = exp_axis_angle(axis, theta * i / steps)
        out.append((pair[0].conjugate_by(gi), pair[1].conjugate_by(gi)))
    return out


def connect_in_fiber(
    p0: Pair,
    p1: Pair,
    c: SU2,
    *,
    tol: float = 1e-10,
    max_step: float = 0.2,
    depth: int = 12,
    rng: np.random.Generator | None = None,
) -> list[Pair]:
    """A discrete path inside the fiber [A, B] = c joining p0 to p1.

    Strategy: conjugation legs (exact) to pre-align, then recursive
    midpoint bisection with Newton re-projection; random fiber waypoints
    as a fallback.  Every fiber of the commutator map is connected, so
    failure indicates a search budget problem, and is raised as
    FiberConnectError rather than hidden.
    """
    if c.angle() < 1e-6:
        return _commuting_stratum_route(p0, p1, max_step)
    if rng is None:
        rng = np.random.default_rng(0)

    prefix: list[Pair] = [p0]
    start = p0
    if c.dist(MINUS_ONE) < 1e-9:
        # Conjugation by anything preserves the fiber of a central value:
        # align first components exactly, then rotate about the common axis.
        g = align_conjugator(p0[0], p1[0], trace_tol=1e-6)
        prefix = _conjugation_leg(p0, g, max_step)
        start = prefix[-1]
        ax = p1[0].axis()
        best = None
        for k in range(64):
            phi = math.pi * k / 32.0
            z = exp_axis_angle(ax, phi)
            cand = (start[0].conjugate_by(z), start[1].conjugate_by(z))
            d = _pair_step(cand, p1)
            if best is None or d < best[0]:
                best = (d, z)
        if best[1].dist(ONE) > 1e-14:
            leg = _conjugation_leg(start, best[1], max_step)
            prefix += leg[1:]
            start = prefix[-1]
    else:
        ax = c.axis()
        best = None
        for k in range(32):
            phi = -math.pi + math.pi * k / 16.0
            z = exp_axis_angle(ax, phi)
            cand = (p0[0].conjugate_by(z), p0[1].conjugate_by(z))
            d = _pair_step(cand, p1)
            if best is None or d < best[0]:
                best = (d, z)
        if best[1].dist(ONE) > 1e-14:
            prefix = _conjugation_leg(p0, best[1], max_step)
            start = prefix[-1]

    attempts: list[list[Pair]] = [[start, p1]]
    for _ in range(3):
        try:
            w = sample_fiber(c, rng, tol=tol)
        except ProjectionError:
            continue
        attempts.append([start, w, p1])
    last_error: Exception | None = None
    for waypoints in attempts:
        try:
            path = [waypoints[0]]
            for a, b in zip(waypoints, waypoints[1:]):
                seg = _bisect_in_fiber(a, b, c, tol=tol, max_step=max_step, depth=depth)
                path += seg[1:]
            return prefix + path[1:]
        except FiberConnectError as exc:
            last_error = exc
    raise FiberConnectError(f"no route found in fiber: {last_error}")


# -- moving-fiber continuation -----------------------------------------

def continue_fiber(
    pair: Pair,
    c_of_t: Callable[[float], SU2],
    *,
    t0: float = 0.0,
    t1: float = 1.0,
    init_steps: int = 16,
    tol: float = 1e-10,
    max_step: float = 0.2,
    snap_angle: float = 1e-6,
    max_nodes: int = 4096,
    rng: np.random.Generator | None = None,
) -> list[tuple[float, Pair]]:
    """Track a pair along the moving fiber [A, B] = c(t), t0 -> t1.

    Adaptive stepping: the parameter step halves when the warm-started
    projection fails or moves farther than max_step, and grows back on
    success.  Targets within snap_angle of the identity are handled by
    snapping the pair onto the exactly-commuting stratum instead of
    projecting against a singular fiber.
    """
    if rng is None:
        rng = np.random.default_rng(0)
    span = t1 - t0
    dt = span / init_steps
    min_dt = span / (init_steps * 4096.0)
    nodes: list[tuple[float, Pair]] = [(t0, pair)]
    t = t0
    while t < t1 - 1e-15 and len(nodes) < max_nodes:
        tn = min(t + dt, t1)
        target = c_of_t(tn)
        current = nodes[-1][1]
        if target.angle() < snap_angle:
            cand = snap_commuting_pair(*current)
            ok = True
        else:
            a, b, _, ok = project_pair_to_fiber(
                current[0], current[1], target, tol=tol
            )
            cand = (a, b)
            if not ok:
                # one rescue from a slightly perturbed start
                pa = exp_tangent(1e-4 * rng.standard_normal(3)) * current[0]
                pb = exp_tangent(1e-4 * rng.standard_normal(3)) * current[1]
                a, b, _, ok = project_pair_to_fiber(pa, pb, target, tol=tol)
                cand = (a, b)
        if ok and _pair_step(current, cand) <= max_step:
            nodes.append((tn, cand))
            t = tn
            dt = min(dt * 1.5, span / init_steps)
        else:
            dt *= 0.5
            if dt < min_dt:
                raise ContinuationError("continuation step underflow", t)
    if t < t1 - 1e-15:
        raise ContinuationError("node budget exhausted", t)
    return nodes


@dataclass(frozen=True)
class FiberPath:
    """A discrete path of pairs tracking a moving commutator target."""

    ts: tuple[float, ...]
    pairs: tuple[Pair, ...]
    max_residual: float
    max_step: float


def fiber_path(
    a0: SU2,
    b0: SU2,
    a1: SU2,
    b1: SU2,
    c_path: Callable[[float], SU2],
    steps: int = 64,
    tol: float = 1e-9,
) -> FiberPath:
    """Path (A(t), B(t)) with [A(t), B(t)] = c_path(t) and fixed endpoints.

    The pair is continued from (a0, b0) along the moving fiber; endpoint
    matching is a final within-fiber leg inside the fiber of c_path(1).
    Both endpoints must sit on their fibers within tol.
    """
    for name, pair, t in (("start", (a0, b0), 0.0), ("end", (a1, b1), 1.0)):
        gap = commutator(*pair).dist(c_path(t))
        if gap > tol:
            raise ValueError(f"{name} pair off its fiber by {gap:.3e} (tol {tol:.1e})")
    inner = min(tol * 1e-2, 1e-11)
    marched = continue_fiber(
        (a0, b0), c_path, init_steps=steps, tol=inner, max_step=0.2
    )
    ts = [t for t, _ in marched]
    pairs = [p for _, p in marched]
    c_end = c_path(1.0)
    tail = connect_in_fiber(pairs[-1], (a1, b1), c_end, tol=inner, max_step=0.2)
    pairs += tail[1:]
    ts += [1.0] * (len(tail) - 1)
    max_residual = max(
        commutator(*p).dist(c_path(t)) for t, p in zip(ts, pairs)
    )
    max_step_seen = max(
        (_pair_step(p, q) for p, q in zip(pairs, pairs[1:])), default=0.0
    )
    return FiberPath(tuple(ts), tuple(pairs), max_residual, max_step_seen)
