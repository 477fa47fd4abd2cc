"""Numerical path certificates and the Monte Carlo component census.

A certificate is a discrete chain of near-solutions of one of the equation
systems with bounded per-point residual and bounded step between
consecutive points, a computable stand-in for a continuous path.
Certificates are evidence, not proofs: component separation is established
solely by the exact integer invariants, and the census reports the two
evidence channels (labels observed, path connections found) separately.

Canonical paths are staged:

1. move B1 to 1 while (A2, B2) tracks the commutator value forced by the
   relation (a moving-fiber continuation);
2. a global conjugation aligning A1's axis, followed by exact angle snaps
   (residuals are conjugation invariant, so these legs are nearly free);
3. rotate X = [A3, B3] A1 at constant angle onto the reference axis,
   continuing (A3, B3) and (A2, B2) through their moving fibers; off the
   diagonal the moving target never crosses the identity, because
   angle(X) != angle(A1) there;
4. within-fiber legs to the canonical pair.

Central-component points instead descend through the mutually-commuting
stratum: snap to exactly-commuting tuples, contract along maximal tori,
then contract A1.  Mapping-torus points with non-central T descend through
the all-commuting stratum or, when T X^n is central, through an explicit
family trading the angle of A1 against T.  A blind interpolate-and-project
search (probe_path) is also provided; it may fail near the singular
strata, where the staged routes remain available.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Callable, Iterable

import numpy as np

from .commutator import (
    ContinuationError,
    FiberConnectError,
    connect_in_fiber,
    continue_fiber,
    project_pair_to_fiber,
    snap_commuting_pair,
)
from .components import (
    REFUSE_BAND,
    SNAP_BAND,
    TORUS_CENTRAL,
    Unclassifiable,
    canonical_representative,
    canonical_torus_representative,
    classify_fix,
    classify_torus,
    count_fix,
    count_torus,
    enumerate_fix_labels,
    enumerate_torus_labels,
    randomized_representative,
    randomized_torus_representative,
)
from .su2 import (
    MINUS_ONE,
    ONE,
    SU2,
    align_conjugator,
    commutator,
    exp_axis_angle,
    geodesic,
    geodesic_distance,
)
from .varieties import (
    Rep,
    SurfaceRep,
    TorusRep,
    derived_x,
    project_to_variety,
    rep_from_dict,
    rep_to_dict,
    residual_for,
    trivial_rep,
)

__all__ = [
    "PathConfig",
    "PathCertificate",
    "PathError",
    "LabelMismatchError",
    "probe_path",
    "canonical_path",
    "canonical_torus_path",
    "verify_certificate",
    "VerificationReport",
    "census",
    "CensusReport",
    "CensusRow",
    "CERT_FORMAT",
    "certificate_to_dict",
    "certificate_from_dict",
    "save_certificate",
    "load_certificate",
]

CERT_FORMAT = "pathcert-1"

_SYSTEM_IDS = {"fix": 0, "torus": 1, "surface": 2}

_AXIS1 = (1.0, 0.0, 0.0)


@dataclass(frozen=True)
class PathConfig:
    """Budgets and bounds for path construction and acceptance."""

    residual_tol: float = 1e-7  # acceptance bound on per-point residuals
    node_tol: float = 1e-10  # construction target for projected nodes
    max_step: float = 0.2  # per-coordinate geodesic step bound (radians)
    bisection_depth: int = 12
    projection_iters: int = 100


class PathError(RuntimeError):
    """Path construction failed; `stage` names the failing leg."""

    def __init__(self, message: str, stage: str = ""):
        super().__init__(message if not stage else f"[{stage}] {message}")
        self.stage = stage


class LabelMismatchError(ValueError):
    """Endpoints carry different component labels; no path can exist."""


@dataclass(frozen=True)
class PathCertificate:
    """Discrete connectivity evidence for one equation system."""

    system: str
    n: int
    points: tuple[Rep, ...]
    max_residual: float
    max_step: float
    label: str
    tol: float


# -- small geometry helpers -------------------------------------------------

def _rep_step(p: Rep, q: Rep) -> float:
    return max(geodesic_distance(u, v) for u, v in zip(p.elements(), q.elements()))


def _chop(dist: float, max_step: float) -> int:
    return max(1, math.ceil(dist / (0.8 * max_step)))


def _geodesic_nodes(u: SU2, v: SU2, max_step: float) -> list[SU2]:
    """Nodes strictly after u, ending exactly at v; u, v not antipodal."""
    steps = _chop(geodesic_distance(u, v), max_step)
    return [geodesic(u, v, i / steps) for i in range(1, steps + 1)]


def _route_to_one(el: SU2, max_step: float, prefer_axis=None) -> list[SU2]:
    """Contract el to 1 along a maximal torus (works from -1 as well)."""
    theta = el.angle()
    if theta < 1e-15:
        return []
    try:
        axis = el.axis()
    except ValueError:
        axis = prefer_axis if prefer_axis is not None else _AXIS1
    steps = _chop(theta, max_step)
    return [exp_axis_angle(axis, theta * (1 - i / steps)) for i in range(1, steps + 1)]


def _torus_snap(el: SU2, axis) -> SU2:
    """Nearest element on the maximal torus of `axis` with the same angle."""
    ux, uy, uz = axis
    dot = el.x * ux + el.y * uy + el.z * uz
    sign = 1.0 if dot >= 0.0 else -1.0
    vn = math.sqrt(el.x**2 + el.y**2 + el.z**2)
    if vn == 0.0:
        return el
    return SU2(el.w, sign * vn * ux, sign * vn * uy, sign * vn * uz)


def _central_gap(u: SU2) -> tuple[float, int]:
    dp = u.dist(ONE)
    dm = u.dist(MINUS_ONE)
    return (dp, 1) if dp <= dm else (dm, -1)


def _axis_rotation(a0, a1) -> tuple[tuple[float, float, float], float] | None:
    """Rotation axis and angle carrying unit vector a0 onto a1 (None if equal)."""
    d = a0[0] * a1[0] + a0[1] * a1[1] + a0[2] * a1[2]
    cx = a0[1] * a1[2] - a0[2] * a1[1]
    cy = a0[2] * a1[0] - a0[0] * a1[2]
    cz = a0[0] * a1[1] - a0[1] * a1[0]
    cn = math.sqrt(cx * cx + cy * cy + cz * cz)
    if cn < 1e-14:
        if d > 0.0:
            return None
        dots = [abs(a0[0]), abs(a0[1]), abs(a0[2])]
        i = dots.index(min(dots))
        e = [0.0, 0.0, 0.0]
        e[i] = 1.0
        proj = (e[0] - a0[0] * a0[i], e[1] - a0[1] * a0[i], e[2] - a0[2] * a0[i])
        nn = math.sqrt(proj[0] ** 2 + proj[1] ** 2 + proj[2] ** 2)
        return (proj[0] / nn, proj[1] / nn, proj[2] / nn), math.pi
    psi = math.atan2(cn, max(-1.0, min(1.0, d)))
    return (cx / cn, cy / cn, cz / cn), psi


def _constant_angle_path(x: SU2, target_axis) -> tuple[Callable[[float], SU2], float]:
    """Path q(t) x q(t)^-1 rotating axis(x) onto target_axis; returns (path, psi)."""
    rot = _axis_rotation(x.axis(), target_axis)
    if rot is None:
        return (lambda t: x), 0.0
    m, psi = rot

    def path(t: float) -> SU2:
        q = exp_axis_angle(m, 0.5 * psi * t)
        return x.conjugate_by(q)

    return path, psi


# -- certificate assembly and verification ----------------------------------

def _dedupe(points: list[Rep]) -> list[Rep]:
    out = [points[0]]
    for p in points[1:]:
        if _rep_step(out[-1], p) > 1e-14:
            out.append(p)
    return out


def _finish(
    points: list[Rep], system: str, n: int, label_text: str, cfg: PathConfig
) -> PathCertificate:
    pts = _dedupe(points)
    max_residual = max(residual_for(p, system, n).max for p in pts)
    max_step = max((_rep_step(p, q) for p, q in zip(pts, pts[1:])), default=0.0)
    if max_residual > cfg.residual_tol:
        raise PathError(
            f"constructed path violates residual bound: {max_residual:.3e}",
            stage="assembly",
        )
    if max_step > cfg.max_step + 1e-12:
        raise PathError(
            f"constructed path violates step bound: {max_step:.3f}", stage="assembly"
        )
    return PathCertificate(
        system, n, tuple(pts), max_residual, max_step, label_text, cfg.residual_tol
    )


@dataclass(frozen=True)
class VerificationReport:
    ok: bool
    problems: tuple[str, ...]


def _classify_text(rep: Rep, system: str, n: int, tol: float) -> str | None:
    """Label text, or None when the point cannot be classified at tol."""
    try:
        if system == "fix":
            return classify_fix(rep, n, tol).text()
        if system == "torus":
            return classify_torus(rep, n, tol).text()
        return ""
    except (Unclassifiable, ValueError):
        return None


def verify_certificate(cert: PathCertificate) -> VerificationReport:
    """Independent re-check of every certificate invariant.

    Uses only the residual and classifier primitives: per-point residuals
    against the stated maximum, the stated maximum against the stated
    tolerance, consecutive steps against the stated step bound, endpoint
    labels against the stated label, and label constancy at every
    classifiable interior point.
    """
    problems: list[str] = []
    pts = cert.points
    if not pts:
        return VerificationReport(False, ("certificate has no points",))
    if cert.max_residual > cert.tol:
        problems.append(
            f"stated residual bound {cert.max_residual:.3e} exceeds tolerance {cert.tol:.1e}"
        )
    for i, p in enumerate(pts):
        r = residual_for(p, cert.system, cert.n).max
        if r > cert.max_residual + 1e-14:
            problems.append(f"point {i}: residual {r:.3e} above stated bound")
    for i, (p, q) in enumerate(zip(pts, pts[1:])):
        s = _rep_step(p, q)
        if s > cert.max_step + 1e-12:
            problems.append(f"step {i}->{i + 1}: {s:.4f} above stated bound")
    if cert.system in ("fix", "torus"):
        for idx in (0, len(pts) - 1):
            text = _classify_text(pts[idx], cert.system, cert.n, cert.tol)
            if text is None:
                problems.append(f"endpoint {idx} is unclassifiable")
            elif text != cert.label:
                problems.append(
                    f"endpoint {idx} classifies as {text!r}, certificate says {cert.label!r}"
                )
        for i in range(1, len(pts) - 1):
            text = _classify_text(pts[i], cert.system, cert.n, cert.tol)
            if text is not None and text != cert.label:
                problems.append(f"interior point {i} classifies as {text!r}")
    return VerificationReport(not problems, tuple(problems))


def certificate_to_dict(cert: PathCertificate) -> dict:
    return {
        "format": CERT_FORMAT,
        "system": cert.system,
        "n": cert.n,
        "label": cert.label,
        "tol": cert.tol,
        "max_residual": cert.max_residual,
        "max_step": cert.max_step,
        "points": [rep_to_dict(p, cert.n) for p in cert.points],
    }


def certificate_from_dict(data: dict) -> PathCertificate:
    if not isinstance(data, dict):
        raise ValueError("certificate document must be a JSON object")
    if data.get("format") != CERT_FORMAT:
        raise ValueError(
            f"format: expected {CERT_FORMAT!r}, found {data.get('format')!r}"
        )
    for key in ("system", "n", "label", "tol", "max_residual", "max_step", "points"):
        if key not in data:
            raise ValueError(f"{key}: missing")
    if data["system"] not in _SYSTEM_IDS:
        raise ValueError(f"system: unknown {data['system']!r}")
    points = []
    for i, pdoc in enumerate(data["points"]):
        try:
            _, rep = rep_from_dict(pdoc)
        except ValueError as exc:
            raise ValueError(f"points[{i}]: {exc}") from exc
        points.append(rep)
    want_torus = data["system"] == "torus"
    for i, p in enumerate(points):
        if isinstance(p, TorusRep) != want_torus:
            raise ValueError(f"points[{i}]: wrong representation kind for system")
    return PathCertificate(
        data["system"],
        int(data["n"]),
        tuple(points),
        float(data["max_residual"]),
        float(data["max_step"]),
        str(data["label"]),
        float(data["tol"]),
    )


def save_certificate(path: str | Path, cert: PathCertificate) -> None:
    Path(path).write_text(json.dumps(certificate_to_dict(cert)) + "\n")


def load_certificate(path: str | Path) -> PathCertificate:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return certificate_from_dict(data)


# -- moving-fiber legs for surface tuples ------------------------------------

def _track_b1_leg(
    rep: SurfaceRep, cfg: PathConfig, rng: np.random.Generator
) -> list[SurfaceRep]:
    """Move B1 to 1; (A2, B2) tracks [A1, B1(t)]^-1 [A3, B3]^-1."""
    b1 = rep.b1
    if b1.dist(ONE) < 1e-15:
        return []
    y3inv = commutator(rep.a3, rep.b3).inverse()
    a1 = rep.a1

    if b1.dot(ONE) < -1.0 + 1e-9:
        # B1 at -1: route through a quarter turn
        way_axis = _AXIS1 if a1.is_central(1e-9) else a1.axis()
        waypoint = exp_axis_angle(way_axis, math.pi / 2.0)

        def b1_path(t: float) -> SU2:
            if t <= 0.5:
                return geodesic(b1, waypoint, 2.0 * t)
            return geodesic(waypoint, ONE, 2.0 * t - 1.0)

        arc = 2.0 * (geodesic_distance(b1, waypoint) + geodesic_distance(waypoint, ONE))
    else:
        def b1_path(t: float) -> SU2:
            return geodesic(b1, ONE, t)

        arc = geodesic_distance(b1, ONE)

    def c_of_t(t: float) -> SU2:
        return commutator(a1, b1_path(t)).inverse() * y3inv

    try:
        nodes = continue_fiber(
            (rep.a2, rep.b2),
            c_of_t,
            init_steps=max(8, _chop(arc, cfg.max_step)),
            tol=cfg.node_tol,
            max_step=cfg.max_step,
            rng=rng,
        )
    except ContinuationError as exc:
        raise PathError(str(exc), stage="move-b1") from exc
    return [
        replace(rep, b1=b1_path(t), a2=pair[0], b2=pair[1]) for t, pair in nodes[1:]
    ]


def _dual_fiber_leg(
    rep: SurfaceRep,
    y_of_t: Callable[[float], SU2],
    cfg: PathConfig,
    rng: np.random.Generator,
    stage: str,
    init_steps: int,
    snap_tail: bool = False,
) -> list[SurfaceRep]:
    """March (A3, B3) along [ , ] = Y(t) and (A2, B2) along Y(t)^-1, t: 0 -> 1.

    B1 must already be 1, so the relation couples the two pairs through
    Y(t) alone.  Adaptive stepping; with snap_tail=True the leg ends by
    snapping both pairs onto the exactly-commuting stratum as soon as the
    target comes within 1e-6 of the identity (for target paths that
    degenerate at t = 1).
    """
    init_steps = max(4, init_steps)
    dt = 1.0 / init_steps
    min_dt = dt / 4096.0
    t = 0.0
    pair3 = (rep.a3, rep.b3)
    pair2 = (rep.a2, rep.b2)
    current = rep
    out: list[SurfaceRep] = []
    while t < 1.0 - 1e-15:
        if len(out) > 4096:
            raise PathError("node budget exhausted", stage=stage)
        tn = min(t + dt, 1.0)
        y = y_of_t(tn)
        if snap_tail and y.angle() < 1e-6:
            a3, b3 = snap_commuting_pair(*pair3)
            a2, b2 = snap_commuting_pair(*pair2)
            nxt = replace(current, a2=a2, b2=b2, a3=a3, b3=b3)
            if _rep_step(current, nxt) <= cfg.max_step:
                out.append(nxt)
                return out
            # too far from the commuting stratum to snap: approach gradually
            dt *= 0.5
            if dt < min_dt:
                raise PathError(f"snap step too large at t={t:.5f}", stage=stage)
            continue
        a3, b3, _, ok3 = project_pair_to_fiber(pair3[0], pair3[1], y, tol=cfg.node_tol)
        a2, b2, _, ok2 = project_pair_to_fiber(
            pair2[0], pair2[1], y.inverse(), tol=cfg.node_tol
        )
        nxt = replace(current, a2=a2, b2=b2, a3=a3, b3=b3)
        if ok3 and ok2 and _rep_step(current, nxt) <= cfg.max_step:
            pair3 = (a3, b3)
            pair2 = (a2, b2)
            current = nxt
            out.append(nxt)
            t = tn
            dt = min(dt * 1.5, 1.0 / init_steps)
        else:
            dt *= 0.5
            if dt < min_dt:
                raise PathError(f"step underflow at t={t:.5f}", stage=stage)
    if snap_tail:
        a3, b3 = snap_commuting_pair(*pair3)
        a2, b2 = snap_commuting_pair(*pair2)
        nxt = replace(current, a2=a2, b2=b2, a3=a3, b3=b3)
        if _rep_step(current, nxt) > cfg.max_step:
            raise PathError("final snap step too large", stage=stage)
        out.append(nxt)
    return out


# -- canonical staged paths (fixed-point system) ------------------------------

def _snap_pairs_commuting(rep: SurfaceRep) -> SurfaceRep:
    a3, b3 = snap_commuting_pair(rep.a3, rep.b3)
    a2, b2 = snap_commuting_pair(rep.a2, rep.b2)
    return replace(rep, a2=a2, b2=b2, a3=a3, b3=b3)


def _contract_commuting_tail(rep: SurfaceRep, cfg: PathConfig) -> list[SurfaceRep]:
    """From (A1, 1, commuting A2 B2, commuting A3 B3) down to the trivial tuple.

    While [A3, B3] = 1 every condition reads off X = A1, so each torus
    contraction leg keeps the whole system exact.
    """
    points: list[SurfaceRep] = []
    current = rep
    for name in ("a3", "b3", "a2", "b2"):
        for node in _route_to_one(getattr(current, name), cfg.max_step):
            current = replace(current, **{name: node})
            points.append(current)
    for node in _route_to_one(current.a1, cfg.max_step):
        current = replace(current, a1=node)
        points.append(current)
    return points


def _label_angle(m: int, sign: str, k: int) -> float:
    return 2.0 * math.pi * k / m if sign == "+" else (2 * k + 1) * math.pi / m


def _snap_to_angle(el: SU2, theta: float) -> SU2:
    """Same axis as el, exact angle theta; +-1 for central angles."""
    if math.sin(theta) < 1e-12:
        return ONE if math.cos(theta) > 0 else MINUS_ONE
    return exp_axis_angle(el.axis(), theta)


def _quantize_angle(a1: SU2, m: int, sigma: int) -> float:
    value = (
        m * a1.angle() / (2.0 * math.pi)
        if sigma > 0
        else (m * a1.angle() / math.pi - 1.0) / 2.0
    )
    k = round(value)
    return _label_angle(m, "+" if sigma > 0 else "-", k)


def _central_descent(
    rep: SurfaceRep, m: int, cfg: PathConfig, rng: np.random.Generator
) -> list[SurfaceRep]:
    """Descend a central-component point (B1 = 1 already) to the trivial tuple."""
    points: list[SurfaceRep] = []
    current = rep
    if m == 0:
        # every admissible tuple is a solution: pull [A3, B3] to 1 directly
        y0 = commutator(current.a3, current.b3)
        if y0.dist(ONE) > 1e-12:
            if y0.dot(ONE) < -1.0 + 1e-9:
                mid = exp_axis_angle(_AXIS1, math.pi / 2.0)

                def y_path(t: float) -> SU2:
                    if t <= 0.5:
                        return geodesic(y0, mid, 2.0 * t)
                    return geodesic(mid, ONE, 2.0 * t - 1.0)
            else:
                def y_path(t: float) -> SU2:
                    return geodesic(y0, ONE, t)

            points += _dual_fiber_leg(
                current, y_path, cfg, rng, "descend-n0",
                init_steps=_chop(math.pi, cfg.max_step), snap_tail=True,
            )
            current = points[-1]
        else:
            snapped = _snap_pairs_commuting(current)
            points.append(snapped)
            current = snapped
        points += _contract_commuting_tail(current, cfg)
        return points

    gap, sigma = _central_gap(current.a1.power(m))
    if gap > REFUSE_BAND:
        # A1^m non-central: A3, B3 already sit on A1's maximal torus
        axis = current.a1.axis()
        snapped = replace(
            current,
            a3=_torus_snap(current.a3, axis),
            b3=_torus_snap(current.b3, axis),
        )
        snapped = _snap_pairs_commuting(snapped)
        points.append(snapped)
        points += _contract_commuting_tail(snapped, cfg)
        return points

    # diagonal stratum: A1^m central and angle(X) = angle(A1)
    theta = _quantize_angle(current.a1, m, sigma)
    a1_new = _snap_to_angle(current.a1, theta)
    current = replace(current, a1=a1_new)
    points.append(current)
    y0 = commutator(current.a3, current.b3)
    if y0.dist(ONE) > 1e-9 and not a1_new.is_central(1e-12):
        x_path, psi = _constant_angle_path(y0 * current.a1, current.a1.axis())
        a1_inv = current.a1.inverse()

        def y_of_t(t: float) -> SU2:
            return x_path(t) * a1_inv

        points += _dual_fiber_leg(
            current, y_of_t, cfg, rng, "diagonal-merge",
            init_steps=_chop(max(psi, 0.2), cfg.max_step), snap_tail=True,
        )
        current = points[-1]
    else:
        snapped = _snap_pairs_commuting(current)
        points.append(snapped)
        current = snapped
    points += _contract_commuting_tail(current, cfg)
    return points


def canonical_path(
    rep: SurfaceRep,
    n: int,
    cfg: PathConfig | None = None,
    rng: np.random.Generator | None = None,
) -> PathCertificate:
    """Certificate from `rep` to the canonical representative of its label."""
    cfg = cfg or PathConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    label = classify_fix(rep, n, cfg.residual_tol)
    m = abs(n)
    points: list[SurfaceRep] = [rep]
    points += _track_b1_leg(points[-1], cfg, rng)

    if label.is_central:
        points += _central_descent(points[-1], m, cfg, rng)
        points.append(trivial_rep())
        return _finish(points, "fix", n, label.text(), cfg)

    current = points[-1]
    theta_k = _label_angle(m, label.sign, label.k)
    theta_l = _label_angle(m, label.sign, label.l)

    # global conjugation aligning A1's axis with the reference axis
    if math.sin(theta_k) > 1e-12:
        target_a1 = exp_axis_angle(_AXIS1, current.a1.angle())
        g = align_conjugator(current.a1, target_a1, trace_tol=1e-6)
        for node in _conjugation_nodes(current, g, cfg):
            points.append(node)
        current = points[-1]

    # exact snaps: A1's angle, then X's angle, with a fiber polish
    a1_new = _snap_to_angle(current.a1, theta_k)
    x_snapped = _snap_to_angle(
        commutator(current.a3, current.b3) * a1_new, theta_l
    )
    y_target = x_snapped * a1_new.inverse()
    a3, b3, _, ok3 = project_pair_to_fiber(
        current.a3, current.b3, y_target, tol=cfg.node_tol
    )
    a2, b2, _, ok2 = project_pair_to_fiber(
        current.a2, current.b2, y_target.inverse(), tol=cfg.node_tol
    )
    if not (ok3 and ok2):
        raise PathError("post-snap fiber polish failed", stage="snap")
    current = replace(current, a1=a1_new, a2=a2, b2=b2, a3=a3, b3=b3)
    points.append(current)

    # rotate X onto the reference axis at constant angle
    if math.sin(theta_l) > 1e-12:
        x_path, psi = _constant_angle_path(x_snapped, _AXIS1)
        if psi > 1e-12:
            a1_inv = current.a1.inverse()

            def y_of_t(t: float) -> SU2:
                return x_path(t) * a1_inv

            points += _dual_fiber_leg(
                current, y_of_t, cfg, rng, "rotate-x",
                init_steps=_chop(psi, cfg.max_step),
            )
            current = points[-1]

    # within-fiber legs to the canonical pairs
    target = canonical_representative(n, label)
    y_star = commutator(target.a3, target.b3)
    try:
        leg3 = connect_in_fiber(
            (current.a3, current.b3),
            (target.a3, target.b3),
            y_star,
            tol=cfg.node_tol,
            max_step=cfg.max_step,
            depth=cfg.bisection_depth,
            rng=rng,
        )
    except FiberConnectError as exc:
        raise PathError(str(exc), stage="fiber-endgame-3") from exc
    for pa, pb in leg3[1:]:
        current = replace(current, a3=pa, b3=pb)
        points.append(current)
    try:
        leg2 = connect_in_fiber(
            (current.a2, current.b2),
            (target.a2, target.b2),
            y_star.inverse(),
            tol=cfg.node_tol,
            max_step=cfg.max_step,
            depth=cfg.bisection_depth,
            rng=rng,
        )
    except FiberConnectError as exc:
        raise PathError(str(exc), stage="fiber-endgame-2") from exc
    for pa, pb in leg2[1:]:
        current = replace(current, a2=pa, b2=pb)
        points.append(current)
    points.append(target)
    return _finish(points, "fix", n, label.text(), cfg)


def _conjugation_nodes(rep: Rep, g: SU2, cfg: PathConfig) -> list[Rep]:
    """Conjugate rep by the one-parameter family from 1 to g, stepped."""
    if g.is_central(1e-12):
        return []
    theta = g.angle()
    axis = g.axis()
    steps = _chop(2.0 * theta, cfg.max_step)
    out = []
    for i in range(1, steps + 1):
        gi = exp_axis_angle(axis, theta * i / steps)
        out.append(rep.conjugate(gi))
    return out


# -- canonical staged paths (torus system) -----------------------------------

def _lift_points(points: Iterable[SurfaceRep], t: SU2) -> list[TorusRep]:
    return [TorusRep(t, p) for p in points]


def _bridge_to_plus_one(n: int, cfg: PathConfig) -> list[TorusRep]:
    """Explicit nodes from (-1, trivial) to (1, trivial)."""
    out: list[TorusRep] = []
    triv = trivial_rep()
    if n == 0:
        for node in _route_to_one(MINUS_ONE, cfg.max_step, prefer_axis=_AXIS1):
            out.append(TorusRep(node, triv))
        return out
    m = abs(n)
    omega_angle = math.pi / m
    steps = _chop((1 + m) * omega_angle, cfg.max_step)
    for i in range(1, steps + 1):
        a = exp_axis_angle(_AXIS1, omega_angle * i / steps)
        t = MINUS_ONE * a.power(-n)
        out.append(TorusRep(t, replace(triv, a1=a, b3=a)))
    current = out[-1]
    for name in ("b3", "a1"):
        for node in _route_to_one(getattr(current.rep, name), cfg.max_step):
            current = TorusRep(ONE, replace(current.rep, **{name: node}))
            out.append(current)
    return out


def _all_commuting_descent(trep: TorusRep, cfg: PathConfig) -> list[TorusRep]:
    """Descent for mutually commuting tuples with non-central T."""
    axis = trep.t.axis()
    snapped = SurfaceRep(*(_torus_snap(el, axis) for el in trep.rep.elements()))
    out = [TorusRep(trep.t, snapped)]
    current = out[-1]
    for name in ("a3", "b3", "a2", "b2", "b1", "a1"):
        for node in _route_to_one(getattr(current.rep, name), cfg.max_step):
            current = TorusRep(current.t, replace(current.rep, **{name: node}))
            out.append(current)
    for node in _route_to_one(current.t, cfg.max_step, prefer_axis=axis):
        current = TorusRep(node, current.rep)
        out.append(current)
    return out


def _boundary_stratum_descent(
    trep: TorusRep, n: int, cfg: PathConfig, rng: np.random.Generator
) -> list[TorusRep]:
    """Descent for tuples with T X^n central but T non-central.

    On this stratum [A3, B3] = [B1, A1] and T = s B1 A1^-n B1^-1; the path
    moves (A3, B3) to (B1, A1) inside their commutator fiber, clears
    (A2, B2) along T's torus, then trades the angle of A1 against T until
    T reaches +1, tracking B3 = A1 and A3 = B1 throughout.
    """
    if n == 0:
        raise PathError("no boundary stratum at n = 0", stage="boundary")
    rep = trep.rep
    txn = trep.t * derived_x(rep).power(n)
    gap, s_sign = _central_gap(txn)
    if gap > 10 * SNAP_BAND:
        raise PathError(
            f"T X^n at distance {gap:.2e} from the center: unrecognized stratum",
            stage="boundary",
        )
    s = ONE if s_sign > 0 else MINUS_ONE
    out: list[TorusRep] = []
    current = trep
    # leg 1: (A3, B3) -> (B1, A1) within the fiber of [B1, A1]
    c_fiber = commutator(rep.b1, rep.a1)
    try:
        leg = connect_in_fiber(
            (rep.a3, rep.b3),
            (rep.b1, rep.a1),
            c_fiber,
            tol=cfg.node_tol,
            max_step=cfg.max_step,
            depth=cfg.bisection_depth,
            rng=rng,
        )
    except FiberConnectError as exc:
        raise PathError(str(exc), stage="boundary-leg1") from exc
    for pa, pb in leg[1:]:
        current = TorusRep(current.t, replace(current.rep, a3=pa, b3=pb))
        out.append(current)
    # leg 2: snap and contract (A2, B2) along T's torus
    axis_t = current.t.axis()
    current = TorusRep(
        current.t,
        replace(
            current.rep,
            a2=_torus_snap(current.rep.a2, axis_t),
            b2=_torus_snap(current.rep.b2, axis_t),
        ),
    )
    out.append(current)
    for name in ("a2", "b2"):
        for node in _route_to_one(getattr(current.rep, name), cfg.max_step):
            current = TorusRep(current.t, replace(current.rep, **{name: node}))
            out.append(current)
    # leg 3: move A1 (with B3 = A1) to omega with omega^n = s; T explicit
    a1 = current.rep.a1
    b1 = current.rep.b1
    u = a1.axis()
    theta0 = a1.angle()
    theta1 = 0.0 if s_sign > 0 else math.pi / abs(n)
    steps = _chop((1 + abs(n)) * abs(theta0 - theta1), cfg.max_step)
    b1_inv = b1.inverse()
    for i in range(1, steps + 1):
        th = theta0 + (theta1 - theta0) * i / steps
        a = exp_axis_angle(u, th)
        t = s * (b1 * a.power(-n) * b1_inv)
        current = TorusRep(t, replace(current.rep, a1=a, b3=a))
        out.append(current)
    # leg 4: B1 -> 1 (A3 tracks); T stays at +1
    b1_now = current.rep.b1
    if b1_now.dot(ONE) < -1.0 + 1e-9:
        waypoint = exp_axis_angle(u, math.pi / 2.0)
        mids = _geodesic_nodes(b1_now, waypoint, cfg.max_step)
        mids += _geodesic_nodes(waypoint, ONE, cfg.max_step)
    else:
        mids = _geodesic_nodes(b1_now, ONE, cfg.max_step)
    for node in mids:
        current = TorusRep(ONE, replace(current.rep, b1=node, a3=node))
        out.append(current)
    # leg 5: contract the leftover pair A1 = B3 = omega
    for name in ("b3", "a1"):
        for node in _route_to_one(getattr(current.rep, name), cfg.max_step):
            current = TorusRep(ONE, replace(current.rep, **{name: node}))
            out.append(current)
    return out


def canonical_torus_path(
    trep: TorusRep,
    n: int,
    cfg: PathConfig | None = None,
    rng: np.random.Generator | None = None,
) -> PathCertificate:
    """Certificate from a mapping-torus point to its canonical representative."""
    cfg = cfg or PathConfig()
    rng = rng if rng is not None else np.random.default_rng(0)
    label = classify_torus(trep, n, cfg.residual_tol)
    points: list[TorusRep] = [trep]

    gap, eps_sign = _central_gap(trep.t)
    if not label.is_central:
        eps = ONE if label.epsilon > 0 else MINUS_ONE
        current = TorusRep(eps, trep.rep)
        points.append(current)
        fix_cert = canonical_path(current.rep, n, cfg, rng)
        points += _lift_points(fix_cert.points[1:], eps)
        return _finish(points, "torus", n, label.text(), cfg)

    if gap <= SNAP_BAND:
        # central T: descend inside the fixed-point slice, then bridge
        eps = ONE if eps_sign > 0 else MINUS_ONE
        current = TorusRep(eps, trep.rep)
        points.append(current)
        fix_cert = canonical_path(current.rep, n, cfg, rng)
        points += _lift_points(fix_cert.points[1:], eps)
        if eps_sign < 0:
            points += _bridge_to_plus_one(n, cfg)
    else:
        all_commuting = all(
            commutator(u, v).dist(ONE) < 10 * cfg.residual_tol
            for i, u in enumerate(trep.elements())
            for v in trep.elements()[i + 1 :]
        )
        if all_commuting:
            points += _all_commuting_descent(trep, cfg)
        else:
            points += _boundary_stratum_descent(trep, n, cfg, rng)
    points.append(canonical_torus_representative(n, TORUS_CENTRAL))
    return _finish(points, "torus", n, TORUS_CENTRAL.text(), cfg)


# -- blind interpolate-and-project search ------------------------------------

def probe_path(
    r0: Rep,
    r1: Rep,
    system: str,
    n: int,
    cfg: PathConfig | None = None,
) -> PathCertificate:
    """Bisection search for a certificate between same-label endpoints.

    Midpoints are per-coordinate geodesic averages re-projected onto the
    variety.  Endpoints with different labels are refused immediately.
    This search is allowed to fail near the singular strata; the staged
    routes through canonical representatives remain available there.
    """
    cfg = cfg or PathConfig()
    for name, rep in (("first", r0), ("second", r1)):
        res = residual_for(rep, system, n).max
        if res > cfg.residual_tol:
            raise ValueError(f"{name} endpoint residual {res:.3e} above tolerance")
    label0 = _classify_text(r0, system, n, cfg.residual_tol)
    label1 = _classify_text(r1, system, n, cfg.residual_tol)
    if label0 is None or label1 is None:
        raise Unclassifiable("endpoint label could not be determined")
    if label0 != label1:
        raise LabelMismatchError(f"endpoint labels differ: {label0!r} vs {label1!r}")

    is_torus = isinstance(r0, TorusRep)
    rebuild = TorusRep.from_elements if is_torus else SurfaceRep.from_elements

    def advance(a: Rep, b: Rep, frac: float) -> Rep:
        els = [geodesic(u, v, frac) for u, v in zip(a.elements(), b.elements())]
        proj = project_to_variety(
            rebuild(els), n, system, tol=cfg.node_tol, max_iter=cfg.projection_iters
        )
        if not proj.converged:
            raise PathError("projection off the interpolant failed", stage="probe")
        text = _classify_text(proj.rep, system, n, cfg.residual_tol)
        if text is not None and text != label0:
            raise PathError(
                f"projected point left the component ({text!r})", stage="probe"
            )
        return proj.rep

    # walk the interpolant from r0 toward r1, projecting each predictor;
    # the fraction halves on failure, which plays the role of bisection
    # depth in budgeting the search
    points: list[Rep] = [r0]
    budget = 2**cfg.bisection_depth
    while len(points) < budget:
        current = points[-1]
        remaining = _rep_step(current, r1)
        if remaining <= cfg.max_step:
            points.append(r1)
            break
        frac = min(1.0, 0.8 * cfg.max_step / remaining)
        placed = False
        for _ in range(cfg.bisection_depth):
            try:
                nxt = advance(current, r1, frac)
            except (PathError, ValueError):
                frac *= 0.5
                continue
            step = _rep_step(current, nxt)
            if step <= cfg.max_step and _rep_step(nxt, r1) < remaining - 0.25 * step:
                points.append(nxt)
                placed = True
                break
            frac *= 0.5
        if not placed:
            raise PathError(
                f"no admissible step at distance {remaining:.3f} from the target",
                stage="probe",
            )
    else:
        raise PathError("node budget exhausted", stage="probe")
    return _finish(points, system, n, label0, cfg)


# -- Monte Carlo census -------------------------------------------------------

class _UnionFind:
    def __init__(self):
        self._parent: dict[str, str] = {}

    def add(self, key: str) -> None:
        self._parent.setdefault(key, key)

    def find(self, key: str) -> str:
        root = key
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[key] != root:
            self._parent[key], key = root, self._parent[key]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self._parent[ra] = rb

    def class_count(self) -> int:
        return sum(1 for k in self._parent if self.find(k) == k)


@dataclass(frozen=True)
class CensusRow:
    label: str
    samples: int
    classified: int
    path_ok: int

    @property
    def success_rate(self) -> float:
        return self.path_ok / self.samples if self.samples else 1.0


@dataclass(frozen=True)
class CensusReport:
    system: str
    n: int
    samples_per_label: int
    seed: int
    closed_form: int
    labels_observed: tuple[str, ...]
    estimated_components: int
    path_classes: int
    unresolved_samples: int
    cross_label_certificates: int
    label_anomalies: int
    rows: tuple[CensusRow, ...]

    @property
    def agrees_with_closed_form(self) -> bool:
        return self.estimated_components == self.closed_form

    @property
    def overall_success_rate(self) -> float:
        total = sum(r.samples for r in self.rows)
        good = sum(r.path_ok for r in self.rows)
        return good / total if total else 1.0

    def to_dict(self) -> dict:
        return {
            "format": "census-1",
            "system": self.system,
            "n": self.n,
            "samples_per_label": self.samples_per_label,
            "seed": self.seed,
            "closed_form": self.closed_form,
            "labels_observed": list(self.labels_observed),
            "estimated_components": self.estimated_components,
            "path_classes": self.path_classes,
            "unresolved_samples": self.unresolved_samples,
            "cross_label_certificates": self.cross_label_certificates,
            "label_anomalies": self.label_anomalies,
            "agrees_with_closed_form": self.agrees_with_closed_form,
            "overall_success_rate": self.overall_success_rate,
            "rows": [
                {
                    "label": r.label,
                    "samples": r.samples,
                    "classified": r.classified,
                    "path_ok": r.path_ok,
                    "success_rate": r.success_rate,
                }
                for r in self.rows
            ],
        }


def census(
    n: int,
    system: str,
    samples_per_label: int,
    seed: int,
    cfg: PathConfig | None = None,
) -> CensusReport:
    """Sample every component, classify, and collect path evidence.

    Per-sample generators are pure functions of (seed, system, label index,
    sample index), so results do not depend on scheduling.  Failures are
    reported, never raised.  The component estimate is the number of
    distinct labels observed (the exact-invariant channel); the union-find
    class count over anchors and successfully pathed samples is the
    path-evidence channel.
    """
    cfg = cfg or PathConfig()
    if system == "fix":
        labels = enumerate_fix_labels(n)
        closed = count_fix(n)
    elif system == "torus":
        labels = enumerate_torus_labels(n)
        closed = count_torus(n)
    else:
        raise ValueError(f"census runs on 'fix' or 'torus', not {system!r}")
    system_id = _SYSTEM_IDS[system]

    uf = _UnionFind()
    for label in labels:
        uf.add(f"anchor:{label.text()}")

    observed: set[str] = set()
    rows: list[CensusRow] = []
    cross_label = 0
    anomalies = 0
    unresolved = 0
    for li, label in enumerate(labels):
        classified = 0
        path_ok = 0
        for i in range(samples_per_label):
            rng = np.random.default_rng([seed, system_id, li, i])
            key = f"s:{li}:{i}"
            uf.add(key)
            try:
                if system == "fix":
                    rep = randomized_representative(n, label, rng)
                    got = classify_fix(rep, n, cfg.residual_tol).text()
                else:
                    rep = randomized_torus_representative(n, label, rng)
                    got = classify_torus(rep, n, cfg.residual_tol).text()
            except (Unclassifiable, ValueError, RuntimeError):
                unresolved += 1
                continue
            classified += 1
            observed.add(got)
            if got != label.text():
                anomalies += 1
            try:
                if system == "fix":
                    cert = canonical_path(rep, n, cfg, rng)
                else:
                    cert = canonical_torus_path(rep, n, cfg, rng)
            except (PathError, Unclassifiable, ValueError, RuntimeError):
                unresolved += 1
                continue
            check = verify_certificate(cert)
            if not check.ok:
                unresolved += 1
                continue
            first = _classify_text(cert.points[0], system, n, cfg.residual_tol)
            last = _classify_text(cert.points[-1], system, n, cfg.residual_tol)
            if first != last:
                cross_label += 1
                continue
            uf.union(key, f"anchor:{got}")
            path_ok += 1
        rows.append(CensusRow(label.text(), samples_per_label, classified, path_ok))
    return CensusReport(
        system=system,
        n=n,
        samples_per_label=samples_per_label,
        seed=seed,
        closed_form=closed,
        labels_observed=tuple(sorted(observed)),
        estimated_components=len(observed),
        path_classes=uf.class_count(),
        unresolved_samples=unresolved,
        cross_label_certificates=cross_label,
        label_anomalies=anomalies,
        rows=tuple(rows),
    )
