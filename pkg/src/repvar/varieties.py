"""Representation tuples and the defining equation systems.

Four solution sets are realized numerically, all inside powers of SU(2):

* the surface representation variety: six-tuples (A1, B1, A2, B2, A3, B3)
  with [A1,B1][A2,B2][A3,B3] = 1;
* the fixed-point set of the pullback by the n-th power of the
  bounding-pair map, cut out by the surface relation together with
  A1 = X^n A1 X^-n, A1^n X^-n = 1, A3 = X^n A3 X^-n, B3 = X^n B3 X^-n,
  where X = [A3, B3] A1;
* the mapping-torus representation variety: seven-tuples (T, (Ai, Bi))
  where the same pullback becomes conjugation by T.  Writing the
  presentation of the mapping-torus group in terms of the generator
  images gives, per generator,

      relator   [A1,B1][A2,B2][A3,B3] = 1
      a1        [A1, T X^n] = 1
      b1        [B1^-1, T^-1] = A1^n X^-n
      a2, b2    [A2, T] = [B2, T] = 1
      a3, b3    [A3, T X^n] = [B3, T X^n] = 1;

* the extended fixed set: surface representations conjugate to their own
  pullback by some T (solve_intertwiner searches for that T).

Residuals are Euclidean norms of 4-vector differences, reported per
equation so failures localize.  Powers X^n are computed by exact angle
scaling, so they do not drift for large n.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Union

import numpy as np

from .commutator import randomize_in_fiber, solve_commutator
from .solvers import refine_elements
from .su2 import MINUS_ONE, ONE, SU2, commutator, haar_random
from .words import SURFACE_GENERATORS, Generator, evaluate, phi_substitution

__all__ = [
    "SurfaceRep",
    "TorusRep",
    "Rep",
    "trivial_rep",
    "ResidualReport",
    "derived_x",
    "surface_residual",
    "fixed_point_residual",
    "torus_residual",
    "residual_for",
    "random_surface_rep",
    "project_to_variety",
    "VarietyProjection",
    "solve_intertwiner",
    "IntertwinerResult",
    "CentralizerType",
    "centralizer_type",
    "REP_FORMAT",
    "rep_to_dict",
    "rep_from_dict",
    "save_rep",
    "load_rep",
]


@dataclass(frozen=True)
class SurfaceRep:
    """Images of the six surface-group generators."""

    a1: SU2
    b1: SU2
    a2: SU2
    b2: SU2
    a3: SU2
    b3: SU2

    def elements(self) -> tuple[SU2, ...]:
        return (self.a1, self.b1, self.a2, self.b2, self.a3, self.b3)

    @staticmethod
    def from_elements(els) -> "SurfaceRep":
        return SurfaceRep(*els)

    def images(self) -> dict[Generator, SU2]:
        return dict(zip(SURFACE_GENERATORS, self.elements()))

    def conjugate(self, g: SU2) -> "SurfaceRep":
        return SurfaceRep(*(el.conjugate_by(g) for el in self.elements()))

    def dist(self, other: "SurfaceRep") -> float:
        return max(u.dist(v) for u, v in zip(self.elements(), other.elements()))


@dataclass(frozen=True)
class TorusRep:
    """Image T of the mapping-torus loop together with a surface tuple."""

    t: SU2
    rep: SurfaceRep

    def elements(self) -> tuple[SU2, ...]:
        return (self.t, *self.rep.elements())

    @staticmethod
    def from_elements(els) -> "TorusRep":
        return TorusRep(els[0], SurfaceRep(*els[1:]))

    def images(self) -> dict[Generator, SU2]:
        out = self.rep.images()
        out[Generator.TAU] = self.t
        return out

    def conjugate(self, g: SU2) -> "TorusRep":
        return TorusRep(self.t.conjugate_by(g), self.rep.conjugate(g))

    def dist(self, other: "TorusRep") -> float:
        return max(u.dist(v) for u, v in zip(self.elements(), other.elements()))


Rep = Union[SurfaceRep, TorusRep]


def trivial_rep() -> SurfaceRep:
    return SurfaceRep(ONE, ONE, ONE, ONE, ONE, ONE)


@dataclass(frozen=True)
class ResidualReport:
    """Per-equation residual magnitudes, keyed by equation tag."""

    entries: tuple[tuple[str, float], ...]

    @property
    def max(self) -> float:
        return max(value for _, value in self.entries)

    def __getitem__(self, tag: str) -> float:
        for name, value in self.entries:
            if name == tag:
                return value
        raise KeyError(tag)

    def as_dict(self) -> dict[str, float]:
        return dict(self.entries)


def derived_x(rep: SurfaceRep) -> SU2:
    """[A3, B3] * A1, the element whose powers drive all the conditions."""
    return commutator(rep.a3, rep.b3) * rep.a1


def _relator_value(rep: SurfaceRep) -> SU2:
    return (
        commutator(rep.a1, rep.b1)
        * commutator(rep.a2, rep.b2)
        * commutator(rep.a3, rep.b3)
    )


def surface_residual(rep: SurfaceRep) -> ResidualReport:
    return ResidualReport((("relator", _relator_value(rep).dist(ONE)),))


def fixed_point_residual(rep: SurfaceRep, n: int) -> ResidualReport:
    xn = derived_x(rep).power(n)
    a1n = rep.a1.power(n)
    entries = (
        ("relator", _relator_value(rep).dist(ONE)),
        ("a1", (xn * rep.a1).dist(rep.a1 * xn)),
        ("b1", a1n.dist(xn)),
        ("a3", (xn * rep.a3).dist(rep.a3 * xn)),
        ("b3", (xn * rep.b3).dist(rep.b3 * xn)),
    )
    return ResidualReport(entries)


def torus_residual(trep: TorusRep, n: int) -> ResidualReport:
    rep = trep.rep
    t = trep.t
    xn = derived_x(rep).power(n)
    txn = t * xn
    b1_lhs = rep.b1.inverse() * t.inverse() * rep.b1 * t
    b1_rhs = rep.a1.power(n) * xn.inverse()
    entries = (
        ("relator", _relator_value(rep).dist(ONE)),
        ("a1", (rep.a1 * txn).dist(txn * rep.a1)),
        ("b1", b1_lhs.dist(b1_rhs)),
        ("a2", (rep.a2 * t).dist(t * rep.a2)),
        ("b2", (rep.b2 * t).dist(t * rep.b2)),
        ("a3", (rep.a3 * txn).dist(txn * rep.a3)),
        ("b3", (rep.b3 * txn).dist(txn * rep.b3)),
    )
    return ResidualReport(entries)


def residual_for(rep: Rep, system: str, n: int) -> ResidualReport:
    """Residual report for one of the three equation systems."""
    if system == "surface":
        if isinstance(rep, TorusRep):
            raise ValueError("surface system takes a surface representation")
        return surface_residual(rep)
    if system == "fix":
        if isinstance(rep, TorusRep):
            raise ValueError("fixed-point system takes a surface representation")
        return fixed_point_residual(rep, n)
    if system == "torus":
        if not isinstance(rep, TorusRep):
            raise ValueError("torus system takes a torus representation")
        return torus_residual(rep, n)
    raise ValueError(f"unknown system {system!r}")


def random_surface_rep(rng: np.random.Generator) -> SurfaceRep:
    """Haar-random admissible surface representation.

    A1, B1, A2, B2 are Haar; (A3, B3) solves the commutator equation
    forced by the relation and is then spread across its fiber by exact
    randomizing moves.
    """
    a1, b1, a2, b2 = (haar_random(rng) for _ in range(4))
    c = (commutator(a1, b1) * commutator(a2, b2)).inverse()
    a3, b3 = solve_commutator(c)
    a3, b3 = randomize_in_fiber(a3, b3, rng)
    return SurfaceRep(a1, b1, a2, b2, a3, b3)


# -- projection onto a variety ------------------------------------------

@dataclass(frozen=True)
class VarietyProjection:
    rep: Rep
    report: ResidualReport
    converged: bool
    iterations: int


def _stack_residual(rep: Rep, system: str, n: int) -> np.ndarray:
    # signed residual 4-vectors per equation, for the least-squares engine
    if isinstance(rep, TorusRep):
        surface = rep.rep
        t = rep.t
    else:
        surface = rep
        t = None
    rel = _relator_value(surface)
    rows: list[SU2] = []

    def diff(u: SU2, v: SU2) -> list[float]:
        return [u.w - v.w, u.x - v.x, u.y - v.y, u.z - v.z]

    out: list[float] = []
    out += diff(rel, ONE)
    if system == "fix":
        xn = derived_x(surface).power(n)
        out += diff(xn * surface.a1, surface.a1 * xn)
        out += diff(surface.a1.power(n), xn)
        out += diff(xn * surface.a3, surface.a3 * xn)
        out += diff(xn * surface.b3, surface.b3 * xn)
    elif system == "torus":
        xn = derived_x(surface).power(n)
        txn = t * xn
        out += diff(surface.a1 * txn, txn * surface.a1)
        out += diff(
            surface.b1.inverse() * t.inverse() * surface.b1 * t,
            surface.a1.power(n) * xn.inverse(),
        )
        out += diff(surface.a2 * t, t * surface.a2)
        out += diff(surface.b2 * t, t * surface.b2)
        out += diff(surface.a3 * txn, txn * surface.a3)
        out += diff(surface.b3 * txn, txn * surface.b3)
    return np.array(out)


def project_to_variety(
    start: Rep,
    n: int,
    system: str,
    tol: float = 1e-9,
    max_iter: int = 100,
) -> VarietyProjection:
    """Damped least-squares projection onto one of the equation systems.

    Returns the best point found; `converged` is False when the budget
    runs out, never a silently bad output.
    """
    report = residual_for(start, system, n)
    if report.max <= tol:
        return VarietyProjection(start, report, True, 0)
    is_torus = isinstance(start, TorusRep)
    rebuild = TorusRep.from_elements if is_torus else SurfaceRep.from_elements

    def residual_fn(elements: list[SU2]) -> np.ndarray:
        return _stack_residual(rebuild(elements), system, n)

    result = refine_elements(
        start.elements(),
        residual_fn,
        tol=min(tol * 1e-2, 1e-11),
        max_iter=max_iter,
    )
    rep = rebuild(result.elements)
    report = residual_for(rep, system, n)
    return VarietyProjection(rep, report, report.max <= tol, result.iterations)


# -- intertwiner search --------------------------------------------------

@dataclass(frozen=True)
class IntertwinerResult:
    """Best conjugator matching the pullback, with its least-squares gap."""

    t: SU2
    gap: float
    ok: bool


def solve_intertwiner(rep: SurfaceRep, n: int, tol: float = 1e-9) -> IntertwinerResult:
    """Search for T with rep-pullback = T^-1 rep T across all generators.

    Minimizes the stacked 4-vector differences over T (three parameters,
    multi-start at 1, -1, i, j, k); success means the representation lies
    in the extended fixed set to within tol, and then (T, rep) satisfies
    the torus system at the same scale.
    """
    pre = surface_residual(rep).max
    if pre > tol:
        raise ValueError(f"surface residual {pre:.3e} exceeds tol {tol:.1e}")
    images = rep.images()
    sub = phi_substitution(n)
    pullback = [evaluate(sub.image(g), images) for g in SURFACE_GENERATORS]
    originals = [images[g] for g in SURFACE_GENERATORS]

    def residual_fn(elements: list[SU2]) -> np.ndarray:
        t = elements[0]
        ti = t.inverse()
        out: list[float] = []
        for lhs, rho in zip(pullback, originals):
            rhs = ti * rho * t
            out += [lhs.w - rhs.w, lhs.x - rhs.x, lhs.y - rhs.y, lhs.z - rhs.z]
        return np.array(out)

    best: IntertwinerResult | None = None
    for start in (ONE, MINUS_ONE, SU2(0, 1, 0, 0), SU2(0, 0, 1, 0), SU2(0, 0, 0, 1)):
        result = refine_elements(
            [start], residual_fn, tol=min(tol * 1e-2, 1e-11), max_iter=60
        )
        if best is None or result.residual < best.gap:
            best = IntertwinerResult(result.elements[0], result.residual, False)
        if best.gap <= tol * 1e-2:
            break
    return IntertwinerResult(best.t, best.gap, best.gap < tol)


# -- centralizer classification ------------------------------------------

class CentralizerType(Enum):
    FULL_GROUP = "full_group"
    CIRCLE = "circle"
    CENTER_ONLY = "center_only"


def centralizer_type(rep: SurfaceRep, tol: float = 1e-9) -> CentralizerType:
    """Centralizer of the image: all of SU(2), a maximal torus, or {1, -1}."""
    els = rep.elements()
    if all(el.is_central(tol) for el in els):
        return CentralizerType.FULL_GROUP
    for i in range(len(els)):
        for j in range(i + 1, len(els)):
            if commutator(els[i], els[j]).dist(ONE) >= tol:
                return CentralizerType.CENTER_ONLY
    return CentralizerType.CIRCLE


# -- serialization ---------------------------------------------------------

REP_FORMAT = "repvar-1"


def rep_to_dict(rep: Rep, n: int) -> dict:
    surface = rep.rep if isinstance(rep, TorusRep) else rep
    return {
        "format": REP_FORMAT,
        "n": int(n),
        "T": rep.t.to_list() if isinstance(rep, TorusRep) else None,
        "A": [surface.a1.to_list(), surface.a2.to_list(), surface.a3.to_list()],
        "B": [surface.b1.to_list(), surface.b2.to_list(), surface.b3.to_list()],
    }


def _element_from(value, where: str) -> SU2:
    if not isinstance(value, (list, tuple)) or len(value) != 4:
        raise ValueError(f"{where}: expected a list of 4 floats")
    try:
        el = SU2.from_seq([float(v) for v in value])
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{where}: {exc}") from exc
    return el


def rep_from_dict(data: dict) -> tuple[int, Rep]:
    if not isinstance(data, dict):
        raise ValueError("representation document must be a JSON object")
    fmt = data.get("format")
    if fmt != REP_FORMAT:
        raise ValueError(f"format: expected {REP_FORMAT!r}, found {fmt!r}")
    if "n" not in data or not isinstance(data["n"], int):
        raise ValueError("n: missing or not an integer")
    for key in ("A", "B"):
        if key not in data or not isinstance(data[key], list) or len(data[key]) != 3:
            raise ValueError(f"{key}: expected a list of 3 elements")
    a = [_element_from(v, f"A[{i}]") for i, v in enumerate(data["A"])]
    b = [_element_from(v, f"B[{i}]") for i, v in enumerate(data["B"])]
    surface = SurfaceRep(a[0], b[0], a[1], b[1], a[2], b[2])
    if data.get("T") is None:
        return data["n"], surface
    return data["n"], TorusRep(_element_from(data["T"], "T"), surface)


def save_rep(path: str | Path, rep: Rep, n: int) -> None:
    Path(path).write_text(json.dumps(rep_to_dict(rep, n)) + "\n")


def load_rep(path: str | Path) -> tuple[int, Rep]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return rep_from_dict(data)
