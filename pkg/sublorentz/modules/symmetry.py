"""
Symmetries of the distance: hyperbolic rotations e^{sX0}, the reflections
(x, y, z) -> (x, -y, z) and (x, y, z) -> (x, y, -z), and dilations e^{sY}.

Rotations and reflections preserve d; the dilation e^{sY} multiplies it by
e^s. Each element also acts on Exp coordinates so that
apply(g, exp_map(lc)) == exp_map(apply_exp_coords(g, lc)).
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

from sublorentz.modules.exponential import ExpCoords
from sublorentz.modules.group_core import Point


class SymmetryKind(Enum):
    ROTATION = "Rotation"
    REFLECTION1 = "Reflection1"
    REFLECTION2 = "Reflection2"
    DILATION = "Dilation"

    @property
    def has_parameter(self) -> bool:
        return self in (SymmetryKind.ROTATION, SymmetryKind.DILATION)


@dataclass(frozen=True)
class SymmetryElement:
    kind: SymmetryKind
    s: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.s):
            raise ValueError(f"symmetry parameter must be finite, got {self.s}")
        if not self.kind.has_parameter and self.s != 0.0:
            raise ValueError(f"{self.kind.value} takes no parameter, got s = {self.s}")

    @classmethod
    def rotation(cls, s: float) -> "SymmetryElement":
        return cls(SymmetryKind.ROTATION, float(s))

    @classmethod
    def dilation(cls, s: float) -> "SymmetryElement":
        return cls(SymmetryKind.DILATION, float(s))

    @classmethod
    def reflection1(cls) -> "SymmetryElement":
        return cls(SymmetryKind.REFLECTION1)

    @classmethod
    def reflection2(cls) -> "SymmetryElement":
        return cls(SymmetryKind.REFLECTION2)


@dataclass(frozen=True)
class SymmetryChain:
    """Composition g_1 o g_2 o ... o g_n; the last element acts first."""
    elements: Tuple[SymmetryElement, ...] = ()

    def is_identity(self) -> bool:
        return len(self.elements) == 0


Symmetry = Union[SymmetryElement, SymmetryChain]


def _merge(left: SymmetryElement, right: SymmetryElement):
    """Product of two adjacent elements if it is again a single element (or identity)."""
    if left.kind is not right.kind:
        return False, None
    if left.kind.has_parameter:
        total = left.s + right.s
        return True, (None if total == 0.0 else SymmetryElement(left.kind, total))
    return True, None


def compose(*items: Symmetry) -> SymmetryChain:
    """
    compose(g, h) is g o h. Adjacent rotations (dilations) add their
    parameters, adjacent equal reflections cancel, zero rotations and
    dilations are dropped.
    """
    stack = []
    for item in items:
        elements = item.elements if isinstance(item, SymmetryChain) else (item,)
        for element in elements:
            if element.kind.has_parameter and element.s == 0.0:
                continue
            if stack:
                merged, product = _merge(stack[-1], element)
                if merged:
                    stack.pop()
                    if product is not None:
                        stack.append(product)
                    continue
            stack.append(element)
    return SymmetryChain(tuple(stack))


def _elements(g: Symmetry) -> Tuple[SymmetryElement, ...]:
    return g.elements if isinstance(g, SymmetryChain) else (g,)


def _apply_point(g: SymmetryElement, q: Point) -> Point:
    if g.kind is SymmetryKind.ROTATION:
        ch, sh = math.cosh(g.s), math.sinh(g.s)
        return Point(q.x * ch + q.y * sh, q.x * sh + q.y * ch, q.z)
    if g.kind is SymmetryKind.REFLECTION1:
        return Point(q.x, -q.y, q.z)
    if g.kind is SymmetryKind.REFLECTION2:
        return Point(q.x, q.y, -q.z)
    e = math.exp(g.s)
    return Point(q.x * e, q.y * e, q.z * e * e)


def _apply_coords(g: SymmetryElement, lc: ExpCoords) -> ExpCoords:
    if g.kind is SymmetryKind.ROTATION:
        return ExpCoords(lc.psi + g.s, lc.c, lc.t)
    if g.kind is SymmetryKind.DILATION:
        # c * t is invariant: the extremal keeps its shape and is rescaled
        return ExpCoords(lc.psi, lc.c * math.exp(-g.s), lc.t * math.exp(g.s))
    # psi + ct/2 is the angle of the endpoint's (x, y) projection
    if g.kind is SymmetryKind.REFLECTION1:
        return ExpCoords(-lc.psi - lc.c * lc.t, lc.c, lc.t)
    return ExpCoords(lc.psi + lc.c * lc.t, -lc.c, lc.t)


def apply(g: Symmetry, q: Point) -> Point:
    for element in reversed(_elements(g)):
        q = _apply_point(element, q)
    return q


def apply_exp_coords(g: Symmetry, lc: ExpCoords) -> ExpCoords:
    for element in reversed(_elements(g)):
        lc = _apply_coords(element, lc)
    return lc


def distance_factor(g: Symmetry) -> float:
    """Factor by which g multiplies the distance, exp of the summed dilation parameters."""
    return math.exp(sum(e.s for e in _elements(g) if e.kind is SymmetryKind.DILATION))
