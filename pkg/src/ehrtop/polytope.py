"""Input model: rational simple polytopes, vertex cones, weights."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lcm
from typing import Optional, Sequence

from .errors import ConesRequiredError, NotFullDimensionalError
from .linalg import det, primitive, primitive_direction, vec_sub
from .rat import Rat, rat_den


@dataclass(frozen=True)
class PowerLinearWeight:
    """The weight h(x) = <ell, x>^power / power! ."""

    ell: tuple
    power: int

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("weight power must be nonnegative")
        object.__setattr__(self, "ell", tuple(Rat(x) for x in self.ell))


@dataclass(frozen=True)
class VertexCone:
    """Affine cone apex + sum R_+ v_i with primitive integer generators."""

    apex: tuple
    generators: tuple  # d primitive integer vectors
    apex_period: int   # smallest q with q*apex integral

    def __post_init__(self):
        if det(self.generators_matrix()) == 0:
            raise NotFullDimensionalError("cone generators are dependent")

    def generators_matrix(self):
        """Matrix whose columns are the generators."""
        return tuple(zip(*self.generators))

    @property
    def dim(self) -> int:
        return len(self.apex)


def apex_period(point: Sequence) -> int:
    q = 1
    for x in point:
        q = lcm(q, rat_den(x))
    return q


@dataclass(frozen=True)
class SimplePolytope:
    """Simple polytope given by vertices, with optional explicit cones.

    Without explicit cones the polytope must be a simplex (d+1 affinely
    independent vertices); tangent cones are then derived from edges.
    """

    dim: int
    vertices: tuple
    cone_generators: Optional[tuple] = field(default=None)

    def __post_init__(self):
        verts = tuple(tuple(Rat(x) for x in v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if any(len(v) != self.dim for v in verts):
            raise ValueError("vertex dimension mismatch")
        if len(set(verts)) != len(verts):
            raise ValueError("vertices must be distinct")
        if self.cone_generators is None:
            if len(verts) != self.dim + 1:
                raise ConesRequiredError(
                    "non-simplex input requires explicit tangent cones")
            edges = [vec_sub(verts[k], verts[0]) for k in range(1, len(verts))]
            scaled = tuple(primitive_direction(e) for e in edges)
            if det(tuple(zip(*scaled))) == 0:
                raise NotFullDimensionalError("simplex vertices are affinely dependent")
        else:
            gens = tuple(
                tuple(tuple(int(x) for x in g) for g in per_vertex)
                for per_vertex in self.cone_generators)
            if len(gens) != len(verts):
                raise ValueError("one generator list per vertex required")
            object.__setattr__(self, "cone_generators", gens)

    def is_simplex(self) -> bool:
        return self.cone_generators is None


def tangent_cones(p: SimplePolytope) -> tuple:
    """Vertex cones in input vertex order.

    For a simplex the cone at vertex s_j is generated by the primitive
    directions of s_k - s_j, k != j.
    """
    cones = []
    for j, s in enumerate(p.vertices):
        if p.is_simplex():
            gens = tuple(
                primitive_direction(vec_sub(p.vertices[k], s))
                for k in range(len(p.vertices)) if k != j)
        else:
            gens = tuple(primitive(g) for g in p.cone_generators[j])
            if len(gens) != p.dim:
                raise ConesRequiredError(
                    f"vertex {j}: expected {p.dim} generators, got {len(gens)}")
        cones.append(VertexCone(apex=s, generators=gens, apex_period=apex_period(s)))
    return tuple(cones)


def polytope_period(p: SimplePolytope) -> int:
    """Smallest q such that q*p has integral vertices."""
    q = 1
    for v in p.vertices:
        q = lcm(q, apex_period(v))
    return q
