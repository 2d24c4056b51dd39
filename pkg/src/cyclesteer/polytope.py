"""Geodesic sphere polytopes with a certified inradius.

Level 0 is the regular icosahedron; level k bisects every edge of level
k-1 and renormalizes. The triangulation is carried along explicitly, so
the inradius eta is certified directly from the facet planes without a
generic convex-hull algorithm. The vertex set is antipodally symmetric
at every level, which lets a vertex set double as antipodal measurement
directions.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GOLDEN = (1 + np.sqrt(5)) / 2


@dataclass(frozen=True)
class SpherePolytope:
    vertices: np.ndarray  # (N, 3) unit vectors
    faces: np.ndarray     # (F, 3) vertex index triangles of the hull
    eta: float            # certified inradius lower bound
    level: int

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]


def _icosahedron() -> tuple[np.ndarray, np.ndarray]:
    phi = GOLDEN
    verts = np.array(
        [
            [-1, 0, phi], [1, 0, phi], [-1, 0, -phi], [1, 0, -phi],
            [0, phi, 1], [0, phi, -1], [0, -phi, 1], [0, -phi, -1],
            [phi, 1, 0], [phi, -1, 0], [-phi, 1, 0], [-phi, -1, 0],
        ],
        dtype=float,
    )
    verts /= np.linalg.norm(verts, axis=1, keepdims=True)
    faces = np.array(
        [
            [0, 1, 4], [0, 4, 10], [0, 10, 11], [0, 11, 6], [0, 6, 1],
            [1, 6, 9], [1, 9, 8], [1, 8, 4], [4, 8, 5], [4, 5, 10],
            [10, 5, 2], [10, 2, 11], [11, 2, 7], [11, 7, 6], [6, 7, 9],
            [3, 2, 5], [3, 5, 8], [3, 8, 9], [3, 9, 7], [3, 7, 2],
        ]
    )
    return verts, faces


def _subdivide(verts: np.ndarray, faces: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """One geodesic subdivision: bisect edges, renormalize, split each
    triangle into four."""
    verts = list(map(tuple, verts))
    midpoint_cache: dict[tuple[int, int], int] = {}

    def midpoint(i: int, j: int) -> int:
        key = (min(i, j), max(i, j))
        if key not in midpoint_cache:
            p = np.array(verts[i]) + np.array(verts[j])
            p /= np.linalg.norm(p)
            verts.append(tuple(p))
            midpoint_cache[key] = len(verts) - 1
        return midpoint_cache[key]

    new_faces = []
    for a, b, c in faces:
        ab, bc, ca = midpoint(a, b), midpoint(b, c), midpoint(c, a)
        new_faces += [[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]
    return np.array(verts), np.array(new_faces)


def _facet_inradius(verts: np.ndarray, faces: np.ndarray) -> float:
    """Min over facets of the distance from the origin to the facet plane."""
    dists = []
    for a, b, c in faces:
        n = np.cross(verts[b] - verts[a], verts[c] - verts[a])
        dists.append(abs(np.dot(n, verts[a])) / np.linalg.norm(n))
    return float(min(dists))


def sphere_polytope(level: int) -> SpherePolytope:
    """Geodesic polytope at the given subdivision level (0 = icosahedron,
    12 vertices; each level quadruples the face count)."""
    if level < 0:
        raise ValueError("level must be >= 0")
    verts, faces = _icosahedron()
    for _ in range(level):
        verts, faces = _subdivide(verts, faces)
    poly = SpherePolytope(vertices=verts, faces=faces, eta=_facet_inradius(verts, faces), level=level)
    _check_antipodal(poly.vertices)
    return poly


def _check_antipodal(verts: np.ndarray, tol: float = 1e-9):
    for v in verts:
        if np.linalg.norm(verts + v, axis=1).min() > tol:
            raise AssertionError("vertex set not closed under negation")


def antipodal_directions(poly: SpherePolytope) -> np.ndarray:
    """One canonical representative per antipodal vertex pair (N/2
    measurement directions)."""
    chosen = []
    for v in poly.vertices:
        key = v if (v[0], v[1], v[2]) > (-v[0], -v[1], -v[2]) else -v
        if not any(np.allclose(key, c, atol=1e-9) for c in chosen):
            chosen.append(key)
    return np.array(chosen)
