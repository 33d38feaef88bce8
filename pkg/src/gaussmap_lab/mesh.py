"""Surface meshes by integrating the Weierstrass representation.

The immersion is Re of the path integral of the null form from a fixed
basepoint.  Integration runs along a spanning tree of the chart grid, so
the surface is single-valued by construction; every non-tree grid edge
then closes a fundamental cycle whose real period must vanish for
period-certified data, and the largest such closure defect is reported.

Grids live in one affine chart.  Nodes inside an exclusion disk around a
puncture or a pole of the integrand are dropped, which is also how ends
are truncated for display.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import INF, RationalMap, is_inf
from .errors import ConfigError, PathThroughPole, PeriodFailure
from .weierstrass import AlphaForm, WeierstrassData, alpha, period_report, pointwise_geometry

__all__ = [
    "ChartGrid",
    "SurfaceMesh",
    "integrate_path",
    "generate_mesh",
    "write_obj",
    "load_obj",
]


@dataclass(frozen=True)
class ChartGrid:
    """A polar annulus or rectangle of integration nodes in the z chart.

    Polar grids space their rings geometrically, so the (log r, angle)
    parameters are uniform and conformality can be checked by plain
    central differences.
    """

    kind: str = "polar"
    center: complex = 0j
    r_min: float = 0.2
    r_max: float = 4.0
    n_r: int = 16
    n_theta: int = 48
    x_range: tuple = (-2.0, 2.0)
    y_range: tuple = (-2.0, 2.0)
    nx: int = 24
    ny: int = 24
    exclusion_radius: float = 0.05
    basepoint: complex | None = None

    def __post_init__(self):
        if self.kind not in ("polar", "rect"):
            raise ConfigError(f"unknown grid kind {self.kind!r}")
        if self.kind == "polar" and not (0 < self.r_min < self.r_max):
            raise ConfigError("polar grid needs 0 < r_min < r_max")

    def nodes(self) -> tuple[np.ndarray, tuple]:
        """Complex node array plus the (rows, cols, wraps) shape of the grid."""
        if self.kind == "polar":
            s = np.linspace(math.log(self.r_min), math.log(self.r_max), self.n_r)
            t = 2.0 * np.pi * np.arange(self.n_theta) / self.n_theta
            z = self.center + np.exp(s[:, None] + 1j * t[None, :])
            return z, (self.n_r, self.n_theta, True)
        xs = np.linspace(*self.x_range, self.nx)
        ys = np.linspace(*self.y_range, self.ny)
        z = xs[None, :] + 1j * ys[:, None]
        return z, (self.ny, self.nx, False)

    def steps(self) -> tuple[float, float]:
        """Uniform chart steps (rows, cols) for difference quotients."""
        if self.kind == "polar":
            ds = (math.log(self.r_max) - math.log(self.r_min)) / (self.n_r - 1)
            return ds, 2.0 * np.pi / self.n_theta
        dx = (self.x_range[1] - self.x_range[0]) / (self.nx - 1)
        dy = (self.y_range[1] - self.y_range[0]) / (self.ny - 1)
        return dy, dx

    def digest(self) -> str:
        text = repr((self.kind, self.center, self.r_min, self.r_max, self.n_r,
                     self.n_theta, self.x_range, self.y_range, self.nx, self.ny,
                     self.exclusion_radius, self.basepoint))
        return hashlib.sha1(text.encode()).hexdigest()[:12]


# ---------------------------------------------------------------------------
# path integration
# ---------------------------------------------------------------------------

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(12)


def _segment_quad(comps, z0: complex, z1: complex) -> np.ndarray:
    mid = 0.5 * (z0 + z1)
    half = 0.5 * (z1 - z0)
    zs = mid + half * _GL_NODES
    out = np.empty(3, dtype=complex)
    for k, comp in enumerate(comps):
        vals = comp.eval_many(zs)
        out[k] = half * np.sum(vals * _GL_WEIGHTS)
    return out


def _adaptive(comps, z0, z1, tol, depth=0) -> np.ndarray:
    whole = _segment_quad(comps, z0, z1)
    mid = 0.5 * (z0 + z1)
    halves = _segment_quad(comps, z0, mid) + _segment_quad(comps, mid, z1)
    if depth >= 12 or np.max(np.abs(whole - halves)) <= tol * (1.0 + np.max(np.abs(halves))):
        return halves
    return _adaptive(comps, z0, mid, tol, depth + 1) + _adaptive(comps, mid, z1, tol, depth + 1)


def _segment_clearance(z0: complex, z1: complex, p: complex) -> float:
    d = z1 - z0
    L2 = abs(d) ** 2
    if L2 == 0:
        return abs(p - z0)
    t = max(0.0, min(1.0, ((p - z0) * d.conjugate()).real / L2))
    return abs(z0 + t * d - p)


def _clearances(z0s: np.ndarray, z1s: np.ndarray, centers: list[complex]) -> np.ndarray:
    """Min distance of each segment to the nearest center (vectorized)."""
    if not centers:
        return np.full(len(z0s), np.inf)
    d = z1s - z0s
    L2 = np.abs(d) ** 2
    L2 = np.where(L2 == 0, 1.0, L2)
    out = np.full(len(z0s), np.inf)
    for p in centers:
        t = ((p - z0s) * np.conj(d)).real / L2
        t = np.clip(t, 0.0, 1.0)
        out = np.minimum(out, np.abs(z0s + t * d - p))
    return out


def _batch_quad(comps, z0s: np.ndarray, z1s: np.ndarray) -> np.ndarray:
    mid = 0.5 * (z0s + z1s)
    half = 0.5 * (z1s - z0s)
    zs = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    out = np.empty((len(z0s), 3), dtype=complex)
    for k, comp in enumerate(comps):
        out[:, k] = half * (comp.eval_many(zs) @ _GL_WEIGHTS)
    return out


def _batch_integrate(comps, z0s: np.ndarray, z1s: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Adaptive segment integrals for many edges at once."""
    whole = _batch_quad(comps, z0s, z1s)
    mid = 0.5 * (z0s + z1s)
    halves = _batch_quad(comps, z0s, mid) + _batch_quad(comps, mid, z1s)
    err = np.max(np.abs(whole - halves), axis=1)
    bad = err > tol * (1.0 + np.max(np.abs(halves), axis=1))
    for i in np.where(bad)[0]:
        halves[i] = _adaptive(comps, complex(z0s[i]), complex(z1s[i]), tol, depth=1)
    return halves


def integrate_path(form: AlphaForm, frm: complex, to: complex, n: int = 12,
                   tol: float = 1e-10, poles: list | None = None,
                   exclusion: float = 0.05) -> np.ndarray:
    """Integral of the vector form along a straight segment.

    Composite Gauss-Legendre with adaptive bisection until two refinement
    levels agree to tol.  Raises PathThroughPole when the segment passes
    within the exclusion radius of a pole of any component.
    """
    frm, to = complex(frm), complex(to)
    if poles is None:
        poles = form.pole_points()
    for p in poles:
        if _segment_clearance(frm, to, p) < exclusion:
            raise PathThroughPole(f"segment {frm} -> {to} passes within {exclusion} of pole {p}")
    del n  # the composite rule is fixed at 12 nodes per panel
    return _adaptive(form.components(), frm, to, tol)


# ---------------------------------------------------------------------------
# mesh generation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceMesh:
    vertices: np.ndarray          # (n, 3) float
    normals: np.ndarray           # (n, 3) float, unit
    faces: tuple                  # quads/triangles of 0-based vertex ids
    provenance: dict
    cycle_defect: float           # max |Re| over fundamental cycle integrals
    diameter: float
    grid_index: dict              # (row, col) -> vertex id
    grid_shape: tuple

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def boundary_component_count(self) -> int:
        """Number of boundary loops (edges used by exactly one face)."""
        seen: dict = {}
        for face in self.faces:
            for a, b in zip(face, face[1:] + face[:1]):
                key = (min(a, b), max(a, b))
                seen[key] = seen.get(key, 0) + 1
        boundary = [e for e, c in seen.items() if c == 1]
        adj: dict = {}
        for a, b in boundary:
            adj.setdefault(a, set()).add(b)
            adj.setdefault(b, set()).add(a)
        visited = set()
        loops = 0
        for start in adj:
            if start in visited:
                continue
            loops += 1
            stack = [start]
            while stack:
                v = stack.pop()
                if v in visited:
                    continue
                visited.add(v)
                stack.extend(adj[v] - visited)
        return loops

    def isothermality(self, steps: tuple) -> float:
        """Worst conformality defect over interior nodes, relative to scale^2.

        Uses the fourth-order five-point central stencil, so the defect of
        genuinely isothermal data decays like h^4 with the grid step.
        """
        drow, dcol = steps
        rows, cols, wrap = self.grid_shape

        def diff(ids, h):
            m2, m1, p1, p2 = (self.vertices[i] for i in ids)
            return (m2 - 8 * m1 + 8 * p1 - p2) / (12 * h)

        worst = 0.0
        for (r, c), vid in self.grid_index.items():
            row_ids, col_ids = [], []
            for dr in (-2, -1, 1, 2):
                key = (r + dr, c)
                if key not in self.grid_index:
                    row_ids = None
                    break
                row_ids.append(self.grid_index[key])
            if row_ids is None:
                continue
            for dc in (-2, -1, 1, 2):
                cc = (c + dc) % cols if wrap else c + dc
                key = (r, cc)
                if key not in self.grid_index:
                    col_ids = None
                    break
                col_ids.append(self.grid_index[key])
            if col_ids is None:
                continue
            fr = diff(row_ids, drow)
            fc = diff(col_ids, dcol)
            scale2 = max(float(fr @ fr), float(fc @ fc), 1e-300)
            conf = abs(float(fr @ fr) - float(fc @ fc))
            orth = abs(float(fr @ fc))
            worst = max(worst, conf / scale2, orth / scale2)
        return worst


def _exclusion_centers(data: WeierstrassData, form: AlphaForm) -> list[complex]:
    centers = [complex(p) for p in data.dom if not is_inf(p)]
    for z in form.pole_points():
        if all(abs(z - c) > 1e-9 * (1 + abs(z)) for c in centers):
            centers.append(z)
    return centers


def generate_mesh(data: WeierstrassData, grid: ChartGrid, *, tol: float = 1e-8,
                  allow_period_failure: bool = False,
                  provenance: dict | None = None) -> SurfaceMesh:
    """Integrate the representation over the grid and assemble a mesh.

    The data must pass the period condition at tol (override with
    allow_period_failure, in which case the immersion is multivalued and
    the mesh depends on the spanning tree).
    """
    rep = period_report(data)
    if rep.max_im > tol * (1.0 + rep.scale):
        if not allow_period_failure:
            raise PeriodFailure(
                f"period condition fails (max imaginary residue {rep.max_im:.3e}); "
                "the immersion would be multivalued"
            )
    form = alpha(data)
    centers = _exclusion_centers(data, form)
    zgrid, (rows, cols, wrap) = grid.nodes()

    keep: dict = {}
    for r in range(rows):
        for c in range(cols):
            z = complex(zgrid[r, c])
            if all(abs(z - p) > grid.exclusion_radius for p in centers):
                keep[(r, c)] = z

    def neighbors(rc):
        r, c = rc
        cand = [(r + 1, c), (r, c + 1)] if not wrap else [(r + 1, c), (r, (c + 1) % cols)]
        return [n for n in cand if n in keep]

    # edges whose segments clear the exclusion disks
    candidates = [(rc, nb) for rc in sorted(keep) for nb in neighbors(rc)]
    if not keep:
        raise ConfigError("every grid node fell inside an exclusion disk")
    if candidates:
        z0s = np.array([keep[a] for a, _ in candidates])
        z1s = np.array([keep[b] for _, b in candidates])
        clear = _clearances(z0s, z1s, centers) > 0.8 * grid.exclusion_radius
        edges = [e for e, ok in zip(candidates, clear) if ok]
    else:
        edges = []
    base = min(
        keep,
        key=(lambda rc: abs(keep[rc] - grid.basepoint)) if grid.basepoint is not None else (lambda rc: rc),
    )

    adjacency: dict = {rc: [] for rc in keep}
    for a, b in edges:
        adjacency[a].append(b)
        adjacency[b].append(a)

    # deterministic breadth-first spanning tree, batching one BFS level of
    # edge integrals at a time
    comps = form.components()
    pos: dict = {base: np.zeros(3, dtype=complex)}
    order = [base]
    tree_edges = set()
    frontier = [base]
    while frontier:
        level = []
        claimed = set()
        for rc in frontier:
            for nb in sorted(adjacency[rc]):
                if nb in pos or nb in claimed:
                    continue
                claimed.add(nb)
                level.append((rc, nb))
        if not level:
            break
        vals = _batch_integrate(comps, np.array([keep[a] for a, _ in level]),
                                np.array([keep[b] for _, b in level]))
        nxt = []
        for (rc, nb), val in zip(level, vals):
            pos[nb] = pos[rc] + val
            order.append(nb)
            tree_edges.add((rc, nb))
            tree_edges.add((nb, rc))
            nxt.append(nb)
        frontier = nxt

    reachable = pos
    index = {rc: i for i, rc in enumerate(order)}
    verts = np.array([reachable[rc].real for rc in order], dtype=float)

    # close every fundamental cycle: each non-tree edge against the tree
    closing = [(a, b) for a, b in edges
               if a in reachable and b in reachable and (a, b) not in tree_edges]
    defect = 0.0
    if closing:
        vals = _batch_integrate(comps, np.array([keep[a] for a, _ in closing]),
                                np.array([keep[b] for _, b in closing]))
        for (a, b), val in zip(closing, vals):
            gap = reachable[a] + val - reachable[b]
            defect = max(defect, float(np.max(np.abs(gap.real))))

    normals = np.zeros_like(verts)
    for rc, i in index.items():
        normals[i] = _unit_normal(data, keep[rc])

    faces = []
    for r in range(rows - 1):
        crange = range(cols) if wrap else range(cols - 1)
        for c in crange:
            quad = [(r, c), (r + 1, c), (r + 1, (c + 1) % cols), (r, (c + 1) % cols)]
            if all(q in index for q in quad):
                faces.append(tuple(index[q] for q in quad))

    span = verts.max(axis=0) - verts.min(axis=0) if len(verts) else np.zeros(3)
    prov = dict(provenance or {})
    prov.setdefault("grid", grid.digest())
    return SurfaceMesh(
        vertices=verts,
        normals=normals,
        faces=tuple(faces),
        provenance=prov,
        cycle_defect=defect,
        diameter=float(np.linalg.norm(span)) or 1.0,
        grid_index=index,
        grid_shape=(rows, cols, wrap),
    )


def _unit_normal(data: WeierstrassData, z: complex) -> np.ndarray:
    g = data.g.to_approx()
    gz = g(z)
    if is_inf(gz) or abs(complex(gz)) > 1e8:
        return np.array([0.0, 0.0, 1.0])
    gz = complex(gz)
    denom = 1.0 + abs(gz) ** 2
    return np.array([2 * gz.real / denom, 2 * gz.imag / denom, (abs(gz) ** 2 - 1) / denom])


# ---------------------------------------------------------------------------
# file format
# ---------------------------------------------------------------------------

def write_obj(mesh: SurfaceMesh, path: str) -> None:
    """Plain text mesh: comments, v/vn lines, then 1-indexed f lines."""
    lines = []
    prov = " ".join(f"{k}={v}" for k, v in sorted(mesh.provenance.items()))
    lines.append(f"# gaussmap-lab {prov}")
    lines.append(f"# vertices={mesh.n_vertices} faces={mesh.n_faces} "
                 f"cycle-defect={mesh.cycle_defect:.3e}")
    for v in mesh.vertices:
        lines.append(f"v {v[0]:.12g} {v[1]:.12g} {v[2]:.12g}")
    for n in mesh.normals:
        lines.append(f"vn {n[0]:.9g} {n[1]:.9g} {n[2]:.9g}")
    for face in mesh.faces:
        lines.append("f " + " ".join(f"{i + 1}//{i + 1}" for i in face))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_obj(path: str):
    """Parse the exported format back into (vertices, normals, faces)."""
    verts, normals, faces = [], [], []
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                verts.append([float(x) for x in parts[1:4]])
            elif parts[0] == "vn":
                normals.append([float(x) for x in parts[1:4]])
            elif parts[0] == "f":
                faces.append(tuple(int(tok.split("/")[0]) - 1 for tok in parts[1:]))
    return np.array(verts), np.array(normals), faces
