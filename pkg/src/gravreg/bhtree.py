"""Barnes-Hut 2^D-tree over the reference cloud and gated force evaluation.

The tree is stored in flat arrays so the traversal kernel can be compiled with
numba. It is built once per registration and never mutated afterwards.
"""

import numpy as np

from ._kernels import bh_forces_kernel
from .core import PointCloud
from .errors import EmptyCloud, LengthMismatch


class BHTree:
    """Immutable spatial tree with per-node aggregate mass and center of mass.

    Node arrays (index 0 is the root):
      children:  (n, 2^D) int64, -1 for an absent child; all -1 on leaves
      com:       (n, D) mass-weighted mean of contained points
      mass:      (n,) aggregate mass
      length:    (n,) Euclidean norm of the cell's bounding-box diagonal
      occupancy: (n,) number of contained points
      depth:     (n,) node depth, root at 0
    """

    def __init__(self, dim, depth_cap, children, com, mass, length, occupancy,
                 depth, bbox_min, bbox_max):
        self.dim = dim
        self.depth_cap = depth_cap
        self.children = children
        self.com = com
        self.mass = mass
        self.length = length
        self.occupancy = occupancy
        self.depth = depth
        self.bbox_min = bbox_min
        self.bbox_max = bbox_max

    @property
    def node_count(self):
        return len(self.mass)

    @property
    def realized_depth(self):
        return int(self.depth.max())

    def node_count_bound(self):
        """Structural node-count cap: N + sum_{d=1}^{d0-1} (2^D)^d + 1
        with d0 the realized depth."""
        n = int(self.occupancy[0])
        d0 = self.realized_depth
        branching = 2**self.dim
        return n + sum(branching**d for d in range(1, d0)) + 1


def build(reference: PointCloud, masses, max_depth: int) -> BHTree:
    """Recursive 2^D subdivision at cell centers, stopping at singleton cells
    or at the depth cap. Empty children are not allocated."""
    reference.require_nonempty()
    pts = reference.points
    masses = np.asarray(masses, dtype=np.float64)
    if masses.shape != (len(pts),):
        raise LengthMismatch(f"masses {masses.shape} vs points {len(pts)}")
    n, d = pts.shape
    n_child = 2**d

    children_rows = []
    com_rows = []
    mass_rows = []
    length_rows = []
    occ_rows = []
    depth_rows = []
    bmin_rows = []
    bmax_rows = []

    def new_node(idx, bmin, bmax, depth):
        node = len(mass_rows)
        m = masses[idx]
        total = m.sum()
        children_rows.append(np.full(n_child, -1, dtype=np.int64))
        com_rows.append((pts[idx] * m[:, None]).sum(axis=0) / total)
        mass_rows.append(total)
        length_rows.append(float(np.linalg.norm(bmax - bmin)))
        occ_rows.append(len(idx))
        depth_rows.append(depth)
        bmin_rows.append(bmin)
        bmax_rows.append(bmax)

        if len(idx) > 1 and depth < max_depth:
            center = bmin + (bmax - bmin) / 2.0
            # child slot bit k set when coordinate k >= center (upper half-open
            # interval takes the splitting-plane boundary)
            side = pts[idx] >= center
            slot = np.zeros(len(idx), dtype=np.int64)
            for k in range(d):
                slot = slot * 2 + side[:, k].astype(np.int64)
            for c in range(n_child):
                sub = idx[slot == c]
                if len(sub) == 0:
                    continue
                bits = np.array([(c >> (d - 1 - k)) & 1 for k in range(d)], dtype=bool)
                cmin = np.where(bits, center, bmin)
                cmax = np.where(bits, bmax, center)
                children_rows[node][c] = new_node(sub, cmin, cmax, depth + 1)
        return node

    bmin = pts.min(axis=0)
    bmax = pts.max(axis=0)
    new_node(np.arange(n), bmin, bmax, 0)

    return BHTree(
        dim=d,
        depth_cap=max_depth,
        children=np.array(children_rows, dtype=np.int64),
        com=np.ascontiguousarray(np.array(com_rows)),
        mass=np.array(mass_rows),
        length=np.array(length_rows),
        occupancy=np.array(occ_rows, dtype=np.int64),
        depth=np.array(depth_rows, dtype=np.int64),
        bbox_min=np.array(bmin_rows),
        bbox_max=np.array(bmax_rows),
    )


def bh_forces(tree: BHTree, queries, query_masses, params, count_visits=False):
    """Gated gravitational forces on a batch of query particles.

    Returns an (M, D) force matrix; with ``count_visits`` also an (M,) array
    of node visits per query.
    """
    queries = np.ascontiguousarray(np.asarray(queries, dtype=np.float64))
    if queries.ndim == 1:
        queries = queries[None, :]
    query_masses = np.broadcast_to(
        np.asarray(query_masses, dtype=np.float64), (len(queries),)
    )
    query_masses = np.ascontiguousarray(query_masses)
    stack_cap = (2**tree.dim) * (tree.depth_cap + 2)
    forces, visits = bh_forces_kernel(
        tree.children, tree.com, tree.mass, tree.length,
        queries, query_masses,
        float(params.theta), float(params.G), float(params.epsilon) ** 2,
        stack_cap,
    )
    if count_visits:
        return forces, visits
    return forces


def bh_force(tree: BHTree, query, query_mass, params):
    """Force on a single query particle."""
    return bh_forces(tree, np.asarray(query)[None, :], [query_mass], params)[0]


def brute_force(reference: PointCloud, ref_masses, query, query_mass, params):
    """Exact O(N) softened gravitational sum; oracle for bh_force."""
    reference.require_nonempty()
    ref_masses = np.asarray(ref_masses, dtype=np.float64)
    query = np.asarray(query, dtype=np.float64)
    delta = query - reference.points
    d2 = (delta * delta).sum(axis=1) + params.epsilon**2
    with np.errstate(divide="ignore", invalid="ignore"):
        w = np.where(d2 > 0, ref_masses / np.where(d2 > 0, d2, 1.0) ** 1.5, 0.0)
    return -params.G * query_mass * (w[:, None] * delta).sum(axis=0)


def dump(tree: BHTree) -> str:
    """Indented one-node-per-line text serialization for golden-file tests."""
    lines = []

    def fmt_vec(v):
        return "(" + ", ".join(f"{x:.6g}" for x in v) + ")"

    def walk(node):
        depth = int(tree.depth[node])
        lines.append(
            "  " * depth
            + f"depth={depth} bbox={fmt_vec(tree.bbox_min[node])}-{fmt_vec(tree.bbox_max[node])}"
            + f" mass={tree.mass[node]:.6g} occupancy={int(tree.occupancy[node])}"
        )
        for c in tree.children[node]:
            if c >= 0:
                walk(int(c))

    walk(0)
    return "\n".join(lines) + "\n"
