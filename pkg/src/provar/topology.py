"""Vietoris-Rips persistent homology over Z/2.

``build_rips`` assembles the filtration (simplices up to dimension
max_dim + 1, filtration value = simplex diameter, global order by
(value, dimension, lexicographic vertex order)).  ``compute_persistence``
reduces the Z/2 boundary matrix left to right with the clearing
optimization, processing dimensions top down, and returns a diagram of
(birth, death) pairs per homology dimension, death = inf for essential
classes.

The reduction inner loop is compiled with numba when available; a pure
python implementation of the same algorithm is kept both as a fallback
and as a cross-check target for tests.
"""

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SimplexBudgetError

try:
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAVE_NUMBA = False

__all__ = [
    "RipsFiltration",
    "PersistenceDiagram",
    "build_rips",
    "compute_persistence",
    "betti_at",
    "persistent_betti_summary",
    "diagram_to_json",
    "diagram_from_json",
    "DEFAULT_SIMPLEX_BUDGET",
]

DEFAULT_SIMPLEX_BUDGET = 5_000_000


# ----------------------------------------------------------------------
# filtration construction


def _pairwise_distances(pts):
    diff = pts[:, None, :] - pts[None, :, :]
    return np.sqrt((diff * diff).sum(axis=-1))


def _enumerate_edges(dist, max_scale):
    n = dist.shape[0]
    iu, ju = np.triu_indices(n, k=1)
    keep = dist[iu, ju] <= max_scale
    iu, ju = iu[keep], ju[keep]
    verts = np.column_stack([iu, ju]).astype(np.int32)
    vals = dist[iu, ju]
    return verts, vals


def _enumerate_triangles(adj, dist, edges):
    """All triangles (i < j < k) whose three edges are in the graph."""
    blocks_v = []
    blocks_d = []
    for i, j in edges:
        cand = np.nonzero(adj[i] & adj[j])[0]
        cand = cand[cand > j]
        if cand.size:
            tri = np.empty((cand.size, 3), dtype=np.int32)
            tri[:, 0] = i
            tri[:, 1] = j
            tri[:, 2] = cand
            blocks_v.append(tri)
            d = np.maximum(dist[i, j], np.maximum(dist[i, cand], dist[j, cand]))
            blocks_d.append(d)
    if not blocks_v:
        return np.empty((0, 3), dtype=np.int32), np.empty(0)
    return np.vstack(blocks_v), np.concatenate(blocks_d)


def _count_triangles(adj, edges):
    total = 0
    for i, j in edges:
        cand = np.nonzero(adj[i] & adj[j])[0]
        total += int((cand > j).sum())
    return total


def _enumerate_tetrahedra(adj, dist, tris, tri_vals):
    blocks_v = []
    blocks_d = []
    for t in range(tris.shape[0]):
        i, j, k = tris[t]
        cand = np.nonzero(adj[i] & adj[j] & adj[k])[0]
        cand = cand[cand > k]
        if cand.size:
            tet = np.empty((cand.size, 4), dtype=np.int32)
            tet[:, 0] = i
            tet[:, 1] = j
            tet[:, 2] = k
            tet[:, 3] = cand
            blocks_v.append(tet)
            d = np.maximum(
                tri_vals[t],
                np.maximum(dist[i, cand], np.maximum(dist[j, cand], dist[k, cand])),
            )
            blocks_d.append(d)
    if not blocks_v:
        return np.empty((0, 4), dtype=np.int32), np.empty(0)
    return np.vstack(blocks_v), np.concatenate(blocks_d)


def _count_tetrahedra(adj, tris):
    total = 0
    for i, j, k in tris:
        cand = np.nonzero(adj[i] & adj[j] & adj[k])[0]
        total += int((cand > k).sum())
    return total


@dataclass
class RipsFiltration:
    """A Rips filtration in global filtration order.

    Simplices are stored columnar: ``values`` (filtration value, sorted
    ascending with ties broken by dimension then lexicographic vertex
    order), ``dims``, and ``verts`` (padded with -1).  ``_blocks`` maps
    each dimension d >= 1 to (global positions, boundary facet indices),
    which is what the reduction consumes.
    """

    n_points: int
    max_dim: int
    max_scale: float
    values: np.ndarray
    dims: np.ndarray
    verts: np.ndarray
    _blocks: dict = field(default_factory=dict, repr=False)

    @property
    def simplex_count(self):
        return int(self.values.shape[0])

    def simplices(self):
        """Yield (vertex tuple, filtration value) in filtration order."""
        for idx in range(self.simplex_count):
            d = int(self.dims[idx])
            yield tuple(int(v) for v in self.verts[idx, : d + 1]), float(
                self.values[idx]
            )


def _pack_rows(verts, n):
    """Injective int64 key for each row of ascending vertex indices."""
    key = np.zeros(verts.shape[0], dtype=np.int64)
    for c in range(verts.shape[1]):
        key = key * n + verts[:, c]
    return key


def build_rips(cloud, max_dim=1, max_scale=None, budget=DEFAULT_SIMPLEX_BUDGET):
    """Build the Rips filtration of a point cloud.

    Parameters
    ----------
    cloud : PointCloud or (n, d) array
    max_dim : int in {0, 1, 2}
        Homology is computed up to this dimension, so simplices up to
        dimension max_dim + 1 enter the filtration.
    max_scale : float, optional
        Largest edge length admitted.  Defaults to 0.4 times the cloud
        diameter.
    budget : int
        Upper bound on the total simplex count.  The count is taken
        before any large array is materialized.

    Raises
    ------
    SimplexBudgetError
        If the filtration would contain more than ``budget`` simplices.
    """
    pts = np.asarray(getattr(cloud, "points", cloud), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 1:
        raise ValueError("need a nonempty (n, d) point array")
    if max_dim not in (0, 1, 2):
        raise ValueError("max_dim must be 0, 1, or 2, got %r" % (max_dim,))
    n = pts.shape[0]
    dist = _pairwise_distances(pts)
    if max_scale is None:
        max_scale = 0.4 * float(dist.max())
    max_scale = float(max_scale)
    if max_scale < 0:
        raise ValueError("max_scale must be >= 0")

    adj = (dist <= max_scale) & ~np.eye(n, dtype=bool)
    edge_verts, edge_vals = _enumerate_edges(dist, max_scale)

    # count everything before materializing the big arrays
    count = n + edge_verts.shape[0]
    tri_count = _count_triangles(adj, edge_verts) if max_dim >= 1 else 0
    count += tri_count
    if count > budget:
        raise SimplexBudgetError(
            "filtration needs %d simplices, over the budget of %d" % (count, budget),
            count=count,
            budget=budget,
        )
    tris = tri_vals = None
    if max_dim >= 1:
        tris, tri_vals = _enumerate_triangles(adj, dist, edge_verts)
    tet_count = 0
    if max_dim == 2 and tris is not None and tris.shape[0]:
        tet_count = _count_tetrahedra(adj, tris)
        count += tet_count
        if count > budget:
            raise SimplexBudgetError(
                "filtration needs %d simplices, over the budget of %d"
                % (count, budget),
                count=count,
                budget=budget,
            )
    tets = tet_vals = None
    if max_dim == 2 and tet_count:
        tets, tet_vals = _enumerate_tetrahedra(adj, dist, tris, tri_vals)

    # assemble the global order
    width = max_dim + 2
    total = count
    verts = np.full((total, width), -1, dtype=np.int32)
    vals = np.empty(total)
    dims = np.empty(total, dtype=np.int8)
    pos = 0
    per_dim = []
    vert_blocks = [np.arange(n, dtype=np.int32)[:, None], edge_verts, tris, tets]
    val_blocks = [np.zeros(n), edge_vals, tri_vals, tet_vals]
    for d in range(width):
        vb = vert_blocks[d] if d < len(vert_blocks) else None
        if vb is None or vb.shape[0] == 0:
            per_dim.append((pos, pos))
            continue
        m = vb.shape[0]
        verts[pos:pos + m, : d + 1] = vb
        vals[pos:pos + m] = val_blocks[d]
        dims[pos:pos + m] = d
        per_dim.append((pos, pos + m))
        pos += m

    keys = [verts[:, c] for c in range(width - 1, -1, -1)]
    keys.append(dims)
    keys.append(vals)
    order = np.lexsort(keys)
    values_s = vals[order]
    dims_s = dims[order]
    verts_s = verts[order]
    rank_of = np.empty(total, dtype=np.int64)
    rank_of[order] = np.arange(total, dtype=np.int64)

    # boundary facets per dimension, as global sorted-order indices
    blocks = {}
    for d in range(1, width):
        a, b = per_dim[d]
        if a == b:
            continue
        m = b - a
        dverts = verts[a:b, : d + 1]
        fa, fb = per_dim[d - 1]
        face_verts = verts[fa:fb, :d]
        face_keys = _pack_rows(face_verts, n)
        face_sort = np.argsort(face_keys)
        sorted_keys = face_keys[face_sort]
        face_global = rank_of[fa:fb]
        bnd = np.empty((m, d + 1), dtype=np.int32)
        for drop in range(d + 1):
            cols = [c for c in range(d + 1) if c != drop]
            sub = dverts[:, cols]
            sub_keys = _pack_rows(sub, n)
            loc = np.searchsorted(sorted_keys, sub_keys)
            bnd[:, drop] = face_global[face_sort[loc]].astype(np.int32)
        bnd.sort(axis=1)
        gpos = rank_of[a:b]
        gorder = np.argsort(gpos)
        blocks[d] = (gpos[gorder], bnd[gorder])
    return RipsFiltration(
        n_points=n,
        max_dim=int(max_dim),
        max_scale=max_scale,
        values=values_s,
        dims=dims_s,
        verts=verts_s,
        _blocks=blocks,
    )


# ----------------------------------------------------------------------
# boundary matrix reduction (Z/2), numba and python variants


def _reduce_block_py(bnd, gpos, pivot_col, cleared, destroyer, births, deaths):
    """Left-to-right reduction of one dimension block, python version.

    Columns arrive in filtration order.  Each column is a sorted array of
    global facet indices; adding two columns over Z/2 is the symmetric
    difference.  When a column acquires a fresh pivot (largest index), it
    is stored and the (pivot, column) pair is recorded; the pivot row is
    marked cleared so its own column is skipped in the next block down.
    """
    npairs = 0
    stored = []
    m = bnd.shape[0]
    for t in range(m):
        j = int(gpos[t])
        if cleared[j]:
            continue
        cur = bnd[t].astype(np.int64)
        while cur.size:
            low = int(cur[-1])
            k = pivot_col[low]
            if k < 0:
                pivot_col[low] = len(stored)
                stored.append(cur)
                births[npairs] = low
                deaths[npairs] = j
                npairs += 1
                cleared[low] = 1
                destroyer[j] = 1
                break
            cur = np.setxor1d(cur, stored[k], assume_unique=True)
    return npairs


if _HAVE_NUMBA:

    @njit(cache=True)
    def _reduce_block_nb(bnd, gpos, pivot_col, cleared, destroyer, births, deaths):
        m, w = bnd.shape
        npairs = 0
        arena = np.empty(4 * m + 16, np.int64)
        alen = 0
        off = np.empty(m, np.int64)
        ln = np.empty(m, np.int64)
        nstored = 0
        cur = np.empty(w + 1, np.int64)
        tmp = np.empty(w + 1, np.int64)
        for t in range(m):
            j = gpos[t]
            if cleared[j]:
                continue
            lc = w
            for q in range(w):
                cur[q] = bnd[t, q]
            while lc > 0:
                low = cur[lc - 1]
                k = pivot_col[low]
                if k < 0:
                    if alen + lc > arena.size:
                        na = np.empty(max(arena.size * 2, alen + lc), np.int64)
                        na[:alen] = arena[:alen]
                        arena = na
                    off[nstored] = alen
                    ln[nstored] = lc
                    for q in range(lc):
                        arena[alen + q] = cur[q]
                    alen += lc
                    pivot_col[low] = nstored
                    nstored += 1
                    births[npairs] = low
                    deaths[npairs] = j
                    npairs += 1
                    cleared[low] = 1
                    destroyer[j] = 1
                    break
                o = off[k]
                l2 = ln[k]
                need = lc + l2
                if tmp.size < need:
                    tmp = np.empty(2 * need, np.int64)
                a = 0
                b = 0
                c = 0
                while a < lc and b < l2:
                    va = cur[a]
                    vb = arena[o + b]
                    if va < vb:
                        tmp[c] = va
                        a += 1
                        c += 1
                    elif vb < va:
                        tmp[c] = vb
                        b += 1
                        c += 1
                    else:
                        a += 1
                        b += 1
                while a < lc:
                    tmp[c] = cur[a]
                    a += 1
                    c += 1
                while b < l2:
                    tmp[c] = arena[o + b]
                    b += 1
                    c += 1
                sw = cur
                cur = tmp
                tmp = sw
                lc = c
        return npairs


@dataclass
class PersistenceDiagram:
    """Per-dimension (birth, death) pairs; death = inf for essential bars.

    ``pairs[k]`` is an (m_k, 2) float array sorted by (birth, death).
    Zero-persistence pairs (birth == death) are kept; summaries filter
    them out by construction.
    """

    max_dim: int
    max_scale: float
    n_points: int
    pairs: dict

    def bars(self, dim):
        return self.pairs.get(dim, np.empty((0, 2)))


def compute_persistence(filt, use_numba=None):
    """Reduce the filtration's boundary matrix and read off the diagram.

    Dimensions are processed from the top down so each stored pivot
    clears the corresponding creator column in the block below (the
    standard clearing optimization; the output is identical to plain
    left-to-right reduction).
    """
    if use_numba is None:
        use_numba = _HAVE_NUMBA
    reduce_block = _reduce_block_nb if use_numba else _reduce_block_py
    total = filt.simplex_count
    pivot_col = np.full(total, -1, dtype=np.int64)
    cleared = np.zeros(total, dtype=np.uint8)
    destroyer = np.zeros(total, dtype=np.uint8)
    pair_lists = {}
    for d in sorted(filt._blocks, reverse=True):
        gpos, bnd = filt._blocks[d]
        m = gpos.shape[0]
        births = np.empty(m, dtype=np.int64)
        deaths = np.empty(m, dtype=np.int64)
        npairs = reduce_block(
            bnd.astype(np.int64), gpos.astype(np.int64), pivot_col,
            cleared, destroyer, births, deaths,
        )
        pair_lists[d] = (births[:npairs], deaths[:npairs])

    pairs = {}
    dims_s = filt.dims
    values_s = filt.values
    for k in range(filt.max_dim + 1):
        rows = []
        if (k + 1) in pair_lists:
            b_idx, d_idx = pair_lists[k + 1]
            for b, d in zip(b_idx, d_idx):
                rows.append((values_s[b], values_s[d]))
        mask = dims_s == k
        ess = np.nonzero(mask & (cleared == 0) & (destroyer == 0))[0]
        for i in ess:
            rows.append((values_s[i], math.inf))
        arr = np.array(rows, dtype=float) if rows else np.empty((0, 2))
        if arr.shape[0]:
            order = np.lexsort((arr[:, 1], arr[:, 0]))
            arr = arr[order]
        pairs[k] = arr
    return PersistenceDiagram(
        max_dim=filt.max_dim,
        max_scale=filt.max_scale,
        n_points=filt.n_points,
        pairs=pairs,
    )


# ----------------------------------------------------------------------
# reading the diagram


def betti_at(diag, scale):
    """Betti numbers at one scale: bars with birth <= scale < death."""
    out = []
    for k in range(diag.max_dim + 1):
        bars = diag.bars(k)
        if bars.shape[0]:
            alive = (bars[:, 0] <= scale) & (scale < bars[:, 1])
            out.append(int(alive.sum()))
        else:
            out.append(0)
    return tuple(out)


def persistent_betti_summary(diag, persistence_ratio):
    """Count significant bars per dimension.

    A bar is significant when its persistence (death - birth, with death
    = inf read as max_scale - birth) exceeds persistence_ratio *
    max_scale.
    """
    if not 0.0 < persistence_ratio < 1.0:
        raise ValueError("persistence_ratio must be in (0, 1)")
    thresh = persistence_ratio * diag.max_scale
    out = []
    for k in range(diag.max_dim + 1):
        bars = diag.bars(k)
        if not bars.shape[0]:
            out.append(0)
            continue
        deaths = np.where(np.isinf(bars[:, 1]), diag.max_scale, bars[:, 1])
        pers = deaths - bars[:, 0]
        out.append(int((pers > thresh).sum()))
    return tuple(out)


def diagram_to_json(diag):
    """Serialize a diagram: per-dimension [birth, death] arrays, null for inf."""
    dims_obj = {}
    for k in range(diag.max_dim + 1):
        bars = diag.bars(k)
        dims_obj[str(k)] = [
            [float(b), None if math.isinf(d) else float(d)] for b, d in bars
        ]
    obj = {
        "n_points": int(diag.n_points),
        "max_dim": int(diag.max_dim),
        "max_scale": float(diag.max_scale),
        "dims": dims_obj,
    }
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def diagram_from_json(text):
    obj = json.loads(text)
    pairs = {}
    for key, rows in obj["dims"].items():
        arr = np.array(
            [[b, math.inf if d is None else d] for b, d in rows], dtype=float
        ) if rows else np.empty((0, 2))
        pairs[int(key)] = arr
    return PersistenceDiagram(
        max_dim=int(obj["max_dim"]),
        max_scale=float(obj["max_scale"]),
        n_points=int(obj["n_points"]),
        pairs=pairs,
    )
