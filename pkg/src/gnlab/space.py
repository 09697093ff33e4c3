"""Finite weighted graphs as metric measure spaces.

A space is a connected graph with a positive measure on vertices and
positive weights on undirected edges.  The metric is hop count.  On top
of that the module measures the two geometric quantities the inequality
checkers consume: the volume-doubling constant and a power-law fit of
ball growth.

Spaces come from two sources: a tiny text format (``build_from_file``)
and a family of built-in constructions (``build_builtin``) — cycles,
grids, tori, rooted binary trees, dumbbells (two cliques joined by a
path, deliberately *not* doubling), and word balls in the discrete
Heisenberg group.
"""

import itertools

import numpy as np

from ._accel import bfs_all_sources

DEFAULT_MAX_VERTICES = 8192


class Space:
    """Connected weighted graph with vertex measures and hop metric.

    Treat instances as immutable.  Attributes:

    ids          list of vertex id strings
    index        id -> integer index
    mu           (n,) vertex measures, all > 0
    edges        (m, 2) int array of undirected edges (i < j)
    edge_w       (m,) edge weights, all > 0
    adj_indptr / adj_indices / adj_w
                 CSR adjacency over directed arcs (both orientations)
    dist         (n, n) int32 hop distances
    diameter     max hop distance
    coords / dims / wrap
                 lattice metadata for grid/torus spaces, else None
    name         descriptor or file path this space was built from
    """

    def __init__(self, ids, mu, edge_list, name, coords=None, dims=None, wrap=None):
        n = len(ids)
        if n == 0:
            raise ValueError("space has no vertices")
        self.ids = list(ids)
        self.index = {v: i for i, v in enumerate(self.ids)}
        self.mu = np.asarray(mu, dtype=np.float64)
        self.name = name
        self.coords = coords
        self.dims = dims
        self.wrap = wrap

        m = len(edge_list)
        self.edges = np.zeros((m, 2), dtype=np.int64)
        self.edge_w = np.zeros(m, dtype=np.float64)
        for k, (i, j, w) in enumerate(edge_list):
            self.edges[k, 0] = min(i, j)
            self.edges[k, 1] = max(i, j)
            self.edge_w[k] = w

        # CSR over directed arcs
        deg = np.zeros(n, dtype=np.int64)
        for i, j, _ in edge_list:
            deg[i] += 1
            deg[j] += 1
        self.adj_indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(deg, out=self.adj_indptr[1:])
        self.adj_indices = np.zeros(m * 2, dtype=np.int64)
        self.adj_w = np.zeros(m * 2, dtype=np.float64)
        fill = self.adj_indptr[:-1].copy()
        for i, j, w in edge_list:
            self.adj_indices[fill[i]] = j
            self.adj_w[fill[i]] = w
            fill[i] += 1
            self.adj_indices[fill[j]] = i
            self.adj_w[fill[j]] = w
            fill[j] += 1

        self.dist = bfs_all_sources(self.adj_indptr, self.adj_indices, n)
        if (self.dist[0] < 0).any():
            bad = self.ids[int(np.argmax(self.dist[0] < 0))]
            raise ValueError(
                "graph is not connected (vertex %r unreachable from %r)"
                % (bad, self.ids[0])
            )
        self.diameter = int(self.dist.max())

        # ball measure table: _ball_mu[x, r] = mu(B(x, r)), r = 0..diameter
        tab = np.zeros((n, self.diameter + 1), dtype=np.float64)
        for x in range(n):
            tab[x] = np.bincount(
                self.dist[x], weights=self.mu, minlength=self.diameter + 1
            ).cumsum()
        self._ball_mu = tab

    @property
    def n(self):
        return len(self.ids)

    @property
    def n_edges(self):
        return len(self.edge_w)

    @property
    def total_measure(self):
        return float(self.mu.sum())

    def neighbors(self, x):
        """(indices, weights) of the neighbors of vertex index x."""
        a, b = self.adj_indptr[x], self.adj_indptr[x + 1]
        return self.adj_indices[a:b], self.adj_w[a:b]

    def ball(self, x, r):
        """Vertex indices of the closed ball B(x, r)."""
        return np.nonzero(self.dist[x] <= r)[0]

    def ball_measure(self, x, r):
        """mu(B(x, r)); r may exceed the diameter."""
        if r < 0:
            raise ValueError("ball radius must be >= 0")
        return float(self._ball_mu[x, min(int(r), self.diameter)])

    def __repr__(self):
        return "Space(%r, n=%d, m=%d, diam=%d)" % (
            self.name,
            self.n,
            self.n_edges,
            self.diameter,
        )


# ---------------------------------------------------------------------------
# text format
# ---------------------------------------------------------------------------


def build_from_file(path, max_vertices=DEFAULT_MAX_VERTICES):
    """Parse a graph file.

    Line types: ``# comment`` (and blank lines), ``v <id> <measure>``,
    ``e <id1> <id2> <weight>``.  Raises ValueError with a line number on
    any malformed input, duplicate vertex/edge, self-loop, non-positive
    measure or weight, unknown endpoint, or disconnected result.
    """
    ids = []
    mu = []
    index = {}
    edge_list = []
    seen_edges = set()

    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            kind = parts[0]
            if kind == "v":
                if len(parts) != 3:
                    raise ValueError(
                        "line %d: vertex line needs 'v <id> <measure>'" % lineno
                    )
                vid = parts[1]
                if vid in index:
                    raise ValueError("line %d: duplicate vertex %r" % (lineno, vid))
                try:
                    m = float(parts[2])
                except ValueError:
                    raise ValueError(
                        "line %d: measure %r is not a number" % (lineno, parts[2])
                    ) from None
                if not np.isfinite(m) or m <= 0:
                    raise ValueError(
                        "line %d: measure must be finite and > 0, got %r"
                        % (lineno, parts[2])
                    )
                index[vid] = len(ids)
                ids.append(vid)
                mu.append(m)
            elif kind == "e":
                if len(parts) != 4:
                    raise ValueError(
                        "line %d: edge line needs 'e <id1> <id2> <weight>'" % lineno
                    )
                u, v = parts[1], parts[2]
                for vid in (u, v):
                    if vid not in index:
                        raise ValueError(
                            "line %d: unknown vertex %r (vertices must be "
                            "declared before edges that use them)" % (lineno, vid)
                        )
                if u == v:
                    raise ValueError("line %d: self-loop on %r" % (lineno, u))
                try:
                    w = float(parts[3])
                except ValueError:
                    raise ValueError(
                        "line %d: weight %r is not a number" % (lineno, parts[3])
                    ) from None
                if not np.isfinite(w) or w <= 0:
                    raise ValueError(
                        "line %d: weight must be finite and > 0, got %r"
                        % (lineno, parts[3])
                    )
                key = (min(index[u], index[v]), max(index[u], index[v]))
                if key in seen_edges:
                    raise ValueError(
                        "line %d: duplicate edge %r -- %r" % (lineno, u, v)
                    )
                seen_edges.add(key)
                edge_list.append((index[u], index[v], w))
            else:
                raise ValueError(
                    "line %d: unknown line type %r (expected 'v', 'e' or '#')"
                    % (lineno, kind)
                )

    if not ids:
        raise ValueError("%s: no vertices" % path)
    if len(ids) > max_vertices:
        raise ValueError(
            "%s: %d vertices exceeds cap %d" % (path, len(ids), max_vertices)
        )
    return Space(ids, mu, edge_list, name=str(path))


# ---------------------------------------------------------------------------
# built-in families
# ---------------------------------------------------------------------------


def _lattice(dims, wrap):
    """Vertices, edges and coordinates of a grid (wrap=False) or torus."""
    dims = tuple(dims)
    coords = np.array(list(itertools.product(*(range(d) for d in dims))), dtype=np.int64)
    ids = [",".join(str(c) for c in row) for row in coords]
    index = {tuple(row): i for i, row in enumerate(coords)}
    edge_list = []
    seen = set()
    for i, row in enumerate(coords):
        for ax, d in enumerate(dims):
            nxt = list(row)
            nxt[ax] += 1
            if wrap:
                nxt[ax] %= d
            elif nxt[ax] >= d:
                continue
            j = index[tuple(nxt)]
            if i == j:
                continue  # wrap on an axis of length 1
            key = (min(i, j), max(i, j))
            if key in seen:
                continue  # wrap on an axis of length 2
            seen.add(key)
            edge_list.append((i, j, 1.0))
    return ids, coords, edge_list


def build_builtin(descriptor, max_vertices=DEFAULT_MAX_VERTICES):
    """Construct one of the built-in spaces from its descriptor string.

    cycle:n                 n-cycle (n >= 3)
    grid:n1x...xnd          d-dimensional box lattice
    torus:n1x...xnd         same with wrap-around
    tree:depth              rooted binary tree, 2^(depth+1)-1 vertices
    dumbbell:c,L            two c-cliques joined by a path of L edges
    heisenberg:R            word ball of radius R in the discrete
                            Heisenberg group, induced Cayley subgraph

    All built-ins use unit measures and unit weights.
    """
    if ":" not in descriptor:
        raise ValueError("descriptor %r has no ':' (e.g. 'torus:16x16')" % descriptor)
    family, _, arg = descriptor.partition(":")
    family = family.strip()
    arg = arg.strip()

    def _int(tok, what, minimum):
        try:
            val = int(tok)
        except ValueError:
            raise ValueError(
                "%s: %s %r is not an integer" % (descriptor, what, tok)
            ) from None
        if val < minimum:
            raise ValueError("%s: %s must be >= %d" % (descriptor, what, minimum))
        return val

    if family == "cycle":
        n = _int(arg, "length", 3)
        _check_cap(n, descriptor, max_vertices)
        ids = [str(i) for i in range(n)]
        edge_list = [(i, (i + 1) % n, 1.0) for i in range(n)]
        return Space(ids, np.ones(n), edge_list, name=descriptor)

    if family in ("grid", "torus"):
        toks = arg.split("x")
        dims = tuple(_int(t, "side length", 1) for t in toks)
        if all(d == 1 for d in dims):
            raise ValueError("%s: lattice with a single vertex" % descriptor)
        n = int(np.prod(dims))
        _check_cap(n, descriptor, max_vertices)
        wrap = family == "torus"
        ids, coords, edge_list = _lattice(dims, wrap)
        return Space(
            ids, np.ones(n), edge_list, name=descriptor,
            coords=coords, dims=dims, wrap=wrap,
        )

    if family == "tree":
        depth = _int(arg, "depth", 1)
        n = 2 ** (depth + 1) - 1
        _check_cap(n, descriptor, max_vertices)
        ids = [str(i) for i in range(1, n + 1)]
        edge_list = []
        for child in range(2, n + 1):
            edge_list.append((child - 1, child // 2 - 1, 1.0))
        return Space(ids, np.ones(n), edge_list, name=descriptor)

    if family == "dumbbell":
        toks = arg.split(",")
        if len(toks) != 2:
            raise ValueError("%s: expected 'dumbbell:<clique>,<bridge>'" % descriptor)
        c = _int(toks[0], "clique size", 2)
        bridge = _int(toks[1], "bridge length", 1)
        n = 2 * c + bridge - 1
        _check_cap(n, descriptor, max_vertices)
        ids = (
            ["a%d" % i for i in range(c)]
            + ["p%d" % i for i in range(1, bridge)]
            + ["b%d" % i for i in range(c)]
        )
        edge_list = []
        for i in range(c):
            for j in range(i + 1, c):
                edge_list.append((i, j, 1.0))
                edge_list.append((c + bridge - 1 + i, c + bridge - 1 + j, 1.0))
        # bridge path a0 - p1 - ... - p_{bridge-1} - b0
        chain = [0] + list(range(c, c + bridge - 1)) + [c + bridge - 1]
        for u, v in zip(chain[:-1], chain[1:]):
            edge_list.append((u, v, 1.0))
        return Space(ids, np.ones(n), edge_list, name=descriptor)

    if family == "heisenberg":
        radius = _int(arg, "radius", 1)
        return _heisenberg_ball(radius, descriptor, max_vertices)

    raise ValueError("unknown space family %r in %r" % (family, descriptor))


def _check_cap(n, descriptor, max_vertices):
    if n > max_vertices:
        raise ValueError(
            "%s: %d vertices exceeds cap %d" % (descriptor, n, max_vertices)
        )


def _heisenberg_ball(radius, descriptor, max_vertices):
    """Induced Cayley graph on the word ball of the discrete Heisenberg group.

    Elements are integer triples with product
    (a, b, c) * (a', b', c') = (a + a', b + b', c + c' + a * b')
    and generators (±1, 0, 0), (0, ±1, 0).  The ball is enumerated by BFS
    from the identity; edges join elements differing by one generator.
    """
    gens = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]

    def mul(g, h):
        return (g[0] + h[0], g[1] + h[1], g[2] + h[2] + g[0] * h[1])

    ident = (0, 0, 0)
    index = {ident: 0}
    ids = [ident]
    frontier = [ident]
    for _ in range(radius):
        nxt = []
        for g in frontier:
            for s in gens:
                h = mul(g, s)
                if h not in index:
                    if len(ids) >= max_vertices:
                        raise ValueError(
                            "%s: word ball exceeds cap %d" % (descriptor, max_vertices)
                        )
                    index[h] = len(ids)
                    ids.append(h)
                    nxt.append(h)
        frontier = nxt

    edge_list = []
    for g, i in index.items():
        for s in gens[::2]:  # one orientation per generator pair
            h = mul(g, s)
            j = index.get(h)
            if j is not None:
                edge_list.append((i, j, 1.0))
    labels = ["%d,%d,%d" % g for g in ids]
    return Space(labels, np.ones(len(ids)), edge_list, name=descriptor)


# ---------------------------------------------------------------------------
# geometric measurements
# ---------------------------------------------------------------------------


def doubling_profile(space, r_max=None):
    """Worst ratio mu(B(x, min(2r, diam))) / mu(B(x, r)) for each r.

    Returns (radii, ratios) arrays; radii run 1..r_max (default: the
    diameter, where the ratio is trivially 1).
    """
    diam = max(space.diameter, 1)
    if r_max is None:
        r_max = diam
    r_max = int(min(r_max, diam))
    if r_max < 1:
        raise ValueError("r_max must be >= 1")
    radii = np.arange(1, r_max + 1)
    ratios = np.empty(r_max, dtype=np.float64)
    for k, r in enumerate(radii):
        r2 = min(2 * int(r), space.diameter)
        ratios[k] = float(
            (space._ball_mu[:, r2] / space._ball_mu[:, min(int(r), space.diameter)]).max()
        )
    return radii, ratios


def doubling_constant(space, r_max=None):
    """Volume-doubling constant with a witness.

    Returns (constant, witness) where witness = {"vertex": id, "r": r,
    "ratio": value} attains the max of mu(B(x, 2r)) / mu(B(x, r)) over
    all vertices and integer radii 1..r_max (2r clamped at the diameter).
    """
    diam = max(space.diameter, 1)
    if r_max is None:
        r_max = diam
    r_max = int(min(r_max, diam))
    best = (0.0, None, None)
    for r in range(1, r_max + 1):
        r2 = min(2 * r, space.diameter)
        rc = min(r, space.diameter)
        ratios = space._ball_mu[:, r2] / space._ball_mu[:, rc]
        x = int(np.argmax(ratios))
        if ratios[x] > best[0]:
            best = (float(ratios[x]), x, r)
    constant, x, r = best
    witness = {"vertex": space.ids[x], "r": int(r), "ratio": constant}
    return constant, witness


def growth_exponent(space, r_lo=1, r_hi=None):
    """Least-squares power-law fit of the smallest ball volume.

    Fits log(min_x mu(B(x, r))) ~ sigma * log r + log c over integer
    radii r_lo..r_hi (default: the diameter).  Returns a dict with
    ``sigma``, ``c``, ``radii`` and the rms ``residual`` of the fit.
    Needs at least two radii.
    """
    if r_hi is None:
        r_hi = space.diameter
    r_hi = int(min(r_hi, space.diameter))
    r_lo = int(r_lo)
    if r_lo < 1:
        raise ValueError("r_lo must be >= 1")
    if r_hi < r_lo + 1:
        raise ValueError(
            "growth fit needs at least two radii (got r_lo=%d, r_hi=%d)"
            % (r_lo, r_hi)
        )
    radii = np.arange(r_lo, r_hi + 1)
    vols = space._ball_mu[:, radii].min(axis=0)
    x = np.log(radii.astype(np.float64))
    y = np.log(vols)
    A = np.stack([x, np.ones_like(x)], axis=1)
    coef, _, _, _ = np.linalg.lstsq(A, y, rcond=None)
    fit = A @ coef
    residual = float(np.sqrt(np.mean((y - fit) ** 2)))
    return {
        "sigma": float(coef[0]),
        "c": float(np.exp(coef[1])),
        "radii": [int(r) for r in radii],
        "residual": residual,
    }
