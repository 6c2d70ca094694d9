"""Fixed-embedding rectilinear-planarity testing.

Decides whether an outerplanar graph with maximum degree 4 admits a planar
rectilinear drawing whose plane embedding is a prescribed one, and produces a
witness representation when it does.  The 2-connected core works bottom-up
over the extended dual tree of the outerplane embedding, propagating for each
subtree the set of feasible angle budgets (mu, nu) at the two poles of its
root edge.  Graphs with cut vertices are reduced to their blocks with
per-block angle lower bounds, then recomposed by joining at cut vertices.

All angles are integer quarter-turns (1 = 90 degrees).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .graph import Graph, Disconnected, block_cut_tree, is_connected
from .embedding import (
    OuterplaneEmbedding,
    PlaneEmbedding,
    build_embedding,
    dart_from,
    dart_head,
    dart_tail,
    extended_dual_tree,
    outerplane_embedding,
    restrict_embedding,
)
from .rectirep import RectilinearRepresentation, _cyclic_eq, join, validate

__all__ = [
    "LowerBoundMap",
    "ValueSequence",
    "RhoBounds",
    "SubgraphInfo",
    "CutVertexType",
    "outer_edge_exists",
    "find_values_fixed",
    "test_2con_fixed",
    "classify_cut_vertex",
    "build_block_lower_bounds",
    "test_fixed",
    "test_outerplane",
]

# (vertex, face id) -> required minimum angle in quarters; missing entries mean 1
LowerBoundMap = dict


def _ell(ell: LowerBoundMap, w: int, f: int) -> int:
    return ell.get((w, f), 1)


@dataclass(frozen=True)
class SubgraphInfo:
    """What the value search needs to know about one subgraph hanging below a
    cycle edge: whether it is a single edge, whether it lies inside the cycle,
    and which (mu, nu) budgets it supports."""

    trivial: bool
    inside: bool = False
    pairs: frozenset = frozenset()


@dataclass(frozen=True)
class ValueSequence:
    """Witness values for one cycle: rho[0..k] are the angles of the cycle
    vertices in the internal face at the root edge; mu[i], nu[i] (i = 1..k,
    index 0 unused) are the budgets granted to the i-th hanging subgraph."""

    rho: tuple[int, ...]
    mu: tuple[int, ...]
    nu: tuple[int, ...]


@dataclass(frozen=True)
class RhoBounds:
    lower: tuple[int, ...]
    upper: tuple[int, ...]


class CutVertexType(enum.Enum):
    T1 = "T1"  # only trivial blocks
    T2 = "T2"  # one non-trivial + one trivial
    T3 = "T3"  # one non-trivial + two trivial, trivial pair consecutive
    T4 = "T4"  # one non-trivial + two trivial, trivial pair separated
    T5 = "T5"  # two non-trivial


def outer_edge_exists(e: PlaneEmbedding, o: OuterplaneEmbedding) -> int | None:
    """Smallest edge id lying on the outer face of both embeddings, if any.

    When no edge of the prescribed outer face is on the boundary cycle of the
    outerplane embedding, every boundary edge is internal, which already rules
    out a rectilinear drawing.
    """
    on_e = {d >> 1 for d in e.faces[e.outer_face]}
    on_o = {d >> 1 for d in o.faces[o.outer_face]}
    common = on_e & on_o
    return min(common) if common else None


def find_values_fixed(
    info: list,
    ell_uv: list[int],
    ell_star: list[int],
    mu: int,
    nu: int,
) -> ValueSequence | None:
    """Search for cycle values compatible with pole budgets (mu, nu).

    ``info[1..k]`` describe the subgraphs hanging below the k non-root cycle
    edges (``info[0]`` is a placeholder), ``ell_uv[i]``/``ell_star[i]`` are the
    angle lower bounds of cycle vertex i in the internal face at the root edge
    and in the face outside the cycle.  Returns a witness or None.
    """
    k = len(info) - 1
    # The poles' angles outside the cycle are 360 - mu and 360 - nu; they must
    # clear their own lower bounds.
    if mu > 4 - ell_star[0] or nu > 4 - ell_star[k]:
        return None

    fixed_mu: list[int | None] = [None] * (k + 1)
    fixed_nu: list[int | None] = [None] * (k + 1)
    for i in range(2, k):
        if info[i].trivial:
            fixed_mu[i] = fixed_nu[i] = 0

    def alpha(h: int) -> int:
        # room left at cycle vertex h after its two forced face bounds
        return 4 - ell_uv[h] - ell_star[h]

    # Runs of consecutive non-trivial subgraphs: every vertex strictly between
    # two of them carries four 90-degree angles, which pins the values along
    # the run and leaves one degree of freedom at each end.
    i = 1
    while i <= k:
        if info[i].trivial:
            i += 1
            continue
        j = i
        while j < k and not info[j + 1].trivial:
            j += 1
        if j > i:
            for h in range(i, j):
                if ell_uv[h] > 1 or ell_star[h] > 1:
                    return None
            for h in range(i + 1, j):
                if (1, 1) not in info[h].pairs:
                    return None
                fixed_mu[h] = fixed_nu[h] = 1
            if i >= 2:
                fixed_nu[i] = 1
                cand = [m for m in (1, 2)
                        if (m, 1) in info[i].pairs and m <= alpha(i - 1)]
                if not cand:
                    return None
                fixed_mu[i] = cand[0]
            if j <= k - 1:
                fixed_mu[j] = 1
                cand = [v for v in (1, 2)
                        if (1, v) in info[j].pairs and v <= alpha(j)]
                if not cand:
                    return None
                fixed_nu[j] = cand[0]
        elif 2 <= i <= k - 1:
            # isolated non-trivial subgraph: smaller budgets never hurt, so
            # take the cheapest admissible pair (ties broken on mu)
            best = None
            for m, v in sorted(info[i].pairs, key=lambda p: (p[0] + p[1], p[0])):
                if m <= 2 and v <= 2 and m <= alpha(i - 1) and v <= alpha(i):
                    best = (m, v)
                    break
            if best is None:
                return None
            fixed_mu[i], fixed_nu[i] = best
        i = j + 1

    def end_choices(pos: int) -> list[tuple[int, int]]:
        if info[pos].trivial:
            return [(0, 0)]
        return sorted(p for p in info[pos].pairs
                      if 1 <= p[0] <= 2 and 1 <= p[1] <= 2)

    target = 2 * (k - 1)
    for mu1, nu1 in end_choices(1):
        for muk, nuk in (end_choices(k) if k > 1 else [(mu1, nu1)]):
            mu_seq = list(fixed_mu)
            nu_seq = list(fixed_nu)
            mu_seq[1], nu_seq[1] = mu1, nu1
            mu_seq[k], nu_seq[k] = muk, nuk
            mu_seq[0] = nu_seq[0] = 0
            if any(x is None for x in mu_seq) or any(x is None for x in nu_seq):
                raise AssertionError("value search left a position undecided")

            # pole angles inside the cycle
            rho0 = mu - mu_seq[1]
            rhok = nu - nu_seq[k]
            if rho0 < ell_uv[0] or rhok < ell_uv[k]:
                continue
            lower = [rho0] + [ell_uv[h] for h in range(1, k)] + [rhok]
            upper = [rho0] + [
                4 - ell_star[h] - nu_seq[h] - mu_seq[h + 1] for h in range(1, k)
            ] + [rhok]
            if any(lower[h] > upper[h] for h in range(k + 1)):
                continue
            sigma = sum(
                mu_seq[h] + nu_seq[h]
                for h in range(1, k + 1)
                if not info[h].trivial and info[h].inside
            )
            total_low = sum(lower) + sigma
            total_high = sum(upper) + sigma
            if not (total_low <= target <= total_high):
                continue
            slack = target - total_low
            rho = []
            for h in range(k + 1):
                r = min(upper[h], lower[h] + slack)
                slack -= r - lower[h]
                rho.append(r)
            assert slack == 0
            return ValueSequence(tuple(rho), tuple(mu_seq), tuple(nu_seq))
    return None


class _DualData:
    """Rooted dual-tree bookkeeping for the 2-connected test."""

    def __init__(self, g: Graph, e: PlaneEmbedding, o: OuterplaneEmbedding,
                 root_eid: int):
        self.g = g
        self.e = e
        t = extended_dual_tree(o)
        self.t = t
        n_int = t.internal_count

        # pole orientation of the root: the boundary walk of the outerplane
        # embedding passes v immediately before u along the root edge
        outer_walk = o.faces[o.outer_face]
        d0 = next(d for d in outer_walk if d >> 1 == root_eid)
        u_root, v_root = dart_head(g, d0), dart_tail(g, d0)

        root = next(
            s for s in range(n_int) if root_eid in t.cycle_edge_ids[s]
        )
        self.root = root
        self.parent = [-1] * n_int
        self.parent_edge = [-1] * n_int
        self.u_of = [-1] * n_int
        self.v_of = [-1] * n_int
        self.paper: list[list[int]] = [[] for _ in range(n_int)]
        self.cycle_eids: list[list[int]] = [[] for _ in range(n_int)]
        # per node, per position i=1..k: dual neighbor (leaf or child)
        self.hang: list[list[int]] = [[] for _ in range(n_int)]

        self.u_of[root] = u_root
        self.v_of[root] = v_root
        self.parent_edge[root] = root_eid
        self.order = [root]
        qi = 0
        while qi < len(self.order):
            s = self.order[qi]
            qi += 1
            raw = list(t.cycles[s])
            rev = raw[::-1]
            idx = rev.index(self.u_of[s])
            paper = rev[idx:] + rev[:idx]
            if paper[-1] != self.v_of[s]:
                raise AssertionError("cycle orientation does not match its poles")
            self.paper[s] = paper
            nb_by_eid = dict(zip(t.cycle_edge_ids[s], t.neighbor_at[s]))
            k = len(paper) - 1
            eids = [-1] * (k + 1)
            hang = [-1] * (k + 1)
            for i in range(1, k + 1):
                eid = self.g.edge_id(paper[i - 1], paper[i])
                eids[i] = eid
                nb = nb_by_eid[eid]
                hang[i] = nb
                if nb < n_int:
                    self.parent[nb] = s
                    self.parent_edge[nb] = eid
                    self.u_of[nb] = paper[i - 1]
                    self.v_of[nb] = paper[i]
                    self.order.append(nb)
            self.cycle_eids[s] = eids
            self.hang[s] = hang
        if len(self.order) != n_int:
            raise AssertionError("dual tree traversal missed a node")

        # subtree intervals over the rooted dual tree (internal nodes only)
        self.tin = [0] * n_int
        self.tout = [0] * n_int
        children: list[list[int]] = [[] for _ in range(n_int)]
        for s in self.order:
            for nb in self.hang[s][1:]:
                if nb >= 0 and nb < n_int:
                    children[s].append(nb)
        clock = 0
        stack: list[tuple[int, int]] = [(root, 0)]
        while stack:
            s, ci = stack[-1]
            if ci == 0:
                self.tin[s] = clock
                clock += 1
            if ci < len(children[s]):
                stack[-1] = (s, ci + 1)
                stack.append((children[s][ci], 0))
            else:
                self.tout[s] = clock
                stack.pop()

        self.edge_owners: list[list[int]] = [[] for _ in range(g.edge_count)]
        for s in range(n_int):
            for eid in t.cycle_edge_ids[s]:
                self.edge_owners[eid].append(s)

    def in_subtree(self, x: int, s: int) -> bool:
        return self.tin[s] <= self.tin[x] < self.tout[s]

    def edge_in_subtree(self, eid: int, s: int) -> bool:
        return any(self.in_subtree(x, s) for x in self.edge_owners[eid])


def test_2con_fixed(
    g: Graph, e: PlaneEmbedding, ell: LowerBoundMap | None = None
) -> RectilinearRepresentation | None:
    """Constrained rectilinear representation of a 2-connected outerplanar
    graph with prescribed plane embedding, or None if there is none.

    ``ell`` maps (vertex, face id of e) to a minimum angle in quarters;
    missing incidences default to 1.
    """
    ell = dict(ell) if ell else {}
    o = outerplane_embedding(g)
    root_eid = outer_edge_exists(e, o)
    if root_eid is None:
        return None

    dd = _DualData(g, e, o, root_eid)
    t = dd.t
    n_int = t.internal_count

    fmap = e.face_of_dart()
    next_in_face: dict[int, int] = {}
    for walk in e.faces:
        m = len(walk)
        for j, d in enumerate(walk):
            next_in_face[d] = walk[(j + 1) % m]

    # internal face of the prescribed embedding serving as the region of each
    # dual node, plus the side (inside/outside the parent cycle) of each
    # non-root node
    f_root = [-1] * n_int
    inside = [False] * n_int
    fa, fb = fmap[2 * root_eid][0], fmap[2 * root_eid + 1][0]
    if fa != e.outer_face and fb != e.outer_face:
        raise AssertionError("root edge must lie on the prescribed outer face")
    f_root[dd.root] = fb if fa == e.outer_face else fa
    for s in dd.order:
        if s == dd.root:
            continue
        p = dd.parent[s]
        eid = dd.parent_edge[s]
        sides = (fmap[2 * eid][0], fmap[2 * eid + 1][0])
        if f_root[p] in sides:
            inside[s] = False
            f_root[s] = sides[1] if sides[0] == f_root[p] else sides[0]
        else:
            inside[s] = True
            picks = [
                fmap[d][0]
                for d in (2 * eid, 2 * eid + 1)
                if dd.edge_in_subtree(next_in_face[d] >> 1, s)
            ]
            if len(picks) != 1:
                raise AssertionError("cannot identify the region of an inner node")
            f_root[s] = picks[0]

    region_owner: dict[int, int] = {}
    for s in range(n_int):
        if f_root[s] in region_owner:
            raise AssertionError("two dual nodes share a region face")
        region_owner[f_root[s]] = s

    faces_at: list[list[int]] = [[] for _ in range(g.vertex_count)]
    pos_in_face: dict[tuple[int, int], int] = {}
    for f, walk in enumerate(e.faces):
        for j, d in enumerate(walk):
            w = dart_tail(g, d)
            if (f, w) in pos_in_face:
                raise AssertionError("vertex repeats on a face of a 2-connected graph")
            pos_in_face[(f, w)] = j
            faces_at[w].append(f)

    nodes_at: list[list[int]] = [[] for _ in range(g.vertex_count)]
    for s in range(n_int):
        for w in t.cycles[s]:
            nodes_at[w].append(s)

    # the one face at each vertex that no dual node containing the vertex
    # claims as its region: the face its angle-closure happens in
    f_free = [-1] * g.vertex_count
    for w in range(g.vertex_count):
        claimed = {f_root[s] for s in nodes_at[w]}
        rest = [f for f in faces_at[w] if f not in claimed]
        if len(rest) != 1:
            raise AssertionError("expected exactly one unclaimed face per vertex")
        f_free[w] = rest[0]

    def pole_outer_bound(w: int, s: int) -> int:
        # lower bound of w's merged angle outside the subtree of s: the sum of
        # its bounds over every incident face not claimed inside the subtree
        excluded = {
            f_root[x] for x in nodes_at[w] if dd.in_subtree(x, s)
        }
        return sum(_ell(ell, w, f) for f in faces_at[w] if f not in excluded)

    # bottom-up: per node, per (mu, nu) budget pair, a witness value sequence
    table: list[dict[tuple[int, int], ValueSequence | None]] = [
        {} for _ in range(n_int)
    ]
    info_of: list[list] = [[] for _ in range(n_int)]
    for s in reversed(dd.order):
        paper = dd.paper[s]
        k = len(paper) - 1
        info: list = [None]
        for i in range(1, k + 1):
            nb = dd.hang[s][i]
            if nb >= n_int:
                info.append(SubgraphInfo(trivial=True))
            else:
                pairs = frozenset(
                    p for p in ((1, 1), (1, 2), (2, 1), (2, 2))
                    if table[nb][p] is not None
                )
                info.append(SubgraphInfo(False, inside[nb], pairs))
        info_of[s] = info
        ell_uv = [_ell(ell, w, f_root[s]) for w in paper]
        ell_star = [pole_outer_bound(paper[0], s)]
        ell_star += [_ell(ell, w, f_free[w]) for w in paper[1:k]]
        ell_star.append(pole_outer_bound(paper[k], s))
        for mu in (1, 2, 3):
            for nu in (1, 2, 3):
                table[s][(mu, nu)] = find_values_fixed(
                    info, ell_uv, ell_star, mu, nu
                )

    chosen = next(
        (pair for pair in sorted(table[dd.root]) if table[dd.root][pair]), None
    )
    if chosen is None:
        return None

    # top-down: place the in-face angles of every cycle, then close each
    # vertex's one remaining corner
    angles: dict[tuple[int, int], int] = {}
    stack = [(dd.root, chosen)]
    while stack:
        s, pair = stack.pop()
        seq = table[s][pair]
        assert seq is not None
        paper = dd.paper[s]
        f = f_root[s]
        for i, w in enumerate(paper):
            angles[(f, pos_in_face[(f, w)])] = seq.rho[i]
        for i in range(1, len(paper)):
            nb = dd.hang[s][i]
            if nb < n_int:
                stack.append((nb, (seq.mu[i], seq.nu[i])))

    for w in range(g.vertex_count):
        missing = [
            f for f in faces_at[w] if (f, pos_in_face[(f, w)]) not in angles
        ]
        if len(missing) != 1:
            raise AssertionError("every vertex must have exactly one open corner")
        f = missing[0]
        total = sum(
            angles[(h, pos_in_face[(h, w)])] for h in faces_at[w] if h != f
        )
        q = 4 - total
        if not 1 <= q <= 3 or q < _ell(ell, w, f):
            raise AssertionError("closing angle out of range: internal bug")
        angles[(f, pos_in_face[(f, w)])] = q

    rep = RectilinearRepresentation(e, angles)
    if not validate(rep):
        raise AssertionError("constructed representation fails the angle conditions")
    for (w, f), bound in ell.items():
        key = (f, pos_in_face.get((f, w), -1))
        if key in rep.angles and rep.angles[key] < bound:
            raise AssertionError("constructed representation violates a lower bound")
    return rep


def classify_cut_vertex(g: Graph, e: PlaneEmbedding, c: int,
                        bct=None) -> CutVertexType:
    """Type of a cut vertex from the triviality of its incident blocks and,
    when needed, the adjacency of its trivial edges in the rotation."""
    if bct is None:
        bct = block_cut_tree(g)
    ci = bct.cut_vertices.index(c)
    blocks = bct.blocks_of_cut(ci)
    nontrivial = [b for b in blocks if not bct.block_trivial[b]]
    trivial = [b for b in blocks if bct.block_trivial[b]]
    if not nontrivial:
        return CutVertexType.T1
    if len(nontrivial) == 2:
        return CutVertexType.T5
    if len(trivial) == 1:
        return CutVertexType.T2
    if len(trivial) != 2:
        raise AssertionError("impossible block pattern at a degree-4 vertex")
    t_edges = {bct.block_edges[b][0] for b in trivial}
    rot = e.rotation[c]
    m = len(rot)
    consecutive = any(
        {rot[j], rot[(j + 1) % m]} == t_edges for j in range(m)
    )
    return CutVertexType.T3 if consecutive else CutVertexType.T4


def build_block_lower_bounds(g: Graph, e: PlaneEmbedding, bct=None):
    """Per non-trivial block: its restricted embedding, the face map from the
    full embedding, and the angle lower bounds its cut vertices inherit from
    the material that hangs off them."""
    if bct is None:
        bct = block_cut_tree(g)
    fmap = e.face_of_dart()
    out: dict[int, tuple[PlaneEmbedding, dict[int, int], LowerBoundMap]] = {}
    for b in range(len(bct.block_edges)):
        if bct.block_trivial[b]:
            continue
        emb_b, face_map = restrict_embedding(e, bct.block_edges[b])
        out[b] = (emb_b, face_map, {})

    for ci, c in enumerate(bct.cut_vertices):
        kind = classify_cut_vertex(g, e, c, bct)
        if kind is CutVertexType.T1:
            continue
        blocks = bct.blocks_of_cut(ci)
        nontrivial = [b for b in blocks if not bct.block_trivial[b]]
        trivial = [b for b in blocks if bct.block_trivial[b]]
        if kind is CutVertexType.T5:
            b1, b2 = nontrivial
            for mine, other in ((b1, b2), (b2, b1)):
                emb_b, face_map, ell_b = out[mine]
                d = 2 * bct.block_edges[other][0]
                f = face_map[fmap[d][0]]
                ell_b[(c, f)] = 3
            continue
        b = nontrivial[0]
        emb_b, face_map, ell_b = out[b]
        for tb in trivial:
            teid = bct.block_edges[tb][0]
            f = face_map[fmap[2 * teid][0]]
            ell_b[(c, f)] = min(3, ell_b.get((c, f), 1) + 1)
    return out


def _relabel_block(g: Graph, emb_b: PlaneEmbedding):
    """Compact standalone copy of a restricted block embedding.

    Returns (block graph, block embedding, vertex map, edge map) with maps
    going from global to local ids.
    """
    eids = sorted(emb_b.edge_ids)
    verts = sorted({w for eid in eids for w in g.edges[eid]})
    vmap = {w: i for i, w in enumerate(verts)}
    emap = {eid: i for i, eid in enumerate(eids)}
    edges = tuple(
        (vmap[g.edges[eid][0]], vmap[g.edges[eid][1]]) for eid in eids
    )
    adjacency: list[list[int]] = [[] for _ in verts]
    for le, (u, v) in enumerate(edges):
        adjacency[u].append(le)
        adjacency[v].append(le)
    gb = Graph(len(verts), edges, tuple(tuple(a) for a in adjacency))
    rot = [()] * len(verts)
    for w in verts:
        rot[vmap[w]] = tuple(emap[eid] for eid in emb_b.rotation[w])
    d_glob = emb_b.faces[emb_b.outer_face][0]
    d_loc = dart_from(gb, emap[d_glob >> 1], vmap[dart_tail(g, d_glob)])
    eb = build_embedding(gb, rot, outer_face_dart=d_loc)
    return gb, eb, vmap, emap


def _pullback_block_rep(
    g: Graph, emb_b: PlaneEmbedding, rep_loc: RectilinearRepresentation,
    vmap: dict[int, int], emap: dict[int, int]
) -> RectilinearRepresentation:
    """Transfer a relabelled block representation onto the restricted
    embedding with global ids (corners matched by their out-darts)."""
    gb = rep_loc.embedding.graph
    by_out: dict[int, int] = {}
    for f, walk in enumerate(rep_loc.embedding.faces):
        for j, d in enumerate(walk):
            by_out[d] = rep_loc.angles[(f, j)]
    angles: dict[tuple[int, int], int] = {}
    for f, walk in enumerate(emb_b.faces):
        for j, d in enumerate(walk):
            d_loc = dart_from(gb, emap[d >> 1], vmap[dart_tail(g, d)])
            angles[(f, j)] = by_out[d_loc]
    return RectilinearRepresentation(emb_b, angles)


def _trivial_block_rep(g: Graph, e: PlaneEmbedding, eid: int
                       ) -> RectilinearRepresentation:
    emb, _ = restrict_embedding(e, {eid})
    angles = {
        (f, j): 4 for f, walk in enumerate(emb.faces) for j in range(len(walk))
    }
    return RectilinearRepresentation(emb, angles)


def _angles_by_out_dart(rep: RectilinearRepresentation) -> dict[int, int]:
    out = {}
    for f, walk in enumerate(rep.embedding.faces):
        for j, d in enumerate(walk):
            out[d] = rep.angles[(f, j)]
    return out


def test_fixed(g: Graph, e: PlaneEmbedding
               ) -> RectilinearRepresentation | None:
    """Rectilinear representation of a connected outerplanar graph with the
    prescribed plane embedding, or None."""
    if not is_connected(g):
        raise Disconnected("test_fixed requires a connected graph")
    bct = block_cut_tree(g)
    n_blocks = len(bct.block_edges)
    if n_blocks == 1:
        if bct.block_trivial[0]:
            return _trivial_block_rep(g, e, bct.block_edges[0][0])
        return test_2con_fixed(g, e)

    bounds = build_block_lower_bounds(g, e, bct)
    reps: dict[int, RectilinearRepresentation] = {}
    for b in range(n_blocks):
        if bct.block_trivial[b]:
            reps[b] = _trivial_block_rep(g, e, bct.block_edges[b][0])
            continue
        emb_b, face_map, ell_b = bounds[b]
        gb, eb, vmap, emap = _relabel_block(g, emb_b)
        ell_loc = {}
        d_probe = {}
        for f, walk in enumerate(eb.faces):
            for d in walk:
                d_probe[d] = f
        for (w, f), q in ell_b.items():
            d_glob = next(d for d in emb_b.faces[f])
            d_loc = dart_from(gb, emap[d_glob >> 1],
                              vmap[dart_tail(g, d_glob)])
            ell_loc[(vmap[w], d_probe[d_loc])] = q
        rep_loc = test_2con_fixed(gb, eb, ell_loc)
        if rep_loc is None:
            return None
        reps[b] = _pullback_block_rep(g, emb_b, rep_loc, vmap, emap)

    # compose by joining whole cut-vertex stars one at a time, starting from a
    # block on the prescribed outer face
    outer_eids = {d >> 1 for d in e.faces[e.outer_face]}
    start_eid = min(outer_eids)
    block_of_edge = {}
    for b in range(n_blocks):
        for eid in bct.block_edges[b]:
            block_of_edge[eid] = b
    current = reps[block_of_edge[start_eid]]
    included = {block_of_edge[start_eid]}

    fmap = e.face_of_dart()
    pending = True
    while pending:
        pending = False
        for ci, c in enumerate(bct.cut_vertices):
            blocks = bct.blocks_of_cut(ci)
            inc = [b for b in blocks if b in included]
            todo = [b for b in blocks if b not in included]
            if not inc or not todo:
                continue
            pending = True
            comps = [current] + [reps[b] for b in todo]
            comp_of_edge = {}
            for eid in current.embedding.edge_ids:
                comp_of_edge[eid] = 0
            for idx, b in enumerate(todo, start=1):
                for eid in bct.block_edges[b]:
                    comp_of_edge[eid] = idx
            rot = [eid for eid in e.rotation[c] if eid in comp_of_edge]
            m = len(rot)
            shift = next(
                j for j in range(m)
                if comp_of_edge[rot[j]] != comp_of_edge[rot[j - 1]]
            )
            rot = rot[shift:] + rot[:shift]
            interleaving: list[tuple[int, list[int]]] = []
            for eid in rot:
                comp = comp_of_edge[eid]
                if interleaving and interleaving[-1][0] == comp:
                    interleaving[-1][1].append(eid)
                else:
                    interleaving.append((comp, [eid]))

            kind = classify_cut_vertex(g, e, c, bct)
            cut_angles: dict[int, int] = {}
            if kind is CutVertexType.T1:
                for eid in rot:
                    cut_angles[eid] = 1
                cut_angles[min(rot)] = 4 - (m - 1)
            elif kind is CutVertexType.T2:
                ntb = next(b for b in blocks if not bct.block_trivial[b])
                teid = next(
                    bct.block_edges[b][0] for b in blocks
                    if bct.block_trivial[b]
                )
                emb_b, face_map, _ = bounds[ntb]
                f_b = face_map[fmap[2 * teid][0]]
                by_out = _angles_by_out_dart(reps[ntb])
                j = next(
                    i for i, d in enumerate(emb_b.faces[f_b])
                    if dart_tail(g, d) == c
                )
                phi0 = reps[ntb].angles[(f_b, j)]
                for i, eid in enumerate(rot):
                    if eid == teid:
                        cut_angles[eid] = 1
                    elif rot[i - 1] == teid:
                        cut_angles[eid] = phi0 - 1
                    else:
                        cut_angles[eid] = by_out[dart_from(g, eid, c)]
            else:
                # T3/T4/T5: four edges at c, four right angles
                if m != 4:
                    raise AssertionError("cut vertex of this type must have degree 4")
                for eid in rot:
                    cut_angles[eid] = 1

            current = join(comps, cut_angles, interleaving)
            included.update(todo)
            break

    if included != set(range(n_blocks)):
        raise AssertionError("composition did not reach every block")
    # re-anchor the result on the prescribed embedding object (the composed
    # rotation may be cyclically shifted at the cut vertices)
    for ra, rb in zip(current.embedding.rotation, e.rotation):
        if not _cyclic_eq(ra, rb):
            raise AssertionError("composed rotation differs from the input embedding")
    remap: dict[tuple[int, int], int] = {}
    fin = current.embedding
    for f, walk in enumerate(fin.faces):
        for j, d in enumerate(walk):
            remap[d] = current.angles[(f, j)]
    angles = {
        (f, j): remap[d]
        for f, walk in enumerate(e.faces)
        for j, d in enumerate(walk)
    }
    final = RectilinearRepresentation(e, angles)
    if frozenset(fin.faces[fin.outer_face]) != frozenset(
        e.faces[e.outer_face]
    ):
        raise AssertionError("composed outer face differs from the input embedding")
    if not validate(final):
        raise AssertionError("composed representation fails the angle conditions")
    return final


def test_outerplane(g: Graph) -> RectilinearRepresentation | None:
    """Rectilinear representation with all vertices on the outer face, or
    None.  Any one outerplane embedding decides for all of them."""
    o = outerplane_embedding(g)
    return test_fixed(g, o)
