"""Integer-grid drawings of rectilinear representations, with SVG export.

``realize`` turns a validated representation into vertex coordinates.  The
construction assigns every edge an absolute direction by walking the face
corners, refines every face into rectangles by projecting reflex corners onto
the opposite boundary (the region outside the graph is refined against an
enclosing box, which keeps spiralling outer boundaries from colliding), and
then sets x and y independently by longest-path layering.  O(n^2) worst case.

Directions are quarter-turn indices 0=east, 1=north, 2=west, 3=south with y
growing upwards; rotations are clockwise, so the clockwise direction order is
east, south, west, north.
"""

from __future__ import annotations

from dataclasses import dataclass

from .graph import Graph
from .rectirep import RectilinearRepresentation, validate

__all__ = [
    "Drawing",
    "InvalidRepresentation",
    "realize",
    "validate_geometry",
    "export_svg",
]


class InvalidRepresentation(ValueError):
    pass


@dataclass(frozen=True)
class Drawing:
    """Grid coordinates per vertex; every edge of the graph is the axis-aligned
    segment between its endpoints' coordinates."""

    graph: Graph
    coords: dict[int, tuple[int, int]]


def _dart_directions(rep: RectilinearRepresentation) -> list[int]:
    """Absolute direction of every dart, propagated from the corner angles.

    The corner (f, j) sits between in-dart walk[j-1] and out-dart walk[j] and
    turns the walk left by (2 - q) quarters; reverse darts differ by 2.
    """
    g = rep.embedding.graph
    faces = rep.embedding.faces
    angles = rep.angles
    dirs = [-1] * (2 * g.edge_count)
    # position of each dart on its face walk, for in-face propagation
    pos_of: dict[int, tuple[int, int]] = {}
    start = -1
    for f, walk in enumerate(faces):
        for j, d in enumerate(walk):
            if d in pos_of:
                raise InvalidRepresentation(f"dart {d} on two face walks")
            pos_of[d] = (f, j)
            start = d
    if start < 0:
        return dirs
    for d in pos_of:
        if d ^ 1 not in pos_of:
            raise InvalidRepresentation("face walks cover only one dart side")
    dirs[start] = 0
    stack = [start]
    while stack:
        d = stack.pop()
        dd = dirs[d]
        r = d ^ 1
        rd = (dd + 2) % 4
        if dirs[r] < 0:
            dirs[r] = rd
            stack.append(r)
        elif dirs[r] != rd:
            raise InvalidRepresentation("inconsistent directions (reversal)")
        f, j = pos_of[d]
        walk = faces[f]
        j1 = j + 1 if j + 1 < len(walk) else 0
        nd = walk[j1]
        want = (dd + 2 - angles[(f, j1)]) % 4
        if dirs[nd] < 0:
            dirs[nd] = want
            stack.append(nd)
        elif dirs[nd] != want:
            raise InvalidRepresentation("inconsistent directions (corner)")
    if any(dirs[d] < 0 for d in pos_of):
        raise InvalidRepresentation("embedding is not connected")
    return dirs


class _Seg:
    """One axis-aligned segment of the refined picture: from a to b going in
    direction d.  Splits replace the segment in every face that borders it."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: int, b: int, d: int):
        self.a = a
        self.b = b
        self.d = d


# a face under refinement is a list of (vertex, angle, seg, forward) where seg
# is the segment leaving the corner and forward says whether it is traversed
# a->b here (the border face traverses it the other way)


def _face_items(rep, dirs) -> list[list]:
    g = rep.embedding.graph
    seg_of: dict[int, _Seg] = {}
    for eid, (u, v) in enumerate(g.edges):
        seg_of[eid] = _Seg(u, v, dirs[2 * eid])
    out = []
    for f, walk in enumerate(rep.embedding.faces):
        items = []
        for j, d in enumerate(walk):
            eid = d >> 1
            u, v = g.edges[eid]
            tail = u if d % 2 == 0 else v
            items.append([tail, rep.angles[(f, j)], seg_of[eid], d % 2 == 0])
        out.append(items)
    return out


def _attach_box(outer_items: list[list], fresh: int) -> tuple[list, list, int]:
    """Cut the region outside the graph open against an enclosing box, turning
    it into a disk face with corner sum +4.  Returns (face, new segs, next id).
    """
    for idx, (_, q, _, _) in enumerate(outer_items):
        if q >= 3:
            break
    else:  # corner sum -4 forces a reflex corner on any nonempty walk
        raise InvalidRepresentation("outer face has no reflex corner")
    n = len(outer_items)
    cv, q, _, _ = outer_items[idx]
    prev = outer_items[idx - 1]
    r = prev[2].d if prev[3] else (prev[2].d + 2) % 4
    m, b1, b2, b3, b4 = fresh, fresh + 1, fresh + 2, fresh + 3, fresh + 4
    s_cm = _Seg(cv, m, r)
    side = (r + 1) % 4
    s_box = [
        _Seg(m, b1, side),
        _Seg(b1, b2, (side + 1) % 4),
        _Seg(b2, b3, (side + 2) % 4),
        _Seg(b3, b4, (side + 3) % 4),
        _Seg(b4, m, side),
    ]
    # walk: ..prev.. c(flat) ->m, around the box, ->c (q-2), ..rest..
    face = outer_items[idx + 1:] + outer_items[:idx]
    face = [
        [cv, 2, s_cm, True],
        [m, 1, s_box[0], True],
        [b1, 1, s_box[1], True],
        [b2, 1, s_box[2], True],
        [b3, 1, s_box[3], True],
        [b4, 1, s_box[4], True],
        [m, 1, s_cm, False],
        [cv, q - 2, outer_items[idx][2], outer_items[idx][3]],
    ] + face
    return face, [s_cm] + s_box, fresh + 5


def _refine(faces: list[list], segs: list[_Seg], fresh: int) -> int:
    """Project reflex corners until every face is a rectangle."""
    pending = list(range(len(faces)))
    while pending:
        fi = pending.pop()
        items = faces[fi]
        idx = next((i for i, it in enumerate(items) if it[1] >= 3), -1)
        if idx >= 0:
                cv, q = items[idx][0], items[idx][1]
                prev = items[idx - 1]
                r = prev[2].d if prev[3] else (prev[2].d + 2) % 4
                target = 2 if q == 3 else 3
                # scan forward: the ray out of the corner hits the first
                # segment reached with cumulative left turn == target
                n = len(items)
                s = 0
                hit = -1
                for k in range(1, n):
                    j = (idx + k) % n
                    s += 2 - items[j][1]
                    if s == target:
                        hit = j
                        break
                if hit < 0:
                    raise InvalidRepresentation("reflex corner has no projection")
                hv, hq, hseg, hfwd = items[hit]
                m = fresh
                fresh += 1
                # s1 is traversed first by this walk, s2 second
                if hfwd:
                    s1 = _Seg(hseg.a, m, hseg.d)
                    s2 = _Seg(m, hseg.b, hseg.d)
                else:
                    s2 = _Seg(hseg.a, m, hseg.d)
                    s1 = _Seg(m, hseg.b, hseg.d)
                segs.append(s1)
                segs.append(s2)
                segs.remove(hseg)
                s_cm = _Seg(cv, m, r)
                segs.append(s_cm)
                # inner piece: from the corner (angle q-2) around to the hit
                hi = hit if idx < hit else hit + n
                seq = [items[j % n] for j in range(idx, hi)]
                inner = [[cv, q - 2, seq[0][2], seq[0][3]]] + seq[1:]
                inner.append([hv, hq, s1, hfwd])
                inner.append([m, 1, s_cm, False])
                # outer piece: flat corner at c, across to m, then onward
                rest = [items[j % n] for j in range(hi + 1, idx + n)]
                outer = [
                    [cv, 2, s_cm, True],
                    [m, 1, s2, hfwd],
                ] + rest
                faces[fi] = inner
                faces.append(outer)
                pending.append(fi)
                pending.append(len(faces) - 1)
                # the walk on the far side of the hit segment traverses it the
                # other way (s2 first) and gains a flat corner at m
                for other in faces:
                    for k, it in enumerate(other):
                        if it[2] is hseg:
                            other[k] = [it[0], it[1], s2, not hfwd]
                            other.insert(k + 1, [m, 2, s1, not hfwd])
                            break
                    else:
                        continue
                    break
    for items in faces:
        if sum(2 - q for _, q, _, _ in items) != 4:
            raise InvalidRepresentation("refined face is not a rectangle")
    return fresh


class _UnionFind:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        p = self.p
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.p[rb] = ra


def _layer(nv: int, same: list[tuple[int, int]],
           before: list[tuple[int, int]]) -> list[int]:
    """Longest-path coordinates: pairs in ``same`` share a value, pairs in
    ``before`` differ by at least one grid unit."""
    uf = _UnionFind(nv)
    for a, b in same:
        uf.union(a, b)
    arcs: dict[int, list[int]] = {}
    indeg: dict[int, int] = {}
    nodes = {uf.find(v) for v in range(nv)}
    for x in nodes:
        indeg[x] = 0
    for a, b in before:
        ra, rb = uf.find(a), uf.find(b)
        if ra == rb:
            raise InvalidRepresentation("cyclic length constraint")
        arcs.setdefault(ra, []).append(rb)
        indeg[rb] += 1
    coord = {x: 0 for x in nodes}
    ready = sorted(x for x in nodes if indeg[x] == 0)
    out = []
    while ready:
        x = ready.pop(0)
        out.append(x)
        nxt = []
        for y in arcs.get(x, ()):
            if coord[y] < coord[x] + 1:
                coord[y] = coord[x] + 1
            indeg[y] -= 1
            if indeg[y] == 0:
                nxt.append(y)
        if nxt:
            ready = sorted(set(ready) | set(nxt))
    if len(out) != len(nodes):
        raise InvalidRepresentation("cyclic length constraint")
    return [coord[uf.find(v)] for v in range(nv)]


def realize(rep: RectilinearRepresentation) -> Drawing:
    """Integer-grid drawing of a validated representation."""
    g = rep.embedding.graph
    if not validate(rep):
        raise InvalidRepresentation("representation fails the angle conditions")
    if not rep.embedding.edge_ids:
        if g.vertex_count > 1:
            raise InvalidRepresentation("embedding is not connected")
        return Drawing(g, {v: (0, 0) for v in range(g.vertex_count)})
    dirs = _dart_directions(rep)
    faces = _face_items(rep, dirs)
    outer = faces.pop(rep.embedding.outer_face)
    fresh = g.vertex_count
    region, box_segs, fresh = _attach_box(outer, fresh)
    faces.append(region)
    segs = []
    seen = set()
    for items in faces:
        for it in items:
            if id(it[2]) not in seen:
                seen.add(id(it[2]))
                segs.append(it[2])
    segs.extend(s for s in box_segs if id(s) not in seen)
    fresh = _refine(faces, segs, fresh)
    same_x, same_y, bef_x, bef_y = [], [], [], []
    for s in segs:
        a, b = (s.a, s.b) if s.d in (0, 1) else (s.b, s.a)
        if s.d in (0, 2):
            same_y.append((s.a, s.b))
            bef_x.append((a, b))
        else:
            same_x.append((s.a, s.b))
            bef_y.append((a, b))
    xs = _layer(fresh, same_x, bef_x)
    ys = _layer(fresh, same_y, bef_y)
    coords = {}
    for v in rep.embedding.embedded_vertices():
        coords[v] = (xs[v], ys[v])
    return Drawing(g, coords)


# ---------------------------------------------------------------------------
# geometric validation


def _seg_ranges(p, q):
    (x1, y1), (x2, y2) = p, q
    return (min(x1, x2), max(x1, x2), min(y1, y2), max(y1, y2))


def _segments_conflict(p1, q1, p2, q2) -> bool:
    """True if the two axis-aligned segments share more than an endpoint."""
    a = _seg_ranges(p1, q1)
    b = _seg_ranges(p2, q2)
    if a[1] < b[0] or b[1] < a[0] or a[3] < b[2] or b[3] < a[2]:
        return False
    shared = {p1, q1} & {p2, q2}
    # overlapping boxes: fine only if they touch at exactly one point which is
    # a shared endpoint of both
    lox, hix = max(a[0], b[0]), min(a[1], b[1])
    loy, hiy = max(a[2], b[2]), min(a[3], b[3])
    if lox == hix and loy == hiy and (lox, loy) in shared:
        return False
    return True


def validate_geometry(d: Drawing, rep: RectilinearRepresentation) -> bool:
    """Exhaustive check of a drawing against its representation: axis-aligned
    disjoint segments, clockwise rotations and per-corner angles."""
    g = rep.embedding.graph
    emb = rep.embedding
    coords = d.coords
    verts = list(emb.embedded_vertices())
    for v in verts:
        if v not in coords:
            return False
    if len({coords[v] for v in verts}) != len(verts):
        return False
    eids = sorted(emb.edge_ids)
    edir = {}
    for eid in eids:
        u, v = g.edges[eid]
        (x1, y1), (x2, y2) = coords[u], coords[v]
        if (x1 == x2) == (y1 == y2):
            return False  # diagonal or zero-length
        if x1 < x2:
            edir[eid] = (0, 2)
        elif x1 > x2:
            edir[eid] = (2, 0)
        elif y1 < y2:
            edir[eid] = (1, 3)
        else:
            edir[eid] = (3, 1)
    for i, e1 in enumerate(eids):
        u1, v1 = g.edges[e1]
        for e2 in eids[i + 1:]:
            u2, v2 = g.edges[e2]
            if _segments_conflict(coords[u1], coords[v1], coords[u2], coords[v2]):
                return False
    # no vertex may sit in the interior of a segment
    for v in verts:
        x, y = coords[v]
        for eid in eids:
            a, b = g.edges[eid]
            if v in (a, b):
                continue
            r = _seg_ranges(coords[a], coords[b])
            if r[0] <= x <= r[1] and r[2] <= y <= r[3]:
                return False
    # rotation check: clockwise direction order is E, S, W, N
    cw_rank = {0: 0, 3: 1, 2: 2, 1: 3}
    for v in verts:
        rot = emb.rotation[v]
        if not rot:
            continue
        geo = sorted(rot, key=lambda e: cw_rank[edir[e][0] if g.edges[e][0] == v
                                                else edir[e][1]])
        k = len(rot)
        if not any(tuple(rot[(s + i) % k] for i in range(k)) == tuple(geo)
                   for s in range(k)):
            return False
    # corner angles: dart direction of the out-dart follows from the in-dart
    # turned left by (2 - q)
    for f, walk in enumerate(emb.faces):
        for j, dart in enumerate(walk):
            din = walk[j - 1]
            q = rep.angles.get((f, j))
            if q is None:
                return False
            d_in = edir[din >> 1][din & 1]
            d_out = edir[dart >> 1][dart & 1]
            if (d_in + 2 - q) % 4 != d_out:
                return False
    return True


# ---------------------------------------------------------------------------
# SVG export


def export_svg(d: Drawing, scale: int = 50) -> bytes:
    """SVG 1.1 document: one line per edge (by edge id), one circle per vertex
    (by vertex id); viewBox is the bounding box plus a one-unit margin."""
    coords = d.coords
    if coords:
        xs = [p[0] for p in coords.values()]
        ys = [p[1] for p in coords.values()]
        x0, x1 = min(xs), max(xs)
        y0, y1 = min(ys), max(ys)
    else:
        x0 = x1 = y0 = y1 = 0
    w = (x1 - x0 + 2) * scale
    h = (y1 - y0 + 2) * scale

    def px(x: int) -> str:
        return f"{(x - x0 + 1) * scale:.2f}"

    def py(y: int) -> str:  # flip: SVG's y axis points down
        return f"{(y1 - y + 1) * scale:.2f}"

    parts = [
        '<?xml version="1.0" encoding="UTF-8"?>\n',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="0 0 {w:.2f} {h:.2f}" width="{w:.2f}" height="{h:.2f}">\n',
    ]
    for eid, (u, v) in enumerate(d.graph.edges):
        if u in coords and v in coords:
            parts.append(
                f'  <line x1="{px(coords[u][0])}" y1="{py(coords[u][1])}" '
                f'x2="{px(coords[v][0])}" y2="{py(coords[v][1])}" '
                f'stroke="black" stroke-width="2" />\n'
            )
    r = max(3.0, scale * 0.08)
    for v in sorted(coords):
        x, y = coords[v]
        parts.append(
            f'  <circle cx="{px(x)}" cy="{py(y)}" r="{r:.2f}" fill="black" />\n'
        )
    parts.append("</svg>\n")
    return "".join(parts).encode("utf-8")
