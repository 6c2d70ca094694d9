"""Rectilinear representations: angle assignments on a plane embedding,
validity checking, restriction, interior angles, and joining components at a
cut vertex.

All angles are integer quarter-turns: 1, 2, 3, 4 mean 90°, 180°, 270°, 360°.
0 never appears in a representation; callers use it as "no angle contributed".
A corner is one occurrence of a vertex on one face walk, keyed (face id,
position): corner (f, j) sits at the tail of faces[f][j], between the in-dart
faces[f][j-1] and the out-dart faces[f][j].
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

from .embedding import (
    PlaneEmbedding,
    DisconnectedSubgraph,
    dart_tail,
    restrict_embedding,
    trace_faces,
)
from .graph import Graph

__all__ = [
    "RectilinearRepresentation",
    "FlatAngles",
    "MissingAngle",
    "MultipleOuterOccurrences",
    "JoinPropertyViolated",
    "validate",
    "phi_int",
    "restrict_representation",
    "join",
]


class MissingAngle(ValueError):
    pass


class MultipleOuterOccurrences(ValueError):
    pass


class JoinPropertyViolated(ValueError):
    """A join precondition failed; ``prop`` is one of "a", "b", "c", "d"."""

    def __init__(self, prop: str, message: str):
        super().__init__(f"join property ({prop}) violated: {message}")
        self.prop = prop


class FlatAngles(Mapping):
    """An angle map backed by one flat list plus per-face offsets.

    Behaves like a dict keyed (face id, position); bulk construction avoids
    millions of tuple-keyed inserts on large instances.
    """

    __slots__ = ("_off", "_val")

    def __init__(self, offsets: list[int], values: list[int]):
        self._off = offsets
        self._val = values

    def __getitem__(self, key):
        f, j = key
        off = self._off
        if 0 <= f < len(off) - 1:
            base = off[f]
            if 0 <= j < off[f + 1] - base:
                return self._val[base + j]
        raise KeyError(key)

    def __iter__(self):
        off = self._off
        for f in range(len(off) - 1):
            for j in range(off[f + 1] - off[f]):
                yield (f, j)

    def __len__(self) -> int:
        return self._off[-1]

    def __repr__(self) -> str:
        return f"FlatAngles({dict(self)!r})"


@dataclass(frozen=True)
class RectilinearRepresentation:
    """A plane embedding together with an angle (in quarter-turns) for every
    corner, keyed by (face id, position on the face walk)."""

    embedding: PlaneEmbedding
    angles: Mapping[tuple[int, int], int]

    def angle_at(self, face: int, pos: int) -> int:
        try:
            return self.angles[(face, pos)]
        except KeyError:
            raise MissingAngle(f"no angle at corner (face {face}, position {pos})")

    def corner_angles_of_vertex(self, v: int) -> list[tuple[int, int, int]]:
        """(face, position, quarters) for every corner at v."""
        g = self.embedding.graph
        out = []
        for f, walk in enumerate(self.embedding.faces):
            for j, d in enumerate(walk):
                if dart_tail(g, d) == v:
                    out.append((f, j, self.angle_at(f, j)))
        return out


def validate(rep: RectilinearRepresentation) -> bool:
    """Angle-condition check: every corner has an angle in 1..4 quarters, each
    embedded vertex's corners sum to 4 quarters, each internal face f satisfies
    sum(2 - q) = +4 over its corners and the outer face satisfies -4."""
    e = rep.embedding
    g = e.graph
    expected = {(f, j) for f, walk in enumerate(e.faces) for j in range(len(walk))}
    missing = expected - rep.angles.keys()
    if missing:
        raise MissingAngle(f"corners without angles: {sorted(missing)[:5]}")
    if rep.angles.keys() - expected:
        return False

    vertex_sum = [0] * g.vertex_count
    for f, walk in enumerate(e.faces):
        face_sum = 0
        for j, d in enumerate(walk):
            q = rep.angles[(f, j)]
            if q not in (1, 2, 3, 4):
                return False
            vertex_sum[dart_tail(g, d)] += q
            face_sum += 2 - q
        if face_sum != (-4 if f == e.outer_face else 4):
            return False
    for v in e.embedded_vertices():
        if vertex_sum[v] != 4:
            return False
    return True


def phi_int(rep: RectilinearRepresentation, v: int) -> int:
    """Total interior angle at v in quarter-turns: 4 minus v's single
    outer-face angle."""
    e = rep.embedding
    g = e.graph
    outer_walk = e.faces[e.outer_face]
    hits = [j for j, d in enumerate(outer_walk) if dart_tail(g, d) == v]
    if len(hits) != 1:
        raise MultipleOuterOccurrences(
            f"vertex {v} occurs {len(hits)} times on the outer walk"
        )
    return 4 - rep.angle_at(e.outer_face, hits[0])


def restrict_representation(
    rep: RectilinearRepresentation, sub
) -> RectilinearRepresentation:
    """Restrict a representation to a connected edge subset.

    The embedding is restricted; where faces merge at a surviving vertex, the
    merged corner's angle is the sum of the angles of the corners it absorbs.
    """
    e = rep.embedding
    g = e.graph
    sub = frozenset(sub)
    new_emb, _face_map = restrict_embedding(e, sub)

    # per-vertex: angle of the old corner whose out-dart is d
    angle_by_out_dart: dict[int, int] = {}
    in_dart_of: dict[int, int] = {}  # out-dart -> in-dart of the same corner
    for f, walk in enumerate(e.faces):
        m = len(walk)
        for j, d in enumerate(walk):
            angle_by_out_dart[d] = rep.angles[(f, j)]
            in_dart_of[d] = walk[j - 1]

    # the new corner with out-dart d absorbs the fan of old corners starting at
    # the old corner with the same in-dart and continuing while the out-dart's
    # edge was removed
    new_angles: dict[tuple[int, int], int] = {}
    # old corner lookup by in-dart (per vertex the in-dart determines the corner)
    corner_by_in_dart = {in_dart_of[d]: d for d in angle_by_out_dart}
    for f, walk in enumerate(new_emb.faces):
        for j, d_out in enumerate(walk):
            d_in = walk[j - 1]
            total = 0
            cur_out = corner_by_in_dart[d_in]
            while True:
                total += angle_by_out_dart[cur_out]
                if cur_out == d_out:
                    break
                # cur_out's edge was removed; the fan continues with the old
                # corner on its other side at the same vertex
                cur_out = corner_by_in_dart[cur_out ^ 1]
            new_angles[(f, j)] = total
    return RectilinearRepresentation(new_emb, new_angles)


def _cyclic_eq(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    for s in range(n):
        if all(a[(s + i) % n] == b[i] for i in range(n)):
            return True
    return False


def join(
    reps: list[RectilinearRepresentation],
    cut_angles: dict[int, int],
    interleaving: list[tuple[int, list[int]]],
) -> RectilinearRepresentation:
    """Join representations of subgraphs sharing exactly one vertex.

    ``interleaving`` lists, in clockwise order around the shared vertex c,
    bundles (component index, consecutive edge ids from that component's
    rotation at c); ``cut_angles`` maps the edge id leaving c at each merged
    corner (the corner's out-dart edge) to that corner's angle.

    Preconditions checked, in terms of the joined candidate:
      (a) the merge is a plane embedding whose outer face restricts to every
          component's outer face;
      (b) every angle at c is 90°, 180° or 270°;
      (c) the angles at c sum to 360°;
      (d) restricting the result to each component reproduces that component's
          representation.
    """
    if len(reps) < 2:
        raise JoinPropertyViolated("a", "need at least two components")
    g = reps[0].embedding.graph
    if any(r.embedding.graph is not g and r.embedding.graph != g for r in reps):
        raise JoinPropertyViolated("a", "components must live on one host graph")

    comp_edges = [r.embedding.edge_ids for r in reps]
    for i in range(len(reps)):
        for k in range(i + 1, len(reps)):
            if comp_edges[i] & comp_edges[k]:
                raise JoinPropertyViolated("a", "components share an edge")
    comp_verts = [
        {w for eid in es for w in g.edges[eid]} for es in comp_edges
    ]
    shared = set.intersection(*comp_verts)
    pair_shared = set()
    for i in range(len(reps)):
        for k in range(i + 1, len(reps)):
            pair_shared |= comp_verts[i] & comp_verts[k]
    if len(pair_shared) != 1 or shared != pair_shared:
        raise JoinPropertyViolated("a", "components must share exactly one vertex")
    c = next(iter(shared))

    # merged rotation at c from the interleaving; elsewhere copy the one
    # component that owns the vertex
    merged_c: list[int] = []
    per_comp_order: dict[int, list[int]] = {i: [] for i in range(len(reps))}
    for comp, bundle in interleaving:
        if comp not in per_comp_order:
            raise JoinPropertyViolated("a", f"unknown component {comp}")
        merged_c.extend(bundle)
        per_comp_order[comp].extend(bundle)
    if sorted(merged_c) != sorted(
        e for es in comp_edges for e in es if c in g.edges[e]
    ):
        raise JoinPropertyViolated("a", "interleaving must cover c's edges exactly once")
    for i, r in enumerate(reps):
        if not _cyclic_eq(tuple(per_comp_order[i]), tuple(r.embedding.rotation[c])):
            raise JoinPropertyViolated(
                "a", f"interleaving breaks component {i}'s rotation at the cut vertex"
            )

    rotation = []
    for v in range(g.vertex_count):
        if v == c:
            rotation.append(tuple(merged_c))
            continue
        owners = [i for i in range(len(reps)) if reps[i].embedding.rotation[v]]
        if len(owners) > 1:
            raise JoinPropertyViolated("a", f"vertex {v} embedded in two components")
        rotation.append(reps[owners[0]].embedding.rotation[v] if owners else ())
    rotation = tuple(rotation)
    faces = trace_faces(g, rotation)
    faces = tuple(tuple(w) for w in faces)

    # outer face: the unique merged face whose region restricts to every
    # component's outer face
    dart_face = {}
    for f, walk in enumerate(faces):
        for d in walk:
            dart_face[d] = f
    # per component: which restricted face each surviving dart lies on, and
    # the dart set of the component's own outer face
    comp_outer_darts = []
    comp_dart_face = []
    comp_restricted_faces = []
    for i, r in enumerate(reps):
        probe = tuple(
            tuple(e for e in rotation[v] if e in comp_edges[i])
            for v in range(g.vertex_count)
        )
        sub_faces = trace_faces(g, probe)
        sub_dart_face = {}
        for sf, walk in enumerate(sub_faces):
            for d in walk:
                sub_dart_face[d] = sf
        comp_outer_darts.append(set(r.embedding.faces[r.embedding.outer_face]))
        comp_dart_face.append(sub_dart_face)
        comp_restricted_faces.append(sub_faces)
    # per component: which restricted face each merged face turns into once the
    # other components are removed (faces merge across the removed edges, so a
    # merged face need not carry a dart of the component itself)
    all_edges = set().union(*comp_edges)
    images = []
    for i in range(len(reps)):
        parent = list(range(len(faces)))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for eid in all_edges - comp_edges[i]:
            a, b = find(dart_face[2 * eid]), find(dart_face[2 * eid + 1])
            if a != b:
                parent[a] = b
        class_image: dict[int, int] = {}
        for f in range(len(faces)):
            for d in faces[f]:
                if (d >> 1) in comp_edges[i]:
                    class_image.setdefault(find(f), comp_dart_face[i][d])
                    break
        images.append([class_image[find(f)] for f in range(len(faces))])
    outer = None
    for cand in range(len(faces)):
        if all(
            set(comp_restricted_faces[i][images[i][cand]]) == comp_outer_darts[i]
            for i in range(len(reps))
        ):
            outer = cand
            break
    if outer is None:
        raise JoinPropertyViolated(
            "a", "no face of the merge restricts to every component's outer face"
        )
    merged_emb = PlaneEmbedding(g, rotation, faces, outer)

    # angles: corners away from c copy their component's angle (keyed by
    # out-dart); corners at c come from cut_angles
    angle_by_out_dart = {}
    for r in reps:
        for f, walk in enumerate(r.embedding.faces):
            for j, d in enumerate(walk):
                if dart_tail(g, d) != c:
                    angle_by_out_dart[d] = r.angles[(f, j)]

    if set(cut_angles) != set(merged_c):
        raise JoinPropertyViolated("b", "cut_angles must be keyed by c's edges")
    for eid, q in cut_angles.items():
        if q not in (1, 2, 3):
            raise JoinPropertyViolated("b", f"angle {q * 90}° at c is not 90/180/270")
    if sum(cut_angles.values()) != 4:
        raise JoinPropertyViolated("c", "angles at c must sum to 360°")

    angles = {}
    for f, walk in enumerate(faces):
        for j, d in enumerate(walk):
            if dart_tail(g, d) == c:
                angles[(f, j)] = cut_angles[d >> 1]
            else:
                angles[(f, j)] = angle_by_out_dart[d]
    result = RectilinearRepresentation(merged_emb, angles)

    for i, r in enumerate(reps):
        back = restrict_representation(result, comp_edges[i])
        if not _same_representation(back, r):
            raise JoinPropertyViolated(
                "d", f"restriction does not reproduce component {i}"
            )
    return result


def _same_representation(
    a: RectilinearRepresentation, b: RectilinearRepresentation
) -> bool:
    """Equality of representations up to face numbering and walk rotation."""
    ea, eb = a.embedding, b.embedding
    if ea.graph != eb.graph or ea.rotation != eb.rotation:
        # rotations may differ by a cyclic shift at each vertex
        if len(ea.rotation) != len(eb.rotation):
            return False
        for ra, rb in zip(ea.rotation, eb.rotation):
            if not _cyclic_eq(ra, rb):
                return False
    # match faces by dart sets; angles by out-dart
    def by_out_dart(r):
        out = {}
        for f, walk in enumerate(r.embedding.faces):
            for j, d in enumerate(walk):
                out[d] = r.angles[(f, j)]
        return out

    if by_out_dart(a) != by_out_dart(b):
        return False
    outer_a = frozenset(ea.faces[ea.outer_face])
    outer_b = frozenset(eb.faces[eb.outer_face])
    return outer_a == outer_b
