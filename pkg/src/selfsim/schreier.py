"""Schreier level graphs, orbital-graph balls, and marked-graph comparison.

Graphs are rooted and carry generator-labeled directed edges (y, g(y), g).
Orbit points of a boundary base point are tracked as finite sets of flipped
coordinates relative to the base, which makes point equality exact: two
boundary points lie in the same orbit exactly when they agree in all but
finitely many coordinates.

Balls use the word metric of the supplied generating set, not an enumeration
of the whole group; edges between two included vertices are always included.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .errors import DepthTooSmall
from .group import BoundaryPoint, act_vertex, boundary_image
from . import group

DEFAULT_GENS = group.GENERATORS


@dataclass
class MarkedGraph:
    """Rooted directed graph with labeled edges, at most one per label and end.

    ``labels`` is the declared generating set; a label may have no edges at a
    given vertex (truncated balls lose edges that point outside).  Treated as
    immutable after construction.
    """

    root: str
    vertices: list[str]
    edges: list[tuple[str, str, str]]
    labels: tuple[str, ...]
    _out: dict[tuple[str, str], str] = field(default_factory=dict, repr=False)
    _in: dict[tuple[str, str], str] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        vset = set(self.vertices)
        if len(vset) != len(self.vertices):
            raise ValueError("duplicate vertex identifiers")
        if self.root not in vset:
            raise ValueError(f"root {self.root!r} is not a vertex")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("duplicate labels")
        for src, tgt, lab in self.edges:
            if lab not in self.labels:
                raise ValueError(f"edge label {lab!r} not declared")
            if src not in vset or tgt not in vset:
                raise ValueError(f"edge ({src!r}, {tgt!r}) leaves the vertex set")
            if (src, lab) in self._out or (tgt, lab) in self._in:
                raise ValueError(f"label {lab!r} repeats at a vertex")
            self._out[(src, lab)] = tgt
            self._in[(tgt, lab)] = src

    def out_neighbor(self, v: str, label: str) -> str | None:
        return self._out.get((v, label))

    def in_neighbor(self, v: str, label: str) -> str | None:
        return self._in.get((v, label))

    def neighbors(self, v: str) -> list[str]:
        """Undirected neighborhood, deterministic order: labels, out then in."""
        seen: list[str] = []
        for lab in self.labels:
            for w in (self._out.get((v, lab)), self._in.get((v, lab))):
                if w is not None and w not in seen:
                    seen.append(w)
        return seen

    def to_csv(self) -> str:
        lines = [f"# root={self.root}", "source,target,label"]
        for src, tgt, lab in sorted(self.edges):
            lines.append(f"{src},{tgt},{lab}")
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_csv(text: str, labels: tuple[str, ...] | None = None) -> "MarkedGraph":
        root = None
        edges: list[tuple[str, str, str]] = []
        vertices: list[str] = []
        seen: set[str] = set()
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                if line[1:].strip().startswith("root="):
                    root = line.split("root=", 1)[1].strip()
                continue
            if line == "source,target,label":
                continue
            src, tgt, lab = line.split(",")
            edges.append((src, tgt, lab))
            for v in (src, tgt):
                if v not in seen:
                    seen.add(v)
                    vertices.append(v)
        if root is None:
            raise ValueError("missing '# root=' header")
        if root not in seen:
            vertices.insert(0, root)
        if labels is None:
            labels = tuple(sorted({lab for _, _, lab in edges}))
        return MarkedGraph(root, vertices, edges, labels)


def level_graph(n: int, gens) -> MarkedGraph:
    """Schreier graph of the level-n vertex action for the given words."""
    if n < 0:
        raise ValueError("level must be >= 0")
    gens = tuple(gens)
    if not gens:
        raise ValueError("need at least one generator")
    vertices = [""] if n == 0 else [format(i, f"0{n}b") for i in range(2**n)]
    edges = [(v, act_vertex(g, v), g) for v in vertices for g in gens]
    return MarkedGraph("0" * n, vertices, edges, gens)


def _ball_keys(x: BoundaryPoint, gens, radius: int, depth: int):
    """BFS over orbit points within word-metric radius; keys are flip sets."""
    gens = tuple(gens)
    root = frozenset()
    dist: dict[frozenset, int] = {root: 0}
    order: list[frozenset] = [root]
    points: dict[frozenset, BoundaryPoint] = {root: x}
    prefix_of: dict[frozenset, frozenset] = {}

    def register(key: frozenset) -> None:
        sig = frozenset(p for p in key if p < depth)
        other = prefix_of.setdefault(sig, key)
        if other != key:
            raise DepthTooSmall(
                f"orbit points {sorted(other)} and {sorted(key)} agree on the first {depth} coordinates"
            )

    register(root)
    queue = deque([root])
    while queue:
        key = queue.popleft()
        if dist[key] >= radius:
            continue
        y = points[key]
        for g in gens:
            words = (g,) if g == g[::-1] else (g, g[::-1])
            for word in words:  # generator and its inverse (letters are involutions)
                image, flips = boundary_image(word, y, with_flips=True)
                nkey = key.symmetric_difference(flips)
                if nkey not in dist:
                    register(nkey)
                    dist[nkey] = dist[key] + 1
                    order.append(nkey)
                    points[nkey] = image
                    queue.append(nkey)
    return order, points, dist


def orbital_ball(x: BoundaryPoint, gens, radius: int, depth: int) -> MarkedGraph:
    """Word-metric ball of the orbital graph around x, with internal edges.

    ``depth`` guards point identity: if two distinct visited orbit points agree
    on their first ``depth`` coordinates the construction refuses with
    DepthTooSmall instead of aliasing them.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if depth < 1:
        raise ValueError("depth must be >= 1")
    gens = tuple(gens)
    order, points, _ = _ball_keys(x, gens, radius, depth)
    ids = {key: str(points[key]) for key in order}
    vertices = [ids[key] for key in order]
    inside = set(order)
    edges = []
    for key in order:
        y = points[key]
        for g in gens:
            image, flips = boundary_image(g, y, with_flips=True)
            nkey = key.symmetric_difference(flips)
            if nkey in inside:
                edges.append((ids[key], ids[nkey], g))
    return MarkedGraph(ids[frozenset()], vertices, edges, gens)


def induced_ball(graph: MarkedGraph, center: str, radius: int) -> MarkedGraph:
    """Induced subgraph on vertices within undirected distance radius of center."""
    dist = {center: 0}
    queue = deque([center])
    order = [center]
    while queue:
        v = queue.popleft()
        if dist[v] >= radius:
            continue
        for w in graph.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                order.append(w)
                queue.append(w)
    inside = set(order)
    edges = [e for e in graph.edges if e[0] in inside and e[1] in inside]
    return MarkedGraph(center, order, edges, graph.labels)


def _forced_map(g1: MarkedGraph, g2: MarkedGraph):
    """Unique root- and label-preserving correspondence on the reachable part.

    Labeled out- and in-edges are unique per vertex, so any isomorphism is
    forced along a BFS from the roots; returns None on a structural clash.
    """
    mapping = {g1.root: g2.root}
    reverse = {g2.root: g1.root}
    queue = deque([g1.root])
    while queue:
        u = queue.popleft()
        v = mapping[u]
        for lab in g1.labels:
            for pick1, pick2 in ((g1.out_neighbor, g2.out_neighbor), (g1.in_neighbor, g2.in_neighbor)):
                nu, nv = pick1(u, lab), pick2(v, lab)
                if (nu is None) != (nv is None):
                    return None
                if nu is None:
                    continue
                if nu in mapping:
                    if mapping[nu] != nv:
                        return None
                    continue
                if nv in reverse:
                    return None
                mapping[nu] = nv
                reverse[nv] = nu
                queue.append(nu)
    return mapping


def _component_code(graph: MarkedGraph, start: str) -> tuple:
    """Deterministic BFS certificate of the component of start, rooted there."""
    index = {start: 0}
    order = [start]
    queue = deque([start])
    while queue:
        v = queue.popleft()
        for w in graph.neighbors(v):
            if w not in index:
                index[w] = len(order)
                order.append(w)
                queue.append(w)
    code = []
    for v in order:
        for lab in graph.labels:
            w = graph.out_neighbor(v, lab)
            if w is not None and w in index:
                code.append((index[v], index[w], lab))
    return (len(order), tuple(sorted(code)))


def balls_isomorphic(g1: MarkedGraph, g2: MarkedGraph) -> bool:
    """Root-, direction- and label-preserving isomorphism of marked graphs."""
    if set(g1.labels) != set(g2.labels):
        raise ValueError("graphs carry different label sets")
    if len(g1.vertices) != len(g2.vertices) or len(g1.edges) != len(g2.edges):
        return False
    mapping = _forced_map(g1, g2)
    if mapping is None:
        return False
    rest1 = [v for v in g1.vertices if v not in mapping]
    if not rest1:
        return True
    # disconnected remainder: compare canonical per-component certificates
    mapped2 = set(mapping.values())
    rest2 = [v for v in g2.vertices if v not in mapped2]

    def component_codes(graph: MarkedGraph, rest: list[str]) -> list[tuple]:
        left = set(rest)
        codes = []
        while left:
            seed = next(v for v in graph.vertices if v in left)
            members = {seed}
            queue = deque([seed])
            while queue:
                v = queue.popleft()
                for w in graph.neighbors(v):
                    if w in left and w not in members:
                        members.add(w)
                        queue.append(w)
            left -= members
            codes.append(min(_component_code(graph, v) for v in members))
        return sorted(codes)

    return component_codes(g1, rest1) == component_codes(g2, rest2)


def local_iso_probe(
    x: BoundaryPoint,
    y: BoundaryPoint,
    k: int,
    search_radius: int,
    depth: int,
    gens=DEFAULT_GENS,
) -> str | None:
    """Search the orbital graph of y for a vertex whose k-ball matches x's.

    Scans candidates in breadth-first order out to search_radius and returns
    the serialized first match, or None.  A None is inconclusive evidence:
    local isomorphism is an almost-everywhere phenomenon with no effective
    search bound.
    """
    if k > search_radius:
        raise ValueError("search_radius must be >= k")
    gens = tuple(gens)
    target = orbital_ball(x, gens, k, depth)
    big = orbital_ball(y, gens, search_radius + k, depth)
    dist = {big.root: 0}
    queue = deque([big.root])
    candidates = [big.root]
    while queue:
        v = queue.popleft()
        if dist[v] >= search_radius:
            continue
        for w in big.neighbors(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                candidates.append(w)
                queue.append(w)
    for v in candidates:
        if balls_isomorphic(target, induced_ball(big, v, k)):
            return v
    return None
