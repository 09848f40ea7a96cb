"""Snake and band graphs: construction, (good) matching enumeration, weight
and coefficient monomials, and the tile-matrix product formula.

Grid conventions, fixed once and calibrated against the worked examples:

  * tile j occupies a unit cell; tile j+1 sits north of it when
    (turn_j is ccw) xor (j is even), east otherwise;
  * tile 1's near edges are S and W; a tile's far edges are N and E, the
    glue to the next tile taking N for a north step and E for an east step;
  * each tile's diagonal runs NW-SE, and the alternating path from the SW
    corner of tile 1 to the NE corner of tile d traverses it either
    downwards (NW to SE) or upwards;
  * open arcs label tile d's far edges (N, E) = (w, z) for odd d and
    (z, w) for even d; bands relabel the same two slots with the closing
    triangle's third side and the first crossed arc, two-sided and
    one-sided graphs swapping the two.

Band graphs identify tile 1's S edge with the far glue edge; the vertex
pairing is orientation-preserving for two-sided curves and reversing for
one-sided ones.  A matching of the identified graph is good exactly when
its lift uses at least one copy of the glued edge.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import curvespec, laurent, mat2
from .curvespec import CCW, CW, UNIT, LaminationSigns, effective_sign, y_name
from .errors import ValidationError
from .laurent import LaurentPoly, mono, one, var
from .mat2 import Mat2, normalize_sign, trace, upper_right

NORTH = "north"
EAST = "east"

# Edge = tuple(sorted((v1, v2))) with vertices as (x, y) grid corners.


def _edge(v1, v2):
    return (v1, v2) if v1 <= v2 else (v2, v1)


@dataclass(frozen=True)
class Tile:
    index: int  # 1-based
    diagonal: str
    cell: tuple  # (x, y) of the SW corner
    edge_labels: dict  # direction -> arc label
    shape_out: str | None  # NORTH, EAST, or None for the last tile
    flip: bool = False

    def corner(self, which):
        x, y = self.cell
        return {
            "SW": (x, y),
            "SE": (x + 1, y),
            "NW": (x, y + 1),
            "NE": (x + 1, y + 1),
        }[which]

    def edge(self, direction):
        return {
            "S": _edge(self.corner("SW"), self.corner("SE")),
            "N": _edge(self.corner("NW"), self.corner("NE")),
            "W": _edge(self.corner("SW"), self.corner("NW")),
            "E": _edge(self.corner("SE"), self.corner("NE")),
        }[direction]

    def edges(self):
        return [self.edge(d) for d in "NESW"]


@dataclass
class TiledGraph:
    tiles: list
    closure: str  # open | band_two_sided | band_one_sided
    labels: dict  # edge -> arc label
    glue: tuple | None  # (a_edge, aprime_edge) for bands
    ident: dict  # cut vertex -> representative vertex (bands)
    first_arc_edge: tuple | None  # far edge labelled with the first crossed arc
    spec: curvespec.CurveSpec

    @property
    def d(self):
        return len(self.tiles)

    def cross_monomial(self):
        m = one()
        for t in self.tiles:
            m = m * var(t.diagonal)
        return m

    def edge_owner(self, edge):
        """Deterministic (tile, direction) descriptor for an edge."""
        for t in self.tiles:
            for d in "SWNE":
                if t.edge(d) == edge:
                    return t.index, d
        raise KeyError(edge)


@dataclass(frozen=True)
class Matching:
    edges: tuple  # edges of the (identified, for bands) graph, sorted
    weight: LaurentPoly  # x(P), a single monomial
    orientations: tuple  # per tile: "up" or "down"
    coeff: LaurentPoly  # y(P), a single monomial
    lift: tuple  # matching of the cut graph, sorted


def _label_poly(label):
    return one() if label == UNIT else var(label)


def standardize(spec):
    """Rewrite a closed-curve spec so its closing transition is standard.

    One-sided curves reflect (same expansion); loops rotate their starting
    crossing, which leaves the trace unchanged.
    """
    if spec.kind == "onesided" and not spec.close_ccw:
        return curvespec.reflect(spec)
    if spec.kind == "loop" and spec.close_ccw:
        # Rotating the starting crossing keeps the trace; stop when the
        # closing transition comes out clockwise.
        for _ in range(spec.d - 1):
            cs = list(spec.crossings)
            first, old_close = cs[0], cs[-1]
            old_dir = CCW if spec.close_ccw else CW
            rotated = (
                cs[1:-1]
                + [curvespec.Crossing(old_close.arc, old_dir, old_close.third, old_close.flip)]
                + [curvespec.Crossing(first.arc, curvespec.CLOSE, first.third, first.flip)]
            )
            spec = curvespec.CurveSpec(
                spec.label, "loop", tuple(rotated), close_ccw=(first.turn == CCW)
            )
            if not spec.close_ccw:
                break
        if spec.close_ccw:
            raise ValidationError(
                f"loop {spec.label!r} turns counterclockwise everywhere; no standard form"
            )
    return spec


def shape_sequence(spec):
    """Placement of tile j+1 relative to tile j, for j = 1 .. d-1."""
    shapes = []
    for j, c in enumerate(spec.crossings[:-1], start=1):
        north = (c.turn == CCW) != (j % 2 == 0)
        shapes.append(NORTH if north else EAST)
    return shapes


def build_graph(spec):
    """Assemble the snake (open) or band (closed) graph for a curve."""
    spec = standardize(spec)
    d = spec.d
    shapes = shape_sequence(spec)
    arcs = spec.arcs()

    if spec.kind == "arc":
        near_s, near_w = spec.initial
    else:
        near_s, near_w = spec.crossings[-1].third, arcs[-1]

    tiles = []
    cell = (0, 0)
    labels_by_tile = []
    for j in range(1, d + 1):
        lab = {}
        if j == 1:
            lab["S"], lab["W"] = near_s, near_w
        else:
            prev_third = spec.crossings[j - 2].third
            if shapes[j - 2] == NORTH:
                lab["S"], lab["W"] = prev_third, arcs[j - 2]
            else:
                lab["W"], lab["S"] = prev_third, arcs[j - 2]
        if j < d:
            third = spec.crossings[j - 1].third
            if shapes[j - 1] == NORTH:
                lab["N"], lab["E"] = third, arcs[j]
            else:
                lab["E"], lab["N"] = third, arcs[j]
        else:
            if spec.kind == "arc":
                w, z = spec.final
                pair = (w, z) if d % 2 == 1 else (z, w)
            elif spec.kind == "loop":
                aprime, first = spec.crossings[-1].third, arcs[0]
                pair = (first, aprime) if d % 2 == 1 else (aprime, first)
            else:
                aprime, first = spec.crossings[-1].third, arcs[0]
                pair = (aprime, first) if d % 2 == 1 else (first, aprime)
            lab["N"], lab["E"] = pair
        labels_by_tile.append(lab)

    for j in range(1, d + 1):
        tiles.append(
            Tile(
                j,
                arcs[j - 1],
                cell,
                labels_by_tile[j - 1],
                shapes[j - 1] if j < d else None,
                spec.crossings[j - 1].flip,
            )
        )
        if j < d:
            x, y = cell
            cell = (x, y + 1) if shapes[j - 1] == NORTH else (x + 1, y)

    labels = {}
    for t in tiles:
        for direction in "NESW":
            labels[t.edge(direction)] = t.edge_labels[direction]

    glue = None
    ident = {}
    first_arc_edge = None
    if spec.kind != "arc":
        last = tiles[-1]
        a_edge = tiles[0].edge("S")
        if spec.kind == "loop":
            aprime_dir = "E" if d % 2 == 1 else "N"
            xprime = last.corner("NE")
            yprime = last.corner("SE") if d % 2 == 1 else last.corner("NW")
        else:
            aprime_dir = "N" if d % 2 == 1 else "E"
            xprime = last.corner("NW") if d % 2 == 1 else last.corner("SE")
            yprime = last.corner("NE")
        aprime_edge = last.edge(aprime_dir)
        first_arc_edge = last.edge("E" if aprime_dir == "N" else "N")
        glue = (a_edge, aprime_edge)
        x_v = tiles[0].corner("SW")
        y_v = tiles[0].corner("SE")
        if xprime != x_v:
            ident[xprime] = x_v
        if yprime != y_v:
            ident[yprime] = y_v

    closure = {
        "arc": "open",
        "loop": "band_two_sided",
        "onesided": "band_one_sided",
    }[spec.kind]
    return TiledGraph(tiles, closure, labels, glue, ident, first_arc_edge, spec)


# -- matchings ----------------------------------------------------------------


def _cut_vertices(g):
    verts = set()
    for t in g.tiles:
        for c in ("SW", "SE", "NW", "NE"):
            verts.add(t.corner(c))
    return sorted(verts)


def _cut_edges(g):
    return sorted(g.labels)


def _enumerate_cut_matchings(g):
    """All perfect matchings of the cut graph, tile frontier by tile frontier.

    Vertices are consumed in sorted order; each step matches the smallest
    uncovered vertex with one of its incident edges, giving a deterministic
    enumeration order.
    """
    verts = _cut_vertices(g)
    edges = _cut_edges(g)
    incident = {v: [] for v in verts}
    for e in edges:
        incident[e[0]].append(e)
        incident[e[1]].append(e)
    results = []

    def extend(covered, chosen, start):
        idx = start
        while idx < len(verts) and verts[idx] in covered:
            idx += 1
        if idx == len(verts):
            results.append(tuple(sorted(chosen)))
            return
        v = verts[idx]
        for e in incident[v]:
            u = e[0] if e[1] == v else e[1]
            if u in covered:
                continue
            covered.add(v)
            covered.add(u)
            chosen.append(e)
            extend(covered, chosen, idx + 1)
            chosen.pop()
            covered.discard(v)
            covered.discard(u)

    extend(set(), [], 0)
    return results


def _descend(g, cut_matching):
    """Drop one copy of the glued edge; the identified graph keeps the rest."""
    a_edge, aprime_edge = g.glue
    kept = [e for e in cut_matching if e != aprime_edge]
    if len(kept) == len(cut_matching):
        kept = [e for e in cut_matching if e != a_edge]
    return tuple(kept)


def enumerate_matchings(g, signs=None):
    """All perfect matchings (open) or good matchings (bands), in a
    deterministic canonical order.

    A cut matching descends to a good band matching exactly when it uses at
    least one copy of the glued edge; the duplicate copy is removed and its
    weight counted once.
    """
    cut = _enumerate_cut_matchings(g)
    out = []
    for P in cut:
        if g.closure == "open":
            band_edges = P
            weight = _weight(g, P)
        else:
            a_edge, aprime_edge = g.glue
            if a_edge not in P and aprime_edge not in P:
                continue
            band_edges = _descend(g, P)
            weight = _weight(g, band_edges)
        orient = induced_orientations(g, P)
        coeff = (
            coefficient_monomial(g, P, signs, _orient=orient)
            if signs is not None
            else one()
        )
        out.append(Matching(tuple(sorted(band_edges)), weight, orient, coeff, P))
    indicator = {"up": 0, "down": 1}
    out.sort(key=lambda m: (tuple(indicator[o] for o in m.orientations), m.edges))
    return out


def _weight(g, edges):
    w = one()
    for e in edges:
        w = w * _label_poly(g.labels[e])
    return w


def weight_monomial(g, matching):
    """x(P): product of the labels of the matched edges."""
    if isinstance(matching, Matching):
        return matching.weight
    return _weight(g, matching)


def induced_orientations(g, cut_matching):
    """Per-tile diagonal direction from the alternating corner-to-corner path.

    The path starts at the SW corner of tile 1, alternates matched edges
    with diagonals, and ends at the NE corner of tile d.  A diagonal
    traversed from its north (NW) end to its south (SE) end reads "down".
    """
    if isinstance(cut_matching, Matching):
        cut_matching = cut_matching.lift
    match_at = {}
    for e in cut_matching:
        match_at[e[0]] = e
        match_at[e[1]] = e
    diag = {}
    for t in g.tiles:
        diag[t.corner("NW")] = diag.get(t.corner("NW"), []) + [t.index]
        diag[t.corner("SE")] = diag.get(t.corner("SE"), []) + [t.index]
    ends = {t.index: (t.corner("NW"), t.corner("SE")) for t in g.tiles}
    orient = {}
    pos = g.tiles[0].corner("SW")
    goal = g.tiles[-1].corner("NE")
    used = set()
    for _ in range(len(g.tiles)):
        e = match_at[pos]
        pos = e[0] if e[1] == pos else e[1]
        candidates = [i for i in diag.get(pos, []) if i not in used]
        if len(candidates) != 1:
            raise ValidationError("alternating path is not unique; malformed graph")
        i = candidates[0]
        used.add(i)
        nw, se = ends[i]
        if pos == nw:
            orient[i] = "down"
            pos = se
        else:
            orient[i] = "up"
            pos = nw
    e = match_at[pos]
    pos = e[0] if e[1] == pos else e[1]
    if pos != goal:
        raise ValidationError("alternating path does not reach the far corner")
    return tuple(orient[t.index] for t in g.tiles)


def coefficient_monomial(g, cut_matching, signs, _orient=None):
    """y(P): product of coefficient variables over the oriented tiles.

    A tile counts when its index parity, shear sign and diagonal direction
    line up: odd tiles want (sign +1, down) or (sign -1, up); even tiles the
    other way around.
    """
    orient = _orient if _orient is not None else induced_orientations(g, cut_matching)
    ym = one()
    for t, o in zip(g.tiles, orient):
        s = -1 if t.flip else 1
        s *= signs.sign(t.diagonal)
        odd = t.index % 2 == 1
        down = o == "down"
        counted = (odd and ((s > 0) == down)) or (not odd and ((s > 0) != down))
        if counted:
            ym = ym * var(y_name(t.diagonal))
    return ym


def matching_enumerator(g, signs):
    """Sum of x(P) y(P) over (good) matchings, divided by the crossing monomial."""
    total = laurent.zero()
    for m in enumerate_matchings(g, signs):
        total = total + m.weight * m.coeff
    return total / g.cross_monomial()


# -- matrix route --------------------------------------------------------------


def _tile_sign(g, j, signs):
    t = g.tiles[j - 1]
    s = signs.sign(t.diagonal)
    return -s if t.flip else s


def tile_matrix(g, j, signs):
    """Transfer matrix for the step between tiles j and j+1 (1 <= j <= d-1)."""
    spec = g.spec
    turn = spec.crossings[j - 1].turn
    xi = var(g.tiles[j - 1].diagonal)
    xn = var(g.tiles[j].diagonal)
    xa = _label_poly(spec.crossings[j - 1].third)
    y = var(y_name(g.tiles[j - 1].diagonal))
    plus = _tile_sign(g, j, signs) > 0
    if turn == CCW:
        if plus:
            return Mat2(one(), laurent.zero(), xa / (xi * xn), y)
        return Mat2(y, laurent.zero(), (xa * y) / (xi * xn), one())
    if plus:
        return Mat2(xn / xi, xa * y, laurent.zero(), (xi * y) / xn)
    return Mat2((xn * y) / xi, xa, laurent.zero(), xi / xn)


def _boundary_matrices(g, signs):
    spec = g.spec
    d = g.d
    y_last = var(y_name(g.tiles[-1].diagonal))
    plus = _tile_sign(g, d, signs) > 0
    xid = var(g.tiles[-1].diagonal)
    if g.closure == "open":
        xa = _label_poly(spec.initial[0])
        xb = _label_poly(spec.initial[1])
        xw = _label_poly(spec.final[0])
        xz = _label_poly(spec.final[1])
        xi1 = var(g.tiles[0].diagonal)
        right = Mat2(laurent.zero(), xa, -(one() / xa), xb / xi1)
        if plus:
            left = Mat2(xw / xid, xz * y_last, -(one() / xz), laurent.zero())
        else:
            left = Mat2(xw * y_last / xid, xz, -(y_last / xz), laurent.zero())
        return left, right
    xa = _label_poly(spec.crossings[-1].third)
    xi1 = var(g.tiles[0].diagonal)
    if g.closure == "band_two_sided":
        if plus:
            left = Mat2(xi1 / xid, xa * y_last, laurent.zero(), xid * y_last / xi1)
        else:
            left = Mat2(xi1 * y_last / xid, xa, laurent.zero(), xid / xi1)
    else:
        if plus:
            left = Mat2(xa / xid, xi1 * y_last, one() / xi1, laurent.zero())
        else:
            left = Mat2(xa * y_last / xid, xi1, y_last / xi1, laurent.zero())
    return left, None


def graph_matrix_formula(g, signs):
    """The tile-matrix product route to the same Laurent expansion.

    The boundary and tile matrices already carry the crossing-monomial
    denominators, so the extraction is the expansion itself.
    """
    m = mat2.identity()
    for j in range(1, g.d):
        m = tile_matrix(g, j, signs) @ m
    left, right = _boundary_matrices(g, signs)
    if g.closure == "open":
        value = upper_right(left @ m @ right)
    else:
        value = trace(left @ m)
    return normalize_sign(value)


# -- flip structure -------------------------------------------------------------


def flip_graph(g, matchings):
    """Pairs of matchings whose lifts differ by the boundary of one tile."""
    tile_edge_sets = [frozenset(t.edges()) for t in g.tiles]
    pairs = []
    for i in range(len(matchings)):
        for j in range(i + 1, len(matchings)):
            diff = frozenset(matchings[i].lift) ^ frozenset(matchings[j].lift)
            if diff in tile_edge_sets:
                pairs.append((i, j))
    return pairs


def to_dot(g, signs, name="flips"):
    """Graphviz DOT rendering of the flip graph; node label = x(P)*y(P)."""
    matchings = enumerate_matchings(g, signs)
    pairs = flip_graph(g, matchings)
    lines = [f"graph {name} {{"]
    for i, m in enumerate(matchings):
        label = laurent.canonical_string(m.weight * m.coeff)
        lines.append(f'  m{i} [label="{label}"];')
    for i, j in pairs:
        lines.append(f"  m{i} -- m{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
