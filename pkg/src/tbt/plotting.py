"""Pictures of small simplicial complexes: Graphviz DOT text and matplotlib SVG.

Complexes living in TP^1 or TP^2 are drawn at their exact integer
coordinates (first coordinate set to 0).  One-dimensional complexes in
higher-dimensional spaces fall back to a layered breadth-first layout.
"""

from __future__ import annotations

from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import networkx as nx  # noqa: E402

from .errors import UnrenderableDimension  # noqa: E402
from .tropical_core import first_zero  # noqa: E402


def _label(u):
    return "(" + ",".join(str(c) for c in u) + ")"


def to_dot(vertices, simplices, name="complex", labels=None) -> str:
    """Undirected DOT graph: one node per vertex, one edge per 1-simplex."""
    labels = labels or [_label(v) for v in vertices]
    lines = [f"graph {name} {{", "  node [shape=point, xlabel=\"\"];"]
    for i, lab in enumerate(labels):
        lines.append(f'  n{i} [xlabel="{lab}"];')
    for s in simplices:
        if len(s) == 2:
            lines.append(f"  n{s[0]} -- n{s[1]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def planar_coordinates(points):
    """Exact 2D coordinates of points in TP^1 or TP^2."""
    if not points:
        return []
    k = len(points[0])
    if k == 2:
        return [(first_zero(p)[1], 0) for p in points]
    if k == 3:
        return [tuple(first_zero(p)[1:]) for p in points]
    raise UnrenderableDimension(f"points in TP^{k - 1} have no planar embedding")


def layered_layout(n, simplices):
    """Breadth-first layers: x = distance from the first vertex of its component, y = rank in layer."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(s for s in simplices if len(s) == 2)
    coords = {}
    x_offset = 0
    for comp in sorted(nx.connected_components(g), key=min):
        root = min(comp)
        depth = nx.single_source_shortest_path_length(g, root)
        layers = defaultdict(list)
        for v in sorted(comp):
            layers[depth[v]].append(v)
        for dpt, vs in layers.items():
            for rank, v in enumerate(vs):
                coords[v] = (x_offset + dpt, rank - (len(vs) - 1) / 2)
        x_offset += max(layers) + 2
    return [coords[i] for i in range(n)]


def embed(points, simplices, via=None):
    """Coordinates for drawing; ``via`` maps each point into TP^2 first when given."""
    dim = max((len(s) for s in simplices), default=1) - 1
    if via is not None:
        return planar_coordinates([via(p) for p in points])
    try:
        return planar_coordinates(points)
    except UnrenderableDimension:
        if dim <= 1:
            return layered_layout(len(points), simplices)
        raise UnrenderableDimension(
            f"a {dim}-dimensional complex in TP^{len(points[0]) - 1} has no planar embedding"
        ) from None


def render_svg(coords, simplices, path, labels=None):
    """Write the complex as SVG.  Elements carry ids vertex-i, edge-i and triangle-i."""
    if any(len(s) > 3 for s in simplices):
        raise UnrenderableDimension("complexes of dimension > 2 cannot be drawn in the plane")
    with matplotlib.rc_context({"svg.hashsalt": "tbt", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6, 6))
        tri_i = edge_i = 0
        for s in simplices:
            if len(s) == 3:
                poly = plt.Polygon(
                    [coords[i] for i in s], closed=True, facecolor="#dde6f0", edgecolor="none"
                )
                poly.set_gid(f"triangle-{tri_i}")
                ax.add_patch(poly)
                tri_i += 1
        for s in simplices:
            if len(s) == 2:
                (x0, y0), (x1, y1) = coords[s[0]], coords[s[1]]
                (line,) = ax.plot([x0, x1], [y0, y1], color="#334455", linewidth=1)
                line.set_gid(f"edge-{edge_i}")
                edge_i += 1
        for i, (x, y) in enumerate(coords):
            (dot,) = ax.plot([x], [y], "o", color="black", markersize=4)
            dot.set_gid(f"vertex-{i}")
            if labels:
                ax.annotate(labels[i], (x, y), fontsize=5, xytext=(3, 3), textcoords="offset points")
        ax.set_aspect("equal")
        ax.margins(0.1)
        ax.axis("off")
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
