"""Convex polygon intersection and the overlap measures AO, RO, pairwise RO."""
from dataclasses import dataclass

import numpy as np

from .camera import FootprintPolygon
from .errors import AnchorMiss, EmptySetup

EDGE_EPS = 1e-9


@dataclass
class OverlapReport:
    ao: float
    ro: float
    pairwise_ro: np.ndarray
    anchor_area: float
    areas: np.ndarray
    anchor_miss: bool = False


def _area2(verts):
    s = 0.0
    n = len(verts)
    for i in range(n):
        x0, y0 = verts[i - 1]
        x1, y1 = verts[i]
        s += x0 * y1 - x1 * y0
    return s


def polygon_area(p):
    """Shoelace area; zero for invalid or degenerate polygons."""
    if p.is_empty:
        return 0.0
    return abs(_area2(p.vertices)) * 0.5


def _clip_verts(subject, clip):
    out = list(subject)
    cx0, cy0 = clip[-1]
    for cx1, cy1 in clip:
        if not out:
            break
        ex, ey = cx1 - cx0, cy1 - cy0
        elen = (ex * ex + ey * ey) ** 0.5
        if elen == 0.0:
            cx0, cy0 = cx1, cy1
            continue
        inp = out
        out = []
        sx, sy = inp[-1]
        # signed distance of a point to the clip edge line (left side positive)
        sd = (ex * (sy - cy0) - ey * (sx - cx0)) / elen
        for px, py in inp:
            pd = (ex * (py - cy0) - ey * (px - cx0)) / elen
            if pd >= -EDGE_EPS:
                if sd < -EDGE_EPS:
                    t = sd / (sd - pd)
                    out.append((sx + t * (px - sx), sy + t * (py - sy)))
                out.append((px, py))
            elif sd >= -EDGE_EPS:
                if sd > EDGE_EPS:
                    t = sd / (sd - pd)
                    out.append((sx + t * (px - sx), sy + t * (py - sy)))
            sx, sy, sd = px, py, pd
        cx0, cy0 = cx1, cy1
    return out


def _dedupe(verts):
    res = []
    for v in verts:
        if not res or abs(v[0] - res[-1][0]) > EDGE_EPS or abs(v[1] - res[-1][1]) > EDGE_EPS:
            res.append(v)
    while len(res) > 1 and abs(res[0][0] - res[-1][0]) <= EDGE_EPS \
            and abs(res[0][1] - res[-1][1]) <= EDGE_EPS:
        res.pop()
    return res


def convex_clip(subject, clip):
    """Intersection of two convex CCW polygons (Sutherland-Hodgman).

    Returns an empty polygon when the inputs are disjoint or merely touch.
    """
    if subject.is_empty or clip.is_empty:
        return FootprintPolygon.empty()
    verts = _dedupe(_clip_verts(subject.vertices, clip.vertices))
    if len(verts) < 3 or _area2(verts) <= 0.0:
        return FootprintPolygon.empty()
    return FootprintPolygon(tuple(verts), True)


def intersect_all(footprints):
    if len(footprints) == 0:
        raise EmptySetup("no footprints given")
    acc = footprints[0]
    for fp in footprints[1:]:
        if acc.is_empty:
            break
        acc = convex_clip(acc, fp)
    return acc if not acc.is_empty else FootprintPolygon.empty()


def absolute_overlap(footprints):
    """Area of the common intersection of all footprints (km^2)."""
    return polygon_area(intersect_all(footprints))


def pairwise_overlap(footprints, areas=None):
    n = len(footprints)
    if areas is None:
        areas = [polygon_area(fp) for fp in footprints]
    ro = np.zeros((n, n))
    for i in range(n):
        if areas[i] <= 0.0:
            continue
        ro[i, i] = 1.0
        for j in range(i + 1, n):
            if areas[j] <= 0.0:
                continue
            inter = polygon_area(convex_clip(footprints[i], footprints[j]))
            ro[i, j] = ro[j, i] = min(1.0, inter / min(areas[i], areas[j]))
    return ro


def overlap_report(footprints, anchor_index, strict=False):
    """AO, RO and pairwise RO for one set of footprints.

    If the anchor footprint is invalid, RO is reported as 0 with
    ``anchor_miss=True``; pass ``strict=True`` to raise AnchorMiss instead.
    """
    if len(footprints) == 0:
        raise EmptySetup("no footprints given")
    if not 0 <= anchor_index < len(footprints):
        raise IndexError(f"anchor_index {anchor_index} out of range")
    areas = np.array([polygon_area(fp) for fp in footprints])
    pairwise = pairwise_overlap(footprints, areas)
    anchor_area = float(areas[anchor_index])
    if anchor_area <= 0.0:
        if strict:
            raise AnchorMiss(f"anchor camera {anchor_index} missed the surface")
        return OverlapReport(0.0, 0.0, pairwise, 0.0, areas, anchor_miss=True)
    ao = absolute_overlap(footprints)
    ro = min(1.0, ao / anchor_area)
    return OverlapReport(ao, ro, pairwise, anchor_area, areas)
