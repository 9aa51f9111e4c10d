"""Winding-number oracle for lattice path invariants.

Given a word over x, y, x~, y~ this traces the lattice path from the origin,
closes it with the straight chord back to the origin, and integrates the
winding-number distribution exactly: total signed area and first moments.
It shares no code with the group product formulas, so it can audit them.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ParseError

_STEPS = {"x": (1, 0), "y": (0, 1), "x~": (-1, 0), "y~": (0, -1)}


def path_points(word: Sequence[str]) -> list[tuple[int, int]]:
    pts = [(0, 0)]
    for letter in word:
        try:
            dx, dy = _STEPS[letter]
        except KeyError:
            raise ParseError(f"path oracle understands x, y, x~, y~ only; got {letter!r}")
        px, py = pts[-1]
        pts.append((px + dx, py + dy))
    return pts


def _winding(segments, px: Fraction, py: Fraction) -> int:
    """Winding number of the closed curve around (px, py), not on the curve.

    Counts signed crossings of the horizontal ray towards +infinity with the
    half-open rule (lower endpoint included), exact rational arithmetic.
    """
    w = 0
    for (ax, ay), (bx, by) in segments:
        if ay == by:
            continue
        if ay <= py < by:
            sign = 1
        elif by <= py < ay:
            sign = -1
        else:
            continue
        # x-coordinate where the segment meets the horizontal through py
        t = Fraction(py - ay, by - ay)
        cross_x = ax + t * (bx - ax)
        if cross_x > px:
            w += sign
    return w


def _clip_halfplane(poly, a, b, c):
    """Sutherland-Hodgman clip of polygon against a*x + b*y <= c."""
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = Fraction(fp, fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _polygon_area_moments(poly):
    """Signed area and first moments (integral of x and of y) by shoelace."""
    a2 = Fraction(0)
    mx6 = Fraction(0)
    my6 = Fraction(0)
    n = len(poly)
    for i in range(n):
        (x0, y0), (x1, y1) = poly[i], poly[(i + 1) % n]
        cross = x0 * y1 - x1 * y0
        a2 += cross
        mx6 += (x0 + x1) * cross
        my6 += (y0 + y1) * cross
    return a2 / 2, mx6 / 6, my6 / 6


def cartan_path_oracle(word: Sequence[str]):
    """(endpoint, area, barycenter) of the path traced by ``word``.

    The plane is divided into unit grid cells; cells crossed by the closing
    chord are split into the two exact polygonal pieces. Each piece gets the
    winding number of its interior, and area/moments accumulate piecewise.
    """
    pts = path_points(word)
    end = pts[-1]

    segments = list(zip(pts, pts[1:]))
    if end != (0, 0):
        segments.append((end, (0, 0)))
    # horizontal segments never cross a horizontal ray
    crossing_segments = [s for s in segments if s[0][1] != s[1][1]]

    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x_lo, x_hi = min(xs), max(xs)
    y_lo, y_hi = min(ys), max(ys)

    half = Fraction(1, 2)
    area = Fraction(0)
    bx = Fraction(0)
    by = Fraction(0)

    ex, ey = end
    chord_cuts = end != (0, 0)

    for i in range(x_lo, x_hi):
        for j in range(y_lo, y_hi):
            pieces = None
            if chord_cuts:
                # does the chord line pass through the open cell? Clip the
                # cell against both chord half-planes; the chord through
                # (0,0)-(ex,ey) has equation ey*x - ex*y = 0.
                lo_corner = (ex * j - ey * i, ex * (j + 1) - ey * i,
                             ex * j - ey * (i + 1), ex * (j + 1) - ey * (i + 1))
                has_neg = any(v < 0 for v in lo_corner)
                has_pos = any(v > 0 for v in lo_corner)
                if has_neg and has_pos:
                    cell = [
                        (Fraction(i), Fraction(j)),
                        (Fraction(i + 1), Fraction(j)),
                        (Fraction(i + 1), Fraction(j + 1)),
                        (Fraction(i), Fraction(j + 1)),
                    ]
                    pieces = [
                        _clip_halfplane(cell, ey, -ex, 0),
                        _clip_halfplane(cell, -ey, ex, 0),
                    ]
            if pieces is None:
                w = _winding(crossing_segments, Fraction(2 * i + 1, 2), Fraction(2 * j + 1, 2))
                if w:
                    area += w
                    bx += w * (i + half)
                    by += w * (j + half)
                continue
            for piece in pieces:
                if len(piece) < 3:
                    continue
                pa, pmx, pmy = _polygon_area_moments(piece)
                if pa == 0:
                    continue
                if pa < 0:
                    pa, pmx, pmy = -pa, -pmx, -pmy
                cx = pmx / pa
                cy = pmy / pa
                w = _winding(crossing_segments, cx, cy)
                if w:
                    area += w * pa
                    bx += w * pmx
                    by += w * pmy

    return end, area, (bx, by)
