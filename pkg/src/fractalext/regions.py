"""Exponent-region boundaries in the (1/p, 1/q) square and Figure-style plots.

Each boundary is a curve q(p) with a direction flag telling which side of
it the multilinear estimates can occupy.  Kinds:

* ``thm32``     q = (2p(1-sum a) + p sum b) / ((p-1) sum b)   (necessary)
* ``thm34``     q = p(2 - sum a) / ((p-1) sum a)              (necessary)
* ``trainor``   q = d p' / sum gamma                          (necessary)
* ``top_lid``   q = 2d / sum of upper box dims                (necessary)
* ``suff31``    least q >= 2 with p0(p,q) <= available p0     (sufficient)
* ``linear_st`` q = 2 + 4(d - alpha)/beta                     (sufficient, linear)
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .convolution import transfer_boundary_q

KINDS = ("thm32", "thm34", "trainor", "top_lid", "suff31", "linear_st")


@dataclass(frozen=True)
class RegionBoundary:
    kind: str
    params: dict = field(default_factory=dict)
    direction: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown boundary kind {self.kind!r}")
        if not self.direction:
            side = "sufficient" if self.kind in ("suff31", "linear_st") else "necessary"
            object.__setattr__(self, "direction", f"{side}: q >= boundary")


def evaluate_boundary(b: RegionBoundary, p: float) -> float:
    """Boundary value q(p); p = 1 is handled as the p' -> infinity limit."""
    if p < 1:
        raise ValueError("p must be >= 1")
    prm = b.params
    if b.kind == "thm32":
        sa, sb = sum(prm["alphas"]), sum(prm["betas"])
        if sb <= 0:
            raise ValueError("thm32 needs sum(betas) > 0")
        if p == 1:
            return math.inf
        return (2.0 * p * (1.0 - sa) + p * sb) / ((p - 1.0) * sb)
    if b.kind == "thm34":
        sa = sum(prm["alphas"])
        if sa <= 0:
            raise ValueError("thm34 needs sum(alphas) > 0")
        if p == 1:
            return math.inf
        return p * (2.0 - sa) / ((p - 1.0) * sa)
    if b.kind == "trainor":
        sg = sum(prm["gammas"])
        d = prm.get("d", 1.0)
        if sg <= 0:
            raise ValueError("trainor needs sum(gammas) > 0")
        if p == 1:
            return math.inf
        return d * (p / (p - 1.0)) / sg
    if b.kind == "top_lid":
        sdim = sum(prm["box_dims"])
        d = prm.get("d", 1.0)
        if sdim <= 0:
            raise ValueError("top_lid needs positive box dimensions")
        return 2.0 * d / sdim
    if b.kind == "suff31":
        return transfer_boundary_q(p, prm["p0"])
    if b.kind == "linear_st":
        d = prm.get("d", 1.0)
        alpha, beta = prm["alpha"], prm["beta"]
        if beta <= 0:
            raise ValueError("linear_st needs beta > 0")
        return 2.0 + 4.0 * (d - alpha) / beta
    raise AssertionError(b.kind)


def linear_bilinear_threshold(
    alphas: Sequence[float], betas: Sequence[float], d: float = 1.0, k: int | None = None
) -> float:
    """Best q reachable for the k-fold product purely from linear theory:
    split by Holder into L^(kq) norms, apply the linear bound to the worst
    coordinate: q = max_m (2 + 4(d - alpha_m)/beta_m) / k."""
    k = len(alphas) if k is None else k
    return max(2.0 + 4.0 * (d - a) / b for a, b in zip(alphas, betas)) / k


@dataclass(frozen=True)
class RegionReport:
    rows: list[tuple[str, float, float, str]]  # kind, inv_p, inv_q, direction
    containment_by_p: dict[float, bool]
    containment: bool
    gap_interval: tuple[float, float] | None
    notes: dict


def region_report(
    alphas: Sequence[float],
    betas: Sequence[float],
    p_grid: Sequence[float] = (1.25, 1.5, 2.0, 4.0, 16.0),
    d: float = 1.0,
    extra_boundaries: Sequence[RegionBoundary] = (),
) -> RegionReport:
    """Sample all boundaries for one parameter set and compare regions.

    Containment verdict: at each grid p the region forbidden by the thm32
    curve (intersected with the box-dimension lid) strictly contains the
    region forbidden by the trainor curve with gamma = alpha.  This holds
    exactly when sum(alphas) < 1, and the report flags where it fails.
    The gap interval compares, at p = 2, the thm32 threshold with the best
    threshold the linear theory gives for the product.  Extra boundaries
    (e.g. the sufficient-side curves) are sampled into the rows alongside
    the four standard ones.
    """
    thm32 = RegionBoundary("thm32", {"alphas": list(alphas), "betas": list(betas)})
    thm34 = RegionBoundary("thm34", {"alphas": list(alphas)})
    trainor = RegionBoundary("trainor", {"gammas": list(alphas), "d": d})
    top_lid = RegionBoundary("top_lid", {"box_dims": list(alphas), "d": d})
    boundaries = [thm32, thm34, trainor, top_lid, *extra_boundaries]

    rows = []
    for b in boundaries:
        for p in p_grid:
            q = evaluate_boundary(b, p)
            inv_q = 0.0 if math.isinf(q) else (1.0 / q if q > 0 else math.nan)
            rows.append((b.kind, 1.0 / p, inv_q, b.direction))

    lid = evaluate_boundary(top_lid, 2.0)
    containment_by_p = {}
    for p in p_grid:
        dark = max(evaluate_boundary(thm32, p), lid)
        light = evaluate_boundary(trainor, p)
        containment_by_p[p] = dark > light
    containment = all(containment_by_p.values())

    thrs_linear = linear_bilinear_threshold(alphas, betas, d=d)
    thr_thm32 = evaluate_boundary(thm32, 2.0)
    gap = (thr_thm32, thrs_linear) if thrs_linear > thr_thm32 else None
    return RegionReport(
        rows=rows,
        containment_by_p=containment_by_p,
        containment=containment,
        gap_interval=gap,
        notes={
            "sum_alphas": float(sum(alphas)),
            "top_lid_q": lid,
            "thm32_q_at_p2": thr_thm32,
            "linear_threshold_at_p2": thrs_linear,
        },
    )


# -- SVG rendering -----------------------------------------------------------

_W, _H = 640, 480
_MARGIN = 48


def _to_px(inv_p: float, inv_q: float) -> tuple[float, float]:
    x = _MARGIN + inv_p * (_W - 2 * _MARGIN)
    y = _H - _MARGIN - inv_q * (_H - 2 * _MARGIN)
    return x, y


def _polyline(points, stroke="black", width=1.5, dashed=False) -> str:
    pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in points)
    dash = ' stroke-dasharray="6,4"' if dashed else ""
    return (
        f'<polyline points="{pts}" fill="none" stroke="{stroke}" '
        f'stroke-width="{width}"{dash}/>'
    )


def _polygon(points, fill) -> str:
    pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in points)
    return f'<polygon points="{pts}" fill="{fill}" stroke="none"/>'


def region_svg(
    alphas: Sequence[float],
    betas: Sequence[float],
    d: float = 1.0,
    samples: int = 256,
) -> str:
    """Figure-style shaded plot of the forbidden regions, 640x480.

    Dark grey: pairs excluded by the thm32 curve together with the
    box-dimension lid; light grey: the extra slab between that region and
    the trainor curve.  A dashed line marks 1/q = 1/2.
    """
    thm32 = RegionBoundary("thm32", {"alphas": list(alphas), "betas": list(betas)})
    trainor = RegionBoundary("trainor", {"gammas": list(alphas), "d": d})
    top_lid = RegionBoundary("top_lid", {"box_dims": list(alphas), "d": d})
    lid_q = evaluate_boundary(top_lid, 2.0)
    lid_inv = 1.0 / lid_q if lid_q > 0 else 1.0

    inv_ps = [(i + 0.5) / samples for i in range(samples)]

    def curve(b: RegionBoundary):
        pts = []
        for ip in inv_ps:
            q = evaluate_boundary(b, 1.0 / ip)
            iq = 0.0 if math.isinf(q) else (1.0 / q if q > 0 else 1.0)
            pts.append((ip, min(max(iq, 0.0), 1.0)))
        return pts

    c32 = curve(thm32)
    ctr = curve(trainor)
    dark_top = [(ip, min(iq, lid_inv)) for ip, iq in c32]
    light_top = [(ip, min(iq, lid_inv)) for ip, iq in ctr]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    # the regions described by the conditions (the admissible side 1/q <= envelope);
    # the more permissive trainor region is the light band above the dark one
    light_poly = [_to_px(ip, iq) for ip, iq in light_top]
    light_poly += [_to_px(1.0, 0.0), _to_px(0.0, 0.0)]
    parts.append(_polygon(light_poly, "#d9d9d9"))
    dark_poly = [_to_px(ip, iq) for ip, iq in dark_top]
    dark_poly += [_to_px(1.0, 0.0), _to_px(0.0, 0.0)]
    parts.append(_polygon(dark_poly, "#7f7f7f"))
    parts.append(_polyline([_to_px(ip, iq) for ip, iq in c32 if iq < 1.0]))
    parts.append(_polyline([_to_px(ip, iq) for ip, iq in ctr if iq < 1.0]))
    parts.append(_polyline([_to_px(0.0, lid_inv), _to_px(1.0, lid_inv)], width=1.0))
    parts.append(_polyline([_to_px(0.0, 0.5), _to_px(1.0, 0.5)], width=1.0, dashed=True))
    # axes
    parts.append(_polyline([_to_px(0, 0), _to_px(1, 0)], width=1.0))
    parts.append(_polyline([_to_px(0, 0), _to_px(0, 1)], width=1.0))
    parts.append(
        f'<text x="{_W - _MARGIN + 6}" y="{_H - _MARGIN + 4}" font-size="13">1/p</text>'
    )
    parts.append(f'<text x="{_MARGIN - 30}" y="{_MARGIN - 8}" font-size="13">1/q</text>')
    parts.append(
        f'<text x="{_MARGIN + 4}" y="{_to_px(0, 0.5)[1] - 5}" font-size="11">1/q = 1/2</text>'
    )
    parts.append("</svg>")
    return "\n".join(parts)
