"""Finite, compactly supported measures on the line.

Measures are represented by :class:`DiscreteMeasure`: a finite list of
atoms with exact rational positions and float weights.  ``atomic`` kind is
a sum of point masses; ``block`` kind spreads each weight uniformly over
``[position, position + block_width)``.  Exact positions matter: the
Cantor-family constructions downstream rely on integer endpoint
identities, while weights only ever feed quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

import numpy as np

from .errors import ResourceLimitError

RationalLike = Fraction | int | str

DEFAULT_ATOM_CAP = 10**7


def as_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and 'num/den' strings to an exact Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class SimilarityIFS:
    """Finite list of contractions x -> ratio*x + translation with weights.

    Invariants: at least one map, every |ratio| in (0,1), probabilities
    nonnegative and summing to exactly 1 (checked in exact arithmetic).
    """

    maps: tuple[tuple[Fraction, Fraction], ...]
    probs: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.maps:
            raise ValueError("IFS needs at least one map")
        if len(self.probs) != len(self.maps):
            raise ValueError("probs and maps must have equal length")
        for ratio, _ in self.maps:
            if not 0 < abs(ratio) < 1:
                raise ValueError(f"contraction ratio {ratio} not in (0,1) by modulus")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be nonnegative")
        if sum(self.probs, Fraction(0)) != 1:
            raise ValueError("probabilities must sum to exactly 1")

    @classmethod
    def create(
        cls,
        maps: Iterable[tuple[RationalLike, RationalLike]],
        probs: Iterable[RationalLike] | None = None,
    ) -> "SimilarityIFS":
        ms = tuple((as_rational(r), as_rational(a)) for r, a in maps)
        if probs is None:
            ps = tuple(Fraction(1, len(ms)) for _ in ms)
        else:
            ps = tuple(as_rational(p) for p in probs)
        return cls(ms, ps)

    @classmethod
    def from_json(cls, obj: dict) -> "SimilarityIFS":
        """Parse ``{"maps":[{"ratio":"1/3","translation":"0"},...],"probs":[...]}``."""
        maps = [(m["ratio"], m["translation"]) for m in obj["maps"]]
        return cls.create(maps, obj.get("probs"))

    def to_json(self) -> dict:
        return {
            "maps": [
                {"ratio": str(r), "translation": str(a)} for r, a in self.maps
            ],
            "probs": [str(p) for p in self.probs],
        }

    @property
    def homogeneous(self) -> bool:
        return len({abs(r) for r, _ in self.maps}) == 1


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely-atomic or block measure with exact rational positions.

    ``positions`` are strictly increasing.  For ``block`` kind every atom
    is an interval ``[position, position + block_width)`` carrying its
    weight with uniform density; consecutive blocks must not overlap.
    """

    kind: str  # "atomic" | "block"
    positions: tuple[Fraction, ...]
    weights: np.ndarray
    block_width: Fraction | None = None
    total_mass: float = field(default=0.0)
    positions_f64: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in ("atomic", "block"):
            raise ValueError(f"unknown measure kind {self.kind!r}")
        if len(self.positions) == 0:
            raise ValueError("measure needs at least one atom")
        if len(self.positions) != len(self.weights):
            raise ValueError("positions and weights must have equal length")
        w = np.asarray(self.weights, dtype=np.float64)
        if np.any(w < 0):
            raise ValueError("weights must be nonnegative")
        for a, b in zip(self.positions, self.positions[1:]):
            if not a < b:
                raise ValueError("positions must be strictly increasing")
        if self.kind == "block":
            if self.block_width is None or self.block_width <= 0:
                raise ValueError("block kind needs a positive block_width")
            for a, b in zip(self.positions, self.positions[1:]):
                if a + self.block_width > b:
                    raise ValueError("blocks overlap")
        elif self.block_width is not None:
            raise ValueError("atomic kind must not carry a block_width")
        total = float(np.sum(w))
        declared = self.total_mass if self.total_mass else total
        if abs(total - declared) > 1e-12 * max(abs(declared), 1e-300):
            raise ValueError("sum of weights disagrees with total_mass")
        w.setflags(write=False)
        pf = np.array([float(p) for p in self.positions], dtype=np.float64)
        pf.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "total_mass", declared)
        object.__setattr__(self, "positions_f64", pf)

    # -- constructors ------------------------------------------------------
    @classmethod
    def atomic(cls, atoms: Iterable[tuple[RationalLike, float]]) -> "DiscreteMeasure":
        """Build an atomic measure, sorting atoms and merging equal positions."""
        merged: dict[Fraction, float] = {}
        for pos, w in atoms:
            p = as_rational(pos)
            merged[p] = merged.get(p, 0.0) + float(w)
        pos_sorted = tuple(sorted(merged))
        w = np.array([merged[p] for p in pos_sorted], dtype=np.float64)
        return cls("atomic", pos_sorted, w)

    @classmethod
    def block(
        cls,
        atoms: Iterable[tuple[RationalLike, float]],
        width: RationalLike,
    ) -> "DiscreteMeasure":
        merged: dict[Fraction, float] = {}
        for pos, w in atoms:
            p = as_rational(pos)
            merged[p] = merged.get(p, 0.0) + float(w)
        pos_sorted = tuple(sorted(merged))
        w = np.array([merged[p] for p in pos_sorted], dtype=np.float64)
        return cls("block", pos_sorted, w, block_width=as_rational(width))

    @classmethod
    def point_mass(cls, position: RationalLike = 0, mass: float = 1.0) -> "DiscreteMeasure":
        return cls.atomic([(position, mass)])

    @classmethod
    def uniform_blocks(cls, cells: int, lo: RationalLike = 0, hi: RationalLike = 1,
                       mass: float = 1.0) -> "DiscreteMeasure":
        """Uniform measure on [lo, hi) as `cells` equal blocks."""
        lo_, hi_ = as_rational(lo), as_rational(hi)
        h = (hi_ - lo_) / cells
        return cls.block([(lo_ + i * h, mass / cells) for i in range(cells)], h)

    # -- geometry ----------------------------------------------------------
    @property
    def support_min(self) -> Fraction:
        return self.positions[0]

    @property
    def support_max(self) -> Fraction:
        top = self.positions[-1]
        return top + self.block_width if self.kind == "block" else top

    @property
    def diameter(self) -> float:
        return float(self.support_max - self.support_min)

    def centers_f64(self) -> np.ndarray:
        """Atom positions; block atoms are replaced by block centers."""
        if self.kind == "block":
            return self.positions_f64 + float(self.block_width) / 2.0
        return self.positions_f64

    def ball_masses(self, center: float, radii: np.ndarray) -> np.ndarray:
        """mu(B(center, r)) for each radius, exact block overlap included."""
        r = np.asarray(radii, dtype=np.float64)
        if self.kind == "atomic":
            lo = np.searchsorted(self.positions_f64, center - r, side="left")
            hi = np.searchsorted(self.positions_f64, center + r, side="right")
            csum = np.concatenate([[0.0], np.cumsum(self.weights)])
            return csum[hi] - csum[lo]
        h = float(self.block_width)
        left = self.positions_f64
        out = np.empty(len(r))
        for i, rad in enumerate(r):
            overlap = np.minimum(center + rad, left + h) - np.maximum(center - rad, left)
            out[i] = float(np.sum(self.weights * np.clip(overlap, 0.0, h) / h))
        return out


def build_self_similar(
    ifs: SimilarityIFS, depth: int, cap_atoms: int = DEFAULT_ATOM_CAP
) -> DiscreteMeasure:
    """Depth-limited self-similar measure of an IFS.

    One atom per length-`depth` composition word, located at the image of 0
    under the composed map (cylinder left endpoints), weighted by the
    product of branch probabilities.  Atoms at coinciding positions merge.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    m = len(ifs.maps)
    if m**depth > cap_atoms:
        raise ResourceLimitError(
            f"{m}^{depth} atoms exceed the cap of {cap_atoms}; raise cap_atoms to override"
        )
    atoms: dict[Fraction, float] = {Fraction(0): 1.0}
    for _ in range(depth):
        nxt: dict[Fraction, float] = {}
        for pos, w in atoms.items():
            for (ratio, shift), p in zip(ifs.maps, ifs.probs):
                q = ratio * pos + shift
                nxt[q] = nxt.get(q, 0.0) + w * float(p)
        atoms = nxt
    return DiscreteMeasure.atomic(atoms.items())


def pushforward_scale(measure: DiscreteMeasure, u: RationalLike) -> DiscreteMeasure:
    """Image of the measure under x -> u*x (u a nonzero rational)."""
    u_ = as_rational(u)
    if u_ == 0:
        raise ValueError("scaling factor must be nonzero")
    pairs = [(p * u_, float(w)) for p, w in zip(measure.positions, measure.weights)]
    if measure.kind == "block":
        width = measure.block_width * abs(u_)
        if u_ < 0:
            # [a, a+h) maps to (u(a+h), ua]; re-anchor blocks at their new left end
            pairs = [(p + u_ * measure.block_width, w) for p, w in pairs]
        return DiscreteMeasure.block(pairs, width)
    return DiscreteMeasure.atomic(pairs)


@dataclass(frozen=True)
class PowerDensity:
    """Density x^-exponent on [0,1]; integrable exactly when exponent < 1."""

    exponent: float

    def __post_init__(self):
        if not 0 <= self.exponent < 1:
            raise ValueError("exponent must lie in [0,1) for an integrable density")


def discretize_power_density(pd: PowerDensity, cells: int) -> DiscreteMeasure:
    """Block measure on a uniform partition of [0,1] with exact cell integrals.

    Cell [a,b) gets weight (b^(1-alpha) - a^(1-alpha))/(1-alpha); the total
    mass is exactly 1/(1-alpha).
    """
    if cells < 2:
        raise ValueError("cells must be >= 2")
    a = pd.exponent
    e = 1.0 - a
    edges = np.linspace(0.0, 1.0, cells + 1)
    prim = edges**e / e
    w = np.diff(prim)
    h = Fraction(1, cells)
    positions = [i * h for i in range(cells)]
    # declare the analytic mass 1/(1-a): refining the partition leaves it
    # exactly unchanged while the weight sum stays within 1e-12 of it
    return DiscreteMeasure(
        "block", tuple(positions), w, block_width=h, total_mass=1.0 / e
    )


# -- separation certificates -----------------------------------------------

SSC = "SSC"
OSC_INTERVAL = "OSC-interval"
UNVERIFIED = "Unverified"


def _attractor_hull(ifs: SimilarityIFS) -> tuple[Fraction, Fraction]:
    """Exact convex hull [A,B] of the attractor.

    Float iteration finds which maps and endpoints attain the extremes;
    the resulting 2x2 linear system is then solved and verified exactly.
    """
    maps = [(float(r), float(a)) for r, a in ifs.maps]
    lo = min(a / (1 - r) for r, a in maps)
    hi = max(a / (1 - r) for r, a in maps)
    for _ in range(200):
        imgs = [(r * lo + a, r * hi + a) for r, a in maps]
        lo2 = min(min(p) for p in imgs)
        hi2 = max(max(p) for p in imgs)
        if abs(lo2 - lo) < 1e-15 and abs(hi2 - hi) < 1e-15:
            break
        lo, hi = lo2, hi2

    def candidates(target):
        # (map index, endpoint) pairs nearly attaining the target in float
        out = []
        for i, (r, a) in enumerate(maps):
            if abs(r * lo + a - target) < 1e-9:
                out.append((i, "A"))
            if abs(r * hi + a - target) < 1e-9:
                out.append((i, "B"))
        return out

    for i1, src_lo in candidates(lo):
        for i2, src_hi in candidates(hi):
            r1, a1 = ifs.maps[i1]
            r2, a2 = ifs.maps[i2]
            # Solve A = phi_{i1}(A or B), B = phi_{i2}(A or B) exactly.
            if src_lo == "A" and src_hi == "B":
                A = a1 / (1 - r1)
                B = a2 / (1 - r2)
            elif src_lo == "B" and src_hi == "A":
                A = (r1 * a2 + a1) / (1 - r1 * r2)
                B = r2 * A + a2
            elif src_lo == "A":
                A = a1 / (1 - r1)
                B = r2 * A + a2
            else:
                B = a2 / (1 - r2)
                A = r1 * B + a1
            image_lo = min(min(r * A + a, r * B + a) for r, a in ifs.maps)
            image_hi = max(max(r * A + a, r * B + a) for r, a in ifs.maps)
            if image_lo == A and image_hi == B and A <= B:
                return A, B
    raise RuntimeError("exact hull verification failed")


def check_separation(ifs: SimilarityIFS) -> str:
    """Interval-based separation certificate: SSC, OSC-interval, or Unverified.

    SSC when the depth-1 images of the attractor's convex hull are pairwise
    disjoint closed intervals; OSC-interval when the images of the open hull
    interior are pairwise disjoint and contained in it.  Anything else is
    conservatively Unverified.
    """
    A, B = _attractor_hull(ifs)
    imgs = []
    for r, a in ifs.maps:
        lo, hi = r * A + a, r * B + a
        if lo > hi:
            lo, hi = hi, lo
        imgs.append((lo, hi))
    imgs.sort()
    if all(imgs[i][1] < imgs[i + 1][0] for i in range(len(imgs) - 1)):
        return SSC
    open_ok = all(lo >= A and hi <= B for lo, hi in imgs) and all(
        imgs[i][1] <= imgs[i + 1][0] for i in range(len(imgs) - 1)
    )
    if open_ok:
        return OSC_INTERVAL
    return UNVERIFIED
