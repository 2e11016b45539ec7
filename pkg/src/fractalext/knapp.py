"""Random Cantor families with embedded arithmetic progressions.

Two constructions are provided, both producing a :class:`KnappFamily` of k
level-indexed block measures on [0,1] whose endpoint digit sets contain
arithmetic progressions with jointly independent common differences:

* :func:`build_family` -- per-level subdivision widths psi(N) grow with a
  profile function phi; digit-set sizes t and progression lengths tau are
  chosen greedily so that the running products track the power targets
  Psi(N)^alpha and Psi(N)^(alpha - beta/2);
* :func:`build_family_single_scale` -- one fixed subdivision width N at
  every level with digit sets of constant size and a fixed embedded
  progression per coordinate.

The progressions supply structured test inputs (indicator functions) whose
extension transforms concentrate; the independence of the common
differences maximizes sumset cardinalities, which is what the counting
oracles downstream quantify.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Sequence

import numpy as np

from .errors import InfeasibleParametersError, ResourceLimitError
from .measures import DEFAULT_ATOM_CAP, DiscreteMeasure
from .dimensions import sup_decay_product

RATIO_CORRIDOR = 16.0  # allowed multiplicative drift of prod(tau/t) vs Psi^(-beta/2)
TRACKING_CORRIDOR = 4.0  # allowed drift of prod(t) vs Psi^alpha
DECAY_GATE = 8.0  # accept a random draw when sup |xi|^(beta/2)|mu^| stays below
MAX_DRAW_ATTEMPTS = 16


@dataclass(frozen=True)
class PhiSpec:
    """Profile function phi(t) = (log t)^epsilon, epsilon > 0."""

    epsilon: float

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")

    def value(self, t: float) -> float:
        if t < 2:
            raise ValueError("phi is defined on [2, infinity)")
        return math.log(t) ** self.epsilon


def psi_sequence(phi: PhiSpec, n_max: int) -> list[tuple[int, int]]:
    """Per-level subdivision widths and cumulative resolutions.

    psi(N) = ceil(phi(2^N)^(1/2)) + 2 and Psi(N) = prod_{n<=N} psi(n), the
    latter as an exact integer.  psi is non-decreasing and always >= 3.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out = []
    running = 1
    for n in range(1, n_max + 1):
        ps = math.ceil(phi.value(2.0**n) ** 0.5) + 2
        running *= ps
        out.append((ps, running))
    return out


@dataclass(frozen=True)
class KnappParams:
    """Parameters of the phi-scaled family.

    alphas/betas must satisfy 0 <= beta_m <= alpha_m < 1, the monotonicity
    chain alpha_{j+1} - beta_{j+1}/2 <= alpha_j - beta_j/2, and the overall
    budget (alpha_k - beta_k/2) + (k-1)(alpha_1 - beta_1/2) < 1.  Violations
    raise InfeasibleParametersError naming the constraint.
    """

    k: int
    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    phi: PhiSpec
    n_max: int
    seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise InfeasibleParametersError("k must be >= 1", "k >= 1")
        if len(self.alphas) != self.k or len(self.betas) != self.k:
            raise InfeasibleParametersError(
                "alphas and betas must have length k", "len(alphas) == k"
            )
        if self.n_max < 1:
            raise InfeasibleParametersError("n_max must be >= 1", "n_max >= 1")
        if self.seed < 0:
            raise InfeasibleParametersError("seed must be unsigned", "seed >= 0")
        for m, (a, b) in enumerate(zip(self.alphas, self.betas), 1):
            if not (0 <= b <= a < 1):
                raise InfeasibleParametersError(
                    f"coordinate {m}: need 0 <= beta <= alpha < 1, got "
                    f"alpha={a}, beta={b}",
                    "0 <= beta_m <= alpha_m < 1",
                )
        gaps = [a - b / 2.0 for a, b in zip(self.alphas, self.betas)]
        for j in range(self.k - 1):
            if gaps[j + 1] > gaps[j] + 1e-12:
                raise InfeasibleParametersError(
                    f"alpha_{j+2}-beta_{j+2}/2 > alpha_{j+1}-beta_{j+1}/2",
                    "alpha_(j+1)-beta_(j+1)/2 <= alpha_j-beta_j/2",
                )
        if gaps[-1] + (self.k - 1) * gaps[0] >= 1.0:
            raise InfeasibleParametersError(
                "(alpha_k-beta_k/2) + (k-1)(alpha_1-beta_1/2) must be < 1",
                "(alpha_k-beta_k/2)+(k-1)(alpha_1-beta_1/2) < 1",
            )

    @classmethod
    def from_json(cls, obj: dict) -> "KnappParams":
        return cls(
            k=int(obj["k"]),
            alphas=tuple(float(a) for a in obj["alphas"]),
            betas=tuple(float(b) for b in obj["betas"]),
            phi=PhiSpec(float(obj.get("epsilon", 1.0))),
            n_max=int(obj["n_max"]),
            seed=int(obj.get("seed", 0)),
        )

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "alphas": list(self.alphas),
            "betas": list(self.betas),
            "epsilon": self.phi.epsilon,
            "n_max": self.n_max,
            "seed": self.seed,
        }


def mli_set(M: int, k: int) -> tuple[int, ...]:
    """A k-element M-independent set: d_1 = 2, d_m = (2M+1)(M+1)^(m-2).

    Equivalently d_m = M * (sum of the previous differences) + 1, which is
    the inductive form that rules out small vanishing combinations.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if k < 1:
        raise ValueError("k must be >= 1")
    ds = [2]
    for m in range(2, k + 1):
        ds.append((2 * M + 1) * (M + 1) ** (m - 2))
    return tuple(ds)


@dataclass(frozen=True)
class MliResult:
    """Truthy result of an M-independence test; records which check ran."""

    ok: bool
    method: str  # "exhaustive" | "sufficient-condition"

    def __bool__(self) -> bool:
        return self.ok


EXHAUSTIVE_CAP = 10**8


def is_mli(ds: Sequence[int], M: int) -> MliResult:
    """Decide whether no nonzero integer combination with coefficients in
    (-M, M) annihilates ds.

    Exhaustive (meet-in-the-middle counting of vanishing combinations) when
    k*(2M-1)^k <= 1e8; beyond the cap only the sufficient condition
    d_m > M * sum_{i<m} d_i is applied and reported as such.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    ds = [int(d) for d in ds]
    k = len(ds)
    if k == 0:
        raise ValueError("need at least one difference")
    if any(d == 0 for d in ds):
        return MliResult(False, "exhaustive")
    if k * (2 * M - 1) ** k > EXHAUSTIVE_CAP:
        ok = all(ds[m] > M * sum(ds[:m]) for m in range(1, k))
        return MliResult(ok, "sufficient-condition")
    coeffs = np.arange(-(M - 1), M, dtype=np.int64)

    def half_sums(sub: list[int]) -> np.ndarray:
        sums = np.zeros(1, dtype=np.int64)
        for d in sub:
            sums = (sums[:, None] + coeffs[None, :] * d).ravel()
        return sums

    left = half_sums(ds[: (k + 1) // 2])
    right = half_sums(ds[(k + 1) // 2 :])
    lv, lc = np.unique(left, return_counts=True)
    rv, rc = np.unique(-right, return_counts=True)
    common, li, ri = np.intersect1d(lv, rv, return_indices=True)
    zero_combos = int(np.sum(lc[li].astype(object) * rc[ri].astype(object)))
    return MliResult(zero_combos == 1, "exhaustive")


@dataclass(frozen=True)
class LevelProfile:
    """Per-level choice record shared by both constructions."""

    level: int
    psi: int
    Psi: int  # exact integer product of psi(1..level)
    t: tuple[int, ...]
    tau: tuple[int, ...]
    theta: tuple[float, ...]  # realized t / psi^alpha
    vartheta: tuple[float, ...]  # realized tau / psi^(alpha - beta/2)
    M: int
    d: tuple[int, ...]
    W: tuple[tuple[int, ...], ...]  # per m, the embedded progression digits


@dataclass(frozen=True)
class Profiles:
    levels: tuple[LevelProfile, ...]
    n0: int
    ratio_constant: float
    tracking_constant: float
    r_coef: int


def _r_coefficient(betas: Sequence[float]) -> int:
    s = float(sum(betas))
    return math.ceil(1.0 / s) if s > 0 else 1


def choose_profiles(params: KnappParams, psis: list[tuple[int, int]] | None = None) -> Profiles:
    """Greedy integer profile choice for the phi-scaled construction.

    Per level N and coordinate m, t is the integer in [1, psi(N)]
    bringing prod_{i<=N} t_i closest (in log space) to Psi(N)^alpha_m, and
    the tau vector is the jointly feasible choice tracking
    Psi(N)^(alpha_m - beta_m/2), where feasible means every progression
    {1, 1+d_m, ..., 1+(tau_m-1)d_m} fits inside [psi(N)] for the
    independent difference set generated from M_N = ceil(1/sum beta) *
    (max_m tau_m - 1) + 1.

    Raises InfeasibleParametersError when the t-products cannot stay within
    a factor 4 of their targets or the realized products prod(tau/t) drift
    from Psi^(-beta/2) by more than a factor 16.
    """
    if psis is None:
        psis = psi_sequence(params.phi, params.n_max)
    k = params.k
    r_coef = _r_coefficient(params.betas)
    prod_t = [1] * k
    prod_tau = [1] * k
    levels: list[LevelProfile] = []
    tracking_worst = 1.0
    ratio_worst = 1.0
    for N, (ps, Ps) in enumerate(psis, 1):
        t_vec = []
        for m in range(k):
            target = float(Ps) ** params.alphas[m]
            t_best = min(
                range(1, ps + 1),
                key=lambda c: (abs(math.log(prod_t[m] * c / target)), c),
            )
            t_vec.append(t_best)
            drift = prod_t[m] * t_best / target
            tracking_worst = max(tracking_worst, drift, 1.0 / drift)
        if tracking_worst > TRACKING_CORRIDOR:
            raise InfeasibleParametersError(
                f"level {N}: branching products cannot track Psi^alpha within "
                f"a factor of {TRACKING_CORRIDOR}",
                "branching-tracking corridor",
            )
        best_vec, best_cost, best_dm = None, None, None
        for vec in iproduct(*[range(1, t_vec[m] + 1) for m in range(k)]):
            M = r_coef * (max(vec) - 1) + 1
            ds = mli_set(M, k)
            if any(1 + (vec[m] - 1) * ds[m] > ps - 1 for m in range(k)):
                continue
            cost = sum(
                abs(
                    math.log(
                        prod_tau[m]
                        * vec[m]
                        / float(Ps) ** (params.alphas[m] - params.betas[m] / 2.0)
                    )
                )
                for m in range(k)
            )
            if best_cost is None or cost < best_cost - 1e-12:
                best_vec, best_cost, best_dm = vec, cost, (M, ds)
        if best_vec is None:
            raise InfeasibleParametersError(
                f"level {N}: no progression length vector fits inside [psi(N)]",
                "W subset of [psi(N)]",
            )
        tau_vec = list(best_vec)
        M, ds = best_dm
        for m in range(k):
            prod_t[m] *= t_vec[m]
            prod_tau[m] *= tau_vec[m]
            rho = (prod_tau[m] / prod_t[m]) / float(Ps) ** (-params.betas[m] / 2.0)
            ratio_worst = max(ratio_worst, rho, 1.0 / rho)
        theta = tuple(t_vec[m] / ps ** params.alphas[m] for m in range(k))
        vartheta = tuple(
            tau_vec[m] / ps ** (params.alphas[m] - params.betas[m] / 2.0)
            for m in range(k)
        )
        W = tuple(
            tuple(1 + j * ds[m] for j in range(tau_vec[m])) for m in range(k)
        )
        levels.append(
            LevelProfile(N, ps, Ps, tuple(t_vec), tuple(tau_vec), theta, vartheta, M, ds, W)
        )
    if ratio_worst > RATIO_CORRIDOR:
        raise InfeasibleParametersError(
            f"realized prod(tau/t) drifts from Psi^(-beta/2) by {ratio_worst:.2f} "
            f"> {RATIO_CORRIDOR}; no feasible start level <= n_max",
            "ratio-identity corridor",
        )
    n0 = next(
        (lp.level for lp in levels if any(c > 1 for c in lp.t + lp.tau)),
        params.n_max + 1,
    )
    return Profiles(tuple(levels), n0, ratio_worst, tracking_worst, r_coef)


@dataclass(frozen=True)
class KnappFamily:
    """Built family: per-level profiles plus the realized endpoint sets.

    ``a_sets[j][m]`` / ``p_sets[j][m]`` hold the level-(j+1) endpoint
    numerators over Psi(j+1) as exact integers; ``p_sets`` accumulates the
    embedded progressions and is always contained in ``a_sets``.
    """

    kind: str  # "phi-scaled" | "single-scale"
    k: int
    alphas: tuple[float, ...]
    betas: tuple[float, ...]
    seed: int
    r_coef: int
    n0: int
    ratio_constant: float
    levels: tuple[LevelProfile, ...]
    a_sets: tuple[tuple[tuple[int, ...], ...], ...]
    p_sets: tuple[tuple[tuple[int, ...], ...], ...]
    draw_attempts: tuple[int, ...]
    decay_constants: tuple[float, ...]
    phi_epsilon: float = 1.0

    @property
    def depth(self) -> int:
        return len(self.levels)

    def psi(self, level: int) -> int:
        return self.levels[level - 1].psi

    def Psi(self, level: int) -> int:
        return self.levels[level - 1].Psi

    def t_product(self, m: int, level: int | None = None) -> int:
        level = self.depth if level is None else level
        out = 1
        for lp in self.levels[:level]:
            out *= lp.t[m]
        return out

    def tau_product(self, m: int, level: int | None = None) -> int:
        level = self.depth if level is None else level
        out = 1
        for lp in self.levels[:level]:
            out *= lp.tau[m]
        return out

    def atom_numerators(self, m: int, level: int | None = None) -> tuple[int, ...]:
        level = self.depth if level is None else level
        return self.a_sets[level - 1][m]

    def progression_numerators(self, m: int, level: int | None = None) -> tuple[int, ...]:
        level = self.depth if level is None else level
        return self.p_sets[level - 1][m]

    def measure(self, m: int, level: int | None = None) -> DiscreteMeasure:
        """Level-N block approximation of coordinate m (a probability measure)."""
        level = self.depth if level is None else level
        nums = self.atom_numerators(m, level)
        Ps = self.Psi(level)
        w = 1.0 / len(nums)
        return DiscreteMeasure.block(
            [(Fraction(a, Ps), w) for a in nums], Fraction(1, Ps)
        )

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "alphas": list(self.alphas),
            "betas": list(self.betas),
            "seed": self.seed,
            "r_coef": self.r_coef,
            "n0": self.n0,
            "ratio_constant": self.ratio_constant,
            "draw_attempts": list(self.draw_attempts),
            "decay_constants": list(self.decay_constants),
            "levels": [
                {
                    "level": lp.level,
                    "psi": lp.psi,
                    "Psi": str(lp.Psi),
                    "t": list(lp.t),
                    "tau": list(lp.tau),
                    "theta": list(lp.theta),
                    "vartheta": list(lp.vartheta),
                    "M": lp.M,
                    "d": list(lp.d),
                    "W": [list(w) for w in lp.W],
                    "A": [[str(a) for a in s] for s in self.a_sets[lp.level - 1]],
                    "P": [[str(p) for p in s] for s in self.p_sets[lp.level - 1]],
                }
                for lp in self.levels
            ],
        }


def _draw_digit_chain(
    levels: Sequence[LevelProfile],
    m: int,
    rng: np.random.Generator,
    cap_atoms: int,
) -> list[tuple[int, ...]]:
    """Random endpoint chain for one coordinate: per parent, a uniformly
    random size-t digit subset of [psi] containing the progression W."""
    chain: list[tuple[int, ...]] = []
    current = (0,)
    for lp in levels:
        W = lp.W[m]
        t = lp.t[m]
        complement = [x for x in range(lp.psi) if x not in W]
        need = t - len(W)
        if need < 0:
            raise InfeasibleParametersError(
                f"level {lp.level}, coordinate {m}: tau > t", "tau <= t"
            )
        if len(current) * t > cap_atoms:
            raise ResourceLimitError(
                f"family would exceed {cap_atoms} endpoints at level {lp.level}"
            )
        nxt = []
        for a in current:
            base = a * lp.psi
            if need:
                extra = rng.choice(len(complement), size=need, replace=False)
                digits = sorted(W + tuple(complement[i] for i in extra))
            else:
                digits = W
            nxt.extend(base + dig for dig in digits)
        current = tuple(nxt)
        chain.append(current)
    return chain


def _progression_chain(levels: Sequence[LevelProfile], m: int) -> list[tuple[int, ...]]:
    chain = []
    current = (0,)
    for lp in levels:
        current = tuple(p * lp.psi + w for p in current for w in lp.W[m])
        chain.append(current)
    return chain


def _family_from_chains(
    kind: str,
    k: int,
    alphas: Sequence[float],
    betas: Sequence[float],
    seed: int,
    r_coef: int,
    n0: int,
    ratio_constant: float,
    levels: Sequence[LevelProfile],
    cap_atoms: int,
    decay_gate: float,
    decay_exponents: Sequence[float],
    phi_epsilon: float = 1.0,
) -> KnappFamily:
    """Draw per-coordinate chains, re-drawing when the decay gate fails."""
    chains: list[list[tuple[int, ...]]] = []
    attempts_used = []
    decay_constants = []
    for m in range(k):
        best_chain, best_sup = None, math.inf
        attempts = 0
        for attempt in range(MAX_DRAW_ATTEMPTS):
            attempts = attempt + 1
            rng = np.random.default_rng(np.random.SeedSequence([seed, m, attempt]))
            chain = _draw_digit_chain(levels, m, rng, cap_atoms)
            nums = chain[-1]
            Ps = levels[-1].Psi
            w = 1.0 / len(nums)
            mu = DiscreteMeasure.block(
                [(Fraction(a, Ps), w) for a in nums], Fraction(1, Ps)
            )
            sup = sup_decay_product(mu, decay_exponents[m])
            if sup < best_sup:
                best_chain, best_sup = chain, sup
            if sup <= decay_gate:
                break
        chains.append(best_chain)
        attempts_used.append(attempts)
        decay_constants.append(best_sup)
    a_sets = tuple(
        tuple(chains[m][j] for m in range(k)) for j in range(len(levels))
    )
    p_chains = [_progression_chain(levels, m) for m in range(k)]
    p_sets = tuple(
        tuple(p_chains[m][j] for m in range(k)) for j in range(len(levels))
    )
    return KnappFamily(
        kind=kind,
        k=k,
        alphas=tuple(alphas),
        betas=tuple(betas),
        seed=seed,
        r_coef=r_coef,
        n0=n0,
        ratio_constant=ratio_constant,
        levels=tuple(levels),
        a_sets=a_sets,
        p_sets=p_sets,
        draw_attempts=tuple(attempts_used),
        decay_constants=tuple(decay_constants),
        phi_epsilon=phi_epsilon,
    )


def build_family(
    params: KnappParams,
    cap_atoms: int = DEFAULT_ATOM_CAP,
    decay_gate: float = DECAY_GATE,
) -> KnappFamily:
    """Build the phi-scaled random family for the given parameters.

    Digit sets are drawn with numpy's PCG64 generator seeded by
    (seed, coordinate, attempt); a draw is accepted once the sampled decay
    product sup |xi|^(beta/2) |mu^(xi)| over [1, 1e3] stays under
    ``decay_gate`` (at most 16 attempts, best draw kept otherwise).
    """
    profiles = choose_profiles(params)
    return _family_from_chains(
        "phi-scaled",
        params.k,
        params.alphas,
        params.betas,
        params.seed,
        profiles.r_coef,
        profiles.n0,
        profiles.ratio_constant,
        profiles.levels,
        cap_atoms,
        decay_gate,
        [b / 2.0 for b in params.betas],
        phi_epsilon=params.phi.epsilon,
    )


def build_family_single_scale(
    base: int,
    t0: Sequence[int],
    n0: int = 0,
    seed: int = 0,
    levels: int = 3,
    cap_atoms: int = DEFAULT_ATOM_CAP,
    decay_gate: float = DECAY_GATE,
) -> KnappFamily:
    """Single-scale family: every level subdivides by N = base^(2 n0).

    Coordinate m has digit sets of size t_m = t0_m^(2 n0) drawn from [N]
    around a fixed embedded progression of length t_m^(1/2) = N^(alpha_m/2)
    (offset 0) whose differences form an M-independent set with
    M = ceil(1/sum alpha) * (base^(n0 alpha_1) - 1) + 1.  With n0 = 0 the
    least n0 <= 8 making the difference bound d_m * N^(alpha_m/2) <= N
    attainable is searched for.
    """
    k = len(t0)
    if k < 1:
        raise InfeasibleParametersError("need at least one digit size", "k >= 1")
    if any(not 1 < c < base for c in t0):
        raise InfeasibleParametersError(
            "need 1 < t0_m < base for every m", "1 < t0_m < base"
        )
    alphas = [math.log(c) / math.log(base) for c in t0]
    if any(alphas[i] <= alphas[i + 1] for i in range(k - 1)):
        raise InfeasibleParametersError(
            "alphas must be strictly decreasing (t0 strictly decreasing)",
            "alpha_k < ... < alpha_1",
        )
    if (k - 1) * alphas[0] + alphas[-1] >= 2.0:
        raise InfeasibleParametersError(
            "(k-1) alpha_1 + alpha_k must be < 2", "(k-1)alpha_1+alpha_k < 2"
        )
    sum_alpha = sum(alphas)
    lead = math.ceil(1.0 / sum_alpha)

    def feasible(n0_try: int) -> tuple[int, tuple[int, ...]] | None:
        M = lead * (t0[0] ** n0_try - 1) + 1
        ds = mli_set(M, k)
        N = base ** (2 * n0_try)
        for m in range(k):
            # difference bound d_m <= N^(1 - alpha_m/2), i.e. d_m * t0_m^n0 <= N
            if ds[m] * t0[m] ** n0_try > N:
                return None
        return M, ds

    if n0 == 0:
        for cand in range(1, 9):
            hit = feasible(cand)
            if hit is not None:
                n0 = cand
                break
        else:
            raise InfeasibleParametersError(
                "no n0 <= 8 satisfies the difference bound", "d_m <= N^(1-alpha_m/2)"
            )
        M, ds = hit
    else:
        hit = feasible(n0)
        if hit is None:
            raise InfeasibleParametersError(
                f"n0 = {n0} violates the difference bound", "d_m <= N^(1-alpha_m/2)"
            )
        M, ds = hit

    N = base ** (2 * n0)
    t = tuple(c ** (2 * n0) for c in t0)
    ap_len = tuple(c**n0 for c in t0)  # exactly sqrt(t_m) = N^(alpha_m/2)
    W = tuple(tuple(j * ds[m] for j in range(ap_len[m])) for m in range(k))
    lp_list = []
    Psi = 1
    for j in range(1, levels + 1):
        Psi *= N
        lp_list.append(
            LevelProfile(
                level=j,
                psi=N,
                Psi=Psi,
                t=t,
                tau=ap_len,
                theta=tuple(1.0 for _ in range(k)),
                vartheta=tuple(1.0 for _ in range(k)),
                M=M,
                d=ds,
                W=W,
            )
        )
    return _family_from_chains(
        "single-scale",
        k,
        alphas,
        alphas,  # Fourier decay approaches every exponent below alpha
        seed,
        lead,
        1,
        1.0,
        lp_list,
        cap_atoms,
        decay_gate,
        [a / 2.0 for a in alphas],
    )


def knapp_indicator(
    family: KnappFamily, ell: int, m: int, level: int | None = None
) -> np.ndarray:
    """Per-atom indicator of the depth-ell progression cylinder set.

    Value 1 on atoms of the level-N measure whose first ell digit levels
    lie in the embedded progression set, 0 otherwise; exact by integer
    prefix arithmetic.
    """
    level = family.depth if level is None else level
    if not 0 <= ell <= level:
        raise ValueError("ell must lie between 0 and the built depth")
    nums = family.atom_numerators(m, level)
    if ell == 0:
        return np.ones(len(nums))
    scale = family.Psi(level) // family.Psi(ell)
    members = frozenset(family.progression_numerators(m, ell))
    return np.array([1.0 if a // scale in members else 0.0 for a in nums])


def validate_family(
    family: KnappFamily,
    level: int | None = None,
    freq_range: tuple[float, float] = (1.0, 1e3),
    samples: int = 512,
) -> dict:
    """Empirical two-sided ball bounds and decay constants, per coordinate.

    Ball check: for every level-N endpoint x and every interval
    I = B(x, 1/(2 Psi(j))), j <= N, records the extreme constants of
    |I|^alpha / (phi-log factors) <= mu(I) <= |I|^alpha / log(1/|I|).
    Decay check: sup of |xi|^(beta/2) |mu^(xi)| over the sampled range.
    Report-only: the constants are recorded, not certified.
    """
    level = family.depth if level is None else level
    report: dict = {"level": level, "ball": [], "decay": []}
    for m in range(family.k):
        mu = family.measure(m, level)
        alpha = family.alphas[m]
        centers = mu.positions_f64
        c_low, c_high = math.inf, 0.0
        worst = None
        for j in range(1, level + 1):
            delta = 1.0 / family.Psi(j)
            masses = np.array(
                [mu.ball_masses(float(x), np.array([delta / 2.0]))[0] for x in centers]
            )
            log_inv = math.log(1.0 / delta)
            upper_ref = delta**alpha / log_inv
            lower_ref = delta**alpha / (log_inv**family.phi_epsilon * log_inv)
            hi = float(np.max(masses)) / upper_ref
            lo = float(np.min(masses)) / lower_ref
            if hi > c_high:
                c_high, worst = hi, (m, j)
            c_low = min(c_low, lo)
        report["ball"].append(
            {"m": m, "c_low": c_low, "c_high": c_high, "worst_scale": worst}
        )
        sup = sup_decay_product(
            mu, family.betas[m] / 2.0, freq_range[0], freq_range[1], samples
        )
        report["decay"].append({"m": m, "sup_product": sup})
    report["passed"] = all(b["c_low"] > 0 for b in report["ball"]) and all(
        math.isfinite(d["sup_product"]) for d in report["decay"]
    )
    return report
