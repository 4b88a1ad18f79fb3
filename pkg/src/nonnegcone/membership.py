"""One-sided membership testing for the matrix-entrywise cone.

For n = 1 the exact half-line oracle decides membership. For n >= 2 the cone
has no known decision procedure here, so this module searches for refutations
only: a polynomial leaves the cone exactly when some positive matrix A has a
negative entry in p(A), and it suffices to scan A = rho * S with S positive
row-stochastic and rho > 0. A refutation is only ever reported after the
candidate entry has been re-evaluated in exact rational arithmetic, so every
Refuted verdict is sound; NoRefutationFound is a budget report, not a
membership certificate.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

import numpy as np
from scipy import optimize

from .core import Polynomial, eval_matrix, eval_scalar, min_entry
from .exact import RationalPolynomial, refute_halfline


class NoUpperRefutation(RuntimeError):
    """Raised when the upper end of a bisection is never refuted."""


class BadBracket(RuntimeError):
    """Raised when a boundary bracket has no refuted upper end."""


@dataclass(frozen=True, eq=False)
class Witness:
    """A positive matrix rho * s whose polynomial image has a negative entry."""

    s: np.ndarray
    rho: float
    i: int
    j: int
    value: float

    def to_json_dict(self) -> dict:
        return {
            "s": [[float(v) for v in row] for row in self.s],
            "rho": self.rho,
            "i": self.i,
            "j": self.j,
            "value": self.value,
        }

    @staticmethod
    def from_json_dict(d: dict) -> "Witness":
        return Witness(np.array(d["s"], dtype=float), float(d["rho"]),
                       int(d["i"]), int(d["j"]), float(d["value"]))


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 50
    max_iters: int = 200
    rho_log_range: tuple[float, float] = (-10.0, 10.0)
    concentrations: tuple[float, ...] = (0.05, 0.3, 1.0)
    confirm_tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        assert self.restarts >= 1
        lo, hi = self.rho_log_range
        assert np.isfinite(lo) and np.isfinite(hi) and lo < hi

    def to_json_dict(self) -> dict:
        return {
            "restarts": self.restarts,
            "max_iters": self.max_iters,
            "rho_log_range": list(self.rho_log_range),
            "concentrations": list(self.concentrations),
            "confirm_tol": self.confirm_tol,
            "seed": self.seed,
        }

    @staticmethod
    def from_json_dict(d: dict) -> "SearchConfig":
        return SearchConfig(
            restarts=int(d["restarts"]),
            max_iters=int(d["max_iters"]),
            rho_log_range=tuple(d["rho_log_range"]),
            concentrations=tuple(d["concentrations"]),
            confirm_tol=float(d["confirm_tol"]),
            seed=int(d["seed"]),
        )


@dataclass(frozen=True)
class Refuted:
    witness: Witness


@dataclass(frozen=True)
class NoRefutationFound:
    restarts_used: int
    best: float


@dataclass(frozen=True)
class ExactMember:
    """Membership certified by the exact half-line oracle; n = 1 only."""


Verdict = Union[Refuted, NoRefutationFound, ExactMember]


def verdict_to_json(v: Verdict, cfg: SearchConfig) -> str:
    if isinstance(v, Refuted):
        d = {"kind": "refuted", "witness": v.witness.to_json_dict()}
    elif isinstance(v, NoRefutationFound):
        d = {"kind": "no_refutation_found",
             "restarts_used": v.restarts_used, "best": v.best}
    else:
        d = {"kind": "exact_member"}
    d["config"] = cfg.to_json_dict()
    return json.dumps(d)


# ---------------------------------------------------------------------------
# exact confirmation


def _exact_entry(p: Polynomial, s: np.ndarray, rho: float, i: int, j: int) -> Fraction:
    """Entry (i, j) of p(rho * s) in exact rational arithmetic.

    Binary floats are exact rationals, so this is a zero-error evaluation of
    the floating-point matrix the search actually produced.
    """
    n = s.shape[0]
    a = [[Fraction(rho) * Fraction(float(s[r][c])) for c in range(n)]
         for r in range(n)]
    acc = [[Fraction(0)] * n for _ in range(n)]
    for coef in reversed(p.coeffs):
        nxt = [[sum(acc[r][k] * a[k][c] for k in range(n)) for c in range(n)]
               for r in range(n)]
        cf = Fraction(coef)
        for r in range(n):
            nxt[r][r] += cf
        acc = nxt
    return acc[i][j]


def confirm_witness(p: Polynomial, w: Witness, tol: float) -> bool:
    """Fresh exact re-evaluation of the claimed negative entry.

    Checks the stochastic normalization as well; soundness of the refutation
    itself only needs rho * s to be a positive matrix.
    """
    s = np.asarray(w.s, dtype=float)
    n = s.shape[0]
    if s.shape != (n, n) or not (0 <= w.i < n and 0 <= w.j < n):
        return False
    if w.rho <= 0.0 or not np.all(s > 0.0):
        return False
    if np.max(np.abs(s.sum(axis=1) - 1.0)) > 1e-12:
        return False
    entry = _exact_entry(p, s, w.rho, w.i, w.j)
    if entry > Fraction(w.value) + Fraction(1, 10**12):
        return False
    return entry < -Fraction(tol)


# ---------------------------------------------------------------------------
# search parametrization: stochastic rows as softmax of free logits, the last
# logit of each row pinned to zero; rho = e^tau with tau clipped to the range


def _softmax_rows(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def _unpack(x: np.ndarray, n: int,
            rho_log_range: tuple[float, float]) -> tuple[np.ndarray, float]:
    free = x[: n * (n - 1)].reshape(n, n - 1)
    logits = np.concatenate([free, np.zeros((n, 1))], axis=1)
    logits = np.clip(logits, -40.0, 40.0)
    tau = float(np.clip(x[-1], *rho_log_range))
    return _softmax_rows(logits), np.exp(tau)


def _objective(p: Polynomial, n: int, cfg: SearchConfig) -> Callable:
    def f(x: np.ndarray) -> float:
        s, rho = _unpack(x, n, cfg.rho_log_range)
        val, _, _ = min_entry(eval_matrix(p, rho * s))
        return np.inf if np.isnan(val) else val
    return f


def _witness_at(p: Polynomial, x: np.ndarray, n: int,
                cfg: SearchConfig) -> Optional[Witness]:
    s, rho = _unpack(x, n, cfg.rho_log_range)
    val, i, j = min_entry(eval_matrix(p, rho * s))
    if val >= -cfg.confirm_tol:
        return None
    w = Witness(s, rho, i, j, val)
    return w if confirm_witness(p, w, cfg.confirm_tol) else None


def _matrix_witness(p: Polynomial, s: np.ndarray, rho: float,
                    cfg: SearchConfig) -> Optional[Witness]:
    val, i, j = min_entry(eval_matrix(p, rho * s))
    if val >= -cfg.confirm_tol:
        return None
    w = Witness(s, rho, i, j, val)
    return w if confirm_witness(p, w, cfg.confirm_tol) else None


# ---------------------------------------------------------------------------
# deterministic probe families, evaluated before any optimization; these
# cover the two witness shapes that occur at sharp thresholds (smoothed
# permutations at rho near 1, and near-identity matrices in a region where
# the derivative of p goes negative)


def _probe_candidates(p: Polynomial, n: int):
    taus = np.linspace(-2.5, 2.5, 41)   # includes tau = 0, rho = 1 exactly
    perms = list(itertools.permutations(range(n))) if n <= 4 else []
    if not perms:
        rng = np.random.default_rng(0)
        perms = [tuple(rng.permutation(n)) for _ in range(48)]
    for sigma in perms:
        for peak in (3.0, 5.0, 8.0):
            logits = np.zeros((n, n))
            for r, c in enumerate(sigma):
                logits[r, c] = peak
            s = _softmax_rows(logits)
            for tau in taus:
                yield s, float(np.exp(tau))
    # derivative dip probes: near-identity matrices around points where p'
    # is negative; for s = (1 - eps) I + eps U the off-diagonal entries of
    # p(rho s) behave like eps * rho * p'(rho) / n
    dp = p.derivative()
    xs = np.exp(np.linspace(-2.5, 2.5, 81))
    dvals = np.array([eval_scalar(dp, x) for x in xs])
    if np.min(dvals) < 0.0:
        uniform = np.full((n, n), 1.0 / n)
        order = np.argsort(dvals)
        for k in order[:5]:
            x0 = float(xs[k])
            for eps in (1e-3, 1e-2, 0.05, 0.2):
                s = (1.0 - eps) * np.eye(n) + eps * uniform
                yield s, x0
                yield s, x0 / (1.0 - eps)


def _scalar_precheck(p: Polynomial, n: int,
                     cfg: SearchConfig) -> Optional[Witness]:
    """Lift a half-line witness: the cone for n x n contains no polynomial
    outside the n = 1 cone, and at the uniform stochastic matrix U the
    evaluation collapses to p(rho) I + ((p(rho) - p(0)) / n) (U-like part),
    so an off-diagonal entry goes negative at rho = x0 when p(x0) < p(0) <= 0
    fails. The lift is heuristic; it is confirmed or discarded."""
    x0 = refute_halfline(RationalPolynomial.from_polynomial(p))
    if x0 is None:
        return None
    uniform = np.full((n, n), 1.0 / n)
    if eval_scalar(p, 0.0) < 0.0:
        # constant term already negative: diagonal entries sink at small rho
        for k in range(1, 200):
            w = _matrix_witness(p, uniform, 2.0 ** (-k), cfg)
            if w is not None:
                return w
        return None
    return _matrix_witness(p, uniform, float(x0), cfg)


def _restart_start(p: Polynomial, n: int, cfg: SearchConfig,
                   r: int) -> np.ndarray:
    rng = np.random.default_rng([cfg.seed & 0xFFFFFFFFFFFFFFFF, r])
    modes = len(cfg.concentrations) + 1
    mode = r % modes
    if mode < len(cfg.concentrations):
        conc = cfg.concentrations[mode]
        rows = rng.dirichlet(np.full(n, conc), size=n)
        rows = np.clip(rows, 1e-12, None)
        logits = np.log(rows)
    else:
        sigma = rng.permutation(n)
        peak = float(rng.uniform(2.0, 8.0))
        logits = rng.normal(scale=0.3, size=(n, n))
        for row, col in enumerate(sigma):
            logits[row, col] += peak
    logits = logits - logits[:, -1:]
    free = logits[:, :-1].reshape(-1)
    tau = float(rng.uniform(-2.5, 2.5))
    return np.concatenate([free, [tau]])


def refute(p: Polynomial, n: int, cfg: SearchConfig) -> Verdict:
    """Search for a positive matrix showing p outside the order-n cone.

    n = 1 delegates to the exact oracle. For n >= 2 the order of attack is:
    half-line precheck with a confirmed lift, deterministic probe matrices,
    then Nelder-Mead multistart over (row logits, log rho). Restarts use
    independent seeded streams and the first confirmed witness (lowest
    restart index) wins, so results do not depend on scheduling.
    """
    assert n >= 1
    if n == 1:
        return _refute_scalar(p, cfg)
    best = np.inf
    w = _scalar_precheck(p, n, cfg)
    if w is not None:
        return Refuted(w)
    for s, rho in _probe_candidates(p, n):
        val, _, _ = min_entry(eval_matrix(p, rho * s))
        best = min(best, val)
        if val < -cfg.confirm_tol:
            w = _matrix_witness(p, s, rho, cfg)
            if w is not None:
                return Refuted(w)
    f = _objective(p, n, cfg)
    for r in range(cfg.restarts):
        x0 = _restart_start(p, n, cfg, r)
        seen: list[tuple[float, np.ndarray]] = [(f(x0), x0.copy())]

        def tracked(x, _seen=seen):
            v = f(x)
            if v < _seen[0][0]:
                _seen[0] = (v, np.asarray(x, dtype=float).copy())
            return v

        res = optimize.minimize(
            tracked, x0, method="Nelder-Mead",
            options={"maxiter": cfg.max_iters, "xatol": 1e-7,
                     "fatol": 1e-13, "adaptive": True})
        cand_val, cand_x = seen[0]
        if res.fun < cand_val:
            cand_val, cand_x = float(res.fun), np.asarray(res.x, dtype=float)
        best = min(best, cand_val)
        if cand_val < -cfg.confirm_tol:
            w = _witness_at(p, cand_x, n, cfg)
            if w is not None:
                return Refuted(w)
    return NoRefutationFound(cfg.restarts, float(best))


def _refute_scalar(p: Polynomial, cfg: SearchConfig) -> Verdict:
    q = RationalPolynomial.from_polynomial(p)
    x0 = refute_halfline(q)
    if x0 is None:
        return ExactMember()
    x0 = _deepen_scalar_witness(q, x0, cfg.confirm_tol)
    val = float(q(x0))
    return Refuted(Witness(np.array([[1.0]]), float(x0), 0, 0, val))


def _deepen_scalar_witness(q: RationalPolynomial, x0: Fraction,
                           tol: float) -> Fraction:
    """Move an exact witness to a point with comfortably negative value.

    refute_halfline may return x0 = 0 or a point barely inside the negative
    region; the Witness type wants rho > 0 and value < -tol."""
    target = -Fraction(tol)
    if x0 > 0:
        best_x, best_v = x0, q(x0)
        if best_v < target * 2:
            return x0
    else:
        best_x, best_v = None, Fraction(0)
    scale = x0 if x0 > 0 else Fraction(1)
    for k in range(80):
        step = scale / 2 ** k
        for cand in (x0 + step, x0 - step if x0 - step > 0 else None):
            if cand is None:
                continue
            v = q(cand)
            if v < best_v:
                best_x, best_v = cand, v
            if v < target * 2:
                return cand
    if best_x is not None:
        return best_x
    return x0 if x0 > 0 else Fraction(1, 2 ** 60)


def scalar_walk_check(w: float, rho: float, ell: int, t: float) -> bool:
    """Sign test for the scalar combination 1 - t u + u^2 at u = w * rho^ell."""
    u = w * rho ** ell
    return 1.0 - t * u + u * u >= 0.0


FamilyLike = Union[Callable[[float], Polynomial], "object"]


def _family_fn(family: FamilyLike) -> Callable[[float], Polynomial]:
    if callable(family):
        return family
    from .families import family_with_t
    return lambda t: family_with_t(family, t)


def max_t(family: FamilyLike, n: int, cfg: SearchConfig,
          t_hi: float, width: float,
          probe_log: Optional[list] = None) -> tuple[float, float]:
    """Bisect the largest t whose family member is not refuted.

    Well-posed because the families are (fixed nonnegative part) - t x^m:
    any witness at t transfers to every larger t. Returns (lo, hi) with hi
    refuted, lo not refuted under the configured budget, hi - lo <= width.
    probe_log, when given, collects (t, refuted) pairs in probe order.
    """
    fn = _family_fn(family)
    base = fn(0.0)
    if any(c < 0.0 for c in base.coeffs):
        raise ValueError("family at t = 0 must have nonnegative coefficients")

    def probe(t: float) -> bool:
        hit = isinstance(refute(fn(t), n, cfg), Refuted)
        if probe_log is not None:
            probe_log.append((t, hit))
        return hit

    if not probe(t_hi):
        raise NoUpperRefutation(f"no witness at t = {t_hi} within budget")
    lo, hi = 0.0, float(t_hi)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if probe(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def boundary_offset(g: Polynomial, u: Polynomial, n: int, cfg: SearchConfig,
                    mu_hi: float, width: Optional[float] = None) -> float:
    """Largest mu with g + mu u not refuted, located by bisection.

    mu_hi is doubled a few times if it is not already refuted; BadBracket
    when no refuted upper end exists (the whole ray may lie in the cone) or
    when g itself is refuted. Bracket width defaults to 1e-3 * mu_hi.
    """
    if isinstance(refute(g, n, cfg), Refuted):
        raise BadBracket("base polynomial is already refuted")
    hi = float(mu_hi)
    for _ in range(5):
        if isinstance(refute(g + u.scale(hi), n, cfg), Refuted):
            break
        hi *= 2.0
    else:
        raise BadBracket(f"direction never refuted up to mu = {hi / 2.0}")
    target = width if width is not None else 1e-3 * hi
    lo = 0.0
    while hi - lo > target:
        mid = 0.5 * (lo + hi)
        if isinstance(refute(g + u.scale(mid), n, cfg), Refuted):
            hi = mid
        else:
            lo = mid
    return lo


@dataclass(frozen=True)
class TraceResult:
    points: tuple[tuple[float, float], ...]
    missing: tuple[float, ...]
    residual: float


def trace_slice(p: Polynomial, q: Polynomial, u: Polynomial, n: int,
                grid: int, cfg: SearchConfig) -> TraceResult:
    """Boundary offsets along u for the segment (1 - t) p + t q, t in (0, 1).

    Residual is the max deviation of the points from their least-squares
    line; a straight boundary face gives ~0, a curved one does not.
    """
    assert grid >= 1
    if isinstance(refute(p, n, cfg), Refuted) or \
       isinstance(refute(q, n, cfg), Refuted):
        raise BadBracket("segment endpoints must not be refuted")
    pts: list[tuple[float, float]] = []
    missing: list[float] = []
    for i in range(1, grid + 1):
        t = i / (grid + 1)
        g = p.scale(1.0 - t) + q.scale(t)
        try:
            mu = boundary_offset(g, u, n, cfg, mu_hi=1.0, width=5e-4)
        except BadBracket:
            missing.append(t)
            continue
        pts.append((t, mu))
    if len(pts) < 3:
        return TraceResult(tuple(pts), tuple(missing), 0.0)
    ts = np.array([a for a, _ in pts])
    mus = np.array([b for _, b in pts])
    slope, intercept = np.polyfit(ts, mus, 1)
    residual = float(np.max(np.abs(mus - (slope * ts + intercept))))
    return TraceResult(tuple(pts), tuple(missing), residual)
