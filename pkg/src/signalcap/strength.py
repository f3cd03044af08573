"""Worst-case channel capacity of boxes at a given monogamy violation.

The quantity of interest is the minimum over the violation-delta correlator
polytope of the largest capacity among the induced channels.  Capacity is
convex in the transition probabilities and a pointwise max of convex
functions is convex, so the minimization is a convex program over a
polytope; it is solved with a cutting-plane scheme certified by a
lower/upper bound gap, and cross-checked by an independent grid search and
by the one-parameter optimal family.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from . import boxes, channels, geometry
from .channels import NoConvergence


class NoRoot(Exception):
    pass


@dataclass(frozen=True)
class StrengthResult:
    delta: float
    value: float
    witness: "boxes.CorrelatorVector | None"
    method: str             # minimax_solver | grid_oracle | optimal_family | analytic
    label: str = "exact"    # "conjectured lower bound" for chained m >= 3
    gap: float = 0.0
    iterations: int = 0


# ---------------------------------------------------------------------------
# cutting-plane minimax solver

def _family_eval(x, pairs):
    """Capacities and coordinate-space gradients of every channel at x.

    Gradients are taken at a point nudged 1e-9 inside the box so the tangent
    cuts stay finite at correlator values +-1; the cut then under-estimates
    the true max everywhere, which is all the lower bound needs.
    """
    caps = []
    cuts = []
    x = np.asarray(x, dtype=float)
    xn = np.clip(x, -1.0 + 2e-9, 1.0 - 2e-9)
    for _, ix, iy in pairs:
        p, q = (1.0 + x[ix]) / 2.0, (1.0 + x[iy]) / 2.0
        caps.append(channels._capacity_pq(p, q))
        pn, qn = (1.0 + xn[ix]) / 2.0, (1.0 + xn[iy]) / 2.0
        cn = channels._capacity_pq(pn, qn)
        gp, gq = channels.capacity_gradient(channels.BinaryChannel(pn, qn))
        g = np.zeros(x.size)
        g[ix] = gp / 2.0
        g[iy] = gq / 2.0
        cuts.append((g, cn - g @ xn))   # tangent: C(c) >= g.c + offset
    return np.array(caps), cuts


def minimax_capacity(poly: geometry.HPolytope, pairs, tol: float = 1e-4,
                     max_iter: int = 800, symmetrize_idx=None):
    """Minimize the max channel capacity over an H-polytope.

    Kelley cutting planes: the master LP minimizes t over the polytope
    subject to all accumulated tangent cuts t >= g.c + off; its optimum is a
    certified lower bound, the best evaluated iterate an upper bound.  Stops
    when the bracket closes below tol.  Deterministic.

    symmetrize_idx, when given, replaces that coordinate pair of every
    iterate by its mean before evaluation (used for the auxiliary channel in
    relaxed mode; the projection never increases the objective and keeps
    polytope membership).
    """
    A_ub, b_ub, A_eq, b_eq = geometry.polytope_float(poly)
    dim = poly.dim
    nvar = dim + 1   # coordinates plus epigraph variable t
    c_obj = np.zeros(nvar)
    c_obj[-1] = 1.0
    base_A = np.hstack([A_ub, np.zeros((A_ub.shape[0], 1))])
    base_b = b_ub.copy()
    eq_A = np.hstack([A_eq, np.zeros((A_eq.shape[0], 1))]) if len(A_eq) else None
    bounds = [(-1.0, 1.0)] * dim + [(0.0, 1.0)]

    cut_rows = []
    cut_rhs = []
    best_val = np.inf
    best_x = None
    lower = 0.0
    for it in range(1, max_iter + 1):
        A = np.vstack([base_A] + cut_rows) if cut_rows else base_A
        b = np.concatenate([base_b] + cut_rhs) if cut_rhs else base_b
        res = linprog(c_obj, A_ub=A, b_ub=b,
                      A_eq=eq_A, b_eq=b_eq if eq_A is not None else None,
                      bounds=bounds, method="highs")
        if not res.success:
            raise RuntimeError(f"master LP failed: {res.message}")
        x = res.x[:dim].copy()
        lower = max(lower, float(res.fun))
        if symmetrize_idx is not None:
            i, j = symmetrize_idx
            x[i] = x[j] = 0.5 * (x[i] + x[j])
        caps, cuts = _family_eval(x, pairs)
        f = float(caps.max())
        if f < best_val:
            best_val, best_x = f, x
        if best_val - lower <= tol:
            return best_val, best_x, best_val - lower, it
        for g, off in cuts:
            row = np.concatenate([g, [-1.0]])
            cut_rows.append(row[None, :])
            cut_rhs.append(np.array([-off]))
    raise NoConvergence(max_iter, best=(best_val, best_x))


def c_delta(delta: float, tol: float = 1e-4, relaxed: bool = False) -> StrengthResult:
    """Min-max capacity over the two-setting violation polytope."""
    poly = geometry.build_q_delta(2, delta, relaxed)
    pairs = channels.family_index_pairs(2, relaxed)
    sym = (6, 7) if relaxed else None
    value, witness, gap, it = minimax_capacity(poly, pairs, tol, symmetrize_idx=sym)
    vec = boxes.CorrelatorVector.from_array(2, witness, relaxed)
    return StrengthResult(float(delta), value, vec, "minimax_solver", "exact", gap, it)


def chained_polytope_bound(m: int, delta: float, tol: float = 1e-4) -> StrengthResult:
    """Min-max capacity over the m-setting constraint family.

    For m = 2 the constraint description is exactly the reachable correlator
    set, so this is the exact strength; for m >= 3 exactness rests on an
    unproved conjecture and the value is labeled a conjectured lower bound.
    """
    if m == 2:
        res = c_delta(delta, tol)
        return res
    if m > 4:
        raise ValueError("constraint count 4^(m-1) kept tractable: m <= 4")
    poly = geometry.build_q_delta(m, delta)
    pairs = channels.family_index_pairs(m)
    value, witness, gap, it = minimax_capacity(poly, pairs, tol)
    vec = boxes.CorrelatorVector.from_array(m, witness)
    return StrengthResult(float(delta), value, vec, "minimax_solver",
                          "conjectured lower bound", gap, it)


# ---------------------------------------------------------------------------
# closed-form pieces

def gava_bound(m: int, delta: float) -> float:
    """Symmetric-channel lower bound 1 - H((1 + delta/(4m-2))/2)."""
    if m < 2:
        raise ValueError("need m >= 2")
    if not 0.0 <= delta <= 2.0:
        raise ValueError("delta must lie in [0, 2]")
    return 1.0 - channels.binary_entropy((1.0 + delta / (4.0 * m - 2.0)) / 2.0)


@dataclass(frozen=True)
class OptimalFamily:
    delta: float
    x_star: float
    value: float
    witness: boxes.CorrelatorVector


def optimal_family(delta: float) -> OptimalFamily:
    """One-parameter family x_B^0 = x_B^1 = delta/2, x_A^1 = -y_A^1 = y_B^0
    = y_B^1 = x, with x fixed by equality of the two distinct capacities.

    C((1+delta/2)/2, (1+x)/2) falls and C((1+x)/2, (1-x)/2) grows on
    [0, delta/2], so bisection brackets the unique crossing; residual is
    driven below 1e-10.
    """
    if not 0.0 <= delta <= 2.0:
        raise ValueError("delta must lie in [0, 2]")
    if delta == 0.0:
        witness = boxes.CorrelatorVector.from_array(2, np.zeros(6))
        return OptimalFamily(0.0, 0.0, 0.0, witness)
    p0 = (1.0 + delta / 2.0) / 2.0

    def balance(x):
        return (channels._capacity_pq(p0, (1.0 + x) / 2.0)
                - channels._capacity_pq((1.0 + x) / 2.0, (1.0 - x) / 2.0))

    lo, hi = 0.0, delta / 2.0
    if balance(lo) <= 0 or balance(hi) >= 0:
        raise NoRoot(f"no sign change on [0, {hi}] at delta={delta}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        val = balance(mid)
        if abs(val) < 1e-10:
            lo = hi = mid
            break
        if val > 0:
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    value = channels._capacity_pq((1.0 + x) / 2.0, (1.0 - x) / 2.0)
    arr = np.array([x, -x, delta / 2.0, x, delta / 2.0, x])
    return OptimalFamily(float(delta), float(x), float(value),
                         boxes.CorrelatorVector.from_array(2, arr))


@dataclass(frozen=True)
class C2Report:
    alpha_star: float
    c2: float
    subregion_value: float


def c2_analytic() -> C2Report:
    """Maximal-violation strength by the two-region reduction.

    At delta = 2 the polytope forces x_B^0 = x_B^1 = 1 and leaves two free
    parameters (alpha, beta).  Outside the positive quadrant one channel
    with p = 1 dominates and the optimum is C(1, 1/2); inside, symmetry
    reduces to the equalization C(1, (1+a)/2) = C((1+a)/2, (1-a)/2) solved
    by bisection.  The strength is the smaller of the two.
    """
    # region alpha <= 0 or beta <= 0: minimize max(C(1,(1+a)/2)) over a <= 0
    alphas = np.linspace(-1.0, 0.0, 2001)
    vals = channels.capacity_array(np.ones_like(alphas), (1.0 + alphas) / 2.0)
    subregion = float(vals.min())
    fam = optimal_family(2.0)
    return C2Report(fam.x_star, min(fam.value, subregion), subregion)


# ---------------------------------------------------------------------------
# independent grid oracle (m = 2)

def _grid_refine(center, delta, step, refine_to):
    """Shrinking local scans around a feasible incumbent; returns best value
    and point.  Works on the raw six-dimensional grid, no structure used."""
    rows = geometry.polytope_float(geometry.build_q_delta(2, delta))[0:2]
    A_ub, b_ub = rows
    best_val, best_pt = np.inf, None
    c = np.asarray(center, dtype=float)
    cur = step
    offsets = np.array([-1.0, -0.5, 0.0, 0.5, 1.0])
    while cur > refine_to:
        axes = [np.clip(c[k] + offsets * cur, -1.0, 1.0) for k in range(6)]
        grids = np.meshgrid(*axes, indexing="ij")
        pts = np.stack([g.ravel() for g in grids], axis=1)
        feas = (A_ub @ pts.T - b_ub[:, None]).max(axis=0) <= 1e-12
        pts = pts[feas]
        if pts.size:
            p = (1.0 + pts) / 2.0
            f = np.maximum(
                channels.capacity_array(p[:, 2], p[:, 3]),
                np.maximum(channels.capacity_array(p[:, 4], p[:, 5]),
                           channels.capacity_array(p[:, 0], p[:, 1])))
            k = int(f.argmin())
            if f[k] < best_val:
                best_val, best_pt = float(f[k]), pts[k]
                c = pts[k]
        cur *= 0.5
    return best_val, best_pt


def _global_grid_scan(delta: float, step: float):
    """Exhaustive scan of the six-dimensional correlator grid.

    Returns (value, point) of the best feasible grid tuple, or
    (inf, None) when no grid point is feasible.  The grid is factored
    through the exact identity
        min max(C0, C1, CA) = min_B max(C0, C1, min_{A feasible} CA)
    and pairs are skipped only when max(C0, C1) already exceeds the running
    grid incumbent, which cannot change the minimum.
    """
    n = int(round(2.0 / step))
    step = 2.0 / n
    g = -1.0 + step * np.arange(n + 1)
    prob = (1.0 + g) / 2.0
    cap2d = channels.capacity_array(prob[:, None], prob[None, :])   # C[(ix, iy)]

    # A-channel capacities on the rotated integer lattice:
    #   IU = ix - iy + n in [0, 2n], IV = ix + iy in [0, 2n]
    nn = 2 * n + 1
    ca = np.full((nn, nn), np.inf, dtype=float)
    ix, iy = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    ca[(ix - iy + n).ravel(), (ix + iy).ravel()] = cap2d.ravel()

    # sparse table for 2-d range minima
    lognn = int(np.floor(np.log2(nn))) + 1
    spt = [[None] * lognn for _ in range(lognn)]
    spt[0][0] = ca
    for a in range(lognn):
        for b in range(lognn):
            if a == 0 and b == 0:
                continue
            if a:
                prev = spt[a - 1][b]
                half = 1 << (a - 1)
                spt[a][b] = np.minimum(prev[: prev.shape[0] - half], prev[half:])
            else:
                prev = spt[a][b - 1]
                half = 1 << (b - 1)
                spt[a][b] = np.minimum(prev[:, : prev.shape[1] - half], prev[:, half:])

    def range_min(lu, hu, lv, hv):
        """Vectorized min of ca over index boxes [lu, hu] x [lv, hv]."""
        au = np.floor(np.log2(hu - lu + 1)).astype(int)
        av = np.floor(np.log2(hv - lv + 1)).astype(int)
        out = np.empty(lu.shape, dtype=float)
        for a in np.unique(au):
            for b in np.unique(av):
                mask = (au == a) & (av == b)
                if not mask.any():
                    continue
                tab = spt[a][b]
                u2 = hu[mask] - (1 << a) + 1
                v2 = hv[mask] - (1 << b) + 1
                out[mask] = np.minimum(
                    np.minimum(tab[lu[mask], lv[mask]], tab[lu[mask], v2]),
                    np.minimum(tab[u2, lv[mask]], tab[u2, v2]))
        return out

    # B-pair bookkeeping: for pair (ix, iy), d = ix - iy, s = ix + iy - n in
    # units of step; constraints on the A-pair in rotated units read
    #   u >= du - d0 - d1,  u <= s0 + s1 - du,  v >= du - s0 - d1,  v <= d0 + s1 - du
    du = delta / step
    pair_ix, pair_iy = np.meshgrid(np.arange(n + 1), np.arange(n + 1), indexing="ij")
    pair_ix = pair_ix.ravel()
    pair_iy = pair_iy.ravel()
    dvals = pair_ix - pair_iy
    svals = pair_ix + pair_iy - n
    cvals = cap2d.ravel()
    order0 = np.argsort(cvals, kind="stable")

    eps = 1e-9
    incumbent = np.inf
    inc_b = None  # (pair0 flat index, pair1 flat index)
    for flat0 in order0:
        c0 = cvals[flat0]
        if c0 >= incumbent:
            break
        d0, s0 = int(dvals[flat0]), int(svals[flat0])
        lu = np.ceil(du - d0 - dvals - eps).astype(int)
        hu = np.floor(s0 + svals - du + eps).astype(int)
        lv = np.ceil(du - s0 - dvals - eps).astype(int)
        hv = np.floor(d0 + svals - du + eps).astype(int)
        np.clip(lu, -n, None, out=lu)
        np.clip(hu, None, n, out=hu)
        np.clip(lv, -n, None, out=lv)
        np.clip(hv, None, n, out=hv)
        m01 = np.maximum(c0, cvals)
        cand = (lu <= hu) & (lv <= hv) & (m01 < incumbent)
        if not cand.any():
            continue
        idx = np.nonzero(cand)[0]
        amin = range_min(lu[idx] + n, hu[idx] + n, lv[idx] + n, hv[idx] + n)
        f = np.maximum(m01[idx], amin)
        k = int(f.argmin())
        if f[k] < incumbent:
            incumbent = float(f[k])
            inc_b = (int(flat0), int(idx[k]))

    # recover the incumbent's coordinates
    if inc_b is None:
        return np.inf, None
    flat0, flat1 = inc_b
    d0, s0 = int(dvals[flat0]), int(svals[flat0])
    d1, s1 = int(dvals[flat1]), int(svals[flat1])
    lu = max(int(np.ceil(du - d0 - d1 - eps)), -n)
    hu = min(int(np.floor(s0 + s1 - du + eps)), n)
    lv = max(int(np.ceil(du - s0 - d1 - eps)), -n)
    hv = min(int(np.floor(d0 + s1 - du + eps)), n)
    block = ca[lu + n: hu + n + 1, lv + n: hv + n + 1]
    au, av = np.unravel_index(int(np.argmin(block)), block.shape)
    iu, iv = lu + au, lv + av
    a_ix, a_iy = (iu + iv + n) // 2, (iv - iu + n) // 2
    point = np.array([g[a_ix], g[a_iy],
                      g[pair_ix[flat0]], g[pair_iy[flat0]],
                      g[pair_ix[flat1]], g[pair_iy[flat1]]])
    return float(incumbent), point


def grid_oracle(delta: float, step: float = 0.05, m: int = 2,
                refine_to: float = 5e-5) -> float:
    """Brute-force upper-bounding estimate of the two-setting strength.

    Scans the full six-dimensional correlator grid at the given step,
    restricted to polytope members, then refines locally around the grid
    incumbent (and around the optimal-family seed) with shrinking steps.
    Only feasible points are ever evaluated, so the result upper-bounds the
    true minimum and converges to it as step -> 0.
    """
    if m != 2:
        raise ValueError("grid oracle implemented for m = 2")
    if not 0 < step <= 0.05 + 1e-12:
        raise ValueError("step must lie in (0, 0.05]")
    incumbent, point = _global_grid_scan(delta, step)
    seeds = []
    if point is not None:
        seeds.append(point)
    seeds.append(optimal_family(delta).witness.as_array())
    best = incumbent
    for seed in seeds:
        val, _ = _grid_refine(seed, delta, step, refine_to)
        best = min(best, val)
    return float(best)


# ---------------------------------------------------------------------------
# strength curves

@dataclass(frozen=True)
class CurveRow:
    delta: float
    c_delta: float
    family_value: "float | None"
    gava_m2: float
    gava_m3: float
    witness: tuple
    label: str
    error: "str | None" = None


@dataclass(frozen=True)
class StrengthCurve:
    m: int
    rows: tuple

    @property
    def monotone(self) -> bool:
        vals = [r.c_delta for r in self.rows if r.error is None]
        return all(b - a >= -1e-9 for a, b in zip(vals, vals[1:]))

    @property
    def ok(self) -> bool:
        return all(r.error is None for r in self.rows)

    def witness_names(self):
        return [f"witness_{name.replace('^', '')}" for name in
                boxes.component_names(self.m)]

    def to_csv(self) -> str:
        header = ["delta", "c_delta", "family_value", "gava_m2", "gava_m3"]
        header += self.witness_names()
        lines = [",".join(header)]
        for r in self.rows:
            if r.error is not None:
                continue
            cells = [f"{r.delta:.6f}", f"{r.c_delta:.6f}",
                     "" if r.family_value is None else f"{r.family_value:.6f}",
                     f"{r.gava_m2:.6f}", f"{r.gava_m3:.6f}"]
            cells += [f"{w:.6f}" for w in r.witness]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


def curve(m: int, deltas, tol: float = 1e-4) -> StrengthCurve:
    """Strength values over an ascending delta grid, with the closed-form
    bounds alongside.  Solver failures are recorded per row and do not stop
    the remaining rows."""
    deltas = [float(d) for d in deltas]
    if any(b <= a for a, b in zip(deltas, deltas[1:])):
        raise ValueError("delta grid must be ascending")
    rows = []
    for d in deltas:
        g2, g3 = gava_bound(2, d), gava_bound(3, d)
        try:
            res = chained_polytope_bound(m, d, tol)
            fam = optimal_family(d).value if m == 2 else None
            rows.append(CurveRow(d, res.value, fam, g2, g3,
                                 tuple(res.witness.as_array()[: 4 * m - 2]),
                                 res.label))
        except NoConvergence as err:
            rows.append(CurveRow(d, float("nan"), None, g2, g3, (),
                                 "failed", error=str(err)))
    return StrengthCurve(m, tuple(rows))
