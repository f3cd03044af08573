"""Bell expressions, monogamy functionals and the triple-inequality families
that derive them.

Any three jointly measured binary observables admit a joint distribution, so
every signed sum of their three pairwise correlators with an odd number of
minus signs is bounded by 1.  Summing 2m such bounds, one per Bell-expression
term, and identifying the correlators that coincide for nonsignaling boxes
yields |I_m| + 2|<B_0 E>| <= 2m; re-running the sum on a box that exceeds the
bound by delta yields linear constraints on the remaining conditional
correlators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import boxes
from .boxes import ScenarioMismatch

VIOLATION_TOL = 1e-9

# the four sign patterns with product -1
SIGN_PATTERNS = ((-1, 1, 1), (1, -1, 1), (1, 1, -1), (-1, -1, -1))


class StrictModeInapplicable(Exception):
    def __init__(self, discrepancy):
        self.discrepancy = float(discrepancy)
        super().__init__(
            f"<B_0 E> differs across A-conditionings by {self.discrepancy:.3e}; "
            "use relaxed mode")


@dataclass(frozen=True)
class TripleInequality:
    """s1 <A_i B_j>_E + s2 <B_j E>_{A_i} + s3 <A_i E>_{B_j} <= 1."""

    setting_pair: tuple
    signs: tuple

    def __post_init__(self):
        s1, s2, s3 = self.signs
        if s1 * s2 * s3 != -1:
            raise ValueError(f"sign product must be -1, got signs {self.signs}")


def triple_inequality_holds(dist, signs, tol: float = 1e-12) -> bool:
    """Check one signed correlator bound on a distribution over {+1,-1}^3.

    dist has shape (2, 2, 2) indexed (x, y, z) with index 0 meaning +1.
    """
    d = np.asarray(dist, dtype=float)
    s = boxes.SIGNS
    xy = np.einsum("xyz,x,y->", d, s, s)
    yz = np.einsum("xyz,y,z->", d, s, s)
    xz = np.einsum("xyz,x,z->", d, s, s)
    s1, s2, s3 = signs
    return bool(s1 * xy + s2 * yz + s3 * xz <= 1.0 + tol)


def triple_value(box: boxes.TripartiteBox, ineq: TripleInequality) -> float:
    """Signed correlator sum of one member inequality on a box."""
    i, j = ineq.setting_pair
    ab, ae, be = boxes.two_body_tables(box)
    s1, s2, s3 = ineq.signs
    return float(s1 * ab[i, j] + s2 * be[i, j] + s3 * ae[i, j])


def bell_value(box: boxes.TripartiteBox, m=None) -> float:
    """Chained Bell expression I_m; CHSH for m = 2.

    Correlators are conditioned on E's sole setting, so the value is defined
    for signaling boxes as well.
    """
    if m is not None and m != box.m:
        raise ScenarioMismatch(f"box has m={box.m}, requested m={m}")
    return boxes.chained_bell_value(box)


@dataclass(frozen=True)
class MonogamyReport:
    lhs: float
    bound: float
    delta: float       # max(lhs - bound, 0)
    violated: bool


def monogamy_lhs(box: boxes.TripartiteBox, m=None, relaxed: bool = False) -> MonogamyReport:
    """|I_m| + 2|<B_0 E>| against the nonsignaling bound 2m.

    Strict mode requires <B_0 E>_{A_i} to agree across conditionings within
    1e-9 and uses their common value; relaxed mode (m = 2) uses
    |I| + |<B_0 E>_{A_0} + <B_0 E>_{A_1}| instead.
    """
    if m is not None and m != box.m:
        raise ScenarioMismatch(f"box has m={box.m}, requested m={m}")
    m = box.m
    _, _, be = boxes.two_body_tables(box)
    bell = bell_value(box)
    b0e = be[:, 0]
    if relaxed:
        if m != 2:
            raise ValueError("relaxed mode is defined for m = 2 only")
        lhs = abs(bell) + abs(b0e[0] + b0e[1])
    else:
        spread = float(b0e.max() - b0e.min())
        if spread > 1e-9:
            raise StrictModeInapplicable(spread)
        lhs = abs(bell) + 2.0 * abs(float(b0e.mean()))
    bound = 2.0 * m
    raw = float(lhs) - bound
    return MonogamyReport(float(lhs), bound, max(raw, 0.0), bool(raw > VIOLATION_TOL))


# ---------------------------------------------------------------------------
# the 2m-member inequality sets and their summed constraints

def _base_member(m: int, i: int, j: int, swapped: bool) -> TripleInequality:
    """Member inequality for Bell term <A_{i+j} B_i>, i = 1..m-1, j = 0..1.

    The unswapped signs are (+1, -1, +1) for j = 0 and (+1, +1, -1) for
    j = 1; a swap exchanges the signs of the second and third correlator.
    The j = 1, i = m-1 member involves A_m = -A_0 and is stored on the
    actual pair (0, m-1) with the two A-outcome signs negated.
    """
    if j == 0:
        signs = (1, 1, -1) if swapped else (1, -1, 1)
        return TripleInequality((i, i), signs)
    signs = (1, -1, 1) if swapped else (1, 1, -1)
    if i + 1 < m:
        return TripleInequality((i + 1, i), signs)
    s1, s2, s3 = signs
    return TripleInequality((0, m - 1), (-s1, s2, -s3))


def _members(m: int, swaps) -> tuple:
    """The 2m member inequalities for one choice of swap bits.

    swaps is a flat tuple of length 2(m-1) ordered by (i, j) for
    i = 1..m-1, j = 0..1; all zeros gives the set whose sum is the base
    violation constraint.
    """
    members = [TripleInequality((0, 0), (1, 1, -1)),
               TripleInequality((1, 0), (1, 1, -1))]
    for i in range(1, m):
        for j in (0, 1):
            members.append(_base_member(m, i, j, bool(swaps[2 * (i - 1) + j])))
    return tuple(members)


def _component_index(m: int):
    """Map raw correlator symbols to canonical correlator-vector positions."""
    idx = {}
    k = 0
    for i in range(1, m):
        idx[("be", i, i)] = k            # x_A^i
        idx[("be", (i + 1) % m, i)] = k + 1   # y_A^i
        k += 2
    idx[("ae", 0, 0)] = k                # x_B^0
    idx[("ae", 0, m - 1)] = k + 1        # y_B^0
    k += 2
    for i in range(1, m):
        idx[("ae", i, i - 1)] = k        # x_B^i
        idx[("ae", i, i)] = k + 1        # y_B^i
        k += 2
    return idx


def summed_constraint(m: int, members) -> np.ndarray:
    """Coefficients of the violation constraint obtained by summing members.

    Summing the 2m bounds gives I_m + <B_0E>_{A_0} + <B_0E>_{A_1} + (rest)
    <= 2m; substituting I_m + 2<B_0E> = 2m + delta for a box with equal
    <B_0E> conditionals leaves coeffs . c >= delta over the correlator
    vector.  Raises if the members do not combine this way.
    """
    raw = {}
    for member in members:
        i, j = member.setting_pair
        s1, s2, s3 = member.signs
        for key, s in ((("ab", i, j), s1), (("be", i, j), s2), (("ae", i, j), s3)):
            raw[key] = raw.get(key, 0) + s

    # Bell part must be exactly the chained combination.
    for k in range(m):
        if raw.pop(("ab", k, k), 0) != 1:
            raise ValueError("member sum does not reproduce the chained Bell expression")
    for k in range(m - 1):
        if raw.pop(("ab", k + 1, k), 0) != 1:
            raise ValueError("member sum does not reproduce the chained Bell expression")
    if raw.pop(("ab", 0, m - 1), 0) != -1:
        raise ValueError("member sum does not reproduce the chained Bell expression")
    # <B_0 E> terms must total +2 across conditionings.
    b0e = sum(raw.pop(("be", i, 0), 0) for i in range(m))
    if b0e != 2:
        raise ValueError("member sum does not isolate 2<B_0 E>")

    comp = _component_index(m)
    coeffs = np.zeros(4 * m - 2)
    for key, s in raw.items():
        if s == 0:
            continue
        if key not in comp:
            raise ValueError(f"unexpected correlator {key} in member sum")
        coeffs[comp[key]] = -s
    return coeffs


@dataclass(frozen=True, eq=False)
class InequalitySet:
    """2m member inequalities whose sum bounds the signaling correlators."""

    m: int
    swaps: tuple
    members: tuple
    summed: np.ndarray   # summed . c >= delta

    @property
    def family_bits(self):
        """(a_bits, b_bits, c) labeling of the summed constraint family."""
        m = self.m
        a_bits = tuple(self.swaps[2 * (i - 1)] for i in range(1, m))
        b_bits = tuple(self.swaps[2 * (i - 1) + 1] for i in range(1, m - 1))
        c = 1 - self.swaps[2 * (m - 2) + 1]
        return a_bits, b_bits, c

    def summed_value(self, c: boxes.CorrelatorVector) -> float:
        return float(self.summed @ c.as_array()[: 4 * self.m - 2])


def generate_inequality_set(m: int, swaps=None) -> InequalitySet:
    """Build one of the 4^(m-1) sets of 2m member inequalities.

    swaps: flat 0/1 tuple of length 2(m-1), one bit per swappable member,
    ordered by (i, j) for i = 1..m-1 and j = 0..1.  All zeros (the default)
    gives the constraint x_B^0 - y_B^0 + ... + x_A^1 - y_A^1 >= delta.
    """
    if m < 2:
        raise ValueError("need m >= 2")
    if swaps is None:
        swaps = (0,) * (2 * (m - 1))
    swaps = tuple(int(b) for b in swaps)
    if len(swaps) != 2 * (m - 1) or any(b not in (0, 1) for b in swaps):
        raise ValueError(f"need {2 * (m - 1)} swap bits, got {swaps}")
    members = _members(m, swaps)
    summed = summed_constraint(m, members)
    return InequalitySet(m, swaps, members, summed)


def all_inequality_sets(m: int) -> list:
    return [generate_inequality_set(m, bits)
            for bits in itertools.product((0, 1), repeat=2 * (m - 1))]


def all_summed_constraints(m: int) -> np.ndarray:
    """The 4^(m-1) summed constraint rows, coeffs . c >= delta."""
    return np.array([s.summed for s in all_inequality_sets(m)])


# ---------------------------------------------------------------------------
# computational check of the minimal-set claim

def verify_minimal_set(m: int, size=None) -> int:
    """Count multisets of triple inequalities summing to I_m + 2<B_0 E>.

    Works in the fully identified correlator space (conditionings dropped, as
    for nonsignaling boxes) and searches exhaustively over all multisets of
    the 4 m^2 candidate inequalities of the given size (default 2m).  The
    expected count is 1 at size 2m and 0 below.
    """
    if not 2 <= m <= 4:
        raise ValueError("exhaustive search supported for 2 <= m <= 4")
    size = 2 * m if size is None else int(size)

    target_ab = np.zeros((m, m), dtype=int)
    for k in range(m):
        target_ab[k, k] += 1
        if k + 1 < m:
            target_ab[k + 1, k] += 1
        else:
            target_ab[0, k] -= 1
    target_be = np.zeros(m, dtype=int)
    target_be[0] = 2

    pairs = [(i, j) for i in range(m) for j in range(m)]
    # remaining minimum picks demanded by the Bell coefficients of the pairs
    # not yet processed
    tail_need = [0] * (len(pairs) + 1)
    for idx in range(len(pairs) - 1, -1, -1):
        i, j = pairs[idx]
        tail_need[idx] = tail_need[idx + 1] + abs(int(target_ab[i, j]))

    # per pattern: (s1, s2, s3) applied to (ab, be, ae)
    count = 0

    def options(t: int, max_k: int):
        """Count tuples (n0..n3) over the four sign patterns with
        n1 + n2 - n0 - n3 = t, yielding (k, ae_delta, be_delta, multiplicity=1)."""
        opts = []
        for k in range(abs(t), max_k + 1):
            if (k - abs(t)) % 2:
                continue
            for n0 in range(k + 1):
                for n1 in range(k - n0 + 1):
                    for n2 in range(k - n0 - n1 + 1):
                        n3 = k - n0 - n1 - n2
                        if (n1 + n2) - (n0 + n3) != t:
                            continue
                        ae_d = (n0 + n1) - (n2 + n3)
                        be_d = (n0 + n2) - (n1 + n3)
                        opts.append((k, ae_d, be_d))
        return opts

    ae_dev = np.zeros(m, dtype=int)   # current minus target (target is 0)
    be_dev = -target_be.copy()

    def dfs(idx: int, used: int):
        nonlocal count
        if idx == len(pairs):
            if used == size and not ae_dev.any() and not be_dev.any():
                count += 1
            return
        remaining = size - used
        if tail_need[idx] > remaining:
            return
        # each further pick moves one ae and one be coordinate by one unit
        if np.abs(ae_dev).sum() > remaining or np.abs(be_dev).sum() > remaining:
            return
        i, j = pairs[idx]
        t = int(target_ab[i, j])
        for k, ae_d, be_d in options(t, remaining):
            ae_dev[i] += ae_d
            be_dev[j] += be_d
            dfs(idx + 1, used + k)
            ae_dev[i] -= ae_d
            be_dev[j] -= be_d

    dfs(0, 0)
    return count
