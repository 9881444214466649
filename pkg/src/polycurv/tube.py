"""Closed-form spectral data for the k-pointed tube.

Vertex order matches :func:`polycurv.families.tube_skeleton`: caps x=0, y=1,
then level j holds vertices 2+3j, 3+3j, 4+3j.  The Laplacian splits into one
(k+2)x(k+2) tridiagonal block on cycle-symmetric vectors and two copies of a
k x k block with diagonal 5 and off-diagonal -1.

Hyperbolic sines s_j = sinh(j phi), phi = arccosh(5/2), overflow near j = 300,
so every quotient is evaluated through log s_j.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.linalg import block_diag

from .errors import PolyCurvError

PHI = math.acosh(2.5)
MAX_K = 10_000


def _log_sinh(j: int) -> float:
    if j == 0:
        return -math.inf
    x = j * PHI
    if x < 700:
        return math.log(math.sinh(x))
    return x - math.log(2) + math.log1p(-math.exp(-2 * x))


@dataclass(frozen=True)
class TubeClosedForm:
    k: int

    def __post_init__(self):
        if not 1 <= self.k <= MAX_K:
            raise PolyCurvError(f"k must be in 1..{MAX_K}, got {self.k}", operation="tube_closed_form")

    @property
    def phi(self) -> float:
        return PHI

    @cached_property
    def log_s(self) -> tuple:
        return tuple(_log_sinh(j) for j in range(self.k + 3))

    @cached_property
    def sinh_table(self) -> tuple:
        """s_0..s_{k+2}; entries that would overflow are ``inf``."""
        return tuple(math.exp(x) if x < 709 else math.inf for x in self.log_s)

    def ratio(self, num: tuple, den: tuple) -> float:
        """prod s_a over a in ``num`` divided by prod s_b over b in ``den``."""
        ls = self.log_s
        if any(ls[a] == -math.inf for a in num):
            return 0.0
        return math.exp(sum(ls[a] for a in num) - sum(ls[b] for b in den))

    def recurrence_residual(self) -> float:
        """Largest relative error in s_{j+1} = 5 s_j - s_{j-1} over the finite part of the table."""
        s = self.sinh_table
        worst = abs(s[1] - math.sqrt(21) / 2) / s[1]
        for j in range(1, len(s) - 1):
            if math.isinf(s[j + 1]):
                break
            worst = max(worst, abs(s[j + 1] - (5 * s[j] - s[j - 1])) / s[j + 1])
        return worst

    # -- resistances ---------------------------------------------------------
    def r_cycle(self, j: int) -> float:
        _level(j, 0, self.k - 1, "cycle")
        return 2 * self.ratio((j + 1, self.k - j), (1, self.k + 1))

    def r_path(self, j: int) -> float:
        k = self.k
        _level(j, 0, k - 2, "path")
        den = (1, k + 1)
        val = (self.ratio((j + 1, k - j), den) + self.ratio((j + 2, k - j - 1), den)
               - 2 * self.ratio((j + 1, k - j - 1), den))
        return 1 / 3 + 2 / 3 * val

    def cap_quotient(self) -> float:
        """s_k / s_{k+1}, written so it stays monotone in k to the last bit."""
        k = self.k
        return math.exp(-PHI) * math.expm1(-2 * k * PHI) / math.expm1(-2 * (k + 1) * PHI)

    def r_cap(self) -> float:
        return 1 / 3 + 2 / 3 * self.cap_quotient()

    # -- curvatures ----------------------------------------------------------
    def cap_curvature(self) -> float:
        return 0.5 - self.cap_quotient()

    def interior_formula(self, j: int) -> float:
        """7 cosh((2j+1-k) phi) / (2 s_1 s_{k+1}); valid for 1 <= j <= k-2."""
        x = abs(2 * j + 1 - self.k) * PHI
        log_cosh = x - math.log(2) + math.log1p(math.exp(-2 * x))
        return 3.5 * math.exp(log_cosh - self.log_s[1] - self.log_s[self.k + 1])

    def assembled_curvature(self, j: int) -> float:
        """1 - (sum of closed-form resistances on the edges at a level-j vertex) / 2."""
        k = self.k
        _level(j, 0, k - 1, "level")
        total = 2 * self.r_cycle(j)
        total += self.r_cap() if j == 0 else self.r_path(j - 1)
        total += self.r_cap() if j == k - 1 else self.r_path(j)
        return 1 - total / 2

    def level_curvature(self, j: int) -> float:
        k = self.k
        _level(j, 0, k - 1, "level")
        if 1 <= j <= k - 2:
            return self.interior_formula(j)
        return self.assembled_curvature(j)

    def vertex_curvatures(self) -> np.ndarray:
        out = np.empty(3 * self.k + 2)
        out[:2] = self.cap_curvature()
        for j in range(self.k):
            out[2 + 3 * j:5 + 3 * j] = self.level_curvature(j)
        return out

    def boundary_discrepancy(self) -> float:
        """How far the interior formula is from the assembled value at levels 0 and k-1."""
        ends = {0, self.k - 1}
        return max(abs(self.interior_formula(j) - self.assembled_curvature(j)) for j in ends)


def _level(j, lo, hi, kind):
    if not lo <= j <= hi:
        raise PolyCurvError(f"{kind} level {j} outside {lo}..{hi}", witness=j,
                            operation="closed_form_resistance")


def closed_form_resistance(k: int, kind: str, j: int | None = None) -> float:
    t = TubeClosedForm(k)
    if kind == "cap":
        return t.r_cap()
    if kind == "cycle":
        return t.r_cycle(j)
    if kind == "path":
        return t.r_path(j)
    raise PolyCurvError(f"unknown resistance kind {kind!r}", operation="closed_form_resistance")


def closed_form_curvature(k: int, role) -> float:
    """``role`` is "cap" or an integer level 0..k-1."""
    t = TubeClosedForm(k)
    if role == "cap":
        return t.cap_curvature()
    if isinstance(role, int):
        return t.level_curvature(role)
    raise PolyCurvError(f"invalid vertex role {role!r}", operation="closed_form_curvature")


# -- block structure -----------------------------------------------------------

CYCLE_BASIS = np.column_stack([
    np.array([1, 1, 1]) / math.sqrt(3),
    np.array([1, -1, 0]) / math.sqrt(2),
    np.array([1, 1, -2]) / math.sqrt(6),
])


def symmetric_block_weights(k: int) -> np.ndarray:
    w = np.full(k + 2, math.sqrt(3))
    w[0] = w[-1] = 1.0
    return w / math.sqrt(3 * k + 2)


def tube_blocks(k: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(symmetric block, antisymmetric block, orthogonal change of basis).

    The symmetric block is ordered x, level 0..k-1, y.  Columns of the basis
    matrix follow the block order, so ``U @ block_diag(B0, B3, B3) @ U.T`` is the
    tube Laplacian in the package's vertex order.
    """
    if k < 1:
        raise PolyCurvError(f"k must be >= 1, got {k}", operation="tube_blocks")
    r3 = math.sqrt(3)
    diag = np.full(k + 2, 2.0)
    diag[0] = diag[-1] = 3.0
    off = np.full(k + 1, -1.0)
    off[0] = off[-1] = -r3
    B0 = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    B3 = 5 * np.eye(k) - np.eye(k, k=1) - np.eye(k, k=-1)
    n = 3 * k + 2
    U = np.zeros((n, n))
    U[0, 0] = 1.0  # x
    U[1, k + 1] = 1.0  # y
    for j in range(k):
        rows = slice(2 + 3 * j, 5 + 3 * j)
        U[rows, 1 + j] = CYCLE_BASIS[:, 0]
        U[rows, k + 2 + j] = CYCLE_BASIS[:, 1]
        U[rows, 2 * k + 2 + j] = CYCLE_BASIS[:, 2]
    return B0, B3, U


def reconstruct_laplacian(k: int) -> np.ndarray:
    B0, B3, U = tube_blocks(k)
    return U @ block_diag(B0, B3, B3) @ U.T


# -- tridiagonal pseudoinverse ---------------------------------------------------

@dataclass(frozen=True, eq=False)
class TridiagonalSpec:
    """Symmetric tridiagonal matrix with diagonal ``d`` and off-diagonal entries -c."""

    d: np.ndarray
    c: np.ndarray
    omega: np.ndarray | None = None

    @property
    def size(self) -> int:
        return len(self.d)

    def matrix(self) -> np.ndarray:
        c = np.asarray(self.c, dtype=float)
        return np.diag(np.asarray(self.d, dtype=float)) - np.diag(c, 1) - np.diag(c, -1)

    def check_weights(self, tol: float = 1e-10) -> None:
        if self.omega is None:
            raise PolyCurvError("weight vector omega is required", operation="tridiagonal_pinv")
        w = np.asarray(self.omega, dtype=float)
        d = np.asarray(self.d, dtype=float)
        c = np.asarray(self.c, dtype=float)
        if len(w) != len(d) or len(c) != len(d) - 1:
            raise PolyCurvError("inconsistent sizes", operation="tridiagonal_pinv")
        if np.any(w <= 0) or abs(w @ w - 1) > tol:
            raise PolyCurvError("omega must be positive with unit norm", operation="tridiagonal_pinv")
        cz = np.concatenate([[0.0], c, [0.0]])
        wz = np.concatenate([[0.0], w, [0.0]])
        resid = d * w - (cz[1:] * wz[2:] + cz[:-1] * wz[:-2])
        if np.max(np.abs(resid), initial=0.0) > tol:
            raise PolyCurvError(f"omega violates its defining relation (residual {np.max(np.abs(resid)):.3g})",
                                operation="tridiagonal_pinv")


def tridiagonal_pinv(spec: TridiagonalSpec) -> np.ndarray:
    """Pseudoinverse from prefix sums of omega^2 (no factorization)."""
    spec.check_weights()
    w = np.asarray(spec.omega, dtype=float)
    c = np.asarray(spec.c, dtype=float)
    n = len(w)
    head = np.cumsum(w * w)  # head[k-1] = sum_{l<=k} w_l^2
    tail = 1.0 - head  # tail[k-1] = sum_{l>k} w_l^2
    link = c * w[:-1] * w[1:]  # c_k w_k w_{k+1}, k = 1..n-1
    a = head[:-1] ** 2 / link
    b = tail[:-1] ** 2 / link
    t = tail[:-1] / link
    A = np.concatenate([[0.0], np.cumsum(a)])  # A[i-1] = sum_{k<i} a_k
    Bsuf = np.concatenate([np.cumsum(b[::-1])[::-1], [0.0]])  # Bsuf[i-1] = sum_{k>=i} b_k
    T = np.concatenate([[0.0], np.cumsum(t)])  # T[j-1] - T[i-1] = sum_{i<=k<j} t_k
    out = np.empty((n, n))
    for i in range(n):
        base = A[i] + Bsuf[i]
        for j in range(i, n):
            out[i, j] = out[j, i] = w[i] * w[j] * (base - (T[j] - T[i]))
    return out


def symmetric_block_spec(k: int) -> TridiagonalSpec:
    B0, _, _ = tube_blocks(k)
    return TridiagonalSpec(np.diag(B0).copy(), -np.diag(B0, 1), symmetric_block_weights(k))


def delta3_inverse_entry(i: int, j: int, k: int) -> float:
    if not (1 <= i <= k and 1 <= j <= k):
        raise PolyCurvError(f"indices ({i}, {j}) outside 1..{k}", witness=(i, j),
                            operation="delta3_inverse_entry")
    lo, hi = min(i, j), max(i, j)
    return TubeClosedForm(k).ratio((lo, k - hi + 1), (1, k + 1))


def delta0_pinv_entry(i: int, j: int, k: int, variant: str = "corrected") -> float:
    """Entry (i, j), 1-indexed, of the pseudoinverse of the symmetric tube block.

    ``variant="stated"`` evaluates (w_i w_j / 3)(h(i-1) + h(k+2-j) - c(i, j)) with
    c = (j-i)(2(3k+4) - 3(i+j-1)) / (2(3k+2)) literally; it agrees with the true
    pseudoinverse only on and next to the diagonal.  The default replaces
    h(k+2-j) by h(k+2-i) and drops the 3k+2 from the denominator of c, which is
    what the prefix-sum formula reduces to because every c_m w_m w_{m+1} = 3/(3k+2).
    """
    if not (1 <= i <= k + 2 and 1 <= j <= k + 2):
        raise PolyCurvError(f"indices ({i}, {j}) outside 1..{k + 2}", witness=(i, j),
                            operation="delta0_pinv_entry")
    if i > j:
        i, j = j, i
    w = symmetric_block_weights(k)
    den = 2 * (3 * k + 2)

    def h(x):
        return x * (6 * x * x - 3 * x - 1) / den

    span = (j - i) * (2 * (3 * k + 4) - 3 * (i + j - 1))
    if variant == "stated":
        inner = h(i - 1) + h(k + 2 - j) - span / den
    elif variant == "corrected":
        inner = h(i - 1) + h(k + 2 - i) - span / 2
    else:
        raise PolyCurvError(f"unknown variant {variant!r}", operation="delta0_pinv_entry")
    return w[i - 1] * w[j - 1] / 3 * inner
