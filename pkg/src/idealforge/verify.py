"""Machine checks for the configuration ideals.

Four families of checks, each exact:

* vanishing: every generator is zero at every configuration point (full passes
  for the small sets, a seeded sampled pass for the big one, with a structured
  bulk pass available for a full run);
* simple zeros: the Jacobian of the generating set has full rank at every
  point, computed symbolically or from the closed-form row shape of a sliced
  zonal gradient;
* design strength: Gegenbauer pair sums and raw moment comparisons;
* certificates: the per-claim records assembled into a report.

Bulk integer passes run through numpy in ranges where int64/float64 arithmetic
is exact; the test suite cross-checks them against the generic exact evaluator
on samples.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .configs import (
    DEFAULT_SAMPLE,
    DEFAULT_SEED,
    SphericalConfiguration,
    pair_distribution,
)
from .exact import Echelon, Matrix, Scalar, _fdiv, dot, rank, scalar_to_text
from .generators import FactoredPoly, GeneratorSet, orthogonal_complement_basis
from .poly import SparsePoly, is_trivial, nm_poly
from .sampling import sample_indices

PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"
FULL = "full"
SAMPLED = "sampled"

LEVEL_FULL_GROEBNER = "FULL_GROEBNER"
LEVEL_PAPER = "PAPER_CERTIFICATE"

Progress = Optional[Callable[[str], None]]


class MissingCheckError(ValueError):
    """A certificate was assembled without one of its component checks."""


class ClaimRecord:
    """One checked claim: id, pass/fail, mode, witnesses, wall time."""

    def __init__(
        self,
        claim_id: str,
        status: str,
        mode: str = FULL,
        witnesses: Optional[List] = None,
        detail: str = "",
        seconds: float = 0.0,
    ):
        self.claim_id = claim_id
        self.status = status
        self.mode = mode
        self.witnesses = witnesses or []
        self.detail = detail
        self.seconds = seconds

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_dict(self) -> Dict:
        out = {"id": self.claim_id, "status": self.status, "mode": self.mode}
        if self.witnesses:
            out["witness"] = [str(w) for w in self.witnesses[:5]]
        if self.detail:
            out["detail"] = self.detail
        return out

    def __repr__(self):
        return f"ClaimRecord({self.claim_id!r}, {self.status!r}, mode={self.mode!r})"


class VerificationReport:
    """Ordered claim records plus the certificate level for one configuration."""

    def __init__(self, name: str):
        self.name = name
        self.records: List[ClaimRecord] = []
        self.certificate_level: Optional[str] = None

    def add(self, rec: ClaimRecord) -> ClaimRecord:
        self.records.append(rec)
        return rec

    def find(self, claim_id: str) -> Optional[ClaimRecord]:
        for rec in self.records:
            if rec.claim_id == claim_id:
                return rec
        return None

    @property
    def passed(self) -> bool:
        return all(r.status != FAIL for r in self.records)

    def to_dict(self) -> Dict:
        return {
            "config": self.name,
            "claims": [r.to_dict() for r in self.records],
            "certificate_level": self.certificate_level,
            "timings": {r.claim_id: round(r.seconds, 3) for r in self.records},
        }


# ---------------------------------------------------------------------------
# vanishing
# ---------------------------------------------------------------------------


def _eval_points(G: GeneratorSet) -> Sequence[Tuple[Scalar, ...]]:
    """The point list matching the generator arity (ambient for sections)."""
    cfg = G.config
    if cfg is None:
        raise ValueError("generator set carries no configuration")
    pts = cfg.points
    if pts and len(pts[0]) != G.nvars:
        amb = cfg.ambient_points
        if amb and len(amb[0]) == G.nvars:
            return amb
        raise ValueError("no point list matches the generator arity")
    return pts


def _generic_vanishing(G: GeneratorSet, points, max_witnesses=5):
    witnesses = []
    for label, p in G:
        for idx, pt in enumerate(points):
            v = p.eval(pt)
            if v != 0:
                witnesses.append((label, idx, scalar_to_text(v)))
                if len(witnesses) >= max_witnesses:
                    return witnesses
    return witnesses


def _structured_sliced_pass(
    reps: np.ndarray,
    pts: np.ndarray,
    interior: Sequence[int],
    extreme: int,
    expect_full: bool,
    progress: Progress = None,
    block: int = 512,
) -> List[Tuple]:
    """Exact bulk check that every sliced zonal vanishes at every point.

    For base pair a and point x the generator value is (b.x) prod(a.x - w)
    over the interior roots w.  The product vanishes whenever a.x is interior;
    a.x = +-extreme forces x = +-a (checked), where every complement vector b
    has b.x = 0 by construction.  Any other inner product is a counterexample.
    The interior root set must be symmetric (both families are antipodal), so
    membership is tested on absolute values.  All products of the int64
    inputs stay far inside the exact float64 range, enforced by an abs bound.
    """
    witnesses: List[Tuple] = []
    pts_f = pts.astype(np.float64)
    n = reps.shape[0]
    npts = pts.shape[0]
    # integer matmuls stay exact in float64 while far below 2**53; the abs
    # bound also catches any unexpectedly large value outright
    abs_interior = sorted({abs(w) for w in interior})
    vbuf = np.empty((npts, block), dtype=np.float64)
    abuf = np.empty((npts, block), dtype=np.float64)
    okbuf = np.empty((npts, block), dtype=bool)
    tmp = np.empty((npts, block), dtype=bool)
    for start in range(0, n, block):
        chunk = reps[start : start + block]
        w = chunk.shape[0]
        whole = w == block
        V = np.dot(
            pts_f, chunk.T.astype(np.float64), out=vbuf if whole else None
        )
        A = np.abs(V, out=abuf if whole else None)
        if float(A.max()) > 2.0**40:
            raise ArithmeticError("inner products left the exact float64 range")
        ok = np.equal(A, float(abs_interior[0]), out=okbuf if whole else None)
        scratch = tmp if whole else np.empty_like(ok)
        for val in abs_interior[1:]:
            np.equal(A, float(val), out=scratch)
            np.logical_or(ok, scratch, out=ok)
        np.equal(A, float(extreme), out=scratch)
        np.logical_or(ok, scratch, out=ok)
        if not ok.all():
            bad = np.argwhere(~ok)
            for r, c in bad[:5]:
                witnesses.append((f"pair{start + c}", int(r), int(V[r, c])))
            return witnesses
        for sign in (1, -1):
            rows, cols = np.nonzero(V == sign * extreme)
            if expect_full and len(rows) != w:
                witnesses.append(("extreme-count", int(len(rows)), int(w)))
                return witnesses
            if len(rows) and not np.array_equal(pts[rows], sign * chunk[cols]):
                witnesses.append(("extreme-identity", start, sign))
                return witnesses
        if progress is not None:
            progress(f"vanishing pass {min(start + block, n)}/{n} base pairs")
    return witnesses


def _norm_witnesses(cfg: SphericalConfiguration, rows: Optional[np.ndarray] = None):
    """Indices where the squared norm misses r2 (the norm generator's zeros)."""
    arr_den = cfg.integer_array()
    if arr_den is not None:
        arr, den = arr_den
        if rows is not None:
            arr = arr[rows]
        n2 = (arr * arr).sum(axis=1)
        bad = np.nonzero(n2 != int(cfg.r2 * den * den))[0]
        return [("NM", int(i), int(n2[i])) for i in bad[:5]]
    out = []
    for i, p in enumerate(cfg.points):
        if dot(p, p) != cfg.r2:
            out.append(("NM", i, scalar_to_text(dot(p, p))))
            if len(out) >= 5:
                break
    return out


def check_vanishing(
    G: GeneratorSet,
    mode: str = FULL,
    points: Optional[Sequence] = None,
    seed: int = DEFAULT_SEED,
    sample: int = 256,
    progress: Progress = None,
) -> ClaimRecord:
    """Pass iff every generator evaluates to zero (all points, or a sample)."""
    t0 = time.time()
    claim = f"{G.name}.vanishing"

    if G.pair_reps is None or points is not None:
        pts = list(points) if points is not None else list(_eval_points(G))
        if mode == SAMPLED and len(pts) > sample:
            keep = sample_indices(seed, sample, len(pts))
            pts = [pts[i] for i in keep]
        witnesses = _generic_vanishing(G, pts)
        return ClaimRecord(
            claim,
            PASS if not witnesses else FAIL,
            mode,
            witnesses,
            detail=f"{len(G)} generators x {len(pts)} points, exact evaluation",
            seconds=time.time() - t0,
        )

    # bulk integer pass for the sliced-zonal families
    cfg = G.config
    arr, den = cfg.integer_array()
    scale = den * den
    interior = [w * scale for w in G.interior_roots]
    extreme = int(cfg.r2 * scale)

    if mode == SAMPLED:
        keep = np.array(
            sample_indices(seed, min(sample, arr.shape[0]), arr.shape[0]),
            dtype=np.int64,
        )
        pts_arr = np.ascontiguousarray(arr[keep])
        detail = f"{len(G)} generators x {pts_arr.shape[0]} sampled points"
        block = 4096
    else:
        keep = None
        pts_arr = arr
        detail = f"{len(G)} generators x {arr.shape[0]} points"
        block = 256

    witnesses = _structured_sliced_pass(
        G.pair_reps,
        pts_arr,
        interior,
        extreme,
        expect_full=(mode == FULL),
        progress=progress,
        block=block,
    )
    if not witnesses:
        witnesses = _norm_witnesses(cfg, keep)

    return ClaimRecord(
        claim,
        PASS if not witnesses else FAIL,
        mode,
        witnesses,
        detail=detail,
        seconds=time.time() - t0,
    )


def check_gallery_vanishing(G: GeneratorSet, gallery_points: Sequence) -> ClaimRecord:
    """Every generator vanishes on an extra gallery of points (4-cube companion)."""
    t0 = time.time()
    witnesses = _generic_vanishing(G, list(gallery_points))
    return ClaimRecord(
        f"{G.name}.gallery",
        PASS if not witnesses else FAIL,
        FULL,
        witnesses,
        detail=f"{len(G)} generators x {len(gallery_points)} gallery points",
        seconds=time.time() - t0,
    )


# ---------------------------------------------------------------------------
# simple zeros (Jacobian rank)
# ---------------------------------------------------------------------------


def _symbolic_rows(G: GeneratorSet, point) -> List[List[Scalar]]:
    rows = []
    for _, p in G.items:
        if isinstance(p, FactoredPoly):
            rows.append(list(p.gradient_at(point)))
        else:
            rows.append(
                [p.partial_derivative(i + 1).eval(point) for i in range(G.nvars)]
            )
    return rows


def _scaled_units(G: GeneratorSet, point):
    """Integer-unit view of a point plus the matching roots and extreme value.

    pair_reps hold den-times-configuration coordinates, so inner products with
    den-scaled points land on den^2 times the declared root values.
    """
    _, den = G.config.integer_array()
    scaled = [x * den for x in point]
    scale = den * den
    roots = [w * scale for w in G.interior_roots]
    extreme = int(G.r2 * scale)
    return scaled, roots, extreme


def _first_independent_indices(
    reps: np.ndarray,
    m: int,
    seed_idxs: Sequence[int] = (),
    skip_idxs: Sequence[int] = (),
    skip_mask: Optional[np.ndarray] = None,
) -> List[int]:
    """Indices of the first m rows (in order) that are linearly independent.

    A float Gram-Schmidt residual screens out rows already in the span; every
    accepted row is confirmed on the exact echelon, so float error can only
    cause a skip, never a wrong certificate.  seed_idxs are taken first,
    skip rows are never selected.
    """
    R = reps.astype(np.float64)
    norms2 = np.einsum("ij,ij->i", R, R)
    if skip_mask is not None:
        norms2[skip_mask] = 0.0
    for i in skip_idxs:
        norms2[i] = 0.0
    ech = Echelon(reps.shape[1])
    out: List[int] = []

    def accept(i: int) -> bool:
        nonlocal norms2
        if not ech.add_row([int(v) for v in reps[i]]):
            norms2[i] = 0.0
            return False
        n2 = float(R[i] @ R[i])
        if n2 > 1e-12:
            u = R[i] / math.sqrt(n2)
            proj = R @ u
            np.subtract(R, np.outer(proj, u), out=R)
            norms2 = norms2 - proj * proj
            np.maximum(norms2, 0.0, out=norms2)
        norms2[i] = 0.0
        out.append(int(i))
        return True

    for i in seed_idxs:
        if not accept(int(i)):
            raise ArithmeticError("seed rows were not independent")
    while len(out) < m:
        cand = np.nonzero(norms2 > 1e-7)[0]
        progressed = False
        for i in cand:
            if accept(int(i)):
                progressed = True
                break
        if not progressed:
            break
    return out


def _select_independent(G: GeneratorSet, point):
    """nvars (base, slicing, scalar) triples with independent gradient rows.

    Mirrors the radicality argument: pick independent base vectors c other
    than the point's own pair, and for each a complement vector b with
    b.point != 0.  The gradient row of the matching generator is then
    scalar * c with scalar = (b.point) * prod of the non-vanishing root
    differences, all in integer units.
    """
    m = G.nvars
    scaled, roots, extreme = _scaled_units(G, point)
    reps = G.pair_reps
    sc = np.array([int(x) for x in scaled], dtype=np.int64)
    ca_all = reps @ sc
    picks = _first_independent_indices(
        reps, m, skip_mask=(np.abs(ca_all) == extreme)
    )
    if len(picks) < m:
        raise ArithmeticError("could not select a full independent base set")
    chosen = []
    for i in picks:
        c = tuple(int(v) for v in reps[i])
        ca = int(ca_all[i])
        ba = None
        for b in orthogonal_complement_basis(c):
            v = dot(b, scaled)
            if v != 0:
                ba = (b, v)
                break
        if ba is None:
            raise ArithmeticError("no slicing vector sees the point")
        b, bval = ba
        prod = 1
        hit = 0
        for w in roots:
            d = ca - w
            if d == 0:
                hit += 1
            else:
                prod *= d
        if hit != 1:
            raise ArithmeticError("base inner product is not a single interior root")
        chosen.append((c, b, bval * prod))
    return chosen, scaled, roots


def jacobian_rank_at(G: GeneratorSet, point, method: str = "symbolic") -> int:
    """Rank of the generating set's Jacobian at the point.

    Sets without the pair structure use all generators and symbolic gradients.
    For the sliced-zonal families a subset of nvars generators is selected the
    way the radicality argument does; closed_form uses the fact that each
    selected gradient row is a nonzero integer multiple of its base vector,
    symbolic differentiates the product and must agree exactly.
    """
    if G.pair_reps is None:
        if method == "closed_form":
            raise ValueError("closed_form requires the sliced-zonal pair structure")
        if method != "symbolic":
            raise ValueError(f"unknown jacobian method: {method}")
        return rank(Matrix(_symbolic_rows(G, point)))

    chosen, scaled, roots = _select_independent(G, point)
    if method == "closed_form":
        rows = [[s * cj for cj in c] for c, _, s in chosen]
    elif method == "symbolic":
        rows = []
        for c, b, _ in chosen:
            poly = FactoredPoly(G.nvars, [(b, 0)] + [(c, w) for w in roots])
            rows.append(list(poly.gradient_at(scaled)))
    else:
        raise ValueError(f"unknown jacobian method: {method}")
    return rank(Matrix(rows))


def closed_form_rows(G: GeneratorSet, point) -> List[Tuple[Scalar, ...]]:
    """The selected gradient rows in integer units (for agreement tests)."""
    chosen, _, _ = _select_independent(G, point)
    return [tuple(s * cj for cj in c) for c, _, s in chosen]


def symbolic_selected_rows(G: GeneratorSet, point) -> List[Tuple[Scalar, ...]]:
    """Product-rule gradients of the same selected generators, same units."""
    chosen, scaled, roots = _select_independent(G, point)
    out = []
    for c, b, _ in chosen:
        poly = FactoredPoly(G.nvars, [(b, 0)] + [(c, w) for w in roots])
        out.append(poly.gradient_at(scaled))
    return out


def jacobian_full_pass(
    G: GeneratorSet,
    progress: Progress = None,
) -> ClaimRecord:
    """Rank = nvars at every point; vectorized for the sliced-zonal families."""
    t0 = time.time()
    m = G.nvars
    claim = f"{G.name}.jacobian"
    if G.pair_reps is None:
        pts = _eval_points(G)
        witnesses = []
        for idx, pt in enumerate(pts):
            ech = Echelon(m)
            r = 0
            for _, p in G.items:
                if isinstance(p, FactoredPoly):
                    row = list(p.gradient_at(pt))
                else:
                    row = [p.partial_derivative(i + 1).eval(pt) for i in range(m)]
                if ech.add_row(row):
                    r += 1
                    if r == m:
                        break
            if r != m:
                witnesses.append((idx, r))
                if len(witnesses) >= 5:
                    break
        return ClaimRecord(
            claim,
            PASS if not witnesses else FAIL,
            FULL,
            witnesses,
            detail=f"symbolic rank {m} at {len(pts)} points",
            seconds=time.time() - t0,
        )

    witnesses = _vectorized_jacobian_pass(G, progress)
    return ClaimRecord(
        claim,
        PASS if not witnesses else FAIL,
        FULL,
        witnesses,
        detail=(
            f"rank {m} at {G.config.npoints} points via closed-form rows "
            "over a fixed independent base set"
        ),
        seconds=time.time() - t0,
    )


def _vectorized_jacobian_pass(G: GeneratorSet, progress: Progress = None):
    """Full simple-zero pass for the sliced-zonal families.

    A fixed independent set C of nvars base pairs serves every point at once:
    for c in C and point x with x != +-c, the pass certifies that c.x is an
    interior root and that some complement vector b of c has b.x != 0, so the
    gradient row of that generator at x is a nonzero multiple of c.  The rows
    then span by the one-time independence check of C.  Points x = +-c use a
    per-slot substitute base vector, checked individually.
    """
    cfg = G.config
    arr, den = cfg.integer_array()
    reps = G.pair_reps
    m = G.nvars
    scale = den * den
    extreme = int(cfg.r2 * scale)
    interior = {w * scale for w in G.interior_roots}

    base_idx = _first_independent_indices(reps, m)
    if len(base_idx) < m:
        return [("independent-base-selection", len(base_idx))]

    substitutes: Dict[int, int] = {}
    for slot in range(m):
        others = [k for k in base_idx if k != base_idx[slot]]
        sel = _first_independent_indices(
            reps, m, seed_idxs=others, skip_idxs=base_idx
        )
        if len(sel) < m:
            return [("substitute-selection", slot)]
        substitutes[slot] = sel[-1]

    witnesses: List[Tuple] = []
    pts_f = arr.astype(np.float64)

    def slicing_seen(c_row: np.ndarray) -> np.ndarray:
        """True per point where some complement vector of c has nonzero value."""
        j = int((c_row != 0).argmax())
        w = int(c_row[j]) * arr - np.outer(arr[:, j], c_row)
        w[:, j] = 0
        return (w != 0).any(axis=1)

    for slot, idx in enumerate(base_idx):
        c_row = reps[idx]
        vals = pts_f @ c_row.astype(np.float64)
        ivals = np.rint(vals).astype(np.int64)
        if not np.array_equal(ivals, vals):
            raise ArithmeticError("inner products left the exact float64 range")
        is_pair = np.abs(ivals) == extreme
        ok_interior = np.zeros(arr.shape[0], dtype=bool)
        for w in interior:
            ok_interior |= ivals == w
        stray = ~(ok_interior | is_pair)
        if stray.any():
            bad = int(np.argwhere(stray)[0][0])
            witnesses.append(("inner-product-range", slot, bad, int(ivals[bad])))
            return witnesses
        seen = slicing_seen(c_row)
        missing = (~is_pair) & (~seen)
        if missing.any():
            bad = int(np.argwhere(missing)[0][0])
            witnesses.append(("no-slicing-vector", slot, bad))
            return witnesses
        # x = +-c itself: this slot's generator row degenerates there, so the
        # substitute base vector must provide the same guarantees
        sub = reps[substitutes[slot]]
        for r in np.nonzero(is_pair)[0]:
            x = arr[r]
            sval = int(x @ sub)
            if sval not in interior:
                witnesses.append(("substitute-interior", slot, int(r), sval))
                return witnesses
            jj = int((sub != 0).argmax())
            w = int(sub[jj]) * x - int(x[jj]) * sub
            w[jj] = 0
            if not w.any():
                witnesses.append(("substitute-slicing", slot, int(r)))
                return witnesses
        if progress is not None:
            progress(f"jacobian pass base {slot + 1}/{m}")
    return witnesses


# ---------------------------------------------------------------------------
# design strength
# ---------------------------------------------------------------------------


class DesignStrengthResult:
    """Gegenbauer pair sums for k = 1..t plus the pass verdict."""

    def __init__(self, name, t, mode, k_sums, per_point_ok, closure_ok, base_count):
        self.name = name
        self.t = t
        self.mode = mode
        self.k_sums = k_sums  # k -> exact global sum over the base points
        self.per_point_ok = per_point_ok
        self.closure_ok = closure_ok
        self.base_count = base_count

    @property
    def passed(self) -> bool:
        return (
            self.closure_ok
            and self.per_point_ok
            and all(v == 0 for v in self.k_sums.values())
        )

    def first_failure(self) -> Optional[int]:
        for k in sorted(self.k_sums):
            if self.k_sums[k] != 0:
                return k
        return None

    def to_dict(self) -> Dict:
        return {
            "config": self.name,
            "t": self.t,
            "mode": self.mode,
            "k_sums": {str(k): scalar_to_text(v) for k, v in self.k_sums.items()},
            "pass": self.passed,
        }


def gegenbauer_values(m: int, t: int, s: Scalar) -> List[Scalar]:
    """C_k at s for k = 0..t, classical ultraspherical with alpha = (m-2)/2."""
    if m < 3:
        raise ValueError("the pair-sum test needs dimension >= 3; use the moment test")
    alpha = Fraction(m - 2, 2)
    vals = [Fraction(1), 2 * alpha * s]
    for k in range(1, t):
        nxt = (2 * (k + alpha) * s * vals[k] - (k + 2 * alpha - 1) * vals[k - 1]) / (
            k + 1
        )
        vals.append(nxt)
    return vals[: t + 1]


def design_strength_gegenbauer(
    cfg: SphericalConfiguration,
    t: int,
    mode: str = FULL,
    seed: int = DEFAULT_SEED,
    sample: int = DEFAULT_SAMPLE,
    threads: int = 1,
) -> DesignStrengthResult:
    """Pair-sum test: sums of C_k(x.y / r2) must vanish for k = 1..t.

    Checked per base point (each row of the pair histogram) and globally,
    with exact rational Gegenbauer values at the finitely many inner products.
    """
    if t < 1:
        raise ValueError("strength t must be at least 1")
    dist = pair_distribution(cfg, mode=mode, seed=seed, count=sample, threads=threads)
    ck_table = [gegenbauer_values(cfg.m, t, _fdiv(w, cfg.r2)) for w in dist.omegas]

    k_sums: Dict[int, Scalar] = {}
    per_point_ok = True
    nbase = len(dist.base_indices)
    for k in range(1, t + 1):
        total = 0
        for row in range(nbase):
            row_sum = 0
            for col in range(len(dist.omegas)):
                cnt = int(dist.counts[row, col])
                if cnt:
                    row_sum = row_sum + cnt * ck_table[col][k]
            if row_sum != 0:
                per_point_ok = False
            total = total + row_sum
        k_sums[k] = total
    return DesignStrengthResult(
        cfg.name, t, dist.mode, k_sums, per_point_ok, dist.closure_ok, nbase
    )


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def sphere_moment(m: int, alpha: Sequence[int]) -> Fraction:
    """Average of the monomial x^alpha over the unit sphere in m variables."""
    if any(a % 2 for a in alpha):
        return Fraction(0)
    s = sum(alpha) // 2
    num = 1
    for a in alpha:
        num *= _double_factorial(a - 1)
    den = 1
    for j in range(1, s + 1):
        den *= m + 2 * j - 2
    return Fraction(num, den)


def _exponent_vectors(m: int, d: int):
    if m == 1:
        yield (d,)
        return
    for e in range(d + 1):
        for rest in _exponent_vectors(m - 1, d - e):
            yield (e,) + rest


def design_strength_moments(
    cfg: SphericalConfiguration, t: int, guard: int = 10**7
) -> Tuple[int, List[Tuple]]:
    """Raw moment test: sum over X of x^alpha vs |X| r^|alpha| mu_alpha.

    Returns (number of monomials checked, failures).  Refuses when the
    point-by-monomial work area exceeds the guard.
    """
    if t < 1:
        raise ValueError("strength t must be at least 1")
    m = cfg.m
    npts = cfg.npoints
    n_monos = math.comb(m + t, t)
    if npts * n_monos > guard:
        raise ValueError(
            f"moment test needs {npts * n_monos} evaluations, over the guard"
        )

    arr_den = cfg.integer_array()
    int_path = False
    if arr_den is not None:
        arr, den = arr_den
        peak = int(np.abs(arr).max()) or 1
        int_path = npts * peak ** t < 2**62
    if int_path:
        pows = [
            [np.ones(npts, dtype=np.int64)] for _ in range(m)
        ]
        for i in range(m):
            col = arr[:, i]
            for _ in range(t):
                pows[i].append(pows[i][-1] * col)
    else:
        den = 1
        tables = []
        for p in cfg.points:
            per_var = []
            for x in p:
                row = [1]
                for _ in range(t):
                    row.append(row[-1] * x)
                per_var.append(row)
            tables.append(per_var)

    failures: List[Tuple] = []
    checked = 0
    for d in range(t + 1):
        for alpha in _exponent_vectors(m, d):
            checked += 1
            if int_path:
                vec = None
                for i, e in enumerate(alpha):
                    if e:
                        vec = pows[i][e] if vec is None else vec * pows[i][e]
                if vec is None:
                    total = Fraction(npts)
                else:
                    total = Fraction(int(vec.sum()), den**d)
            else:
                total = 0
                for tab in tables:
                    term = 1
                    for i, e in enumerate(alpha):
                        if e:
                            term = term * tab[i][e]
                    total = total + term
            mu = sphere_moment(m, alpha)
            expected = npts * cfg.r2 ** (d // 2) * mu if mu != 0 else 0
            if total != expected:
                failures.append(
                    (alpha, scalar_to_text(total), scalar_to_text(expected))
                )
                if len(failures) >= 5:
                    return checked, failures
    return checked, failures


# ---------------------------------------------------------------------------
# support checks and certificates
# ---------------------------------------------------------------------------


def spanning_check(cfg: SphericalConfiguration) -> ClaimRecord:
    """The points linearly span the whole space (streamed, early exit)."""
    t0 = time.time()
    arr_den = cfg.integer_array()
    if arr_den is not None:
        r = len(_first_independent_indices(arr_den[0], cfg.m))
    else:
        ech = Echelon(cfg.m)
        r = 0
        for p in cfg.points:
            if ech.add_row(list(p)):
                r += 1
                if r == cfg.m:
                    break
    return ClaimRecord(
        f"{cfg.name}.spanning",
        PASS if r == cfg.m else FAIL,
        FULL,
        [] if r == cfg.m else [("rank", r)],
        detail=f"points span rank {r} of {cfg.m}",
        seconds=time.time() - t0,
    )


def section_embedding_check(cfg: SphericalConfiguration) -> ClaimRecord:
    """Section coordinates match the ambient points under the section map."""
    t0 = time.time()
    claim = f"{cfg.name}.section"
    if cfg.section is None or cfg.ambient_points is None:
        return ClaimRecord(
            claim, SKIPPED, FULL, [], detail="no section data", seconds=0.0
        )
    sec = cfg.section
    witnesses = []
    for k, (y, x) in enumerate(zip(cfg.points, cfg.ambient_points)):
        if sec.to_section(x) != y:
            witnesses.append(("forward", k))
        lifted = tuple(
            sum(sec.rows[i][j] * y[j] for j in range(sec.dim))
            for i in range(sec.ambient_dim)
        )
        if lifted != tuple(x):
            witnesses.append(("lift", k))
        if len(witnesses) >= 5:
            break
    return ClaimRecord(
        claim,
        PASS if not witnesses else FAIL,
        FULL,
        witnesses,
        detail=f"{len(cfg.points)} points match their ambient images",
        seconds=time.time() - t0,
    )


def nontrivial_generator_check(G: GeneratorSet, degree: int) -> ClaimRecord:
    """Some generator of the claimed degree has nonzero remainder mod the norm."""
    t0 = time.time()
    nm = nm_poly(G.nvars, G.r2, G.field_d)
    candidates = list(G.items)
    if G.stream_count:
        candidates.append(G.streamed(0))
    found = None
    for label, p in candidates:
        if label.startswith("NM"):
            continue
        sp = p.expand() if isinstance(p, FactoredPoly) else p
        if sp.degree() != degree:
            continue
        if not is_trivial(sp, nm):
            found = label
            break
    return ClaimRecord(
        f"{G.name}.nontrivial-degree-{degree}",
        PASS if found else FAIL,
        FULL,
        [] if found else [("no nontrivial generator of degree", degree)],
        detail=f"witness generator: {found}" if found else "",
        seconds=time.time() - t0,
    )


THEOREM_IDS = {
    "e8": "thmE8",
    "e7": "thmE7",
    "e6": "thmE6",
    "leech": "thmLeech",
}

DESIGN_STRENGTH = {
    "icosahedron": 5,
    "e6": 5,
    "e7": 5,
    "e8": 7,
    "leech": 11,
}

CRITICAL_DEGREE = {
    "icosahedron": 3,
    "e6": 3,
    "e7": 3,
    "e8": 4,
    "leech": 6,
}


def assemble_certificate(
    name: str,
    components: Dict[str, ClaimRecord],
    design: Optional[DesignStrengthResult] = None,
    groebner_certified: bool = False,
) -> VerificationReport:
    """Combine component checks into the per-theorem claim records.

    components must hold the vanishing, jacobian, and nontrivial records
    (support.* records fold into part i); the design result drives part iii.
    Raises MissingCheckError when a prerequisite is absent.  A sampled
    vanishing pass keeps part i and iv in sampled mode; it is never promoted.
    """
    theorem = THEOREM_IDS.get(name, name)
    report = VerificationReport(name)

    def need(key: str) -> ClaimRecord:
        if key not in components:
            raise MissingCheckError(f"certificate for {name} needs the {key} check")
        return components[key]

    vanish = need("vanishing")
    support = [components[k] for k in sorted(components) if k.startswith("support")]
    part_i_ok = vanish.passed and all(rec.passed for rec in support)
    report.add(
        ClaimRecord(
            f"{theorem}.i",
            PASS if part_i_ok else FAIL,
            vanish.mode,
            [],
            detail="vanishing + zero-set support: "
            + ", ".join([vanish.claim_id] + [rec.claim_id for rec in support]),
            seconds=vanish.seconds + sum(rec.seconds for rec in support),
        )
    )

    jac = need("jacobian")
    report.add(
        ClaimRecord(
            f"{theorem}.ii", jac.status, jac.mode, jac.witnesses, jac.detail, jac.seconds
        )
    )

    if design is None:
        raise MissingCheckError(f"certificate for {name} needs the design result")
    nontriv = need("nontrivial")
    lower = design.t // 2 + 1
    deg = CRITICAL_DEGREE.get(name, lower)
    iii_ok = design.passed and nontriv.passed and deg == lower
    report.add(
        ClaimRecord(
            f"{theorem}.iii",
            PASS if iii_ok else FAIL,
            design.mode,
            [],
            detail=(
                f"strength {design.t} forces degree >= {lower}; "
                f"non-trivial generator of degree {deg} meets it"
            ),
            seconds=nontriv.seconds,
        )
    )

    level = LEVEL_FULL_GROEBNER if groebner_certified else LEVEL_PAPER
    iv_ok = part_i_ok and jac.passed and iii_ok
    report.add(
        ClaimRecord(
            f"{theorem}.iv",
            PASS if iv_ok else FAIL,
            vanish.mode,
            [],
            detail=(
                f"ideal generated in degree <= {deg} at level {level}; "
                "radicality from the simple-zero pass"
            ),
            seconds=0.0,
        )
    )
    report.certificate_level = level
    report.add(
        ClaimRecord(
            f"design.{_design_key(name)}.t{design.t}",
            PASS if design.passed else FAIL,
            design.mode,
            [],
            detail=(
                f"pair sums zero for k = 1..{design.t} "
                f"over {design.base_count} base points"
            ),
            seconds=0.0,
        )
    )
    return report


def _design_key(name: str) -> str:
    return {"e8": "E8", "e7": "E7", "e6": "E6", "leech": "Leech"}.get(name, name)
