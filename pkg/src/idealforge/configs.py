"""Point configurations: Golay code, root-system shells, Leech vectors, gallery sets.

Small configurations keep exact scalar coordinates throughout.  The Leech shell
is assembled in numpy int64 (coordinates are small integers, so every product
this module forms is exact) with exact tuples materialized on demand.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .exact import Quad, Scalar, dot, scalar_to_text, parse_scalar
from .sampling import sample_indices

PHI = Quad(Fraction(1, 2), Fraction(1, 2), 5)

DEFAULT_SEED = 0xC0DE
DEFAULT_SAMPLE = 64


class ConstructionError(RuntimeError):
    """A build-time self-check failed; the constructed object is unusable."""


# ---------------------------------------------------------------------------
# binary codes
# ---------------------------------------------------------------------------


class BinaryCode:
    """Linear code over GF(2); words are ints, bit i = coordinate i."""

    def __init__(self, length: int, generator_rows: Sequence[int]):
        self.length = length
        self.generator_rows = [int(r) for r in generator_rows]
        pivots: Dict[int, int] = {}
        for r in self.generator_rows:
            cur = r
            while cur:
                top = cur.bit_length() - 1
                if top in pivots:
                    cur ^= pivots[top]
                else:
                    pivots[top] = cur
                    break
        self._pivots = pivots
        self.dimension = len(pivots)
        words = [0]
        for g in pivots.values():
            words.extend([w ^ g for w in words])
        self.codewords = words
        self.weight_distribution: Dict[int, int] = {}
        for w in words:
            k = w.bit_count()
            self.weight_distribution[k] = self.weight_distribution.get(k, 0) + 1

    def contains(self, word: int) -> bool:
        cur = word
        while cur:
            top = cur.bit_length() - 1
            if top not in self._pivots:
                return False
            cur ^= self._pivots[top]
        return True

    def min_weight(self) -> int:
        return min(w.bit_count() for w in self.codewords if w)

    def is_self_dual(self) -> bool:
        if 2 * self.dimension != self.length:
            return False
        gens = list(self._pivots.values())
        return all(
            (gi & gj).bit_count() % 2 == 0 for gi in gens for gj in gens
        )


# ---------------------------------------------------------------------------
# spherical configurations
# ---------------------------------------------------------------------------


class SectionMap:
    """Isometric coordinates for a configuration sitting inside a larger ambient one.

    rows[i][j] expresses ambient coordinate i as a linear function of the
    section coordinates, so ambient_point = rows @ section_point.
    """

    def __init__(
        self,
        ambient_dim: int,
        dim: int,
        rows: Sequence[Sequence[Scalar]],
        field_d: Optional[int],
    ):
        self.ambient_dim = ambient_dim
        self.dim = dim
        self.rows = tuple(tuple(r) for r in rows)
        self.field_d = field_d

    def to_section(self, ambient_point: Sequence[Scalar]) -> Tuple[Scalar, ...]:
        # columns of `rows` are orthonormal, so the forward map is the transpose
        return tuple(
            sum(self.rows[i][j] * ambient_point[i] for i in range(self.ambient_dim))
            for j in range(self.dim)
        )


class SphericalConfiguration:
    """Finite point set on a sphere with a declared inner-product value list.

    omegas is sorted descending and starts with r2 itself; the rest are the
    values allowed for distinct pairs.  Big integer sets may be backed by a
    numpy array, with exact tuples materialized lazily.
    """

    def __init__(
        self,
        name: str,
        m: int,
        r2: Scalar,
        omegas: Optional[Sequence[Scalar]],
        points: Optional[Sequence[Tuple[Scalar, ...]]] = None,
        array: Optional[np.ndarray] = None,
        field_d: Optional[int] = None,
        antipodal: bool = False,
        embedded: bool = False,
        trivial_linear: Sequence[Tuple[Scalar, ...]] = (),
        section: Optional[SectionMap] = None,
        ambient_points: Optional[List[Tuple[Scalar, ...]]] = None,
        lattice_scale: int = 1,
    ):
        if points is None and array is None:
            raise ValueError("need points or an array")
        self.name = name
        self.m = m
        self.r2 = r2
        self.omegas = list(omegas) if omegas is not None else None
        if self.omegas is not None and self.omegas[0] != r2:
            raise ValueError("omega list must start with the squared norm")
        self._points = [tuple(p) for p in points] if points is not None else None
        self._array = array
        self._array_den = 1
        self.field_d = field_d
        self.antipodal = antipodal
        self.embedded = embedded
        self.trivial_linear = [tuple(f) for f in trivial_linear]
        self.section = section
        self.ambient_points = ambient_points
        self.lattice_scale = lattice_scale

    @property
    def npoints(self) -> int:
        if self._array is not None:
            return int(self._array.shape[0])
        return len(self._points)

    @property
    def points(self) -> List[Tuple[Scalar, ...]]:
        if self._points is None:
            self._points = [tuple(int(c) for c in row) for row in self._array.tolist()]
        return self._points

    def integer_array(self) -> Optional[Tuple[np.ndarray, int]]:
        """(den * points) as an int64 array, or None when coordinates are irrational."""
        if self._array is not None:
            return self._array, self._array_den
        den = 1
        for p in self.points:
            for c in p:
                if isinstance(c, Quad):
                    if c.b != 0:
                        return None
                    c = c.a
                if isinstance(c, Fraction):
                    q = c.denominator
                    den = den * q // math.gcd(den, q)
        rows = []
        for p in self.points:
            row = []
            for c in p:
                if isinstance(c, Quad):
                    c = c.a
                row.append(int(c * den))
            rows.append(row)
        arr = np.array(rows, dtype=np.int64)
        self._array = arr
        self._array_den = den
        return arr, den

    def validate_norms(self):
        if self._array is not None and self._points is None:
            n2 = (self._array.astype(np.int64) ** 2).sum(axis=1)
            if not np.all(n2 == self.r2 * self._array_den**2):
                bad = int(np.argmax(n2 != self.r2 * self._array_den**2))
                raise ConstructionError(f"point {bad} has squared norm {n2[bad]}")
            return
        for i, p in enumerate(self.points):
            if dot(p, p) != self.r2:
                raise ConstructionError(f"point {i} has wrong squared norm")

    def __repr__(self):
        return f"SphericalConfiguration({self.name!r}, m={self.m}, v={self.npoints})"


# ---------------------------------------------------------------------------
# builders
# ---------------------------------------------------------------------------


def build_icosahedron() -> SphericalConfiguration:
    """12 vertices over Q(sqrt 5): cyclic shifts of (±1, ±phi, 0)."""
    pts = []
    for s1, s2 in itertools.product((1, -1), repeat=2):
        a, b = s1, PHI * s2
        pts.append((a, b, 0))
        pts.append((0, a, b))
        pts.append((b, 0, a))
    r2 = 2 + PHI
    omegas = [r2, PHI, -PHI, -r2]
    cfg = SphericalConfiguration(
        "icosahedron", 3, r2, omegas, points=pts, field_d=5, antipodal=True
    )
    cfg.validate_norms()
    return cfg


def icosahedron_adjacency(cfg: Optional[SphericalConfiguration] = None) -> List[List[int]]:
    """0/1 adjacency: vertices are adjacent exactly when their inner product is phi."""
    if cfg is None:
        cfg = build_icosahedron()
    pts = cfg.points
    return [
        [1 if i != j and dot(pts[i], pts[j]) == PHI else 0 for j in range(12)]
        for i in range(12)
    ]


def build_golay() -> BinaryCode:
    """Binary rowspace of [I | J - A], A the icosahedron adjacency matrix."""
    A = icosahedron_adjacency()
    rows = []
    for i in range(12):
        mask = 1 << i
        for j in range(12):
            if (1 - A[i][j]) % 2 == 1:
                mask |= 1 << (12 + j)
        rows.append(mask)
    code = BinaryCode(24, rows)
    if code.dimension != 12:
        raise ConstructionError(f"expected dimension 12, got {code.dimension}")
    if code.min_weight() != 8:
        raise ConstructionError(f"expected minimum weight 8, got {code.min_weight()}")
    if not code.is_self_dual():
        raise ConstructionError("code is not self-dual")
    return code


def build_e8() -> SphericalConfiguration:
    """240 norm-2 vectors: ±e_i±e_j plus half-integer sign patterns with even minus count."""
    pts: List[Tuple[Scalar, ...]] = []
    for i, j in itertools.combinations(range(8), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * 8
            v[i], v[j] = si, sj
            pts.append(tuple(v))
    half = Fraction(1, 2)
    for signs in itertools.product((1, -1), repeat=8):
        if signs.count(-1) % 2 == 0:
            pts.append(tuple(half * s for s in signs))
    cfg = SphericalConfiguration(
        "e8", 8, 2, [2, 1, 0, -1, -2], points=pts, antipodal=True
    )
    cfg.validate_norms()
    if cfg.npoints != 240:
        raise ConstructionError(f"expected 240 points, got {cfg.npoints}")
    return cfg


def build_e7() -> SphericalConfiguration:
    """E8 vectors with equal last two coordinates, in 7-dim section coordinates."""
    e8 = build_e8()
    ambient = [a for a in e8.points if a[6] == a[7]]
    inv_sqrt2 = Quad(0, Fraction(1, 2), 2)  # 1/sqrt(2) = sqrt(2)/2
    rows: List[List[Scalar]] = []
    for i in range(6):
        r = [0] * 7
        r[i] = 1
        rows.append(r)
    rows.append([0] * 6 + [inv_sqrt2])
    rows.append([0] * 6 + [inv_sqrt2])
    section = SectionMap(8, 7, rows, field_d=2)
    pts = [section.to_section(a) for a in ambient]
    cfg = SphericalConfiguration(
        "e7",
        7,
        2,
        [2, 1, 0, -1, -2],
        points=pts,
        field_d=2,
        antipodal=True,
        section=section,
        ambient_points=ambient,
    )
    cfg.validate_norms()
    if cfg.npoints != 126:
        raise ConstructionError(f"expected 126 points, got {cfg.npoints}")
    return cfg


def build_e6() -> SphericalConfiguration:
    """E8 vectors with equal last three coordinates, in 6-dim section coordinates."""
    e8 = build_e8()
    ambient = [a for a in e8.points if a[5] == a[6] == a[7]]
    inv_sqrt3 = Quad(0, Fraction(1, 3), 3)  # 1/sqrt(3) = sqrt(3)/3
    rows: List[List[Scalar]] = []
    for i in range(5):
        r = [0] * 6
        r[i] = 1
        rows.append(r)
    for _ in range(3):
        rows.append([0] * 5 + [inv_sqrt3])
    section = SectionMap(8, 6, rows, field_d=3)
    pts = [section.to_section(a) for a in ambient]
    cfg = SphericalConfiguration(
        "e6",
        6,
        2,
        [2, 1, 0, -1, -2],
        points=pts,
        field_d=3,
        antipodal=True,
        section=section,
        ambient_points=ambient,
    )
    cfg.validate_norms()
    if cfg.npoints != 72:
        raise ConstructionError(f"expected 72 points, got {cfg.npoints}")
    return cfg


def e7_defining_vectors() -> List[Tuple[Scalar, ...]]:
    """The 56 E8 vectors whose last two coordinates differ by exactly 1."""
    e8 = build_e8()
    out = [b for b in e8.points if b[6] - b[7] == 1]
    if len(out) != 56:
        raise ConstructionError(f"expected 56 vectors, got {len(out)}")
    return out


def _leech_type2(codewords: Sequence[int], flip: bool) -> np.ndarray:
    shifts = np.arange(24)
    diag = np.arange(24)
    rows = np.empty((len(codewords) * 24, 24), dtype=np.int64)
    for k, w in enumerate(codewords):
        bits = (w >> shifts) & 1
        s = np.where(bits == 1, -1, 1).astype(np.int64)
        if flip:
            s = -s
        block = np.tile(s, (24, 1))
        block[diag, diag] -= 4 * s
        rows[k * 24 : (k + 1) * 24] = block
    return rows


def build_leech(code: Optional[BinaryCode] = None) -> SphericalConfiguration:
    """196560 integer vectors of squared norm 32 (coordinates carry the sqrt-8 scale).

    Three shapes: (±2^8, 0^16) on weight-8 codeword supports with an even
    number of minus signs; (∓3, ±1^23) from a codeword sign pattern with one
    coordinate shifted by ±4; (±4^2, 0^22).  The sign convention of the second
    shape is validated against the first via the mod-8 inner-product rule and
    flipped globally if the check fails.
    """
    if code is None:
        code = build_golay()
    octads = [w for w in code.codewords if w.bit_count() == 8]
    if len(octads) != 759:
        raise ConstructionError(f"expected 759 weight-8 words, got {len(octads)}")

    sign8 = np.array(
        [s for s in itertools.product((1, -1), repeat=8) if s.count(-1) % 2 == 0],
        dtype=np.int64,
    )
    type1 = np.zeros((759 * 128, 24), dtype=np.int64)
    for k, w in enumerate(octads):
        idx = [i for i in range(24) if (w >> i) & 1]
        type1[k * 128 : (k + 1) * 128, idx] = 2 * sign8

    type2 = _leech_type2(code.codewords, flip=False)
    probe = type1[sample_indices(DEFAULT_SEED, 32, type1.shape[0])]
    if np.any((type2 @ probe.T) % 8):
        type2 = _leech_type2(code.codewords, flip=True)
        if np.any((type2 @ probe.T) % 8):
            raise ConstructionError("no type-2 sign convention satisfies the mod-8 rule")

    type3 = np.zeros((1104, 24), dtype=np.int64)
    r = 0
    for i, j in itertools.combinations(range(24), 2):
        for si, sj in itertools.product((4, -4), repeat=2):
            type3[r, i], type3[r, j] = si, sj
            r += 1

    arr = np.vstack([type1, type2, type3])
    if not np.all((arr * arr).sum(axis=1) == 32):
        raise ConstructionError("squared-norm check failed")
    if np.unique(arr, axis=0).shape[0] != 196560:
        raise ConstructionError("vectors are not distinct")

    cfg = SphericalConfiguration(
        "leech",
        24,
        32,
        [32, 16, 8, 0, -8, -16, -32],
        array=arr,
        antipodal=True,
        lattice_scale=8,  # coordinates carry the sqrt-8 scale
    )
    cfg.type_counts = (type1.shape[0], type2.shape[0], type3.shape[0])

    base = arr[sample_indices(DEFAULT_SEED, DEFAULT_SAMPLE, arr.shape[0])]
    vals = np.unique(base @ arr.T)
    if not np.isin(vals, np.array(cfg.omegas, dtype=np.int64)).all():
        raise ConstructionError("sampled inner product outside the declared value set")
    return cfg


def build_ngon(n: int, parameters: Optional[Sequence] = None) -> SphericalConfiguration:
    """n rational points on the unit circle from the tangent parameterization."""
    if n < 4 or n % 2 != 0:
        raise ValueError("n must be an even integer >= 4")
    if parameters is None:
        parameters = default_ngon_parameters(n)
    params = [Fraction(t) for t in parameters]
    if len(params) != n:
        raise ValueError(f"need exactly {n} parameters")
    if len(set(params)) != n:
        raise ValueError("duplicate parameters give duplicate points")
    pts = []
    for t in params:
        den = 1 + t * t
        pts.append(((1 - t * t) / den, 2 * t / den))
    values = set()
    for p, q in itertools.combinations(pts, 2):
        values.add(dot(p, q))
    omegas = [Fraction(1)] + sorted(values, reverse=True)
    neg = {tuple(-c for c in p) for p in pts}
    cfg = SphericalConfiguration(
        "ngon",
        2,
        Fraction(1),
        omegas,
        points=pts,
        antipodal=neg == set(pts),
    )
    cfg.validate_norms()
    return cfg


def default_ngon_parameters(n: int) -> List[Fraction]:
    out = [Fraction(0)]
    k = 1
    while len(out) < n:
        out.append(Fraction(k))
        if len(out) < n:
            out.append(Fraction(-k))
        k += 1
    return out


def build_4cube() -> Tuple[SphericalConfiguration, List[Tuple[int, ...]]]:
    """The 16 vertices (±1)^4, plus the 24 permutation vectors (±1, ±1, 0, 0)."""
    pts = [tuple(s) for s in itertools.product((1, -1), repeat=4)]
    cfg = SphericalConfiguration(
        "cube4", 4, 4, [4, 2, 0, -2, -4], points=pts, antipodal=True
    )
    cfg.validate_norms()
    cell24 = []
    for i, j in itertools.combinations(range(4), 2):
        for si, sj in itertools.product((1, -1), repeat=2):
            v = [0] * 4
            v[i], v[j] = si, sj
            cell24.append(tuple(v))
    return cfg, cell24


def build_knn(n: int) -> SphericalConfiguration:
    """Rational embedded realization of the K_{n,n} configuration in R^{2n}.

    One part maps to (v_i, v_i), the other to (v_j, -v_j), v_i = e_i - (1/n)1.
    Inner products come out to exactly 2-2/n (equal), 0 (across parts),
    -2/n (distinct within a part); both block coordinate sums vanish on X.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    v = [
        tuple(Fraction(1) - Fraction(1, n) if k == i else -Fraction(1, n) for k in range(n))
        for i in range(n)
    ]
    pts = [vi + vi for vi in v]
    pts += [vj + tuple(-c for c in vj) for vj in v]
    r2 = 2 - Fraction(2, n)
    omegas = [r2, Fraction(0), -Fraction(2, n)]
    lin1 = tuple([1] * n + [0] * n)
    lin2 = tuple([0] * n + [1] * n)
    cfg = SphericalConfiguration(
        "knn",
        2 * n,
        r2,
        omegas,
        points=pts,
        antipodal=False,
        embedded=True,
        trivial_linear=[lin1, lin2],
    )
    cfg.validate_norms()
    return cfg


# ---------------------------------------------------------------------------
# pair distributions
# ---------------------------------------------------------------------------


class PairDistribution:
    """Per-base-point inner-product histograms and the checks hung off them."""

    def __init__(
        self,
        name: str,
        mode: str,
        omegas: List[Scalar],
        base_indices: List[int],
        counts: np.ndarray,
        closure_ok: bool,
        witness: Optional[Tuple[int, int, Scalar]],
    ):
        self.name = name
        self.mode = mode
        self.omegas = omegas
        self.base_indices = base_indices
        self.counts = counts  # len(base_indices) × len(omegas)
        self.closure_ok = closure_ok
        self.witness = witness

    @property
    def distance_invariant(self) -> bool:
        if len(self.base_indices) == 0:
            return True
        first = self.counts[0]
        return bool(np.all(self.counts == first))

    def histogram(self, k: int) -> Dict[Scalar, int]:
        return {w: int(c) for w, c in zip(self.omegas, self.counts[k])}


def _pair_exact(X: SphericalConfiguration, base: List[int], mode: str) -> PairDistribution:
    pts = X.points
    omegas = X.omegas
    if omegas is None:
        values = {dot(p, q) for p, q in itertools.combinations(pts, 2)}
        values.discard(X.r2)
        omegas = [X.r2] + sorted(values, reverse=True)
    index = {w: i for i, w in enumerate(omegas)}
    counts = np.zeros((len(base), len(omegas)), dtype=np.int64)
    witness = None
    ok = True
    for row, i in enumerate(base):
        for j, q in enumerate(pts):
            v = dot(pts[i], q)
            k = index.get(v)
            if k is None:
                if ok:
                    ok, witness = False, (i, j, v)
                continue
            counts[row, k] += 1
    return PairDistribution(X.name, mode, omegas, base, counts, ok, witness)


_PAIR_ARRAY: Optional[np.ndarray] = None
_PAIR_OMEGAS: Optional[np.ndarray] = None


def _pair_block(args):
    lo, hi = args
    A = _PAIR_ARRAY
    D = A[lo:hi].astype(np.float64) @ A.astype(np.float64).T
    counts = np.zeros((hi - lo, len(_PAIR_OMEGAS)), dtype=np.int64)
    for k, w in enumerate(_PAIR_OMEGAS):
        counts[:, k] = (D == w).sum(axis=1)
    witness = None
    total = counts.sum(axis=1)
    if np.any(total != A.shape[0]):
        r = int(np.argmax(total != A.shape[0]))
        bad = np.nonzero(~np.isin(D[r], _PAIR_OMEGAS))[0]
        witness = (lo + r, int(bad[0]), int(D[r, bad[0]]))
    return lo, counts, witness


def pair_distribution(
    X: SphericalConfiguration,
    mode: str = "full",
    seed: int = DEFAULT_SEED,
    count: int = DEFAULT_SAMPLE,
    threads: int = 1,
) -> PairDistribution:
    """Inner-product histogram per base point, with closure and invariance checks."""
    if mode not in ("full", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    n = X.npoints
    base = list(range(n)) if mode == "full" else sample_indices(seed, count, n)

    arr_den = X.integer_array()
    if arr_den is None or n <= 2000:
        return _pair_exact(X, base, mode)

    arr, den = arr_den
    omegas_scaled = np.array([int(w * den * den) for w in X.omegas], dtype=np.int64)
    if mode == "sampled":
        D = arr[base] @ arr.T
        counts = np.zeros((len(base), len(X.omegas)), dtype=np.int64)
        for k, w in enumerate(omegas_scaled):
            counts[:, k] = (D == w).sum(axis=1)
        witness = None
        ok = True
        total = counts.sum(axis=1)
        if np.any(total != n):
            r = int(np.argmax(total != n))
            bad = np.nonzero(~np.isin(D[r], omegas_scaled))[0]
            ok = False
            witness = (base[r], int(bad[0]), int(D[r, bad[0]]))
        return PairDistribution(X.name, "sampled", X.omegas, base, counts, ok, witness)

    # full mode over a large integer set: blocked float64 products (exact in range)
    global _PAIR_ARRAY, _PAIR_OMEGAS
    _PAIR_ARRAY = arr
    _PAIR_OMEGAS = omegas_scaled
    blocks = [(lo, min(lo + 128, n)) for lo in range(0, n, 128)]
    counts = np.zeros((n, len(X.omegas)), dtype=np.int64)
    witness = None
    if threads > 1:
        import multiprocessing as mp

        with mp.Pool(threads) as pool:
            for lo, c, w in pool.imap_unordered(_pair_block, blocks, chunksize=8):
                counts[lo : lo + c.shape[0]] = c
                if w is not None and witness is None:
                    witness = w
    else:
        for blk in blocks:
            lo, c, w = _pair_block(blk)
            counts[lo : lo + c.shape[0]] = c
            if w is not None and witness is None:
                witness = w
    return PairDistribution(X.name, "full", X.omegas, base, counts, witness is None, witness)


# ---------------------------------------------------------------------------
# point-set files
# ---------------------------------------------------------------------------


def field_label(field_d: Optional[int]) -> str:
    return "Q" if field_d is None else f"Q(sqrt {field_d})"


def write_points(X: SphericalConfiguration, path: str):
    with open(path, "w") as fh:
        fh.write(f"dim {X.m} norm {scalar_to_text(X.r2)} field {field_label(X.field_d)}\n")
        for p in X.points:
            fh.write(" ".join(scalar_to_text(c) for c in p) + "\n")


def read_points(path: str, name: str = "file") -> SphericalConfiguration:
    with open(path) as fh:
        header = fh.readline().split(None, 5)
        if len(header) != 6 or header[0] != "dim" or header[2] != "norm" or header[4] != "field":
            raise ValueError("bad point-file header")
        m = int(header[1])
        r2 = parse_scalar(header[3])
        field = header[5].strip()
        if field == "Q":
            field_d = None
        else:
            inner = field.removeprefix("Q(sqrt").removesuffix(")").strip()
            field_d = int(inner)
        pts = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            coords = tuple(parse_scalar(tok) for tok in line.split())
            if len(coords) != m:
                raise ValueError(f"point with {len(coords)} coordinates, expected {m}")
            pts.append(coords)
    return SphericalConfiguration(name, m, r2, None, points=pts, field_d=field_d)
