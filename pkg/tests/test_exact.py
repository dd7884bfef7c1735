import random
from fractions import Fraction

import pytest

from idealforge.exact import (
    FieldMismatchError,
    HnfAccumulator,
    Matrix,
    NotPositiveDefiniteError,
    Quad,
    det,
    dot,
    hnf,
    ldlt,
    nullspace_basis,
    parse_scalar,
    rank,
    scalar_to_text,
)


def gauss_rank_oracle(rows):
    """Independent rank oracle: plain Gauss-Jordan over Fraction."""
    a = [[Fraction(x) for x in r] for r in rows]
    nr, nc = len(a), len(a[0]) if a else 0
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(nr):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def random_fraction(rng):
    return Fraction(rng.randint(-6, 6), rng.randint(1, 4))


def test_rank_identity_and_zero():
    assert rank(Matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])) == 3
    assert rank(Matrix([[0] * 7 for _ in range(5)])) == 0


def test_rank_matches_independent_oracle():
    rng = random.Random(20240817)
    for _ in range(60):
        nr, nc = rng.randint(1, 6), rng.randint(1, 6)
        rows = [[random_fraction(rng) for _ in range(nc)] for _ in range(nr)]
        assert rank(Matrix(rows)) == gauss_rank_oracle(rows)


def test_nullspace_trivial_cases():
    assert nullspace_basis(Matrix([[1, 0], [0, 1]])) == []
    basis = nullspace_basis(Matrix([[1, 1]]))
    assert len(basis) == 1
    v = basis[0]
    assert v[0] * 1 + v[1] * 1 == 0
    assert v[0] != 0


def test_nullspace_dimension_and_membership():
    rng = random.Random(7)
    for _ in range(40):
        nr, nc = rng.randint(1, 5), rng.randint(1, 6)
        rows = [[rng.randint(-4, 4) for _ in range(nc)] for _ in range(nr)]
        M = Matrix(rows)
        basis = nullspace_basis(M)
        assert len(basis) == nc - rank(M)
        for v in basis:
            for row in rows:
                assert dot(row, v) == 0


def test_det_small_cases():
    assert det(Matrix([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])) == 1
    assert det(Matrix([[0, 1], [1, 0]])) == -1
    with pytest.raises(ValueError):
        det(Matrix([[1, 2, 3]]))


def test_det_matches_permutation_expansion():
    import itertools

    rng = random.Random(99)
    for _ in range(25):
        n = rng.randint(1, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        expected = 0
        for perm in itertools.permutations(range(n)):
            sign = 1
            seen = list(perm)
            for i in range(n):
                for j in range(i + 1, n):
                    if seen[i] > seen[j]:
                        sign = -sign
            term = sign
            for i in range(n):
                term *= rows[i][perm[i]]
            expected += term
        assert det(Matrix(rows)) == expected


def test_ldlt_reconstructs_exactly():
    rng = random.Random(5)
    for _ in range(20):
        n = rng.randint(1, 5)
        B = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        # make B full rank by adding n*I dominance
        for i in range(n):
            B[i][i] += 7
        G = [[sum(B[i][k] * B[j][k] for k in range(n)) for j in range(n)] for i in range(n)]
        L, D = ldlt(Matrix(G))
        for i in range(n):
            for j in range(n):
                val = sum(L.rows[i][k] * D[k] * L.rows[j][k] for k in range(n))
                assert val == G[i][j]
        assert all(d > 0 for d in D)


def test_ldlt_rejects_non_positive_definite():
    with pytest.raises(NotPositiveDefiniteError):
        ldlt(Matrix([[-1]]))
    with pytest.raises(NotPositiveDefiniteError):
        ldlt(Matrix([[1, 2], [2, 1]]))


def test_ldlt_diagonal_passthrough():
    L, D = ldlt(Matrix([[3, 0], [0, 5]]))
    assert L.rows[1][0] == 0 and L.rows[0][0] == 1 == L.rows[1][1]
    assert D == [3, 5]


def test_hnf_identity_and_sublattice():
    I3 = Matrix([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert hnf(I3) == I3
    H = hnf(Matrix([[2, 0], [0, 2], [1, 1]]))
    assert H.rows == [[1, 1], [0, 2]]
    assert det(H) == 2


def test_hnf_span_equivalence():
    rng = random.Random(41)
    for _ in range(30):
        nr, nc = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[rng.randint(-5, 5) for _ in range(nc)] for _ in range(nr)]
        H = hnf(Matrix(rows))
        fwd = HnfAccumulator(nc)
        for r in H.rows:
            fwd.add_row(r)
        for r in rows:
            assert fwd.contains(r)
        back = HnfAccumulator(nc)
        for r in rows:
            back.add_row(r)
        for r in H.rows:
            assert back.contains(r)


def test_hnf_rejects_non_integer():
    with pytest.raises(ValueError):
        hnf(Matrix([[Fraction(1, 2)]]))


def test_quad_norm_identity_randomized():
    rng = random.Random(13)
    for _ in range(100):
        d = rng.choice([2, 3, 5])
        a, b = random_fraction(rng), random_fraction(rng)
        x = Quad(a, b, d)
        assert x * x.conjugate() == a * a - d * b * b


def test_quad_field_mixing_is_an_error():
    with pytest.raises(FieldMismatchError):
        Quad(1, 1, 2) + Quad(1, 1, 5)
    with pytest.raises(FieldMismatchError):
        Quad(0, 1, 3) * Quad(0, 1, 5)
    # rational-valued Quads can cross fields silently
    assert Quad(2, 0, 2) + Quad(3, 0, 5) == 5


def test_quad_arithmetic_and_inverse():
    phi = Quad(Fraction(1, 2), Fraction(1, 2), 5)
    assert phi * phi == phi + 1  # golden ratio identity
    assert phi * phi.inverse() == 1
    assert (1 / phi) * phi == 1
    assert phi > 1 and (-phi).sign() == -1
    r2 = Quad(0, 1, 2)
    assert r2 * r2 == 2
    assert (r2 - 1).sign() == 1 and (r2 - 2).sign() == -1


def test_scalar_text_roundtrip():
    cases = ["-3", "7/2", "1/2+3/2*sqrt(5)", "sqrt(2)", "-sqrt(3)", "0", "2-sqrt(5)"]
    for text in cases:
        val = parse_scalar(text)
        assert parse_scalar(scalar_to_text(val)) == val
    assert parse_scalar(" 1/2 + 3/2 * sqrt(5) ") == Quad(
        Fraction(1, 2), Fraction(3, 2), 5
    )
    assert parse_scalar("7/2") == Fraction(7, 2)
    with pytest.raises(ValueError):
        parse_scalar("2**3")
    with pytest.raises(ValueError):
        parse_scalar("sqrt(7)")


def test_rank_nullity_sum():
    rng = random.Random(3)
    for _ in range(30):
        nr, nc = rng.randint(1, 5), rng.randint(1, 6)
        rows = [[random_fraction(rng) for _ in range(nc)] for _ in range(nr)]
        M = Matrix(rows)
        assert rank(M) + len(nullspace_basis(M)) == nc
