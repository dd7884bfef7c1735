"""Verification-pass tests: frozen design sums, Jacobian ranks, vanishing."""

import json
import random
from fractions import Fraction
from math import factorial

import pytest

from idealforge.configs import (
    build_4cube,
    build_e6,
    build_e7,
    build_e8,
    build_icosahedron,
    build_leech,
    build_ngon,
)
from idealforge.generators import (
    build_generator_set,
    e7_section,
    restrict_to_section,
)
from idealforge.verify import (
    FAIL,
    PASS,
    SAMPLED,
    SKIPPED,
    ClaimRecord,
    MissingCheckError,
    assemble_certificate,
    check_gallery_vanishing,
    check_vanishing,
    closed_form_rows,
    design_strength_gegenbauer,
    design_strength_moments,
    gegenbauer_values,
    jacobian_full_pass,
    jacobian_rank_at,
    nontrivial_generator_check,
    section_embedding_check,
    spanning_check,
    sphere_moment,
    symbolic_selected_rows,
)


def series_gegenbauer(k, alpha, s):
    # explicit finite sum, independent of the recurrence under test
    total = 0
    for j in range(k // 2 + 1):
        rising = Fraction(1)
        for i in range(k - j):
            rising *= alpha + i
        coef = Fraction((-1) ** j) * rising / (factorial(j) * factorial(k - 2 * j))
        total = total + coef * (2 * s) ** (k - 2 * j)
    return total


# frozen pair-sum values, derived once from the explicit series and the
# per-point inner-product histograms
ICO_GLOBAL_K6 = Fraction(1584, 25)
E6_GLOBAL_K6 = Fraction(12096)
E7_GLOBAL_K6 = Fraction(257985, 8)
E8_GLOBAL_K8 = Fraction(1555200)


def test_gegenbauer_recurrence_matches_series():
    rng = random.Random(4101)
    for m in (3, 5, 8, 24):
        alpha = Fraction(m - 2, 2)
        for _ in range(6):
            s = Fraction(rng.randint(-8, 8), rng.randint(1, 9))
            vals = gegenbauer_values(m, 9, s)
            for k in range(10):
                assert vals[k] == series_gegenbauer(k, alpha, s)


def test_gegenbauer_guards():
    with pytest.raises(ValueError):
        gegenbauer_values(2, 3, Fraction(1, 2))
    with pytest.raises(ValueError):
        design_strength_gegenbauer(build_icosahedron(), 0)
    with pytest.raises(ValueError):
        design_strength_gegenbauer(build_ngon(4), 1)


def test_icosahedron_design_strength():
    cfg = build_icosahedron()
    res = design_strength_gegenbauer(cfg, 5)
    assert res.passed and res.per_point_ok and res.mode == "full"
    assert all(v == 0 for v in res.k_sums.values())

    res6 = design_strength_gegenbauer(cfg, 6)
    assert not res6.passed
    assert res6.first_failure() == 6
    assert res6.k_sums[6] == ICO_GLOBAL_K6


def test_e8_design_strength_and_failure():
    cfg = build_e8()
    res = design_strength_gegenbauer(cfg, 7)
    assert res.passed and res.base_count == 240

    res8 = design_strength_gegenbauer(cfg, 8)
    assert res8.first_failure() == 8
    assert res8.k_sums[8] == E8_GLOBAL_K8
    assert not res8.per_point_ok


def test_e7_design_strength():
    res = design_strength_gegenbauer(build_e7(), 5)
    assert res.passed
    res6 = design_strength_gegenbauer(build_e7(), 6)
    assert res6.k_sums[6] == E7_GLOBAL_K6


def test_e6_design_strength():
    res = design_strength_gegenbauer(build_e6(), 5)
    assert res.passed
    res6 = design_strength_gegenbauer(build_e6(), 6)
    assert res6.k_sums[6] == E6_GLOBAL_K6


def test_leech_design_strength_sampled():
    res = design_strength_gegenbauer(build_leech(), 11, mode="sampled")
    assert res.mode == "sampled"
    assert res.base_count == 64
    assert res.passed


def test_moments_e8():
    checked, failures = design_strength_moments(build_e8(), 7)
    assert checked == 6435
    assert failures == []


def test_moments_icosahedron():
    checked, failures = design_strength_moments(build_icosahedron(), 5)
    assert checked == 56
    assert failures == []
    _, fail6 = design_strength_moments(build_icosahedron(), 6)
    assert fail6 and sum(fail6[0][0]) == 6


def test_moments_guard():
    with pytest.raises(ValueError):
        design_strength_moments(build_leech(), 2)
    # sanity on the sphere-average formula itself
    assert sphere_moment(3, (2, 0, 0)) == Fraction(1, 3)
    assert sphere_moment(3, (1, 1, 0)) == 0
    assert sphere_moment(4, (2, 2, 0, 0)) == Fraction(1, 24)


def test_vanishing_small_full():
    for name in ("icosahedron", "e6", "e7", "ngon", "knn"):
        rec = check_vanishing(build_generator_set(name))
        assert rec.passed, (name, rec.witnesses)
        assert rec.witnesses == []


def test_vanishing_cube4_and_gallery():
    G = build_generator_set("cube4")
    assert check_vanishing(G).passed
    _, cell = build_4cube()
    rec = check_gallery_vanishing(G, cell)
    assert rec.passed and "24 gallery points" in rec.detail


def test_vanishing_e8_structured_full():
    G = build_generator_set("e8")
    rec = check_vanishing(G)
    assert rec.passed and "240 points" in rec.detail
    # the structured pass agrees with plain evaluation on a slice
    sub = check_vanishing(G, points=G.config.points[:24])
    assert sub.passed


def test_vanishing_leech_sampled():
    G = build_generator_set("leech")
    rec = check_vanishing(G, mode=SAMPLED)
    assert rec.passed and rec.mode == "sampled"
    assert "256 sampled points" in rec.detail
    again = check_vanishing(G, mode=SAMPLED)
    assert again.detail == rec.detail and again.status == rec.status
    other_seed = check_vanishing(G, mode=SAMPLED, seed=99)
    assert other_seed.passed


def test_vanishing_perturbed_point_fails():
    G = build_generator_set("icosahedron")
    pts = [list(p) for p in G.config.points]
    pts[3][0] = pts[3][0] + 1
    rec = check_vanishing(G, points=[tuple(p) for p in pts])
    assert rec.status == FAIL
    assert rec.witnesses and rec.witnesses[0][1] == 3


def test_vanishing_corrupted_array_fails():
    G = build_generator_set("e8")
    arr, den = G.config.integer_array()
    arr[0, 0] += 2 * den
    rec = check_vanishing(G)
    assert rec.status == FAIL
    assert rec.witnesses


def test_jacobian_icosahedron():
    G = build_generator_set("icosahedron")
    for pt in G.config.points:
        assert jacobian_rank_at(G, pt) == 3
    assert jacobian_full_pass(G).passed
    with pytest.raises(ValueError):
        jacobian_rank_at(G, G.config.points[0], method="closed_form")


def test_jacobian_e8():
    G = build_generator_set("e8")
    rec = jacobian_full_pass(G)
    assert rec.passed and "240" in rec.detail
    rng = random.Random(88)
    for idx in rng.sample(range(240), 5):
        pt = G.config.points[idx]
        assert jacobian_rank_at(G, pt, method="closed_form") == 8
        assert jacobian_rank_at(G, pt, method="symbolic") == 8
        assert symbolic_selected_rows(G, pt) == [
            tuple(r) for r in closed_form_rows(G, pt)
        ]


def test_jacobian_e7_section():
    G = restrict_to_section(build_generator_set("e7"), e7_section())
    rec = jacobian_full_pass(G)
    assert rec.passed, rec.witnesses
    assert "126 points" in rec.detail


def test_jacobian_e6_section():
    G = build_generator_set("e6")
    rec = jacobian_full_pass(G)
    assert rec.passed, rec.witnesses
    assert "72 points" in rec.detail


def test_jacobian_leech_samples():
    G = build_generator_set("leech")
    rng = random.Random(7)
    pts = G.config.points
    for idx in rng.sample(range(len(pts)), 4):
        closed = closed_form_rows(G, pts[idx])
        assert symbolic_selected_rows(G, pts[idx]) == [tuple(r) for r in closed]
        assert jacobian_rank_at(G, pts[idx], method="closed_form") == 24


def test_jacobian_ngon_knn():
    for name, m in (("ngon", 2), ("knn", 6)):
        G = build_generator_set(name)
        rec = jacobian_full_pass(G)
        assert rec.passed, (name, rec.witnesses)
        for pt in G.config.points[:3]:
            assert jacobian_rank_at(G, pt) == m


def test_spanning_and_sections():
    for build in (build_icosahedron, build_e8, build_e7, build_e6, build_leech):
        assert spanning_check(build()).passed
    assert section_embedding_check(build_e7()).passed
    assert section_embedding_check(build_e6()).passed
    assert section_embedding_check(build_icosahedron()).status == SKIPPED


def test_nontrivial_generators():
    for name, degree in (
        ("icosahedron", 3),
        ("e7", 3),
        ("e6", 3),
        ("e8", 4),
        ("leech", 6),
    ):
        rec = nontrivial_generator_check(build_generator_set(name), degree)
        assert rec.passed, name
        assert "witness generator" in rec.detail


def test_certificate_assembly_e8():
    G = build_generator_set("e8")
    components = {
        "vanishing": check_vanishing(G),
        "jacobian": jacobian_full_pass(G),
        "nontrivial": nontrivial_generator_check(G, 4),
        "support.spanning": spanning_check(G.config),
    }
    design = design_strength_gegenbauer(G.config, 7)
    report = assemble_certificate("e8", components, design)
    ids = [r.claim_id for r in report.records]
    assert ids == ["thmE8.i", "thmE8.ii", "thmE8.iii", "thmE8.iv", "design.E8.t7"]
    assert report.passed
    assert report.certificate_level == "PAPER_CERTIFICATE"
    payload = json.dumps(report.to_dict())
    assert "thmE8.iv" in payload

    upgraded = assemble_certificate("e8", components, design, groebner_certified=True)
    assert upgraded.certificate_level == "FULL_GROEBNER"


def test_certificate_missing_component():
    G = build_generator_set("icosahedron")
    with pytest.raises(MissingCheckError):
        assemble_certificate(
            "icosahedron",
            {"vanishing": check_vanishing(G)},
            design_strength_gegenbauer(G.config, 5),
        )


def test_certificate_sampled_mode_sticks():
    vanish = ClaimRecord("leech.vanishing", PASS, SAMPLED, detail="sampled run")
    components = {
        "vanishing": vanish,
        "jacobian": ClaimRecord("leech.jacobian", PASS),
        "nontrivial": ClaimRecord("leech.nontrivial-degree-6", PASS),
    }
    design = design_strength_gegenbauer(build_leech(), 11, mode="sampled")
    report = assemble_certificate("leech", components, design)
    assert report.find("thmLeech.i").mode == "sampled"
    assert report.find("thmLeech.iv").mode == "sampled"
    assert report.find("design.Leech.t11").mode == "sampled"
