import itertools
import random
from fractions import Fraction

import pytest

from qsheaf import (DuplicateRay, IncompleteFan, NonPrimitiveRay,
                    NonUnimodularCone, build_fan, locate_cone,
                    primitive_collections)

from conftest import all_fans, hirzebruch, p1_fan, p1xp1_fan, p2_fan


def test_p1_is_smallest_complete_smooth_fan():
    fan = p1_fan()
    assert fan.rank == 1
    assert fan.n_rays == 2
    assert fan.h_vector() == (1, 1)


def test_hirzebruch_matches_paper_data():
    fan = hirzebruch(3)
    assert fan.rays == ((1, 0), (-1, 3), (0, 1), (0, -1))
    assert len(fan.max_cones) == 4


def test_non_unimodular_cone_rejected():
    with pytest.raises(NonUnimodularCone):
        build_fan(2, [(0, 1), (2, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def test_non_primitive_ray_rejected():
    with pytest.raises(NonPrimitiveRay):
        build_fan(2, [(2, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def test_duplicate_ray_rejected():
    with pytest.raises(DuplicateRay):
        build_fan(2, [(1, 0), (1, 0), (0, 1)], [(0, 2), (1, 2)])


def test_incomplete_fan_rejected():
    with pytest.raises(IncompleteFan):
        build_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2)])


def test_wrong_cone_arity_rejected():
    with pytest.raises(NonUnimodularCone):
        build_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1, 2)])


def test_overlapping_cones_rejected():
    # facet pairing holds but the quadrant cone overlaps its two subcones
    with pytest.raises(IncompleteFan):
        build_fan(2, [(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2), (1, 2)])


def test_primitive_collections_examples():
    assert [pc.edges for pc in primitive_collections(p2_fan())] == [(0, 1, 2)]
    assert [pc.edges for pc in primitive_collections(p1xp1_fan())] == [(0, 1), (2, 3)]
    for n in (1, 2, 3):
        assert [pc.edges for pc in primitive_collections(hirzebruch(n))] == [(0, 1), (2, 3)]


def test_primitive_collection_definition_restated():
    for _, fan in all_fans():
        for pc in primitive_collections(fan):
            assert not fan.spans_cone(pc.edges)
            for i in range(pc.k):
                subset = pc.edges[:i] + pc.edges[i + 1:]
                assert fan.spans_cone(subset)
            for sigma in fan.max_cones:
                assert not set(pc.edges) <= set(sigma)


def test_fan_reconstruction_from_primitive_collections():
    for _, fan in all_fans():
        pcs = primitive_collections(fan)
        reconstructed = set()
        for k in range(fan.n_rays + 1):
            for s in itertools.combinations(range(fan.n_rays), k):
                if not any(set(pc.edges) <= set(s) for pc in pcs):
                    reconstructed.add(s)
        assert reconstructed == set(fan.cone_faces())


def test_locate_cone_examples():
    # F_n: v1 + v2 = (0, n) sits on the ray rho3 with coefficient n
    for n in (1, 2, 3):
        cone, coeffs = locate_cone(hirzebruch(n), (0, n))
        assert cone == (2,)
        assert coeffs == (Fraction(n),)
    assert locate_cone(p2_fan(), (0, 0)) == ((), ())
    cone, coeffs = locate_cone(p1xp1_fan(), (2, 3))
    assert cone == (0, 2)
    assert coeffs == (Fraction(2), Fraction(3))


def _relint_faces(fan, point):
    """Brute force: faces whose relative interior contains the point."""
    from qsheaf.linalg import solve_columns

    hits = []
    for face in fan.cone_faces():
        if not face:
            if all(x == 0 for x in point):
                hits.append(face)
            continue
        cols = [[Fraction(fan.rays[i][j]) for j in range(fan.rank)] for i in face]
        sol = solve_columns(cols, [Fraction(x) for x in point])
        if sol is not None and all(c > 0 for c in sol):
            hits.append(face)
    return hits


def test_locate_cone_is_a_partition():
    rng = random.Random(11)
    fans = [fan for _, fan in all_fans()]
    for trial in range(1000):
        fan = fans[trial % len(fans)]
        point = tuple(Fraction(rng.randint(-20, 20), rng.randint(1, 9))
                      for _ in range(fan.rank))
        hits = _relint_faces(fan, point)
        assert len(hits) == 1
        cone, coeffs = locate_cone(fan, point)
        assert cone == tuple(sorted(hits[0]))
        assert all(c > 0 for c in coeffs)
        recombined = [sum(c * fan.rays[i][j] for c, i in zip(coeffs, cone))
                      for j in range(fan.rank)]
        assert tuple(recombined) == tuple(Fraction(x) for x in point)


def test_h_vector_from_face_counts():
    assert p2_fan().h_vector() == (1, 1, 1)
    assert p1xp1_fan().h_vector() == (1, 2, 1)
    assert hirzebruch(2).h_vector() == (1, 2, 1)
