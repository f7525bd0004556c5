import random
from fractions import Fraction

import pytest

from qsheaf import (CharacterOutsidePolytope, DegenerateDeformation,
                    DuplicateEntry, UnknownRayIndex, class_lattice, d_symbols,
                    groebner, linear_part, local_freeness_check, parse_deformation,
                    polymology, quotient_dims, sr_ideal, tangent_deformation)
from qsheaf.poly import Polynomial

from conftest import (all_fans, deformed_p1xp1, hirzebruch, p1_fan, p1xp1_fan,
                      p2_fan, tangent_setup)


def test_tangent_deformation_flag():
    cl = class_lattice(p2_fan())
    E = tangent_deformation(cl)
    assert E.is_tangent
    assert len(E.entries) == 3
    # re-parsing the same raw entries keeps the flag
    raw = [(e.rho, e.m, f"D{e.rho + 1}") for e in E.entries]
    assert parse_deformation(cl, raw).is_tangent


def test_polytope_validation():
    cl = class_lattice(p1xp1_fan())
    with pytest.raises(CharacterOutsidePolytope):
        parse_deformation(cl, [(0, (0, 1), "D1")])
    with pytest.raises(DuplicateEntry):
        parse_deformation(cl, [(0, (0, 0), "D1"), (0, (0, 0), "D2")])
    with pytest.raises(UnknownRayIndex):
        parse_deformation(cl, [(7, (0, 0), "D1")])


def test_off_diagonal_linear_entry_accepted():
    # character with pairing pattern (-1, 1, 0, 0) links D1 ~ D2
    cl = class_lattice(p1xp1_fan())
    E = parse_deformation(cl, [(0, (-1, 0), "D3")])
    lin = linear_part(cl, E)
    c0 = cl.equiv[0]
    assert lin.matrices[c0.index][0][1] == Polynomial.linear(2, cl.divisor_classes[2])


def test_linear_part_tangent_is_diagonal():
    cl, lin = tangent_setup(p2_fan())
    c = cl.equiv[0]
    mat = lin.matrices[c.index]
    psi = Polynomial.linear(1, (1,))
    for i in range(3):
        for j in range(3):
            assert mat[i][j] == (psi if i == j else Polynomial.zero(1))
    assert lin.q[0] == psi ** 3


def test_deformed_p1xp1_determinant():
    g1, g2 = Fraction(1, 7), Fraction(-1, 3)
    cl, E, lin = deformed_p1xp1("1/7", "-1/3", "1/3", "1/7")
    syms = d_symbols(cl)
    expected_q0 = syms[0] * syms[1] - g1 * g2 * syms[2] * syms[3]
    assert lin.q[0] == expected_q0
    expected_q1 = syms[2] * syms[3] - Fraction(1, 3) * Fraction(1, 7) * syms[0] * syms[1]
    assert lin.q[1] == expected_q1


def test_nonlinear_terms_do_not_change_anything():
    cl = class_lattice(hirzebruch(1))
    base = [(rho, (0, 0), f"D{rho + 1}") for rho in range(4)]
    lin0 = linear_part(cl, parse_deformation(cl, base))
    # m = (0,1) on rho=3 gives the quadratic monomial x2*x3: a nonlinear term
    lin1 = linear_part(cl, parse_deformation(cl, base + [(3, (0, 1), "2*D3")]))
    assert lin0 == lin1
    assert [g.to_str() for g in sr_ideal(lin0).generators] == \
        [g.to_str() for g in sr_ideal(lin1).generators]
    assert polymology(lin0) == polymology(lin1)


def test_zero_parameters_recover_tangent():
    cl, E, lin = deformed_p1xp1("0", "0", "0", "0")
    _, lin0 = tangent_setup(p1xp1_fan())
    assert lin.q == lin0.q
    assert polymology(lin).dims == polymology(lin0).dims


def test_local_freeness_tangent_passes():
    for _, fan in all_fans():
        cl = class_lattice(fan)
        verdict = local_freeness_check(cl, tangent_deformation(cl), trials=8)
        assert verdict.passed


def test_local_freeness_rank_collapse_fails_with_witness():
    cl = class_lattice(p1_fan())
    E = parse_deformation(cl, [(0, (0,), "D1"), (0, (-1,), "D1"),
                               (1, (0,), "D1"), (1, (1,), "D1")])
    verdict = local_freeness_check(cl, E, trials=8)
    assert not verdict.passed
    assert verdict.witness is not None
    x = verdict.witness
    assert x[0] + x[1] == 0  # the collapse locus


def test_local_freeness_small_deformation_passes():
    cl, E, _ = deformed_p1xp1("1/7", "-1/3", "1/3", "1/7")
    assert local_freeness_check(cl, E, trials=8).passed


def test_sr_ideal_examples():
    _, lin = tangent_setup(p2_fan())
    psi = Polynomial.variable(1, 0)
    assert sr_ideal(lin).generators == (psi ** 3,)

    cl, lin = tangent_setup(p1xp1_fan())
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    assert set(sr_ideal(lin).generators) == {x ** 2, y ** 2}

    cl, E, lin = deformed_p1xp1("1/7", "-1/3", "1/3", "1/7")
    syms = d_symbols(cl)
    gens = sr_ideal(lin).generators
    # gamma1*gamma2 = -1/21, delta1*delta2 = +1/21
    assert gens[0] == syms[0] * syms[1] + Fraction(1, 21) * syms[2] * syms[3]
    assert gens[1] == syms[2] * syms[3] - Fraction(1, 21) * syms[0] * syms[1]


def test_tangent_q_k_is_image_of_monomial():
    # at E = T_X each Q_K equals prod of the divisor classes over K
    for _, fan in all_fans():
        cl, lin = tangent_setup(fan)
        syms = d_symbols(cl)
        for K, gen in zip(cl.primitive_collections, sr_ideal(lin).generators):
            expected = Polynomial.const(cl.pic_rank, 1)
            for rho in K.edges:
                expected = expected * syms[rho]
            assert gen == expected
            assert gen.psi_degree() == K.k


def test_polymology_examples_and_hvector_oracle():
    expected = {"P1": (1, 1), "P2": (1, 1, 1), "P1xP1": (1, 2, 1),
                "F1": (1, 2, 1), "F2": (1, 2, 1), "F3": (1, 2, 1)}
    for name, fan in all_fans():
        cl, lin = tangent_setup(fan)
        result = polymology(lin)
        assert result.dims == expected[name]
        assert result.dims == fan.h_vector()
        assert result.generator.psi_degree() == fan.rank


def test_polymology_top_generators():
    _, lin = tangent_setup(p2_fan())
    assert polymology(lin).generator == Polynomial.variable(1, 0) ** 2
    _, lin = tangent_setup(p1xp1_fan())
    x, y = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    assert polymology(lin).generator == x * y


def test_degenerate_deformation_detected():
    cl = class_lattice(p1_fan())
    E = parse_deformation(cl, [(0, (0,), "D1"), (0, (-1,), "D1"),
                               (1, (0,), "D1"), (1, (1,), "D1")])
    lin = linear_part(cl, E)
    assert not lin.q[0]  # the determinant collapses
    with pytest.raises(DegenerateDeformation):
        polymology(lin)


def test_deformed_polymology_keeps_hvector():
    rng = random.Random(12)
    values = ["1/7", "-1/7", "1/3", "-1/3"]
    for _ in range(5):
        picks = [values[rng.randrange(4)] for _ in range(4)]
        cl, E, lin = deformed_p1xp1(*picks)
        assert polymology(lin).dims == (1, 2, 1)
