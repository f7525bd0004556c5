import pytest

from qsheaf import (build_fan, class_lattice, linear_part, parse_deformation,
                    tangent_deformation)


def p1_fan():
    return build_fan(1, [(1,), (-1,)], [(0,), (1,)])


def p2_fan():
    return build_fan(2, [(1, 0), (0, 1), (-1, -1)], [(0, 1), (1, 2), (0, 2)])


def p1xp1_fan():
    return build_fan(2, [(1, 0), (-1, 0), (0, 1), (0, -1)],
                     [(0, 2), (1, 2), (1, 3), (0, 3)])


def hirzebruch(n):
    return build_fan(2, [(1, 0), (-1, n), (0, 1), (0, -1)],
                     [(0, 2), (1, 2), (1, 3), (0, 3)])


def all_fans():
    """The six worked examples: P1, P2, P1xP1, F1, F2, F3."""
    return [("P1", p1_fan()), ("P2", p2_fan()), ("P1xP1", p1xp1_fan()),
            ("F1", hirzebruch(1)), ("F2", hirzebruch(2)), ("F3", hirzebruch(3))]


def tangent_setup(fan):
    cl = class_lattice(fan)
    lin = linear_part(cl, tangent_deformation(cl))
    return cl, lin


def deformed_p1xp1(g1, g2, d1, d2):
    """P1xP1 with off-diagonal linear entries gamma_i, delta_i (as strings)."""
    cl = class_lattice(p1xp1_fan())
    raw = [
        (0, (0, 0), "D1"), (1, (0, 0), "D2"),
        (2, (0, 0), "D3"), (3, (0, 0), "D4"),
        (0, (-1, 0), f"{g1}*D3"), (1, (1, 0), f"{g2}*D3"),
        (2, (0, -1), f"{d1}*D1"), (3, (0, 1), f"{d2}*D1"),
    ]
    E = parse_deformation(cl, raw)
    return cl, E, linear_part(cl, E)


@pytest.fixture
def p1():
    return tangent_setup(p1_fan())


@pytest.fixture
def p2():
    return tangent_setup(p2_fan())


@pytest.fixture
def p1xp1():
    return tangent_setup(p1xp1_fan())


@pytest.fixture
def f1():
    return tangent_setup(hirzebruch(1))


@pytest.fixture
def f2():
    return tangent_setup(hirzebruch(2))
