import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latdet.exact import (
    SILVER,
    AlgebraicInt,
    DisconnectedGraphError,
    GraphSizeError,
    GraphSpec,
    bareiss_det,
    build_graph,
    chebyshev_product,
    chebyshev_product_float,
    chebyshev_u,
    forest_polynomial,
    grid_graph,
    matrix_tree,
    qad_graph,
    tau_qad_product,
    torus_graph,
    verify_qad_identity,
    verify_torus_grid_identity,
)


def fraction_det(m):
    a = [[Fraction(x) for x in row] for row in m]
    n = len(a)
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return int(det)


@st.composite
def connected_graphs(draw, max_n=9):
    n = draw(st.integers(min_value=1, max_value=max_n))
    # random spanning tree plus extra edges, parallel edges allowed
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    if n > 1:
        extra = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
                              .filter(lambda e: e[0] != e[1]), max_size=12))
        edges += extra
    return GraphSpec(n, tuple(edges))


# values below come from products of closed-form eigenvalues, independent of Bareiss
@pytest.mark.parametrize("kind,sides,tau", [
    ("grid", (2, 2), 4), ("grid", (2, 3), 15), ("grid", (3, 3), 192),
    ("torus", (1, 1), 32), ("torus", (1, 2), 2304),
])
def test_small_counts(kind, sides, tau):
    assert matrix_tree(build_graph(kind, sides)) == tau


@pytest.mark.parametrize("kind,sides", [("grid", (3, 3)), ("torus", (1, 2)), ("grid", (2, 2, 2))])
def test_counts_match_mpmath_spectrum(kind, sides):
    mpmath.mp.dps = 40
    lengths = sides if kind == "grid" else tuple(2 * n for n in sides)
    prod = mpmath.mpf(1)
    for k in np.ndindex(*lengths):
        lam = sum(4 * mpmath.sin(mpmath.pi * ki / (2 * n)) ** 2 for ki, n in zip(k, sides))
        if any(k):
            prod *= lam
    mpmath.mp.dps = 15
    assert matrix_tree(build_graph(kind, sides)) == int(mpmath.nint(prod / math.prod(lengths)))


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 6).flatmap(
    lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_fraction_elimination(m):
    assert bareiss_det(m) == fraction_det(m)


def test_bareiss_empty_and_singular():
    assert bareiss_det([]) == 1
    assert bareiss_det([[1, 2], [2, 4]]) == 0
    assert bareiss_det([[0, 1], [1, 0]]) == -1


@settings(max_examples=60, deadline=None)
@given(connected_graphs(), st.data())
def test_any_cofactor_gives_tau(g, data):
    lap = g.laplacian()
    r = data.draw(st.integers(0, g.vertex_count - 1))
    minor = [row[:r] + row[r + 1:] for i, row in enumerate(lap) if i != r]
    assert bareiss_det(minor) == matrix_tree(g)


@settings(max_examples=60, deadline=None)
@given(connected_graphs())
def test_forest_polynomial_invariants(g):
    poly = forest_polynomial(g)
    n = g.vertex_count
    assert poly.coeffs[0] == 0
    assert poly.coeffs[-1] == 1 and poly.degree == n
    assert poly.rooted_forests(1) == n * matrix_tree(g)
    # det(Delta + I) = sum_k N_k
    shifted = [[x + (i == j) for j, x in enumerate(row)] for i, row in enumerate(g.laplacian())]
    assert sum(poly.coeffs) == bareiss_det(shifted)


def test_forest_polynomial_grid_2x2():
    assert forest_polynomial(grid_graph((2, 2))).coeffs == (0, 16, 20, 8, 1)


@settings(max_examples=60, deadline=None)
@given(connected_graphs())
def test_edgelist_round_trip(g):
    back = GraphSpec.from_edgelist(g.to_edgelist())
    assert back == g
    assert matrix_tree(back) == matrix_tree(g)


@pytest.mark.parametrize("text", ["e 0 1\n", "p 2\nx 0 1\n", "p 2\ne 0\n"])
def test_edgelist_rejects_garbage(text):
    with pytest.raises(ValueError):
        GraphSpec.from_edgelist(text)


def test_disconnected_graph():
    with pytest.raises(DisconnectedGraphError) as info:
        matrix_tree(GraphSpec(4, ((0, 1), (2, 3))))
    assert info.value.component == frozenset({2, 3})


def test_size_limits():
    with pytest.raises(GraphSizeError):
        matrix_tree(grid_graph((21, 20)))
    with pytest.raises(GraphSizeError):
        forest_polynomial(grid_graph((8, 8)))


def test_graph_validation():
    with pytest.raises(ValueError):
        GraphSpec(2, ((0, 0),))
    with pytest.raises(ValueError):
        GraphSpec(2, ((0, 2),))
    with pytest.raises(ValueError):
        build_graph("qad", (2, 3))
    with pytest.raises(ValueError):
        build_graph("hex", (2,))


def test_chebyshev_u_sequence():
    assert [chebyshev_u(n) for n in range(6)] == [0, 1, 6, 35, 204, 1189]


@pytest.mark.parametrize("n", range(1, 15))
def test_chebyshev_products(n):
    assert chebyshev_product(1, n).a == n
    assert chebyshev_u(n) == pytest.approx(chebyshev_product_float(3, n), rel=1e-12)
    diff = SILVER ** n - SILVER.conjugate() ** n
    assert diff == chebyshev_product(3, n)


@settings(max_examples=100, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_algebraic_norm_multiplicative(a, b, c, d):
    x, y = AlgebraicInt(a, b), AlgebraicInt(c, d)
    assert (x * y).norm() == x.norm() * y.norm()
    assert float(x * y) == pytest.approx(float(x) * float(y), rel=1e-12, abs=1e-9)


@pytest.mark.parametrize("n1", range(1, 5))
@pytest.mark.parametrize("n2", range(1, 5))
def test_torus_grid_identity(n1, n2):
    assert verify_torus_grid_identity(n1, n2)


@pytest.mark.parametrize("n", range(1, 13))
def test_qad_identity(n):
    chk = verify_qad_identity(n)
    assert chk.holds
    assert math.exp(tau_qad_product(n)) == pytest.approx(chk.witness["tau_qad"], rel=1e-9)


def test_qad_vertex_rules():
    assert qad_graph(3).vertex_count == 6
    assert qad_graph(3, loose_rule=True).vertex_count == 10
    assert matrix_tree(qad_graph(2)) == 1
    # the alternative rule gives a 4-cycle plus pendants at n=2
    assert matrix_tree(qad_graph(2, loose_rule=True)) == 4
    lhs = matrix_tree(grid_graph((3, 3)))
    assert lhs != 3 * 4 * matrix_tree(qad_graph(3, loose_rule=True)) ** 2


def test_qad_product_precisions_agree():
    assert tau_qad_product(1) == 0.0
    assert float(tau_qad_product(96, extended=True)) == pytest.approx(tau_qad_product(96), rel=1e-13)


def test_torus_doubled_edges_for_side_two():
    g = torus_graph((1,))
    assert g.vertex_count == 2 and len(g.edges) == 2
    assert matrix_tree(g) == 2
