import sympy as sp
from derham_lab.cohomology import exact_rank, exact_rref, extend_basis, nullspace, solve_exact


def test_exact_rank():
    assert exact_rank(sp.Matrix([[1, 2], [2, 4]])) == 1
    assert exact_rank(sp.Matrix([[sp.Rational(1, 3), 1], [1, 3]])) == 1
    assert exact_rank(sp.eye(3)) == 3
    assert exact_rank(sp.zeros(0, 3)) == 0


def test_exact_rref():
    reduced, pivots = exact_rref(sp.Matrix([[2, 4], [1, 3]]))
    assert reduced == sp.eye(2)
    assert pivots == (0, 1)

    reduced, pivots = exact_rref(sp.Matrix([[1, 2, 3], [2, 4, 6]]))
    assert pivots == (0,)
    assert reduced.row(0) == sp.Matrix([[1, 2, 3]])


def test_nullspace():
    assert nullspace(sp.Matrix([[1, 1]])) == [sp.Matrix([-1, 1])]
    assert nullspace(sp.eye(2)) == []
    # no rows: every vector is in the kernel
    assert nullspace(sp.zeros(0, 2)) == [sp.Matrix([1, 0]), sp.Matrix([0, 1])]


def test_solve_exact():
    x, rank = solve_exact(sp.Matrix([[2, 0], [0, 4]]), sp.Matrix([1, 1]))
    assert x == sp.Matrix([sp.Rational(1, 2), sp.Rational(1, 4)])
    assert rank == 2

    x, rank = solve_exact(sp.Matrix([[1, 1], [1, 1]]), sp.Matrix([1, 2]))
    assert x is None
    assert rank == 1

    # free variables are set to zero
    x, _ = solve_exact(sp.Matrix([[1, 1]]), sp.Matrix([3]))
    assert x == sp.Matrix([3, 0])


def test_extend_basis():
    e1, e2 = sp.Matrix([1, 0]), sp.Matrix([0, 1])
    assert extend_basis([e1], [e1, e1 + e2, e2], 1) == [e1 + e2]
    assert extend_basis([], [e1, 2 * e1, e2], 2) == [e1, e2]
    assert extend_basis([e1], [e2], 0) == []
