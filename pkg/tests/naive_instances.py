"""
Independent dense constructions of the library instances.

Sweedler's algebra is rebuilt from the words g^a x^b and the two generator
coproducts; group algebras from exponent addition. Lifts are applied with
numpy tensor contractions. Nothing here reads the tables in
``src.examples_library``.
"""

from fractions import Fraction
from itertools import product

import numpy as np

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(shape):
    return np.full(tuple(shape), ZERO, dtype=object)


def _word(index):
    """Basis index -> (a, b) with e = g^a x^b; 1, g, x, gx."""
    return index % 2, index // 2


def _index(a, b):
    return a % 2 + 2 * b


def sweedler_mult():
    mult = zeros((4, 4, 4))
    for i, j in product(range(4), repeat=2):
        (a1, b1), (a2, b2) = _word(i), _word(j)
        if b1 + b2 > 1:
            continue
        # x^b1 g^a2 = (-1)^{b1 a2} g^a2 x^b1
        mult[i, j, _index(a1 + a2, b1 + b2)] = ONE if (b1 * a2) % 2 == 0 else -ONE
    return mult


def _multiply(mult, u, v):
    out = zeros((mult.shape[2],))
    for a in range(len(u)):
        if u[a] == 0:
            continue
        for b in range(len(v)):
            if v[b] == 0:
                continue
            out = out + u[a] * v[b] * mult[a, b]
    return out


def _multiply_pairs(mult, left, right):
    """Componentwise product in H ⊗ H of two dense rank-2 arrays."""
    n = mult.shape[2]
    out = zeros((n, n))
    for (p, q), (r, s) in product(product(range(n), repeat=2), repeat=2):
        coeff = left[p, q] * right[r, s]
        if coeff == 0:
            continue
        out = out + coeff * np.multiply.outer(mult[p, r], mult[q, s])
    return out


def sweedler_comult():
    mult = sweedler_mult()
    delta_g = zeros((4, 4))
    delta_g[1, 1] = ONE
    delta_x = zeros((4, 4))
    delta_x[2, 0] = ONE
    delta_x[1, 2] = ONE
    comult = zeros((4, 4, 4))
    for index in range(4):
        a, b = _word(index)
        value = zeros((4, 4))
        value[0, 0] = ONE
        for _ in range(a):
            value = _multiply_pairs(mult, value, delta_g)
        for _ in range(b):
            value = _multiply_pairs(mult, value, delta_x)
        comult[index] = value
    return comult


def sweedler_antipode():
    """S as a matrix [out, in], from S(g) = g, S(x) = -gx and anti-multiplicativity."""
    mult = sweedler_mult()
    s_g = zeros((4,))
    s_g[1] = ONE
    s_x = zeros((4,))
    s_x[3] = -ONE
    matrix = zeros((4, 4))
    for index in range(4):
        a, b = _word(index)
        value = zeros((4,))
        value[0] = ONE
        for _ in range(b):
            value = _multiply(mult, value, s_x)
        for _ in range(a):
            value = _multiply(mult, value, s_g)
        matrix[:, index] = value
    return matrix


def sweedler_counit():
    return np.array([ONE, ONE, ZERO, ZERO], dtype=object)


def sweedler_alpha(lam):
    matrix = zeros((4, 4))
    for index in range(4):
        matrix[index, index] = Fraction(lam) ** _word(index)[1]
    return matrix


def group_mult(n):
    mult = zeros((n, n, n))
    for a, b in product(range(n), repeat=2):
        mult[a, b, (a + b) % n] = ONE
    return mult


def group_comult(n):
    comult = zeros((n, n, n))
    for a in range(n):
        comult[a, a, a] = ONE
    return comult


def group_alpha(n, m):
    matrix = zeros((n, n))
    for k in range(n):
        matrix[(m * k) % n, k] = ONE
    return matrix


def inverse(matrix):
    """Exact inverse of a monomial (permutation times diagonal) matrix."""
    out = zeros(matrix.shape[::-1])
    for row, col in zip(*np.nonzero(matrix != 0)):
        out[col, row] = ONE / matrix[row, col]
    return out


def lift(mult, comult, alpha, monoidal):
    """(α∘m, Δ∘α^{∓1}) as dense arrays."""
    lifted_mult = np.tensordot(mult, alpha, axes=([2], [1]))
    source = inverse(alpha) if monoidal else alpha
    lifted_comult = np.tensordot(source, comult, axes=([0], [0]))
    return lifted_mult, lifted_comult
