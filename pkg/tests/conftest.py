"""Shared fixtures: the worked second-order example, the Legendre Turan
determinant recurrence (frozen; re-derivable from exact Legendre values),
and a couple of constant-coefficient instances."""

from __future__ import annotations

from fractions import Fraction as F

import pytest

from recpos import Recurrence


@pytest.fixture(scope="session")
def sec3_rec() -> Recurrence:
    # 4(n+3)(n+4)^2 u_{n+2} = (n+3)(8n^2+48n+73) u_{n+1} - (n+2)(2n+5)^2 u_n
    return Recurrence.make(
        [[-50, -65, -28, -4], [219, 217, 72, 8], [192, 160, 44, 4]],
        [F(1, 64), F(11, 768)],
    )


# Order-3 recurrence for u_n = P_{n+1}(1/2)^2 - P_n(1/2) P_{n+2}(1/2)
# (Legendre Turan determinant at x = 1/2), obtained once by exact ansatz
# fitting against unrolled Legendre data; test_acceptance re-checks it
# against direct evaluation for n <= 50.
TURAN_COEFFS = [
    [112, 256, 204, 68, 8],  # p_0 = 8(n+1)(n+2)^2(2n+7) / ... kept expanded
    [270, 323, 126, 16],
    [588, 539, 162, 16],
    [1600, 1760, 708, 124, 8],  # p_3 = 4(2n+5)(n+4)^2(n+5)
]
TURAN_INITIAL = [F(3, 8), F(15, 64), F(159, 1024)]


@pytest.fixture(scope="session")
def turan_rec() -> Recurrence:
    return Recurrence.make(TURAN_COEFFS, TURAN_INITIAL)


@pytest.fixture(scope="session")
def turan_report(turan_rec):
    from recpos import companion, modulus_groups, order_branches, reversed_char_poly

    q = reversed_char_poly(companion(turan_rec))
    return order_branches(modulus_groups(q), q)


def legendre_half(count: int) -> list[F]:
    """Exact values P_0(1/2) .. P_{count-1}(1/2)."""
    p = [F(1), F(1, 2)]
    for n in range(1, count - 1):
        p.append(((2 * n + 1) * F(1, 2) * p[n] - n * p[n - 1]) / (n + 1))
    return p[:count]


@pytest.fixture(scope="session")
def cfinite_21_rec() -> Recurrence:
    # u_{n+2} = 3 u_{n+1} - 2 u_n: characteristic roots {2, 1}
    return Recurrence.make([[-2], [3], [1]], [F(1), F(2)])


@pytest.fixture(scope="session")
def jordan_rec() -> Recurrence:
    # 4 u_{n+4} = 16 u_{n+3} - 21 u_{n+2} + 11 u_{n+1} - 2 u_n:
    # characteristic polynomial 4(X-2)(X-1)(X-1/2)^2
    return Recurrence.make(
        [[-2], [11], [-21], [16], [4]], [F(1), F(1), F(2), F(5)]
    )
