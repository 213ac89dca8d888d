"""Reference data: the Y_{5,2,2} example and the (3,2) cusp.

``display_*`` functions reproduce reference formulas exactly as they are
usually quoted for the Y_{5,2,2} example.  ``closed_form_*`` are the
factors that the construction actually produces, as rational functions of
the local data (they hold for any epsilon with r = 1 and use the Fuchs
relation to eliminate xi_3).
"""

from __future__ import annotations

from .construct import LocalData
from .group import TurbineParams
from .linalg import Matrix
from .scalar import cyclotomic_field

__all__ = [
    "y522_data",
    "cusp_data",
    "CUSP_OMEGA0",
    "CUSP_A1",
    "CUSP_OMEGA_INF",
    "display_omega0",
    "display_a_star",
    "display_sphere_pair",
    "display_p",
    "display_conjugated",
    "display_x1",
    "display_x2",
    "closed_form_x1",
    "closed_form_x2",
]

CUSP_OMEGA0 = [[0, 1], [1, 0]]
CUSP_A1 = [[1, -1], [0, -1]]
CUSP_OMEGA_INF = [[-1, 1], [-1, 0]]


def y522_data(field=None) -> LocalData:
    """Y_{5,2,2} in Q(zeta_5): eps = 1, xi = (z, z^2, z^3), lambda = (-1, -z^3)."""
    f = field or cyclotomic_field(5)
    z = f.parse
    params = TurbineParams.create(5, 2, 2, shaft=False, variant="curve")
    return LocalData(params=params, field=f, epsilon=f.one(),
                     lambdas=(z("-1"), z("-zeta(5)^3")),
                     xis=(z("zeta(5)"), z("zeta(5)^2"), z("zeta(5)^3")),
                     mults=(2, 1, 1))


def cusp_data(field=None) -> LocalData:
    f = field or cyclotomic_field(3)
    params = TurbineParams.create(3, 2, 1)
    return LocalData(params=params, field=f, epsilon=f.one(), lambdas=(f.parse("-1"),),
                     xis=(f.parse("zeta(3)"), f.parse("zeta(3)^2")), mults=(1, 1))


def _etas(eps, xi1, xi2, xi3):
    return -eps / (xi1 * xi2), -eps / (xi1 * xi3)


def display_omega0(field, eps) -> Matrix:
    return Matrix.from_values(field, [[0, 0, 1, 0], [0, 0, 0, 1], [eps, 0, 0, 0], [0, eps, 0, 0]])


def display_a_star(field, eps, xi1, xi2, xi3) -> Matrix:
    eta1, eta2 = _etas(eps, xi1, xi2, xi3)
    e1 = 1 / xi1 + 1 / xi2
    f1 = 1 / xi1 + 1 / xi3
    return Matrix.from_values(field, [[1, 0, e1, 0], [0, 1, 0, f1], [0, 0, eta1, 0], [0, 0, 0, eta2]])


def display_sphere_pair(field, lam1, lam2, eta1):
    A1 = Matrix.from_values(field, [[lam1, 0], [lam2 - eta1, 1]])
    A2 = Matrix.from_values(field, [[1, (lam1 - eta1) / eta1], [0, lam2]])
    return A1, A2


def display_p(field, lam1, lam2, eta1) -> Matrix:
    return Matrix.from_values(field, [[1, 1], [-eta1 / lam1, (lam2 - eta1) / (lam1 - eta1)]])


def display_conjugated(field, eps, lam1, lam2, xi1, xi2, xi3) -> Matrix:
    eta1, eta2 = _etas(eps, xi1, xi2, xi3)
    e1 = 1 / xi1 + 1 / xi2
    f1 = 1 / xi1 + 1 / xi3
    d = eta2 - eta1
    return Matrix.from_values(field, [
        [1, 0, ((lam1 - eta1) * f1 - (lam1 - eta2) * eta1) / d,
         lam1 * (lam1 - eta1) * (f1 - e1) / (eta1 * d)],
        [0, 1, (lam2 - eta1) * (f1 - e1) / d,
         (lam1 * (eta2 - lam1) * f1 - (eta1 - lam1) * e1) / d],
        [0, 0, lam1, lam1 * (lam1 - eta1) / eta1],
        [0, 0, lam2 - eta1, -lam1 + eta2 + eta1],
    ])


def display_x1(field, eps, lam1, lam2, xi1, xi2) -> Matrix:
    return Matrix.from_values(field, [
        [1, 0, -(lam1 - eps * xi1 ** 2) / (eps * xi1), 0],
        [0, 1, -(lam2 + eps * xi1 * xi2) / (eps * xi1), 0],
        [0, 0, lam1, 0],
        [0, 0, lam2 + eps * xi1 * xi2, 1],
    ])


def display_x2(field, eps, lam1, lam2, xi1, xi2) -> Matrix:
    return Matrix.from_values(field, [
        [1, 0, 0, (lam1 + eps * xi1 * xi2) / (eps * xi2)],
        [0, 1, 0, -(lam2 - eps * xi1 ** 2) / (eps * xi1)],
        [0, 0, 1, -(lam1 + eps * xi1 * xi2) / (eps * xi1 * xi2)],
        [0, 0, 0, lam2],
    ])


def closed_form_x1(field, eps, lam1, lam2, xi1, xi2) -> Matrix:
    return Matrix.from_values(field, [
        [1, 0, -(lam1 * xi1 ** 2 - eps) / (eps * xi1), 0],
        [0, 1, -(eps + lam2 * xi1 * xi2) / (eps * xi2), 0],
        [0, 0, lam1, 0],
        [0, 0, (eps + lam2 * xi1 * xi2) / (xi1 * xi2), 1],
    ])


def closed_form_x2(field, eps, lam1, lam2, xi1, xi2) -> Matrix:
    return Matrix.from_values(field, [
        [1, 0, 0, (eps + lam1 * xi1 * xi2) / (eps * xi1)],
        [0, 1, 0, -(lam2 * xi1 ** 2 - eps) / (eps * xi1)],
        [0, 0, 1, -(eps + lam1 * xi1 * xi2) / eps],
        [0, 0, 0, lam2],
    ])
