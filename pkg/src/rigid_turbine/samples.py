"""Deterministic generators of valid local data and random test tuples."""

from __future__ import annotations

import random
from typing import Iterator

from .construct import LocalData, fuchs_sides, rigid_shape, validate_local_data
from .group import TurbineParams
from .linalg import Matrix
from .scalar import cyclotomic_field

__all__ = ["random_root", "random_local_data", "sweep_instances", "random_standard_tuple",
           "SWEEP_TYPES", "SWEEP_CONDUCTORS"]

SWEEP_TYPES = ((3, 2), (5, 2), (4, 3), (5, 3))
SWEEP_CONDUCTORS = (12, 15, 20, 21, 24, 28, 30)


def random_root(rng: random.Random, field):
    """A random root of unity in the field (+-zeta_N^j)."""
    x = field.zeta_power(rng.randrange(field.conductor))
    return -x if rng.random() < 0.5 else x


def random_local_data(rng: random.Random, params: TurbineParams, field, attempts: int = 500) -> LocalData | None:
    """Sample roots of unity until every hypothesis holds; the last special
    eigenvalue is solved from the Fuchs relation."""
    shape = rigid_shape(params)
    for _ in range(attempts):
        eps = random_root(rng, field)
        b = random_root(rng, field) if params.shaft else None
        if params.variant == "curve":
            xis = tuple(_curve_root(rng, field, params, eps) for _ in shape)
            if None in xis:
                return None
        else:
            xis = tuple(random_root(rng, field) for _ in shape)
        lams = tuple(random_root(rng, field) for _ in range(params.l - 1)) + (field.one(),)
        data = LocalData(params, field, eps, lams, xis, shape, b)
        lhs, rhs = fuchs_sides(data)
        data = data.replace(lambdas=lams[:-1] + (rhs / lhs,))
        if validate_local_data(data).ok:
            return data
    return None


def _curve_root(rng, field, params, eps):
    target = eps ** params.s
    candidates = [s * field.zeta_power(j) for j in range(field.conductor) for s in (1, -1)]
    good = [x for x in candidates if x ** params.n == target]
    return rng.choice(good) if good else None


def sweep_instances(seed: int = 2024, per_type: int = 1, conductors=SWEEP_CONDUCTORS,
                    types=SWEEP_TYPES, branches=(1, 2, 3)) -> Iterator[LocalData]:
    """Valid instances over (n, k) x l x shaft, cycling through conductors."""
    rng = random.Random(seed)
    counter = 0
    for n, k in types:
        for l in branches:
            for shaft in (False, True):
                params = TurbineParams.create(n, k, l, shaft)
                produced = 0
                while produced < per_type:
                    field = cyclotomic_field(conductors[counter % len(conductors)])
                    counter += 1
                    data = random_local_data(rng, params, field)
                    if data is not None:
                        produced += 1
                        yield data


def random_standard_tuple(rng: random.Random, m: int, field, density: float = 0.5,
                          singular: bool = False) -> list[Matrix]:
    """m pseudo-reflections I - u_i e_i^T in a shuffled order.

    Off-diagonal entries of u_i vanish with probability ``1 - density``.
    With ``singular`` the last u is a combination of the others, so the
    u's do not span.
    """
    def entry():
        return random_root(rng, field) * rng.randint(1, 3)

    def special_ok(x):
        return not field.is_zero(x) and not field.eq(x, field.one())

    us = []
    for i in range(m):
        u = [entry() if (j != i and rng.random() < density) else field.zero() for j in range(m)]
        while True:
            u[i] = entry()
            if special_ok(u[i]):
                break
        us.append(u)
    if singular and m >= 2:
        for _ in range(100):
            coeffs = [entry() for _ in range(m - 1)]
            combo = [sum((c * us[t][j] for t, c in enumerate(coeffs)), field.zero()) for j in range(m)]
            if special_ok(combo[m - 1]):
                us[m - 1] = combo
                break
    order = list(range(m))
    rng.shuffle(order)
    out = []
    for i in order:
        X = Matrix.identity(field, m)
        for j in range(m):
            X.rows[j][i] = X.rows[j][i] - us[i][j]
        out.append(X)
    return out
