"""Pochhammer tuples of pseudo-reflections on the punctured sphere."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .linalg import Matrix, rank, verify_semisimple_spectrum

__all__ = [
    "SphereDataError",
    "SphereLocalData",
    "PochhammerTuple",
    "PochhammerReport",
    "build_dsp_tuple",
    "check_pochhammer_condition",
    "check_sphere_rigid_shape",
]


class SphereDataError(ValueError):
    def __init__(self, conditions: list[str]):
        self.conditions = conditions
        super().__init__("invalid sphere data: " + "; ".join(conditions))


@dataclass(frozen=True)
class SphereLocalData:
    field: object
    lambdas: tuple
    eta1: object
    eta2: object

    @property
    def n(self) -> int:
        return len(self.lambdas)

    def violations(self) -> list[str]:
        f = self.field
        bad = []
        values = list(self.lambdas) + [self.eta1, self.eta2]
        if any(f.is_zero(v) for v in values):
            bad.append("all values nonzero")
        if any(f.eq(lam, f.one()) for lam in self.lambdas):
            bad.append("special eigenvalues differ from 1")
        if self.n > 1:
            if any(f.eq(lam, self.eta1) for lam in self.lambdas):
                bad.append("special eigenvalues differ from eta1")
            if f.eq(self.eta1, self.eta2):
                bad.append("eta1 differs from eta2")
        product = f.one()
        for lam in self.lambdas:
            product = product * lam
        if not f.eq(product, self.eta1 ** (self.n - 1) * self.eta2):
            bad.append("product relation lambda_1...lambda_n = eta1^(n-1) eta2")
        return bad


@dataclass
class PochhammerTuple:
    data: SphereLocalData
    matrices: list
    infinity: Matrix

    def local_monodromies(self) -> list[Matrix]:
        return list(self.matrices) + [self.infinity]


def build_dsp_tuple(data: SphereLocalData) -> PochhammerTuple:
    """Pseudo-reflections A_1..A_n whose product has spectrum eta1^(n-1), eta2.

    A_i is the identity except for column i, which holds
    ``(lambda_j - eta1)/eta1`` above the diagonal, ``lambda_i`` on it, and
    ``lambda_j - eta1`` below it.
    """
    bad = data.violations()
    if bad:
        raise SphereDataError(bad)
    f = data.field
    n = data.n
    lams = [f.coerce(x) for x in data.lambdas]
    eta1 = f.coerce(data.eta1)
    above = [(lam - eta1) / eta1 for lam in lams]
    below = [lam - eta1 for lam in lams]
    matrices = []
    for i in range(n):
        A = Matrix.identity(f, n)
        for j in range(n):
            A.rows[j][i] = above[j] if j < i else (lams[i] if j == i else below[j])
        matrices.append(A)
    infinity = Matrix.identity(f, n)
    for A in matrices:
        infinity = infinity * A
    return PochhammerTuple(data=data, matrices=matrices, infinity=infinity)


@dataclass
class PochhammerReport:
    ok: bool
    codimensions: list
    codimension_sum: int
    joint_fixed_dim: int
    m: int

    def __bool__(self):
        return self.ok

    def as_dict(self):
        return {"ok": self.ok, "codimensions": self.codimensions,
                "codimension_sum": self.codimension_sum,
                "joint_fixed_dim": self.joint_fixed_dim, "m": self.m}


def check_pochhammer_condition(monodromies: Sequence[Matrix]) -> PochhammerReport:
    """Codimensions of the fixed spaces sum to m and the fixed spaces meet in 0."""
    f = monodromies[0].field
    m = monodromies[0].size
    I = Matrix.identity(f, m)
    shifted = [M - I for M in monodromies]
    codims = [rank(D) for D in shifted]
    stacked = Matrix(f, [row for D in shifted for row in D.rows])
    joint = m - rank(stacked)
    total = sum(codims)
    return PochhammerReport(ok=(total == m and joint == 0), codimensions=codims,
                            codimension_sum=total, joint_fixed_dim=joint, m=m)


def check_sphere_rigid_shape(A_infty: Matrix, eta1, eta2) -> bool:
    f = A_infty.field
    if f.eq(eta1, eta2):
        raise ValueError("eta1 and eta2 must differ")
    n = A_infty.size
    spectrum = [(v, d) for v, d in ((eta1, n - 1), (eta2, 1)) if d > 0]
    return verify_semisimple_spectrum(A_infty, spectrum).ok
