"""Builders for rigid Pochhammer representations of turbine groups.

Coordinates.  Without a shaft the representation space has dimension
``k*l`` and coordinate ``(j, i)`` (block ``j = 0..k-1``, slot
``i = 1..l``) sits at index ``l*j + i - 1``.  With a shaft an extra
coordinate comes first, so ``(j, i)`` sits at ``1 + l*j + i - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .group import (DELTA, OMEGA_0, OMEGA_INF, TurbineParams, TurbineRepresentation, alpha,
                    distinguished_words, evaluate_word, verify_presentation)
from .linalg import (Matrix, RankOneDecomposition, block_assemble, direct_sum, eigenspace_basis,
                     is_pseudo_reflection, rank, verify_semisimple_spectrum)
from .pochhammer import SphereLocalData, build_dsp_tuple, check_pochhammer_condition

__all__ = [
    "ValidationError",
    "ConstructionError",
    "LocalData",
    "Condition",
    "ValidationReport",
    "CoefficientSolution",
    "validate_local_data",
    "fuchs_sign",
    "fuchs_sides",
    "derived_etas",
    "poly_from_roots",
    "solve_shaft_coefficients",
    "build_ell1_with_shaft",
    "build_ell1_without_shaft",
    "factor_pseudo_reflections",
    "build_extension_without_shaft",
    "build_extension_with_shaft",
    "build",
    "extract_and_verify_local_data",
    "verify_root_spectrum",
    "sphere_projection",
    "loop_images",
    "rigid_shape",
]


class ValidationError(ValueError):
    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("local data rejected: " + "; ".join(report.failures()))


class ConstructionError(RuntimeError):
    def __init__(self, conditions: list[str]):
        self.conditions = conditions
        super().__init__("construction failed verification: " + "; ".join(conditions))


@dataclass(frozen=True)
class LocalData:
    params: TurbineParams
    field: object
    epsilon: object
    lambdas: tuple
    xis: tuple
    mults: tuple
    b: object = None

    @property
    def m(self) -> int:
        return self.params.rank

    def eps_r(self):
        return self.epsilon ** self.params.r

    def replace(self, **changes) -> LocalData:
        values = {name: getattr(self, name) for name in
                  ("params", "field", "epsilon", "lambdas", "xis", "mults", "b")}
        values.update(changes)
        return LocalData(**values)


def rigid_shape(params: TurbineParams) -> tuple[int, ...]:
    """Multiplicities of the spectrum at infinity for a rigid system."""
    k, l = params.k, params.l
    if params.shaft:
        return (l,) * k + (1,)
    if l == 1:
        return (1,) * k
    return (l,) * (k - 1) + (l - 1, 1)


@dataclass
class Condition:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    conditions: list = dc_field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.conditions.append(Condition(name, bool(ok), detail))

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.conditions)

    def __bool__(self):
        return self.ok

    def failures(self) -> list[str]:
        return [c.name for c in self.conditions if not c.ok]

    def get(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self):
        return {"ok": self.ok,
                "conditions": [{"name": c.name, "ok": c.ok, **({"detail": c.detail} if c.detail else {})}
                               for c in self.conditions]}


def _prod(field, values):
    acc = field.one()
    for v in values:
        acc = acc * v
    return acc


def _sum(field, values):
    acc = field.zero()
    for v in values:
        acc = acc + v
    return acc


def fuchs_sign(params: TurbineParams) -> int:
    return -1 if ((params.k - 1) * params.l) % 2 else 1


def fuchs_sides(data: LocalData):
    """(lambda_1...lambda_l * prod xi_j^m_j,  sign * [b] * eps^(r l))."""
    f = data.field
    p = data.params
    lhs = _prod(f, data.lambdas) * _prod(f, (x ** m for x, m in zip(data.xis, data.mults)))
    rhs = f.coerce(fuchs_sign(p)) * data.eps_r() ** p.l
    if p.shaft:
        rhs = rhs * data.b
    return lhs, rhs


def derived_etas(data: LocalData):
    """Eigenvalues (eta1, eta2) of the product of the special loops."""
    f = data.field
    p = data.params
    k = p.k
    sign = f.coerce(-1 if (k - 1) % 2 else 1)
    base = sign * data.eps_r()
    xis = data.xis
    if len(xis) < k + 1:
        return None, None
    eta1 = base / _prod(f, xis[:k])
    if p.shaft:
        eta2 = base * data.b / _prod(f, xis[:k + 1])
    else:
        eta2 = base / (_prod(f, xis[:k - 1]) * xis[k])
    return eta1, eta2


def validate_local_data(data: LocalData) -> ValidationReport:
    """Check every hypothesis of the construction; failures are named entries."""
    f = data.field
    p = data.params
    k, l = p.k, p.l
    rep = ValidationReport()
    shape = rigid_shape(p)
    shape_ok = (tuple(data.mults) == shape and len(data.xis) == len(shape)
                and len(data.lambdas) == l and (data.b is not None) == p.shaft)
    rep.add("rigid multiplicity shape", shape_ok,
            f"expected multiplicities {list(shape)} with {l} special eigenvalues")
    scalars = [data.epsilon, *data.lambdas, *data.xis] + ([data.b] if p.shaft and data.b is not None else [])
    rep.add("all scalars nonzero", not any(f.is_zero(x) for x in scalars))
    if any(f.is_zero(x) for x in scalars) or not shape_ok:
        return rep
    eps_r = data.eps_r()
    xis = data.xis
    rep.add("special eigenvalues differ from 1", not any(f.eq(x, f.one()) for x in data.lambdas))
    distinct = all(not f.eq(xis[i], xis[j]) for i in range(len(xis)) for j in range(i + 1, len(xis)))
    rep.add("eigenvalues at infinity pairwise distinct", distinct)
    rep.add("xi^k differs from eps^r", not any(f.eq(x ** k, eps_r) for x in xis))
    if p.shaft:
        rep.add("b^k differs from eps^r", not f.eq(data.b ** k, eps_r))
    lhs, rhs = fuchs_sides(data)
    rep.add("Fuchs relation", f.eq(lhs, rhs), f"lhs={f.render(lhs)}, rhs={f.render(rhs)}")
    if l >= 2:
        eta1, eta2 = derived_etas(data)
        rep.add("eta1 differs from eta2", not f.eq(eta1, eta2))
        rep.add("eta1 and eta2 differ from 1", not (f.eq(eta1, f.one()) or f.eq(eta2, f.one())))
        rep.add("special eigenvalues differ from eta1", not any(f.eq(x, eta1) for x in data.lambdas))
    if p.shaft:
        rep.add("xi differs from b", not any(f.eq(x, data.b) for x in xis))
        if l >= 2:
            rep.add("sum of xi_1..xi_k nonzero", not f.is_zero(_sum(f, xis[:k])))
    else:
        rep.add("sum of xi_1..xi_k nonzero", not f.is_zero(_sum(f, xis[:k])))
        if l >= 2:
            rep.add("sum of xi_1..xi_(k-1), xi_(k+1) nonzero",
                    not f.is_zero(_sum(f, list(xis[:k - 1]) + [xis[k]])))
    if p.variant == "curve":
        eps_s = data.epsilon ** p.s
        rep.add("curve condition xi^n = eps^s", all(f.eq(x ** p.n, eps_s) for x in xis))
    return rep


def _require_valid(data: LocalData) -> None:
    rep = validate_local_data(data)
    if not rep.ok:
        raise ValidationError(rep)


def poly_from_roots(field, roots) -> list:
    """Coefficients c_0..c_d (constant first, monic) of prod (z - root)."""
    coeffs = [field.one()]
    for root in roots:
        shifted = [field.zero()] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] = shifted[i] - root * c
        coeffs = shifted
    return coeffs


@dataclass
class CoefficientSolution:
    """Coefficients feeding a builder.

    For the shaft builder ``a[1..k]`` are the entries of the special column.
    For the extension builders ``a``/``b`` are the monic coefficients of the
    two polynomials (index 0 = constant term) and ``e``/``f`` the normalized
    ratios ``-a_i/a_0`` and ``-b_i/b_0``.
    """

    a: dict
    b: dict = dc_field(default_factory=dict)
    e: dict = dc_field(default_factory=dict)
    f: dict = dc_field(default_factory=dict)
    eta1: object = None
    eta2: object = None

    def as_dict(self, field):
        def lit(d):
            return {str(i): field.render(v) for i, v in sorted(d.items())}
        out = {"a": lit(self.a)}
        for name in ("b", "e", "f"):
            if getattr(self, name):
                out[name] = lit(getattr(self, name))
        if self.eta1 is not None:
            out["eta1"] = field.render(self.eta1)
            out["eta2"] = field.render(self.eta2)
        return out


def solve_shaft_coefficients(data: LocalData, check: bool = True) -> CoefficientSolution:
    """Entries a_1..a_k of the special column for one loop around a shaft.

    With ``a_0 = -1`` and ``c_j`` the coefficients of prod (z - xi_i):
    ``a_j = (a_(j-1) - eps^-r * lambda * c_j) / b`` for j < k, and
    ``a_k = lambda * (b - sum xi) - eps^r * a_(k-1)``.  The constant term
    of the characteristic polynomial reproduces the Fuchs relation.
    """
    p = data.params
    if not p.shaft or p.l != 1 or len(data.xis) != p.k + 1:
        raise ValueError("shaft coefficients need l = 1, a shaft and k+1 eigenvalues at infinity")
    f = data.field
    k = p.k
    b, lam = data.b, data.lambdas[0]
    eps_r = data.eps_r()
    c = poly_from_roots(f, data.xis)
    if check:
        if not f.eq(lam * c[0], b * eps_r):
            raise ValidationError(_single("Fuchs relation"))
        if any(f.eq(x, b) for x in data.xis):
            raise ValidationError(_single("xi differs from b"))
    a = {0: -f.one()}
    inv_b = f.one() / b
    scaled = lam / eps_r
    for j in range(1, k):
        a[j] = (a[j - 1] - scaled * c[j]) * inv_b
    a[k] = lam * (b - _sum(f, data.xis)) - eps_r * a[k - 1]
    if check and f.is_zero(a[k]):
        raise ValidationError(_single("xi differs from b"))
    del a[0]
    return CoefficientSolution(a=a)


def _single(name: str) -> ValidationReport:
    rep = ValidationReport()
    rep.add(name, False)
    return rep


def _fail_if(problems: list[str]) -> None:
    if problems:
        raise ConstructionError(problems)


def verify_root_spectrum(M: Matrix, eps_r, k: int, b=None, mult: int | None = None) -> dict:
    """Check M ~ diag(all k-th roots of eps_r, each ``mult`` times) [+ b].

    No roots are needed in the field: the annihilating polynomial
    ``(z^k - eps_r)`` (times ``z - b``) is squarefree, and equal
    multiplicities are read off from vanishing power sums.
    """
    f = M.field
    size = M.size
    I = Matrix.identity(f, size)
    core = size - (1 if b is not None else 0)
    mult = core // k if mult is None else mult
    power_k = M ** k
    annihilator = power_k - I.scale(eps_r)
    if b is not None:
        annihilator = (M - I.scale(b)) * annihilator
    annihilated = annihilator.is_zero()
    traces = []
    power = I
    for j in range(1, k):
        power = power * M
        traces.append(power.trace())
    expected = [(b ** j if b is not None else f.zero()) for j in range(1, k)]
    traces_ok = all(f.eq(t, e) for t, e in zip(traces, expected))
    b_ok = True
    if b is not None:
        b_ok = size - rank(M - I.scale(b)) == 1
    ok = annihilated and traces_ok and b_ok and core == k * mult
    return {"ok": ok, "annihilated": annihilated, "power_sums_ok": traces_ok, "isolated_b": b_ok}


def _pseudo_check(M: Matrix, special, name: str, problems: list) -> RankOneDecomposition | None:
    f = M.field
    dec = is_pseudo_reflection(M)
    if dec is None:
        problems.append(f"{name} is a pseudo-reflection")
        return None
    if not f.eq(dec.special, special):
        problems.append(f"{name} has the prescribed special eigenvalue")
    return dec


def build_ell1_without_shaft(data: LocalData, verify: bool = True, validate: bool = True) -> TurbineRepresentation:
    """Rank-k representation for one branch and no shaft.

    w0 is the cyclic shift with eps^r in the corner; a1 is the identity
    except its last column ``(b_(k-1), ..., b_1, lambda)`` with
    ``b_i = eps^-r * lambda * a_i`` and ``z^k + sum a_i z^i = prod (z - xi_i)``.
    """
    p = data.params
    if p.shaft or p.l != 1:
        raise ValueError("expects l = 1 without shaft")
    if validate:
        _require_valid(data)
    f = data.field
    k = p.k
    eps_r = data.eps_r()
    lam = data.lambdas[0]
    a = poly_from_roots(f, data.xis)
    coef = lam / eps_r
    bcoef = {i: coef * a[i] for i in range(k)}
    omega0 = Matrix.zeros(f, k)
    for j in range(k - 1):
        omega0.rows[j][j + 1] = f.one()
    omega0.rows[k - 1][0] = eps_r
    a1 = Matrix.identity(f, k)
    for j in range(k - 1):
        a1.rows[j][k - 1] = bcoef[k - 1 - j]
    a1.rows[k - 1][k - 1] = lam
    rep = _assemble(data, omega0, [a1])
    if verify:
        _verify_or_raise(rep, data)
    return rep


def build_ell1_with_shaft(data: LocalData, verify: bool = True, validate: bool = True) -> TurbineRepresentation:
    """Rank-(k+1) representation for one branch plus the shaft."""
    p = data.params
    if not p.shaft or p.l != 1:
        raise ValueError("expects l = 1 with shaft")
    if validate:
        _require_valid(data)
    f = data.field
    k = p.k
    sol = solve_shaft_coefficients(data, check=validate)
    eps_r = data.eps_r()
    m = k + 1
    omega0 = Matrix.zeros(f, m)
    omega0.rows[0][0] = data.b
    for j in range(1, k):
        omega0.rows[j][j + 1] = f.one()
    omega0.rows[k][0] = f.one()
    omega0.rows[k][1] = omega0.rows[k][1] + eps_r
    a1 = Matrix.identity(f, m)
    a1.rows[0][k] = sol.a[k]
    for j in range(1, k):
        a1.rows[j][k] = sol.a[k - j]
    a1.rows[k][k] = data.lambdas[0]
    rep = _assemble(data, omega0, [a1])
    if verify:
        _verify_or_raise(rep, data)
    return rep


def _assemble(data: LocalData, omega0: Matrix, alphas: Sequence[Matrix]) -> TurbineRepresentation:
    f = data.field
    p = data.params
    m = omega0.size
    product = Matrix.identity(f, m)
    for a in alphas:
        product = product * a
    images = {alpha(i + 1): a for i, a in enumerate(alphas)}
    images[OMEGA_0] = omega0
    images[OMEGA_INF] = product.inverse() * omega0
    images[DELTA] = Matrix.scalar(f, data.epsilon, m)
    if p.shaft:
        images[alpha(0)] = (omega0 ** (-p.k)).scale(data.eps_r())
    return TurbineRepresentation(p, f, images)


def factor_pseudo_reflections(A: Matrix, directions: Sequence[int], eigenvalues: Sequence) -> list[RankOneDecomposition]:
    """Write A = X_1 ... X_l with X_i = I - v_i e_(d_i)^T.

    Since X_j fixes e_(d_i) for i != j, ``A e_(d_j) = X_1...X_(j-1) (e_(d_j) - v_j)``,
    so each v_j follows from one solve against the partial product.
    """
    f = A.field
    m = A.size
    dirs = list(directions)
    if len(set(dirs)) != len(dirs) or len(dirs) != len(eigenvalues):
        raise ValueError("need distinct directions, one per eigenvalue")
    I = Matrix.identity(f, m)
    diff = A - I
    for j in range(m):
        if j not in dirs and any(not f.is_zero(diff.rows[i][j]) for i in range(m)):
            raise ConstructionError([f"matrix differs from the identity outside the factor columns (column {j})"])
    partial_inv = I
    factors = []
    for d, lam in zip(dirs, eigenvalues):
        col = partial_inv.apply(A.column(d))
        u = [-x for x in col]
        u[d] = u[d] + f.one()
        dec = RankOneDecomposition(u=tuple(u), special=f.one() - u[d], e=d)
        X = dec.matrix(f)
        if f.is_zero(dec.special) or f.eq(dec.special, f.one()):
            raise ConstructionError([f"factor at column {d} is a pseudo-reflection"])
        if not f.eq(dec.special, lam):
            raise ConstructionError([f"factor at column {d} has special eigenvalue {f.render(lam)}"])
        factors.append(dec)
        partial_inv = X.inverse() * partial_inv
    product = I
    for dec in factors:
        product = product * dec.matrix(f)
    if not product.equals(A):
        raise ConstructionError(["factors multiply back to the input"])
    return factors


def _pinned_eigenbasis(A_inf: Matrix, eta1, eta2) -> Matrix:
    """Columns: canonical eta1-eigenbasis, then the canonical eta2-eigenvector."""
    vecs = eigenspace_basis(A_inf, eta1) + eigenspace_basis(A_inf, eta2)
    if len(vecs) != A_inf.size:
        raise ConstructionError(["product of the sphere tuple is diagonalizable"])
    return Matrix.from_columns(A_inf.field, vecs)


def _extension_coefficients(data: LocalData) -> CoefficientSolution:
    f = data.field
    k = data.params.k
    xis = data.xis
    eta1, eta2 = derived_etas(data)
    a = poly_from_roots(f, xis[:k])
    second = list(xis[:k - 1]) + [xis[k]]
    b = poly_from_roots(f, second)
    e = {i: -a[i] / a[0] for i in range(1, k)}
    g = {i: -b[i] / b[0] for i in range(1, k)}
    return CoefficientSolution(a={i: a[i] for i in range(k)}, b={i: b[i] for i in range(k)},
                               e=e, f=g, eta1=eta1, eta2=eta2)


def _sub_data(data: LocalData, lam, xis, shaft: bool) -> LocalData:
    p = data.params
    sub = TurbineParams.create(p.n, p.k, 1, shaft, "turbine", p.r, p.s)
    return LocalData(params=sub, field=data.field, epsilon=data.epsilon, lambdas=(lam,),
                     xis=tuple(xis), mults=(1,) * len(xis), b=data.b if shaft else None)


def _scatter(field, m: int, blocks: list[tuple[list[int], Matrix]]) -> Matrix:
    """Place each block on the given coordinate list (a permuted direct sum)."""
    out = Matrix.zeros(field, m)
    for coords, blk in blocks:
        for a, ia in enumerate(coords):
            for c, ic in enumerate(coords):
                out.rows[ia][ic] = blk.rows[a][c]
    return out


def build_extension_without_shaft(data: LocalData, verify: bool = True) -> TurbineRepresentation:
    p = data.params
    if p.shaft:
        raise ValueError("expects a turbine without shaft")
    if p.l == 1:
        return build_ell1_without_shaft(data, verify=verify)
    _require_valid(data)
    f = data.field
    k, l = p.k, p.l
    m = k * l
    sol = _extension_coefficients(data)
    eta1, eta2 = sol.eta1, sol.eta2
    eps_r = data.eps_r()

    def C(i):
        if i == 0:
            return Matrix.diagonal(f, [eta1] * (l - 1) + [eta2])
        return Matrix.diagonal(f, [sol.e[i]] * (l - 1) + [sol.f[i]])

    grid = [[None] * k for _ in range(k)]
    for j in range(k - 1):
        grid[j][j + 1] = f.one()
    grid[k - 1][0] = eps_r
    omega0 = block_assemble(f, grid, sizes=[l] * k)
    grid = [[f.one() if i == j else None for j in range(k)] for i in range(k)]
    for j in range(k - 1):
        grid[j][k - 1] = C(k - 1 - j)
    grid[k - 1][k - 1] = C(0)
    a_dot = block_assemble(f, grid, sizes=[l] * k)

    problems = []
    if verify:
        problems += _check_decomposition(data, omega0, a_dot, sol, offset=0)

    sphere = build_dsp_tuple(SphereLocalData(f, tuple(data.lambdas), eta1, eta2))
    P = _pinned_eigenbasis(sphere.infinity, eta1, eta2)
    Q = direct_sum(*([P] * k))
    Q_inv = Q.inverse()
    conj = Q * a_dot * Q_inv
    if not (Q * omega0 * Q_inv).equals(omega0):
        problems.append("w0 is unchanged by the block conjugation")
    _fail_if(problems)
    directions = [l * (k - 1) + i for i in range(l)]
    factors = factor_pseudo_reflections(conj, directions, data.lambdas)
    rep = _assemble(data, omega0, [d.matrix(f) for d in factors])
    rep.coefficients = sol
    rep.conjugator = P
    if verify:
        _verify_or_raise(rep, data)
    return rep


def build_extension_with_shaft(data: LocalData, verify: bool = True) -> TurbineRepresentation:
    p = data.params
    if not p.shaft:
        raise ValueError("expects a turbine with shaft")
    if p.l == 1:
        return build_ell1_with_shaft(data, verify=verify)
    _require_valid(data)
    f = data.field
    k, l = p.k, p.l
    m = k * l + 1
    xis = data.xis
    eta1, eta2 = derived_etas(data)
    shaft_sol = solve_shaft_coefficients(_sub_data(data, eta2, xis, shaft=True))
    plain = poly_from_roots(f, xis[:k])
    coef1 = eta1 / data.eps_r()
    bcoef = {i: coef1 * plain[i] for i in range(1, k)}
    sol = CoefficientSolution(a=shaft_sol.a, b=bcoef, eta1=eta1, eta2=eta2)
    eps_r = data.eps_r()

    def idx(j, i):
        return 1 + l * j + i - 1

    omega0 = Matrix.zeros(f, m)
    omega0.rows[0][0] = data.b
    for j in range(k - 1):
        for i in range(1, l + 1):
            omega0.rows[idx(j, i)][idx(j + 1, i)] = f.one()
    for i in range(1, l + 1):
        omega0.rows[idx(k - 1, i)][idx(0, i)] = eps_r
    omega0.rows[idx(k - 1, l)][0] = f.one()

    a_dot = Matrix.identity(f, m)
    a_dot.rows[0][idx(k - 1, l)] = shaft_sol.a[k]
    for j in range(k - 1):
        t = k - 1 - j
        for i in range(1, l):
            a_dot.rows[idx(j, i)][idx(k - 1, i)] = bcoef[t]
        a_dot.rows[idx(j, l)][idx(k - 1, l)] = shaft_sol.a[t]
    for i in range(1, l):
        a_dot.rows[idx(k - 1, i)][idx(k - 1, i)] = eta1
    a_dot.rows[idx(k - 1, l)][idx(k - 1, l)] = eta2

    problems = []
    if verify:
        problems += _check_decomposition(data, omega0, a_dot, sol, offset=1)
    _fail_if(problems)

    sphere = build_dsp_tuple(SphereLocalData(f, tuple(data.lambdas), eta1, eta2))
    P = _pinned_eigenbasis(sphere.infinity, eta1, eta2)
    Q = direct_sum(Matrix.identity(f, 1), *([P] * k))
    Q_inv = Q.inverse()
    omega0_c = Q * omega0 * Q_inv
    conj = Q * a_dot * Q_inv
    directions = [idx(k - 1, i) for i in range(1, l + 1)]
    factors = factor_pseudo_reflections(conj, directions, data.lambdas)
    rep = _assemble(data, omega0_c, [d.matrix(f) for d in factors])
    rep.coefficients = sol
    rep.conjugator = P
    if verify:
        _verify_or_raise(rep, data)
    return rep


def _check_decomposition(data, omega0, a_dot, sol, offset) -> list[str]:
    """Before conjugation the pair splits as l-1 copies of one rank-k system
    plus one system carrying the eta2 eigenvalue (and the shaft)."""
    p = data.params
    f = data.field
    k, l = p.k, p.l
    xis = data.xis
    sub1 = build_ell1_without_shaft(_sub_data(data, sol.eta1, xis[:k], shaft=False))
    if p.shaft:
        sub2 = build_ell1_with_shaft(_sub_data(data, sol.eta2, xis, shaft=True))
    else:
        sub2 = build_ell1_without_shaft(_sub_data(data, sol.eta2, list(xis[:k - 1]) + [xis[k]], shaft=False))
    m = omega0.size
    blocks_w, blocks_a = [], []
    for i in range(1, l):
        coords = [offset + l * j + i - 1 for j in range(k)]
        blocks_w.append((coords, sub1.images[OMEGA_0]))
        blocks_a.append((coords, sub1.images[alpha(1)]))
    coords = ([0] if p.shaft else []) + [offset + l * j + l - 1 for j in range(k)]
    blocks_w.append((coords, sub2.images[OMEGA_0]))
    blocks_a.append((coords, sub2.images[alpha(1)]))
    problems = []
    if not _scatter(f, m, blocks_w).equals(omega0):
        problems.append("w0 splits as a direct sum of the rank-one-branch systems")
    if not _scatter(f, m, blocks_a).equals(a_dot):
        problems.append("product of the special loops splits as a direct sum of the rank-one-branch systems")
    return problems


def build(data: LocalData, verify: bool = True) -> TurbineRepresentation:
    """Dispatch to the builder matching the turbine parameters."""
    if data.params.shaft:
        return build_extension_with_shaft(data, verify=verify)
    return build_extension_without_shaft(data, verify=verify)


def loop_images(rep: TurbineRepresentation) -> list[tuple]:
    """(label, matrix) for every transversal loop, in index order."""
    words = distinguished_words(rep.params)
    return [(label, evaluate_word(rep, w)) for label, w in words["loops"]]


def sphere_projection(rep: TurbineRepresentation) -> list[Matrix]:
    """(w0^-1, a_1, ..., a_l, winf): local monodromies on the punctured sphere.

    Their product is the identity as a consequence of the first relation.
    """
    return [rep.image(OMEGA_0).inverse(), *rep.alphas, rep.image(OMEGA_INF)]


def extract_and_verify_local_data(rep: TurbineRepresentation, claimed: LocalData) -> ValidationReport:
    """Recognize the claimed local data in a representation."""
    f = rep.field
    p = rep.params
    out = ValidationReport()
    m = rep.m
    if m != claimed.m:
        out.add("dimension matches the local data", False, f"got {m}, expected {claimed.m}")
        return out
    pres = verify_presentation(rep)
    out.add("presentation relations", pres.ok, ",".join(pres.failures()))

    delta = rep.image(DELTA)
    out.add("delta acts as epsilon times identity",
            delta.equals(Matrix.scalar(f, claimed.epsilon, m)))

    special_ok = True
    for i, lam in enumerate(claimed.lambdas, start=1):
        dec = is_pseudo_reflection(rep.image(alpha(i)))
        if dec is None or not f.eq(dec.special, lam):
            special_ok = False
    out.add("branch loops are pseudo-reflections with the special eigenvalues", special_ok)
    eps_r = claimed.eps_r()
    if p.shaft:
        dec = is_pseudo_reflection(rep.image(alpha(0)))
        target = eps_r / claimed.b ** p.k
        out.add("shaft loop is a pseudo-reflection with special eigenvalue eps^r b^-k",
                dec is not None and f.eq(dec.special, target))

    w0 = verify_root_spectrum(rep.image(OMEGA_0), eps_r, p.k, b=claimed.b if p.shaft else None, mult=p.l)
    out.add("spectrum of w0", w0["ok"])
    try:
        inf = verify_semisimple_spectrum(rep.image(OMEGA_INF), list(zip(claimed.xis, claimed.mults)))
        out.add("spectrum of winf", inf.ok, f"kernel dims {inf.kernel_dims}")
    except ValueError as exc:
        out.add("spectrum of winf", False, str(exc))

    det_lhs = _prod(f, (rep.image(alpha(i)).det() for i in range(1, p.l + 1))) * rep.image(OMEGA_INF).det()
    det_w0 = rep.image(OMEGA_0).det()
    lhs, rhs = fuchs_sides(claimed)
    residual = det_lhs - rhs
    out.add("Fuchs relation", f.eq(det_lhs, det_w0) and f.eq(det_lhs, rhs) and f.eq(lhs, rhs),
            f"residual={f.render(residual)}")

    loops = loop_images(rep)
    all_pseudo = all(is_pseudo_reflection(M) is not None for _, M in loops)
    out.add("transversal loops are pseudo-reflections", all_pseudo)
    if all_pseudo:
        out.add("Pochhammer condition on transversal loops",
                check_pochhammer_condition([M for _, M in loops]).ok)
    if p.variant == "curve":
        eps_s = claimed.epsilon ** p.s
        out.add("curve condition xi^n = eps^s", all(f.eq(x ** p.n, eps_s) for x in claimed.xis))
    return out


def _verify_or_raise(rep: TurbineRepresentation, data: LocalData) -> None:
    report = extract_and_verify_local_data(rep, data)
    if not report.ok:
        raise ConstructionError(report.failures())
    words = distinguished_words(rep.params)
    direct = evaluate_word(rep, words["alpha_inf"])
    factored = evaluate_word(rep, words["alpha_inf_factorized"])
    problems = []
    if not direct.equals(factored):
        problems.append("alpha_inf agrees with the factorized loop word")
    elif rank(direct - Matrix.identity(rep.field, rep.m)) != rep.m:
        problems.append("alpha_inf has no eigenvalue 1")
    _fail_if(problems)
