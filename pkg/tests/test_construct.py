import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from rigid_turbine.construct import (ConstructionError, LocalData, ValidationError, build,
                                     build_ell1_with_shaft, build_ell1_without_shaft,
                                     build_extension_with_shaft, build_extension_without_shaft,
                                     derived_etas, extract_and_verify_local_data,
                                     factor_pseudo_reflections, fuchs_sides, fuchs_sign, loop_images,
                                     poly_from_roots, rigid_shape, solve_shaft_coefficients,
                                     sphere_projection, validate_local_data, verify_root_spectrum)
from rigid_turbine.golden import CUSP_A1, CUSP_OMEGA0, CUSP_OMEGA_INF, cusp_data, y522_data
from rigid_turbine.group import DELTA, OMEGA_0, OMEGA_INF, TurbineParams, TurbineRepresentation
from rigid_turbine.linalg import Matrix, is_pseudo_reflection, rank, verify_semisimple_spectrum
from rigid_turbine.rigidity import irreducibility_certificate, is_rigid
from rigid_turbine.samples import random_local_data
from rigid_turbine.scalar import ApproxField, cyclotomic_field

F3 = cyclotomic_field(3)
F12 = cyclotomic_field(12)


def charpoly(M):
    """Faddeev-LeVerrier: coefficients of det(zI - M), constant term first."""
    f = M.field
    m = M.size
    coeffs = [None] * (m + 1)
    coeffs[m] = f.one()
    N = Matrix.zeros(f, m)
    I = Matrix.identity(f, m)
    for j in range(1, m + 1):
        N = M * N + I.scale(coeffs[m - j + 1])
        coeffs[m - j] = -(M * N).trace() / f.coerce(j)
    return coeffs


def expanded(f, roots):
    poly = [f.one()]
    for x in roots:
        nxt = [f.zero()] * (len(poly) + 1)
        for i, c in enumerate(poly):
            nxt[i + 1] = nxt[i + 1] + c
            nxt[i] = nxt[i] - x * c
        poly = nxt
    return poly


def with_fuchs(data):
    """Re-solve the last special eigenvalue so the Fuchs relation holds."""
    trial = data.replace(lambdas=data.lambdas[:-1] + (data.field.one(),))
    lhs, rhs = fuchs_sides(trial)
    return trial.replace(lambdas=data.lambdas[:-1] + (rhs / lhs,))


def sample(seed, n, k, l, shaft, conductor=12, variant="turbine"):
    params = TurbineParams.create(n, k, l, shaft, variant)
    data = random_local_data(random.Random(seed), params, cyclotomic_field(conductor))
    assert data is not None
    return data


PARAM_GRID = [(3, 2, 1, False), (3, 2, 1, True), (3, 2, 2, False), (3, 2, 2, True),
              (5, 3, 2, False), (4, 3, 1, True), (3, 1, 1, True), (4, 1, 1, False),
              (5, 2, 3, False), (5, 2, 3, True)]


class TestValidation:
    def test_cusp_passes(self):
        report = validate_local_data(cusp_data())
        assert report.ok, report.failures()
        lhs, rhs = fuchs_sides(cusp_data())
        assert lhs == rhs == -1

    def test_special_eigenvalue_one(self):
        bad = cusp_data().replace(lambdas=(F3.one(),))
        assert "special eigenvalues differ from 1" in validate_local_data(bad).failures()

    def test_duplicate_xi(self):
        d = cusp_data()
        bad = d.replace(xis=(d.xis[0], d.xis[0]))
        assert "eigenvalues at infinity pairwise distinct" in validate_local_data(bad).failures()

    def test_zero_scalar(self):
        bad = cusp_data().replace(lambdas=(F3.zero(),))
        assert "all scalars nonzero" in validate_local_data(bad).failures()

    def test_shape(self):
        bad = cusp_data().replace(mults=(2,))
        assert "rigid multiplicity shape" in validate_local_data(bad).failures()
        assert rigid_shape(TurbineParams.create(5, 2, 3)) == (3, 2, 1)
        assert rigid_shape(TurbineParams.create(5, 2, 3, shaft=True)) == (3, 3, 1)
        assert rigid_shape(TurbineParams.create(5, 3, 1)) == (1, 1, 1)

    def test_xi_power_k(self):
        d = cusp_data()
        bad = with_fuchs(d.replace(xis=(F3.one(), d.xis[1])))
        assert "xi^k differs from eps^r" in validate_local_data(bad).failures()

    def test_raises_on_build(self):
        with pytest.raises(ValidationError) as exc:
            build(cusp_data().replace(lambdas=(F3.one(),)))
        assert "special eigenvalues differ from 1" in exc.value.report.failures()

    def test_fuchs_sign(self):
        # sign is (-1)^((k-1) l) for both shapes
        assert fuchs_sign(TurbineParams.create(5, 2, 3)) == -1
        assert fuchs_sign(TurbineParams.create(5, 2, 2, shaft=True)) == 1
        assert fuchs_sign(TurbineParams.create(5, 3, 3)) == 1

    def test_approx_mode(self):
        f = ApproxField(120)
        d = y522_data(f)
        assert validate_local_data(d).ok
        rep = build(d)
        assert extract_and_verify_local_data(rep, d).ok


class TestShaftCoefficients:
    @pytest.mark.parametrize("seed,n,k", [(1, 3, 2), (2, 4, 3), (3, 5, 3), (4, 3, 1), (5, 5, 2)])
    def test_characteristic_polynomial(self, seed, n, k):
        data = sample(seed, n, k, 1, True)
        rep = build_ell1_with_shaft(data)
        f = data.field
        assert charpoly(rep.image(OMEGA_INF)) == expanded(f, data.xis)

    def test_fuchs_violation(self):
        data = sample(7, 3, 2, 1, True)
        bad = data.replace(lambdas=(data.lambdas[0] * data.field.zeta_power(1),))
        with pytest.raises(ValidationError):
            solve_shaft_coefficients(bad)

    def test_k1(self):
        data = sample(11, 3, 1, 1, True)
        sol = solve_shaft_coefficients(data)
        assert list(sol.a) == [1]
        rep = build(data)
        f = data.field
        assert verify_semisimple_spectrum(rep.image(OMEGA_INF), [(x, 1) for x in data.xis]).ok
        assert rep.m == 2

    def test_requires_shaft_l1(self):
        with pytest.raises(ValueError):
            solve_shaft_coefficients(cusp_data())


class TestBuilders:
    def test_cusp(self):
        rep = build_ell1_without_shaft(cusp_data())
        assert rep.image(OMEGA_0).equals(Matrix.from_values(F3, CUSP_OMEGA0))
        assert rep.image("a1").equals(Matrix.from_values(F3, CUSP_A1))
        assert rep.image(OMEGA_INF).equals(Matrix.from_values(F3, CUSP_OMEGA_INF))
        z = F3.zeta_power(1)
        assert verify_semisimple_spectrum(rep.image(OMEGA_INF), [(z, 1), (z * z, 1)]).ok
        assert poly_from_roots(F3, cusp_data().xis) == [1, 1, 1]

    def test_zero_sum_rejected_without_shaft(self):
        f = F12
        x = f.zeta_power(1)
        d = LocalData(TurbineParams.create(3, 2, 1), f, f.one(), (f.parse("-1"),), (x, -x), (1, 1))
        d = with_fuchs(d)
        failures = validate_local_data(d).failures()
        assert "sum of xi_1..xi_k nonzero" in failures
        with pytest.raises(ValidationError):
            build_ell1_without_shaft(d)

    @pytest.mark.parametrize("n,k,l,shaft", PARAM_GRID)
    def test_round_trip(self, n, k, l, shaft):
        data = sample(n * 100 + k * 10 + l, n, k, l, shaft)
        rep = build(data)
        assert rep.m == data.m
        assert extract_and_verify_local_data(rep, data).ok
        f = data.field
        w0 = rep.image(OMEGA_0)
        if shaft:
            assert (rep.image("a0") * w0 ** k).equals(Matrix.scalar(f, data.eps_r(), rep.m))
            assert verify_root_spectrum(w0, data.eps_r(), k, b=data.b, mult=l)["ok"]
        else:
            assert (w0 ** k).equals(Matrix.scalar(f, data.eps_r(), rep.m))
        assert rep.image(DELTA).equals(Matrix.scalar(f, data.epsilon, rep.m))

    @pytest.mark.parametrize("n,k,l,shaft", PARAM_GRID)
    def test_determinant_at_infinity(self, n, k, l, shaft):
        data = sample(n * 100 + k * 10 + l + 1, n, k, l, shaft)
        rep = build(data)
        expected = data.field.one()
        for x, d in zip(data.xis, data.mults):
            expected = expected * x ** d
        assert rep.image(OMEGA_INF).det() == expected

    def test_sphere_projection_product(self):
        for data in (y522_data(), sample(3, 5, 3, 2, True), sample(4, 3, 2, 3, False)):
            mats = sphere_projection(build(data))
            product = Matrix.identity(data.field, data.m)
            for M in mats:
                product = product * M
            assert product.is_identity()

    def test_deterministic(self):
        data = sample(21, 5, 3, 2, False)
        a, b = build(data), build(data)
        assert all(a.images[g].equals(b.images[g]) for g in a.params.generators())
        assert a.to_literals() == b.to_literals()

    def test_extension_delegates_for_one_branch(self):
        data = cusp_data()
        a = build_extension_without_shaft(data)
        b = build_ell1_without_shaft(data)
        assert a.to_literals() == b.to_literals()
        shaft = sample(5, 3, 2, 1, True)
        assert build_extension_with_shaft(shaft).to_literals() == build_ell1_with_shaft(shaft).to_literals()

    def test_builder_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            build_extension_with_shaft(cusp_data())
        with pytest.raises(ValueError):
            build_ell1_with_shaft(cusp_data())
        with pytest.raises(ValueError):
            build_ell1_without_shaft(y522_data())

    def test_shaft_rigidity_small(self):
        data = sample(8, 3, 2, 2, True)
        rep = build(data)
        assert irreducibility_certificate(rep).verdict
        assert is_rigid(rep, True).index == 2

    def test_extension_coefficients(self):
        data = sample(31, 5, 3, 2, False)
        sol = build(data).coefficients
        f = data.field
        k = data.params.k
        first, second = data.xis[:k], data.xis[:k - 1] + (data.xis[k],)

        def closed(xs):
            prod = f.one()
            for x in xs:
                prod = prod * x
            total = f.zero()
            for x in xs:
                total = total + x
            return (-1) ** k * total / prod

        assert sol.e[k - 1] == closed(first) and sol.f[k - 1] == closed(second)
        assert not f.is_zero(sol.e[k - 1]) and not f.is_zero(sol.f[k - 1])
        eta1, eta2 = derived_etas(data)
        assert sol.eta1 == eta1 and sol.eta2 == eta2

    def test_equal_top_coefficients_still_build(self):
        # for k >= 3, e_(k-1) = f_(k-1) exactly when xi_1 + xi_2 = 0; nothing breaks
        f = F12
        params = TurbineParams.create(4, 3, 2)
        rng = random.Random(3)
        found = None
        for _ in range(400):
            base = random_local_data(rng, params, f)
            if base is None:
                continue
            trial = with_fuchs(base.replace(xis=(base.xis[0], -base.xis[0]) + base.xis[2:]))
            if validate_local_data(trial).ok:
                found = trial
                break
        assert found is not None
        rep = build(found)
        assert rep.coefficients.e[2] == rep.coefficients.f[2]
        assert irreducibility_certificate(rep).verdict
        assert is_rigid(rep, True).index == 2

    @given(st.integers(0, 10 ** 6), st.sampled_from(PARAM_GRID), st.sampled_from((8, 12, 15)))
    def test_random_builds_verify(self, seed, grid, conductor):
        n, k, l, shaft = grid
        data = random_local_data(random.Random(seed), TurbineParams.create(n, k, l, shaft),
                                 cyclotomic_field(conductor))
        if data is None:
            return
        rep = build(data)
        report = extract_and_verify_local_data(rep, data)
        assert report.ok, report.failures()


class TestFactoring:
    def test_single_factor(self):
        A = Matrix.from_values(F3, CUSP_A1)
        (dec,) = factor_pseudo_reflections(A, [1], [F3.parse("-1")])
        assert dec.matrix(F3).equals(A)

    @given(st.integers(0, 10 ** 6), st.integers(2, 5))
    def test_reconstruction(self, seed, m):
        rng = random.Random(seed)
        f = F12
        count = rng.randint(1, m)
        dirs = rng.sample(range(m), count)
        product = Matrix.identity(f, m)
        factors, lams = [], []
        for d in dirs:
            X = Matrix.identity(f, m)
            for i in range(m):
                if i != d and rng.random() < 0.6:
                    X.rows[i][d] = f.zeta_power(rng.randrange(12))
            lam = f.zeta_power(rng.randrange(1, 12))
            X.rows[d][d] = lam
            factors.append(X)
            lams.append(lam)
            product = product * X
        decs = factor_pseudo_reflections(product, dirs, lams)
        for dec, X in zip(decs, factors):
            assert dec.matrix(f).equals(X)

    def test_wrong_eigenvalue(self):
        A = Matrix.from_values(F3, CUSP_A1)
        with pytest.raises(ConstructionError):
            factor_pseudo_reflections(A, [1], [F3.parse("2")])

    def test_extra_column(self):
        with pytest.raises(ConstructionError):
            factor_pseudo_reflections(Matrix.from_values(F3, [[2, 0], [0, 3]]), [0], [F3.parse("2")])


class TestRecognition:
    def test_builder_output(self):
        rep = build(y522_data())
        report = extract_and_verify_local_data(rep, y522_data())
        assert report.ok
        assert report.get("Fuchs relation").ok

    def test_nonscalar_delta(self):
        rep = build(y522_data())
        images = dict(rep.images)
        D = Matrix.identity(rep.field, 4)
        D.rows[0][1] = rep.field.one()
        images[DELTA] = D
        report = extract_and_verify_local_data(TurbineRepresentation(rep.params, rep.field, images), y522_data())
        assert "delta acts as epsilon times identity" in report.failures()

    def test_wrong_claim(self):
        data = y522_data()
        rep = build(data)
        f = data.field
        claim = data.replace(lambdas=(data.lambdas[1], data.lambdas[0]))
        assert not extract_and_verify_local_data(rep, claim).ok
        smaller = cusp_data()
        assert not extract_and_verify_local_data(rep, smaller).ok

    def test_determinant_matches_fuchs(self):
        for data in (y522_data(), sample(9, 5, 3, 2, True), sample(2, 3, 2, 3, False)):
            rep = build(data)
            lhs, rhs = fuchs_sides(data)
            product = data.field.one()
            for M in rep.alphas:
                product = product * M.det()
            product = product * rep.image(OMEGA_INF).det()
            assert product == lhs
            assert rep.image(OMEGA_0).det() == rhs
            assert lhs == rhs

    def test_loop_images_are_pseudo_reflections(self):
        rep = build(sample(5, 5, 2, 3, True))
        for label, M in loop_images(rep):
            assert is_pseudo_reflection(M) is not None, label
