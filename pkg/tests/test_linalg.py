import random

import pytest
from hypothesis import given, strategies as st

from rigid_turbine.golden import display_p, y522_data
from rigid_turbine.linalg import (DimensionError, Matrix, SingularMatrixError, block_assemble,
                                  centralizer_dim, direct_sum, eigenspace_basis, is_pseudo_reflection,
                                  kernel_basis, rank, verify_semisimple_spectrum)
from rigid_turbine.pochhammer import SphereLocalData, build_dsp_tuple
from rigid_turbine.construct import derived_etas
from rigid_turbine.scalar import ApproxField, cyclotomic_field

from strategies import random_invertible, random_semisimple, seeded_field, square_matrices

Q = cyclotomic_field(1)
F3 = cyclotomic_field(3)


def mat(field, rows):
    return Matrix.from_values(field, rows)


class TestRank:
    def test_examples(self):
        assert rank(Matrix.identity(Q, 3)) == 3
        assert rank(Matrix.zeros(Q, 4)) == 0
        A1 = mat(Q, [[1, -1], [0, -1]])
        assert rank(A1 - Matrix.identity(Q, 2)) == 1

    def test_rectangular(self):
        assert rank(mat(Q, [[1, 2, 3], [2, 4, 6]])) == 1
        assert rank(mat(Q, [[1, 0], [0, 1], [1, 1]])) == 2

    def test_cyclotomic_dependency(self):
        z = F3.zeta_power(1)
        M = Matrix(F3, [[F3.one(), z], [z * z, F3.one()]])
        assert rank(M) == 1

    @given(square_matrices(max_size=5))
    def test_rank_plus_nullity(self, M):
        basis = kernel_basis(M)
        assert rank(M) + len(basis) == M.size
        for v in basis:
            assert all(M.field.is_zero(x) for x in M.apply(v))

    @given(square_matrices(max_size=4, density=0.8))
    def test_determinant_detects_singularity(self, M):
        assert (M.field.is_zero(M.det())) == (rank(M) < M.size)

    @given(square_matrices(max_size=3), square_matrices(max_size=3))
    def test_determinant_multiplicative(self, A, B):
        if A.field is B.field and A.size == B.size:
            assert (A * B).det() == A.det() * B.det()


class TestKernelAndEigenspaces:
    def test_kernel_examples(self):
        assert kernel_basis(Matrix.identity(Q, 3)) == []
        assert rank(Matrix(Q, kernel_basis(Matrix.zeros(Q, 2)))) == 2
        A1 = mat(Q, [[1, -1], [0, -1]])
        (v,) = kernel_basis(A1 - Matrix.identity(Q, 2))
        assert v == [1, 0]

    def test_eigenspace_examples(self):
        assert eigenspace_basis(Matrix.identity(Q, 2), 1) == [[1, 0], [0, 1]]
        assert eigenspace_basis(Matrix.diagonal(Q, [2, 3]), 5) == []

    def test_pinned_vector_of_sphere_pair(self):
        data = y522_data()
        f = data.field
        eta1, eta2 = derived_etas(data)
        tup = build_dsp_tuple(SphereLocalData(f, data.lambdas, eta1, eta2))
        (v,) = eigenspace_basis(tup.infinity, eta1)
        assert v[0] == f.one()
        assert v[1] == -eta1 / data.lambdas[0]
        assert v == display_p(f, *data.lambdas, eta1).column(0)


class TestPseudoReflection:
    def test_identity_is_not(self):
        assert is_pseudo_reflection(Matrix.identity(Q, 3)) is None

    def test_diagonal(self):
        dec = is_pseudo_reflection(Matrix.diagonal(Q, [5, 1, 1]))
        assert dec.e == 0 and dec.special == 5 and dec.standard

    def test_cusp_factor(self):
        # 0-based: the nonidentity column is column 1
        dec = is_pseudo_reflection(mat(Q, [[1, -1], [0, -1]]))
        assert dec.e == 1
        assert list(dec.u) == [1, 2]
        assert dec.special == -1

    def test_unipotent_and_singular(self):
        assert is_pseudo_reflection(mat(Q, [[1, 1], [0, 1]])) is None
        with pytest.raises(SingularMatrixError):
            is_pseudo_reflection(mat(Q, [[1, 0], [0, 0]]))

    def test_rank_two_is_not(self):
        assert is_pseudo_reflection(Matrix.diagonal(Q, [2, 3, 1])) is None

    @given(seeded_field(), st.integers(1, 5))
    def test_special_value_is_determinant(self, rf, m):
        rng, f = rf
        T = random_invertible(rng, f, m)
        lam = f.zeta_power(1) * 2
        D = Matrix.diagonal(f, [lam] + [f.one()] * (m - 1))
        M = T * D * T.inverse()
        dec = is_pseudo_reflection(M)
        assert dec is not None
        assert dec.special == M.det() == lam
        assert dec.matrix(f).equals(M)


class TestCentralizer:
    def test_examples(self):
        assert centralizer_dim(Matrix.identity(Q, 3)) == 9
        assert centralizer_dim(Matrix.diagonal(Q, [2, 2, 2, 7])) == 10
        assert centralizer_dim(mat(Q, [[4, 1], [0, 4]])) == 2

    def test_cusp_local_monodromies(self):
        for rows in ([[0, 1], [1, 0]], [[1, -1], [0, -1]], [[-1, 1], [-1, 0]]):
            assert centralizer_dim(mat(F3, rows)) == 2

    def test_nilpotent(self):
        J = mat(Q, [[0, 1, 0], [0, 0, 1], [0, 0, 0]])
        assert centralizer_dim(J) == 3

    @given(seeded_field(), st.integers(1, 5))
    def test_semisimple_dimension(self, rf, m):
        rng, f = rf
        M, spectrum = random_semisimple(rng, f, m)
        assert verify_semisimple_spectrum(M, spectrum).ok
        assert centralizer_dim(M) == sum(d * d for _, d in spectrum)

    @given(seeded_field(), square_matrices(max_size=3))
    def test_conjugation_invariant(self, rf, M):
        rng, _ = rf
        T = random_invertible(rng, M.field, M.size)
        assert centralizer_dim(T * M * T.inverse()) == centralizer_dim(M)


class TestSpectrum:
    def test_examples(self):
        assert verify_semisimple_spectrum(Matrix.identity(Q, 2), [(1, 2)]).ok
        report = verify_semisimple_spectrum(mat(Q, [[3, 1], [0, 3]]), [(3, 2)])
        assert not report.ok and not report.annihilated
        z = F3.zeta_power(1)
        assert verify_semisimple_spectrum(mat(F3, [[-1, 1], [-1, 0]]), [(z, 1), (z * z, 1)]).ok

    def test_wrong_multiplicities(self):
        assert not verify_semisimple_spectrum(Matrix.diagonal(Q, [2, 2, 3]), [(2, 1), (3, 2)]).ok

    def test_malformed_claims(self):
        with pytest.raises(DimensionError):
            verify_semisimple_spectrum(Matrix.identity(Q, 2), [(1, 1)])
        with pytest.raises(ValueError):
            verify_semisimple_spectrum(Matrix.identity(Q, 2), [(1, 1), (1, 1)])


class TestMatrix:
    def test_inverse(self):
        M = mat(F3, [[1, "zeta(3)"], [2, 5]])
        assert (M * M.inverse()).is_identity()
        with pytest.raises(SingularMatrixError):
            mat(Q, [[1, 2], [2, 4]]).inverse()

    def test_powers(self):
        W = mat(Q, [[0, 1], [1, 0]])
        assert (W ** 2).is_identity()
        assert (W ** -3).equals(W)

    def test_shape_errors(self):
        with pytest.raises(DimensionError):
            Matrix.identity(Q, 2) * Matrix.identity(Q, 3)

    def test_literals(self):
        f = cyclotomic_field(5)
        M = mat(f, [["zeta(5)", 0], [1, "-zeta(5)^2"]])
        assert M.to_literals() == [["zeta(5)", "0"], ["1", "-zeta(5)^2"]]
        assert Matrix.from_values(f, M.to_literals()).equals(M)

    def test_approx_backend(self):
        f = ApproxField(100)
        M = mat(f, [["0.5", "zeta(7)"], [1, 2]])
        assert (M * M.inverse()).is_identity()
        assert rank(mat(f, [[1, 2], [2, 4]])) == 1
        assert f.eq(M.det(), f.parse("1 - zeta(7)"))


class TestBlocks:
    def test_identity_blocks(self):
        I2 = Matrix.identity(Q, 2)
        assert block_assemble(Q, [[I2, None], [None, I2]]).is_identity()

    def test_twisted_rotation_layout(self):
        f = cyclotomic_field(5)
        eps = f.zeta_power(2)
        W = block_assemble(f, [[None, 1], [eps, None]], sizes=[2, 2])
        expected = mat(f, [[0, 0, 1, 0], [0, 0, 0, 1], [eps, 0, 0, 0], [0, eps, 0, 0]])
        assert W.equals(expected)
        assert (W ** 2).equals(Matrix.scalar(f, eps, 4))

    def test_direct_sum(self):
        P = mat(Q, [[1, 2], [3, 4]])
        S = direct_sum(Matrix.identity(Q, 1), P, P)
        assert S.shape == (5, 5)
        assert S[1, 2] == 2 and S[4, 3] == 3 and S[0, 1] == 0 and S[1, 3] == 0

    def test_inconsistent_sizes(self):
        with pytest.raises(DimensionError):
            block_assemble(Q, [[Matrix.identity(Q, 2), Matrix.identity(Q, 3)], [None, None]])
