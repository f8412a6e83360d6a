from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle_naive import (
    naive_classical_boundary,
    naive_rank,
    naive_secondary_boundary,
)

from hochschild.algebra import (
    commutator_subspace,
    matrix_algebra,
    regular_bimodule,
    trivial_triple,
)
from hochschild.complexes import (
    ChainIndexScheme,
    build_classical_complex,
    build_complex,
    build_secondary_complex,
    classical_boundary,
    classical_scheme,
    homology,
    secondary_boundary,
    secondary_scheme,
)
from hochschild.errors import PreconditionError, SizeGuardError
from hochschild.fields import GF, QQ
from hochschild.fixtures import (
    fix_d,
    fix_dd,
    fix_k,
    fix_p3,
    random_instances,
)
from hochschild.linalg import image_basis

F1009 = GF(1009)


class TestIndexScheme:
    def test_counts(self):
        s = ChainIndexScheme(3, 2, 2, 2)
        assert s.total == 2 * 8 * 8
        assert s.pairs == ((1, 2), (1, 3), (2, 3))

    @pytest.mark.parametrize("dims", [(1, 1, 1), (2, 2, 2), (2, 3, 2), (3, 1, 2)])
    @pytest.mark.parametrize("degree", [0, 1, 2, 3])
    def test_round_trip_exhaustive(self, dims, degree):
        s = ChainIndexScheme(degree, *dims)
        for idx in range(s.total):
            mu, alphas, betas = s.decode(idx)
            assert s.encode(mu, alphas, betas) == idx

    @given(
        st.integers(min_value=1, max_value=4),
        st.integers(min_value=1, max_value=6),
        st.integers(min_value=1, max_value=6),
        st.integers(min_value=1, max_value=6),
        st.data(),
    )
    @settings(max_examples=80, deadline=None)
    def test_round_trip_random(self, degree, dm, da, db, data):
        s = ChainIndexScheme(degree, dm, da, db)
        mu = data.draw(st.integers(min_value=0, max_value=dm - 1))
        alphas = tuple(
            data.draw(st.integers(min_value=0, max_value=da - 1))
            for _ in range(degree)
        )
        betas = tuple(
            data.draw(st.integers(min_value=0, max_value=db - 1))
            for _ in range(s.num_pairs)
        )
        idx = s.encode(mu, alphas, betas)
        assert 0 <= idx < s.total
        assert s.decode(idx) == (mu, alphas, betas)


def _naive_secondary_matrix_agrees(t, m, n):
    engine = secondary_boundary(t, m, n)
    src = secondary_scheme(t, m, n)
    tgt = secondary_scheme(t, m, n - 1)
    expected = {}
    for (skey, tkey), coeff in naive_secondary_boundary(t, m, n).items():
        col = src.encode(skey[0], skey[1], tuple(v for _, v in skey[2]))
        row = tgt.encode(tkey[0], tkey[1], tuple(v for _, v in tkey[2]))
        expected[(row, col)] = coeff
    assert dict(engine.entries()) == expected


def _naive_classical_matrix_agrees(a, m, n):
    engine = classical_boundary(a, m, n)
    src = classical_scheme(a, m, n)
    tgt = classical_scheme(a, m, n - 1)
    expected = {}
    for (skey, tkey), coeff in naive_classical_boundary(a, m, n).items():
        col = src.encode(skey[0], skey[1], ())
        row = tgt.encode(tkey[0], tkey[1], ())
        expected[(row, col)] = coeff
    assert dict(engine.entries()) == expected


class TestClassicalBoundary:
    def test_commutative_degree_one_is_zero(self):
        t, m = fix_k()
        assert classical_boundary(t.A, m, 1).is_zero()

    def test_matrix_algebra_degree_one_image(self):
        a = matrix_algebra(QQ, 2)
        m = regular_bimodule(a)
        d1 = classical_boundary(a, m, 1)
        assert image_basis(d1) == commutator_subspace(m, a)

    def test_degree_two_against_oracle(self):
        t, m = fix_d()
        _naive_classical_matrix_agrees(t.A, m, 2)

    def test_degree_zero_rejected(self):
        t, m = fix_d()
        with pytest.raises(PreconditionError):
            classical_boundary(t.A, m, 0)


class TestSecondaryBoundary:
    def test_degree_one_commutator_formula(self):
        a = matrix_algebra(QQ, 2)
        t = trivial_triple(a)
        m = regular_bimodule(a)
        assert secondary_boundary(t, m, 1) == classical_boundary(a, m, 1)

    def test_degree_two_formula_on_dual_numbers(self):
        # d(m (x) (a, b; alpha)) = m a eps(alpha) (x) b
        #                          - m (x) a eps(alpha) b + b eps(alpha) m (x) a
        t, m = fix_dd()
        d2 = secondary_boundary(t, m, 2)
        src = secondary_scheme(t, m, 2)
        tgt = secondary_scheme(t, m, 1)
        a = t.A
        for idx in range(src.total):
            mu, (a1, a2), (beta,) = src.decode(idx)
            expected = {}
            eb = t.eps.apply_basis(beta)
            for k, c in m.act_right({mu: QQ.one}, a.mul(a.basis_vec(a1), eb)).items():
                for j, cj in [(a2, c)]:
                    key = tgt.encode(k, (j,), ())
                    expected[key] = expected.get(key, Fraction(0)) + cj
            for k, c in a.mul(a.mul(a.basis_vec(a1), eb), a.basis_vec(a2)).items():
                key = tgt.encode(mu, (k,), ())
                expected[key] = expected.get(key, Fraction(0)) - c
            for k, c in m.act_left(a.mul(a.basis_vec(a2), eb), {mu: QQ.one}).items():
                key = tgt.encode(k, (a1,), ())
                expected[key] = expected.get(key, Fraction(0)) + c
            expected = {k: v for k, v in expected.items() if v}
            assert dict(d2.column(idx)) == expected

    @pytest.mark.parametrize("degree", [1, 2, 3, 4])
    def test_oracle_agreement_on_fixtures(self, degree, named_instances):
        for name, (t, m) in named_instances.items():
            if secondary_scheme(t, m, degree).total <= 200:
                _naive_secondary_matrix_agrees(t, m, degree)

    @pytest.mark.parametrize("degree", [1, 2, 3, 4])
    def test_oracle_agreement_on_random_instances(self, degree):
        for t, m in random_instances(seed=23, count=6):
            if secondary_scheme(t, m, degree).total <= 200:
                _naive_secondary_matrix_agrees(t, m, degree)

    def test_ground_base_collapse_is_bitwise(self, named_instances):
        for name, (t, m) in named_instances.items():
            if t.B.dim != 1:
                continue
            for n in (1, 2, 3):
                assert secondary_boundary(t, m, n) == classical_boundary(t.A, m, n)


class TestBuildComplex:
    def test_ground_field_dims(self):
        t, m = fix_k()
        c = build_complex("classical", t, m, 3)
        assert c.dims == (1, 1, 1, 1)
        # alternating sum of n+1 unit faces: zero in odd degree, the
        # identity in even degree
        assert c.boundaries[1].is_zero()
        assert c.boundaries[2].entry(0, 0) == QQ.one
        assert c.boundaries[3].is_zero()
        assert [homology(c, n).dim for n in range(3)] == [1, 0, 0]

    def test_dual_number_dims(self):
        t, m = fix_d()
        c = build_complex("secondary", t, m, 3)
        assert c.dims == (2, 4, 8, 16)

    def test_secondary_dims_grow_with_pairs(self):
        t, m = fix_dd()
        c = build_secondary_complex(t, m, 3)
        assert c.dims == (2, 4, 16, 128)

    def test_boundary_squared_zero_on_random_instances(self):
        # the builder raises if any composite is nonzero
        for t, m in random_instances(seed=5, count=8):
            build_secondary_complex(t, m, 3)

    def test_size_guard(self):
        t, m = fix_dd()
        with pytest.raises(SizeGuardError):
            build_secondary_complex(t, m, 3, guard_bytes=100)

    def test_degree_cap(self):
        t, m = fix_k()
        with pytest.raises(PreconditionError):
            build_secondary_complex(t, m, 5)
        build_secondary_complex(t, m, 5, degree_cap=6)


class TestHomology:
    def test_h0_formula(self, named_instances):
        for name, (t, m) in named_instances.items():
            c = build_secondary_complex(t, m, 1)
            expected = m.dim - commutator_subspace(m, t.A).dim
            assert homology(c, 0).dim == expected

    def test_h1_vanishes_for_identity_base(self):
        t, m = fix_dd()
        c = build_secondary_complex(t, m, 2)
        assert homology(c, 1).dim == 0

    def test_classical_h1_of_dual_numbers(self):
        t, m = fix_d()
        c = build_classical_complex(t.A, m, 2)
        res = homology(c, 1, with_reps=True)
        # frozen from the dense elimination oracle on the same matrices
        d1 = classical_boundary(t.A, m, 1)
        d2 = classical_boundary(t.A, m, 2)
        oracle_dim = (
            d1.cols - naive_rank(d1.to_dense()) - naive_rank(d2.to_dense())
        )
        assert oracle_dim == 1
        assert res.dim == 1
        assert len(res.reps) == 1

    def test_reps_are_independent_cycles(self):
        t, m = fix_p3()
        c = build_secondary_complex(t, m, 2)
        res = homology(c, 1, with_reps=True)
        d1 = c.boundary(1)
        for rep in res.reps:
            assert not d1.apply(rep)
        assert res.dim == len(res.reps) == 2

    def test_degree_out_of_range(self):
        t, m = fix_k()
        c = build_secondary_complex(t, m, 2)
        with pytest.raises(PreconditionError):
            homology(c, 2)
        with pytest.raises(PreconditionError):
            homology(c, -1)

    def test_prime_field_dims_match_rational_dims(self, named_instances):
        for name, (t, m) in named_instances.items():
            cq = build_secondary_complex(t, m, 3)
            cp = build_secondary_complex(t.over(F1009), m.over(F1009), 3)
            dims_q = [homology(cq, n).dim for n in range(3)]
            dims_p = [homology(cp, n).dim for n in range(3)]
            assert dims_q == dims_p
