#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "ttlr/errors.hpp"
#include "ttlr/parallel.hpp"
#include "ttlr/random.hpp"
#include "ttlr/tsvd.hpp"

using namespace ttlr;

namespace {

struct Kind {
    UnitaryTransform t;
    Matrix dense;
};

std::vector<Kind> kinds(std::size_t n3, Rng& rng) {
    const Matrix u = random_unitary(n3, rng);
    return {{make_transform(TransformKind::identity, n3), Matrix::Identity(n3, n3)},
            {make_transform(TransformKind::fft, n3), oracle::dft_matrix(n3)},
            {make_transform(TransformKind::dct, n3), oracle::dct_matrix(n3)},
            {make_transform(TransformKind::matrix, n3, u), u}};
}

ComplexTensor3 low_rank(std::size_t n1, std::size_t n2, std::size_t r, std::size_t n3, const UnitaryTransform& t,
                        Rng& rng) {
    return t_product(random_tensor({n1, r, n3}, rng), random_tensor({r, n2, n3}, rng), t);
}

double prox_objective(const ComplexTensor3& x, const ComplexTensor3& y, double tau, const UnitaryTransform& t) {
    const double d = frobenius_norm(x - y);
    return tau * ttnn(x, t) + 0.5 * d * d;
}

}  // namespace

TEST_CASE("t_product") {
    Rng rng(21);
    SUBCASE("identity tensor is a two-sided unit") {
        for (const auto& k : kinds(5, rng)) {
            const auto a = random_tensor({3, 4, 5}, rng);
            CHECK(relative_error(t_product(identity_tensor(3, 5, k.t), a, k.t), a) <= 1e-12);
            CHECK(relative_error(t_product(a, identity_tensor(4, 5, k.t), k.t), a) <= 1e-12);
        }
    }
    SUBCASE("identity transform reduces to slice-wise products") {
        const auto t = make_transform(TransformKind::identity, 3);
        const auto a = random_tensor({2, 3, 3}, rng);
        const auto b = random_tensor({3, 4, 3}, rng);
        const auto c = t_product(a, b, t);
        for (std::size_t k = 1; k <= 3; ++k) {
            const RowMatrix expected = a.frontal_slice(k) * b.frontal_slice(k);
            CHECK(c.frontal_slice(k) == expected);
        }
    }
    SUBCASE("matches the dense block-diagonal product for every kind") {
        for (const auto& k : kinds(6, rng)) {
            const auto a = random_tensor({4, 3, 6}, rng);
            const auto b = random_tensor({3, 5, 6}, rng);
            CHECK(relative_error(t_product(a, b, k.t), oracle::t_product_dense(a, b, k.dense)) <= 1e-12);
        }
    }
    SUBCASE("dimension errors") {
        const auto t = make_transform(TransformKind::fft, 3);
        CHECK_THROWS_AS(t_product(random_tensor({2, 3, 3}, rng), random_tensor({2, 3, 3}, rng), t), DimensionError);
        CHECK_THROWS_AS(t_product(random_tensor({2, 3, 4}, rng), random_tensor({3, 3, 4}, rng), t), DimensionError);
    }
}

TEST_CASE("tensor Hermitian transpose") {
    Rng rng(22);
    SUBCASE("identity transform is slice-wise conjugate transpose") {
        const auto t = make_transform(TransformKind::identity, 3);
        const auto a = random_tensor({2, 4, 3}, rng);
        const auto ah = tensor_hermitian_transpose(a, t);
        CHECK(ah.dims() == Dims{4, 2, 3});
        for (std::size_t k = 1; k <= 3; ++k) CHECK(ah.frontal_slice(k) == RowMatrix(a.frontal_slice(k).adjoint()));
    }
    SUBCASE("involution and Hermitian Gram tensor") {
        for (const auto& k : kinds(4, rng)) {
            const auto a = random_tensor({3, 5, 4}, rng);
            const auto ah = tensor_hermitian_transpose(a, k.t);
            CHECK(relative_error(tensor_hermitian_transpose(ah, k.t), a) <= 1e-12);
            const auto gram = k.t.apply(t_product(a, ah, k.t));
            for (std::size_t s = 1; s <= 4; ++s) {
                const RowMatrix m = gram.frontal_slice(s);
                CHECK((m - m.adjoint()).norm() <= 1e-12 * m.norm());
            }
        }
    }
}

TEST_CASE("identity tensor and unitary tensors") {
    Rng rng(23);
    const auto id = make_transform(TransformKind::identity, 3);
    const auto eye = identity_tensor(4, 3, id);
    for (std::size_t k = 1; k <= 3; ++k) CHECK(eye.frontal_slice(k) == RowMatrix::Identity(4, 4));

    for (const auto& k : kinds(4, rng)) {
        CHECK(is_unitary_tensor(identity_tensor(3, 4, k.t), k.t, 1e-12));
        CHECK_FALSE(is_unitary_tensor(ComplexTensor3::zeros({3, 3, 4}), k.t, 1e-10));
        const auto f = tt_svd(random_tensor({5, 3, 4}, rng), k.t);
        CHECK(is_unitary_tensor(f.U, k.t, 1e-10));
        CHECK(is_unitary_tensor(f.V, k.t, 1e-10));
    }
    CHECK_THROWS_AS(is_unitary_tensor(random_tensor({3, 2, 3}, rng), id, 1e-10), DimensionError);
}

TEST_CASE("tt_svd") {
    Rng rng(24);
    SUBCASE("zero tensor") {
        const auto t = make_transform(TransformKind::fft, 3);
        const auto f = tt_svd(ComplexTensor3::zeros({4, 3, 3}), t);
        CHECK(frobenius_norm(f.S) == 0.0);
        CHECK(transformed_multirank(ComplexTensor3::zeros({4, 3, 3}), t).ranks == std::vector<std::size_t>{0, 0, 0});
    }
    SUBCASE("n3 = 1 is the matrix SVD") {
        const auto t = make_transform(TransformKind::identity, 1);
        const auto x = random_tensor({6, 4, 1}, rng);
        const auto f = tt_svd(x, t);
        const Eigen::VectorXd ref = oracle::jacobi_singular_values(Matrix(x.frontal_slice(1)));
        REQUIRE(f.singular_values[0].size() == 4);
        for (long i = 0; i < 4; ++i) CHECK(std::abs(f.singular_values[0][std::size_t(i)] - ref(i)) <= 1e-12 * ref(0));
    }
    SUBCASE("random 6x5x4 with fft reconstructs") {
        const auto t = make_transform(TransformKind::fft, 4);
        const auto x = random_tensor({6, 5, 4}, rng);
        const auto f = tt_svd(x, t);
        const auto rec = t_product(f.U, t_product(f.S, tensor_hermitian_transpose(f.V, t), t), t);
        CHECK(relative_error(rec, x) <= 1e-10);
    }
    SUBCASE("factor invariants for every kind and shape") {
        for (auto [n1, n2, n3] : {std::tuple{6u, 5u, 4u}, {3u, 7u, 5u}, {4u, 4u, 1u}, {1u, 3u, 2u}}) {
            for (const auto& k : kinds(n3, rng)) {
                CAPTURE(to_string(k.t.kind()));
                const auto x = random_tensor({n1, n2, n3}, rng);
                const auto f = tt_svd(x, k.t);
                CHECK(f.U.dims() == Dims{n1, n1, n3});
                CHECK(f.S.dims() == Dims{n1, n2, n3});
                CHECK(f.V.dims() == Dims{n2, n2, n3});
                const auto rec = t_product(f.U, t_product(f.S, tensor_hermitian_transpose(f.V, k.t), k.t), k.t);
                CHECK(relative_error(rec, x) <= 1e-10);
                const auto shat = k.t.apply(f.S);
                const auto uhat = k.t.apply(f.U);
                for (std::size_t s = 1; s <= n3; ++s) {
                    const RowMatrix m = shat.frontal_slice(s);
                    const double scale = std::max(m.norm(), 1e-300);
                    const auto& sv = f.singular_values[s - 1];
                    for (long i = 0; i < m.rows(); ++i) {
                        for (long j = 0; j < m.cols(); ++j) {
                            if (i != j) CHECK(std::abs(m(i, j)) <= 1e-12 * scale);
                        }
                    }
                    for (std::size_t i = 0; i < sv.size(); ++i) {
                        CHECK(sv[i] >= 0.0);
                        if (i > 0) CHECK(sv[i] <= sv[i - 1]);
                        CHECK(std::abs(m(long(i), long(i)).real() - sv[i]) <= 1e-12 * scale);
                    }
                    // Canonical phase: the largest entry of each left singular
                    // vector is real and positive.
                    const RowMatrix u = uhat.frontal_slice(s);
                    for (long c = 0; c < u.cols(); ++c) {
                        long arg = 0;
                        u.col(c).cwiseAbs().maxCoeff(&arg);
                        CHECK(u(arg, c).real() > 0.0);
                        CHECK(std::abs(u(arg, c).imag()) <= 1e-12);
                    }
                }
            }
        }
    }
    SUBCASE("sequential and parallel factors are identical") {
        const auto t = make_transform(TransformKind::dct, 6);
        const auto x = random_tensor({9, 7, 6}, rng);
        set_thread_count(0);
        const auto a = tt_svd(x, t);
        set_thread_count(3);
        const auto b = tt_svd(x, t);
        set_thread_count(0);
        CHECK(std::equal(a.U.data().begin(), a.U.data().end(), b.U.data().begin()));
        CHECK(a.singular_values == b.singular_values);
    }
}

TEST_CASE("transformed multirank and sum rank") {
    Rng rng(25);
    const auto fft2 = make_transform(TransformKind::fft, 2);
    const auto mr = transformed_multirank(identity_tensor(3, 2, fft2), fft2);
    CHECK(mr.ranks == std::vector<std::size_t>{3, 3});
    CHECK(mr.sum() == 6);
    CHECK(sum_rank(ComplexTensor3::zeros({3, 3, 2}), fft2) == 0);

    for (const auto& k : kinds(5, rng)) {
        for (std::size_t r : {1u, 2u, 3u}) {
            const auto x = low_rank(7, 6, r, 5, k.t, rng);
            const auto ranks = transformed_multirank(x, k.t);
            for (auto v : ranks.ranks) CHECK(v == r);
            CHECK(ranks.sum() == r * 5);
            CHECK(sum_rank(x, k.t) == ranks.sum());
            // Rank of the dense block-diagonal matrix at the same cut.
            const Eigen::VectorXd sv = oracle::jacobi_singular_values(oracle::dense_bdiag(oracle::apply_fibers(k.dense, x)));
            CHECK(std::size_t((sv.array() > 1e-10 * sv(0)).count()) == ranks.sum());
        }
    }
    CHECK_THROWS_AS(transformed_multirank(identity_tensor(2, 2, fft2), fft2, -1.0), ParameterError);
}

TEST_CASE("TTNN") {
    Rng rng(26);
    CHECK(ttnn(ComplexTensor3::zeros({3, 3, 4}), make_transform(TransformKind::fft, 4)) == 0.0);

    const auto id = make_transform(TransformKind::identity, 3);
    const auto x = random_tensor({4, 5, 3}, rng);
    double expected = 0.0;
    for (std::size_t k = 1; k <= 3; ++k) expected += oracle::nuclear_norm(Matrix(x.frontal_slice(k)));
    CHECK(std::abs(ttnn(x, id) - expected) <= 1e-12 * expected);

    for (int trial = 0; trial < 5; ++trial) {
        for (const auto& k : kinds(4, rng)) {
            const auto y = random_tensor({5, 3, 4}, rng);
            const double ref = oracle::ttnn_dense(y, k.dense);
            CHECK(std::abs(ttnn(y, k.t) - ref) <= 1e-10 * ref);
        }
    }
}

TEST_CASE("transformed spectral norm") {
    Rng rng(27);
    const auto t = make_transform(TransformKind::fft, 4);
    CHECK(transformed_spectral_norm(ComplexTensor3::zeros({2, 2, 4}), t) == 0.0);
    CHECK(std::abs(transformed_spectral_norm(identity_tensor(3, 4, t), t) - 1.0) <= 1e-14);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = random_tensor({4, 3, 4}, rng);
        CHECK(transformed_spectral_norm(x, t) < ttnn(x, t));
        CHECK(sum_rank(x, t) > 1);
    }
    // A tensor with a single nonzero transformed singular value: equality.
    std::vector<cplx> hat(4 * 3 * 4, cplx{0.0, 0.0});
    Eigen::VectorXcd u = Eigen::VectorXcd::Random(4);
    Eigen::VectorXcd v = Eigen::VectorXcd::Random(3);
    const RowMatrix outer = u * v.adjoint();
    std::copy(outer.data(), outer.data() + 12, hat.begin() + 2 * 12);
    const auto rank1 = t.apply_adjoint(ComplexTensor3({4, 3, 4}, hat));
    CHECK(sum_rank(rank1, t) == 1);
    CHECK(std::abs(transformed_spectral_norm(rank1, t) - ttnn(rank1, t)) <= 1e-12 * ttnn(rank1, t));
}

TEST_CASE("T-TSVT prox") {
    Rng rng(28);
    SUBCASE("zero threshold returns the input") {
        for (const auto& k : kinds(3, rng)) {
            const auto y = random_tensor({5, 4, 3}, rng);
            CHECK(relative_error(t_tsvt(y, 0.0, k.t), y) <= 1e-12);
        }
    }
    SUBCASE("threshold above the spectral norm returns zero") {
        const auto t = make_transform(TransformKind::fft, 3);
        const auto y = random_tensor({5, 4, 3}, rng);
        CHECK(frobenius_norm(t_tsvt(y, transformed_spectral_norm(y, t), t)) <= 1e-12 * frobenius_norm(y));
        CHECK(frobenius_norm(t_tsvt(y, 2.0 * transformed_spectral_norm(y, t), t)) == 0.0);
    }
    SUBCASE("matches dense SVT and beats random perturbations") {
        const auto t = make_transform(TransformKind::fft, 3);
        const auto y = random_tensor({5, 4, 3}, rng);
        const double tau = 0.4 * transformed_spectral_norm(y, t);
        const auto out = t_tsvt(y, tau, t);
        CHECK(relative_error(out, oracle::tsvt_dense(y, tau, oracle::dft_matrix(3))) <= 1e-10);
        const double best = prox_objective(out, y, tau, t);
        const double scale = frobenius_norm(out);
        int worse = 0;
        for (int p = 0; p < 10000; ++p) {
            const double mag = scale * std::pow(10.0, rng.uniform(-4.0, 0.0));
            const auto dir = random_tensor(y.dims(), rng);
            const auto cand = out + (mag / frobenius_norm(dir)) * dir;
            if (prox_objective(cand, y, tau, t) < best) ++worse;
        }
        CHECK(worse == 0);
    }
    SUBCASE("per-slice thresholds minimize the separable objective") {
        const auto t = make_transform(TransformKind::dct, 4);
        const auto y = random_tensor({4, 4, 4}, rng);
        const std::vector<double> tau{0.1, 0.8, 1.5, 0.0};
        const auto out = t_tsvt(y, tau, t);
        const auto objective = [&](const ComplexTensor3& x) {
            const auto sv = transformed_singular_values(x, t);
            double s = 0.0;
            for (std::size_t k = 0; k < sv.size(); ++k)
                for (double v : sv[k]) s += tau[k] * v;
            const double d = frobenius_norm(x - y);
            return s + 0.5 * d * d;
        };
        const double best = objective(out);
        for (int p = 0; p < 2000; ++p) {
            const auto dir = random_tensor(y.dims(), rng);
            const double mag = frobenius_norm(out) * std::pow(10.0, rng.uniform(-4.0, 0.0));
            CHECK(objective(out + (mag / frobenius_norm(dir)) * dir) >= best);
        }
        // Equal entries reproduce the scalar form.
        const std::vector<double> flat(4, 0.7);
        CHECK(relative_error(t_tsvt(y, flat, t), t_tsvt(y, 0.7, t)) == 0.0);
    }
    SUBCASE("relative thresholds scale the slice maximum") {
        const auto t = make_transform(TransformKind::fft, 3);
        const auto y = random_tensor({5, 5, 3}, rng);
        const auto sv = transformed_singular_values(y, t);
        const std::vector<double> scale{0.2, 0.5, 0.9};
        std::vector<double> tau(3);
        for (std::size_t k = 0; k < 3; ++k) tau[k] = scale[k] * sv[k][0];
        CHECK(relative_error(t_tsvt_relative(y, scale, t), t_tsvt(y, tau, t)) <= 1e-14);
    }
    SUBCASE("argument errors") {
        const auto t = make_transform(TransformKind::fft, 3);
        const auto y = random_tensor({2, 2, 3}, rng);
        CHECK_THROWS_AS(t_tsvt(y, -0.1, t), ParameterError);
        CHECK_THROWS_AS(t_tsvt(y, std::vector<double>{0.1, 0.2}, t), DimensionError);
        CHECK_THROWS_AS(t_tsvt(y, std::vector<double>{0.1, -0.2, 0.3}, t), ParameterError);
        CHECK_THROWS_AS(t_tsvt_relative(y, std::vector<double>{0.1, -0.2, 0.3}, t), ParameterError);
    }
}

TEST_CASE("algebraic properties on random instances") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n3 = 1 + rng.engine()() % 6;
        const Dims d{2 + rng.engine()() % 5, 2 + rng.engine()() % 5, n3};
        for (const auto& k : kinds(n3, rng)) {
            CAPTURE(to_string(k.t.kind()));
            const auto x = random_tensor(d, rng);
            const auto y = random_tensor(d, rng);

            // Duality: any A in the spectral unit ball is dominated, the
            // witness U *T V^H attains.
            auto a = random_tensor(d, rng);
            a = (1.0 / transformed_spectral_norm(a, k.t)) * a;
            const double nx = ttnn(x, k.t);
            CHECK(inner_product(x, a).real() <= nx + 1e-9);
            const auto f = tt_svd(x, k.t);
            const std::size_t r = std::min(d.n1, d.n2);
            // Thin witness: keep the first r columns of U and V per slice.
            const auto uhat = k.t.apply(f.U);
            const auto vhat = k.t.apply(f.V);
            const auto witness = k.t.apply_adjoint(from_slices(n3, [&](std::size_t s) -> RowMatrix {
                return uhat.frontal_slice(s + 1).leftCols(long(r)) * vhat.frontal_slice(s + 1).leftCols(long(r)).adjoint();
            }));
            CHECK(transformed_spectral_norm(witness, k.t) <= 1.0 + 1e-9);
            CHECK(std::abs(inner_product(x, witness).real() - nx) <= 1e-9 * nx);

            // Prox is nonexpansive.
            const double tau = 0.3 * transformed_spectral_norm(x, k.t);
            CHECK(frobenius_norm(t_tsvt(x, tau, k.t) - t_tsvt(y, tau, k.t)) <= frobenius_norm(x - y) * (1 + 1e-12));

            // Convexity.
            CHECK(ttnn(0.5 * x + 0.5 * y, k.t) <= 0.5 * ttnn(x, k.t) + 0.5 * ttnn(y, k.t) + 1e-10);
        }
    }
}

TEST_CASE("norms agree between fft and an explicit DFT matrix transform") {
    Rng rng(30);
    for (std::size_t n3 : {1u, 3u, 8u}) {
        const auto fft = make_transform(TransformKind::fft, n3);
        const auto mat = make_transform(TransformKind::matrix, n3, oracle::dft_matrix(n3));
        const auto x = random_tensor({5, 4, n3}, rng);
        CHECK(std::abs(ttnn(x, fft) - ttnn(x, mat)) <= 1e-10 * ttnn(x, fft));
        CHECK(std::abs(transformed_spectral_norm(x, fft) - transformed_spectral_norm(x, mat)) <=
              1e-10 * transformed_spectral_norm(x, fft));
    }
}
