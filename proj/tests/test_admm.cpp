#include <cmath>

#include "doctest.h"
#include "ttlr/admm.hpp"
#include "ttlr/errors.hpp"
#include "ttlr/parallel.hpp"
#include "ttlr/phantom.hpp"
#include "ttlr/random.hpp"
#include "ttlr/tsvd.hpp"

using namespace ttlr;

namespace {

SpecPtr share(SamplingSpec s) { return std::make_shared<const SamplingSpec>(std::move(s)); }

struct Problem {
    SpecPtr spec;
    ComplexTensor3 truth;
    KSpaceVector b;
};

Problem make_problem(Dims d, double fraction, std::uint64_t seed) {
    PhantomParams p;
    p.kind = PhantomKind::low_tubal_rank;
    p.nx = d.n1;
    p.ny = d.n2;
    p.nt = d.n3;
    p.seed = seed;
    auto spec = share(gen_bernoulli_mask(d.n1, d.n2, d.n3, fraction, seed + 100));
    auto truth = make_phantom(p);
    auto b = forward(truth, spec);
    return {spec, std::move(truth), std::move(b)};
}

// ||(gamma A^H A + c) X - (gamma A^H b + c R)|| for the normal equations of
// the X-update, evaluated with the forward and adjoint operators.
double normal_residual(const ComplexTensor3& x, const KSpaceVector& b, const ComplexTensor3& r, double gamma,
                       double c) {
    const auto lhs = gamma * adjoint(forward(x, b.spec_ptr())) + c * x;
    const auto rhs = gamma * adjoint(b) + c * r;
    return frobenius_norm(lhs - rhs);
}

}  // namespace

TEST_CASE("sigmoid") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(std::abs(sigmoid(-2.0) - 0.11920292202211755) <= 1e-16);
    CHECK(sigmoid(-50.0) > 0.0);
    CHECK(sigmoid(-50.0) < 1e-21);
    CHECK(sigmoid(800.0) == 1.0);
    CHECK(sigmoid(-800.0) == 0.0);
}

TEST_CASE("X-update solves its normal equations") {
    Rng rng(51);
    const Dims d{10, 8, 4};
    const std::vector<SpecPtr> specs{share(gen_pseudo_radial_mask(10, 8, 4, 3, 1)), share(gen_vds_mask(10, 8, 4, 3, 2)),
                                     share(SamplingSpec::empty(d)), share(SamplingSpec::full(d))};
    for (const auto& spec : specs) {
        for (int t = 0; t < 5; ++t) {
            const auto b = forward(random_tensor(d, rng), spec);
            const auto z = random_tensor(d, rng);
            const auto l = random_tensor(d, rng);
            const auto r = z - l;
            for (double mu : {1e-3, 0.5, 1.0, 30.0}) {
                const auto x = x_update_cartesian(z, l, b, mu);
                CHECK(normal_residual(x, b, r, 1.0, mu) <= 1e-10 * (norm(b) + mu * frobenius_norm(r)));
                const auto xg = x_update_general(z, l, adjoint(b), mu, cartesian_normal_solver(spec));
                CHECK(relative_error(xg, x) <= 1e-12);
            }
            for (double gamma : {0.0, 1e-3, 0.1, 1.0, 50.0}) {
                const auto x = x_update_gamma(z, l, b, gamma);
                CHECK(normal_residual(x, b, r, gamma, 1.0) <= 1e-10 * (gamma * norm(b) + frobenius_norm(r)));
            }
            CHECK(relative_error(x_update_gamma(z, l, b, 0.0), r) <= 1e-14);
            CHECK(relative_error(x_update_gamma(z, l, b, 1.0 / 3.0), x_update_cartesian(z, l, b, 3.0)) <= 1e-12);
        }
    }
}

TEST_CASE("X-update edge cases") {
    Rng rng(52);
    const Dims d{6, 6, 3};
    const auto z = random_tensor(d, rng);
    const auto l = random_tensor(d, rng);
    SUBCASE("empty mask returns Z - L") {
        const auto spec = share(SamplingSpec::empty(d));
        const KSpaceVector b({}, spec);
        CHECK(relative_error(x_update_cartesian(z, l, b, 2.0), z - l) <= 1e-14);
        CHECK(relative_error(x_update_gamma(z, l, b, 5.0), z - l) <= 1e-14);
        CHECK_THROWS_AS(x_update_cartesian(z, l, b, 0.0), NumericError);
    }
    SUBCASE("large gamma enforces data consistency") {
        const auto spec = share(gen_bernoulli_mask(6, 6, 3, 0.5, 3));
        const auto b = forward(random_tensor(d, rng), spec);
        const auto x = x_update_gamma(z, l, b, 1e8);
        const auto ax = forward(x, spec);
        double err = 0.0;
        for (std::size_t n = 0; n < b.size(); ++n) err += std::norm(ax.values()[n] - b.values()[n]);
        CHECK(std::sqrt(err) <= 1e-7 * (norm(b) + frobenius_norm(z - l)));
    }
    SUBCASE("mu = 0 with a full mask is data replacement") {
        const auto spec = share(SamplingSpec::full(d));
        const auto truth = random_tensor(d, rng);
        CHECK(relative_error(x_update_cartesian(z, l, forward(truth, spec), 0.0), truth) <= 1e-12);
    }
    SUBCASE("argument errors") {
        const auto spec = share(SamplingSpec::full(d));
        const auto b = forward(z, spec);
        CHECK_THROWS_AS(x_update_cartesian(z, l, b, -1.0), ParameterError);
        CHECK_THROWS_AS(x_update_gamma(z, l, b, -1.0), ParameterError);
        CHECK_THROWS_AS(x_update_general(z, l, z, 0.0, cartesian_normal_solver(spec)), ParameterError);
        CHECK_THROWS_AS(x_update_general(z, l, z, 1.0, NormalSolver{}), ParameterError);
        CHECK_THROWS_AS(x_update_cartesian(random_tensor({6, 6, 2}, rng), random_tensor({6, 6, 2}, rng), b, 1.0),
                        DimensionError);
    }
}

TEST_CASE("Z-update is the exact prox") {
    Rng rng(53);
    const auto t = make_transform(TransformKind::fft, 4);
    const auto x = random_tensor({6, 5, 4}, rng);
    const auto l = random_tensor({6, 5, 4}, rng);
    const double lambda = 0.7, mu = 1.3;
    const auto z = z_update(x, l, lambda, mu, t);
    const auto obj = [&](const ComplexTensor3& v) {
        const double d = frobenius_norm(v - x - l);
        return lambda * ttnn(v, t) + 0.5 * mu * d * d;
    };
    const double best = obj(z);
    for (int p = 0; p < 200; ++p) {
        const auto dir = random_tensor(z.dims(), rng);
        const double mag = frobenius_norm(z) * std::pow(10.0, rng.uniform(-4.0, 0.0));
        CHECK(obj(z + (mag / frobenius_norm(dir)) * dir) >= best);
    }
    CHECK(relative_error(z_update(x, l, 0.0, mu, t), x + l) <= 1e-12);
    CHECK_THROWS_AS(z_update(x, l, lambda, 0.0, t), ParameterError);
    CHECK_THROWS_AS(z_update(x, l, -1.0, mu, t), ParameterError);
}

TEST_CASE("L-update") {
    Rng rng(54);
    const auto l = random_tensor({3, 3, 2}, rng), z = random_tensor({3, 3, 2}, rng), x = random_tensor({3, 3, 2}, rng);
    CHECK(relative_error(l_update(l, z, x, 0.4), l - 0.4 * (z - x)) == 0.0);
    CHECK(relative_error(l_update(l, x, x, 2.0), l) == 0.0);
}

TEST_CASE("classic solver") {
    const Dims d{12, 12, 4};
    SUBCASE("zero data gives a zero reconstruction") {
        const auto spec = share(gen_bernoulli_mask(12, 12, 4, 0.4, 1));
        AdmmConfig cfg(make_transform(TransformKind::fft, 4));
        cfg.max_iters = 10;
        const auto rep = solve(KSpaceVector(std::vector<cplx>(spec->m()), spec), cfg);
        CHECK(frobenius_norm(rep.reconstruction) == 0.0);
        CHECK(rep.converged);
    }
    SUBCASE("full sampling with lambda = 0 recovers the image at once") {
        Rng rng(55);
        const auto spec = share(SamplingSpec::full(d));
        const auto truth = random_tensor(d, rng);
        AdmmConfig cfg(make_transform(TransformKind::fft, 4));
        cfg.lambda = 0.0;
        cfg.max_iters = 5;
        const auto rep = solve(forward(truth, spec), cfg);
        CHECK(rep.iterations_run <= 5);
        CHECK(snr(rep.reconstruction, truth) >= 120.0);
    }
    SUBCASE("history shape and objective decrease") {
        const auto pr = make_problem(d, 0.5, 7);
        AdmmConfig cfg(make_transform(TransformKind::fft, 4));
        cfg.lambda = 1e-3;
        cfg.max_iters = 40;
        cfg.rel_tol = 0.0;
        const auto rep = solve(pr.b, cfg);
        REQUIRE(rep.history.size() == 40);
        CHECK(rep.iterations_run == 40);
        CHECK_FALSE(rep.converged);
        for (std::size_t n = 0; n < rep.history.size(); ++n) {
            const auto& h = rep.history[n];
            CHECK(h.iter == int(n + 1));
            CHECK(std::abs(h.objective - (h.fidelity + cfg.lambda * h.ttnn)) <= 1e-12 * h.objective);
        }
        CHECK(rep.history.back().objective < rep.history.front().objective);
        CHECK(snr(rep.reconstruction, pr.truth) > snr(adjoint(pr.b), pr.truth));

        cfg.record_history = false;
        CHECK(solve(pr.b, cfg).history.empty());
    }
    SUBCASE("early stop on relative change") {
        const auto pr = make_problem(d, 0.5, 8);
        AdmmConfig cfg(make_transform(TransformKind::dct, 4));
        cfg.rel_tol = 1e-3;
        const auto rep = solve(pr.b, cfg);
        CHECK(rep.converged);
        CHECK(rep.iterations_run < cfg.max_iters);
        CHECK(rep.history.size() == std::size_t(rep.iterations_run));
    }
    SUBCASE("configuration errors") {
        const auto pr = make_problem(d, 0.5, 9);
        AdmmConfig cfg(make_transform(TransformKind::fft, 3));
        CHECK_THROWS_AS(solve(pr.b, cfg), DimensionError);
        AdmmConfig bad(make_transform(TransformKind::fft, 4));
        bad.mu = 0.0;
        CHECK_THROWS_AS(solve(pr.b, bad), ParameterError);
        bad = AdmmConfig(make_transform(TransformKind::fft, 4));
        bad.max_iters = 0;
        CHECK_THROWS_AS(solve(pr.b, bad), ParameterError);
    }
    SUBCASE("non-finite data surfaces as divergence with the iteration") {
        const auto spec = share(SamplingSpec::full({4, 4, 2}));
        std::vector<cplx> v(spec->m(), cplx{1.0, 0.0});
        v[3] = cplx{std::numeric_limits<double>::infinity(), 0.0};
        AdmmConfig cfg(make_transform(TransformKind::identity, 2));
        try {
            solve(KSpaceVector(v, spec), cfg);
            FAIL("expected divergence");
        } catch (const DivergenceError& e) {
            CHECK(e.iteration() == 1);
        } catch (const NumericError&) {
            // The SVD backend may reject the non-finite slice first.
        }
    }
}

TEST_CASE("generalized solver") {
    const Dims d{12, 10, 4};
    const auto pr = make_problem(d, 0.5, 11);
    const auto fft = make_transform(TransformKind::fft, 4);
    SUBCASE("constant schedule reproduces the classic iteration") {
        for (double mu : {0.5, 1.0, 4.0}) {
            AdmmConfig cfg(fft);
            cfg.lambda = 0.02;
            cfg.mu = mu;
            cfg.eta = 0.8;
            cfg.max_iters = 15;
            cfg.rel_tol = 0.0;
            IterationParams p(fft);
            p.gamma = 1.0 / mu;
            p.eta = 0.8;
            p.thresholds.assign(4, cfg.lambda / mu);
            const auto classic = solve(pr.b, cfg);
            const auto general = solve_generalized(pr.b, std::vector<IterationParams>(15, p), fft, {cfg.lambda, true});
            CHECK(general.iterations_run == 15);
            CHECK(relative_error(general.reconstruction, classic.reconstruction) <= 1e-10);
            for (std::size_t n = 0; n < 15; ++n)
                CHECK(std::abs(general.history[n].objective - classic.history[n].objective) <=
                      1e-10 * classic.history[n].objective);
        }
    }
    SUBCASE("relative thresholds") {
        IterationParams p(fft);
        p.mode = ThresholdMode::relative;
        p.gamma = 0.5;
        p.thresholds.assign(4, -2.0);
        const auto rep = solve_generalized(pr.b, {p}, fft);
        // One step by hand: Z from X0 = A^H b, L0 = 0.
        const auto x0 = adjoint(pr.b);
        const auto z = t_tsvt_relative(x0, std::vector<double>(4, 0.11920292202211755), fft);
        const auto x1 = x_update_gamma(z, ComplexTensor3::zeros(d), pr.b, 0.5);
        CHECK(relative_error(rep.reconstruction, x1) <= 1e-12);
        // sigmoid(-2) < 1, so the leading singular value of every nonzero
        // slice survives the threshold.
        for (const auto& sv : transformed_singular_values(z, fft)) CHECK(sv[0] > 0.0);

        // A very negative logit leaves the slices essentially untouched.
        p.thresholds.assign(4, -50.0);
        const auto loose = solve_generalized(pr.b, {p}, fft);
        CHECK(relative_error(loose.reconstruction, x_update_gamma(x0, ComplexTensor3::zeros(d), pr.b, 0.5)) <= 1e-14);
    }
    SUBCASE("per-iteration transforms and thresholds") {
        std::vector<IterationParams> sched;
        for (int n = 0; n < 6; ++n) {
            IterationParams p(make_transform(n % 2 ? TransformKind::dct : TransformKind::fft, 4));
            p.thresholds = {0.05, 0.02 * n, 0.0, 0.1};
            p.gamma = 0.2 + 0.1 * n;
            sched.push_back(p);
        }
        const auto rep = solve_generalized(pr.b, sched, fft, {0.01, true});
        CHECK(rep.iterations_run == 6);
        CHECK(rep.history.size() == 6);
        CHECK(std::abs(rep.history.back().ttnn - ttnn(rep.reconstruction, fft)) <= 1e-10 * rep.history.back().ttnn);
        CHECK(all_finite(rep.reconstruction));
    }
    SUBCASE("schedule validation") {
        IterationParams p(fft);
        p.thresholds = {0.1, 0.1};
        CHECK_THROWS_AS(solve_generalized(pr.b, {p}, fft), DimensionError);
        p.thresholds = {0.1, -0.1, 0.1, 0.1};
        CHECK_THROWS_AS(solve_generalized(pr.b, {p}, fft), ParameterError);
        p.mode = ThresholdMode::relative;
        CHECK_NOTHROW(solve_generalized(pr.b, {p}, fft));
        p.gamma = -1.0;
        CHECK_THROWS_AS(solve_generalized(pr.b, {p}, fft), ParameterError);
        CHECK_THROWS_AS(solve_generalized(pr.b, {}, fft), ParameterError);
    }
}

TEST_CASE("solver determinism across thread counts") {
    const auto pr = make_problem({16, 12, 6}, 0.5, 12);
    AdmmConfig cfg(make_transform(TransformKind::fft, 6));
    cfg.max_iters = 8;
    cfg.rel_tol = 0.0;
    set_thread_count(0);
    const auto a = solve(pr.b, cfg);
    const auto b = solve(pr.b, cfg);
    set_thread_count(4);
    const auto c = solve(pr.b, cfg);
    set_thread_count(0);
    CHECK(std::equal(a.reconstruction.data().begin(), a.reconstruction.data().end(), b.reconstruction.data().begin()));
    CHECK(relative_error(c.reconstruction, a.reconstruction) <= 1e-12);
    for (std::size_t n = 0; n < a.history.size(); ++n) {
        CHECK(a.history[n].objective == b.history[n].objective);
        CHECK(std::abs(c.history[n].objective - a.history[n].objective) <= 1e-12 * a.history[n].objective);
    }
}
