#include "ttlr/checks.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include <Eigen/SVD>

#include "ttlr/admm.hpp"
#include "ttlr/errors.hpp"
#include "ttlr/mri.hpp"
#include "ttlr/parallel.hpp"
#include "ttlr/random.hpp"
#include "ttlr/tsvd.hpp"

namespace ttlr {

namespace {

struct Scale {
    int trials;
    int perturbations;
    std::size_t max_dim;
    std::size_t max_n3;
};

// Worst observed value of a deviation against its tolerance.
struct Worst {
    double value = 0.0;
    void see(double v) { value = std::max(value, std::isnan(v) ? std::numeric_limits<double>::infinity() : v); }
};

Dims random_dims(Rng& rng, const Scale& s) {
    const auto pick = [&](std::size_t hi) { return 1 + static_cast<std::size_t>(rng.engine()() % hi); };
    return {pick(s.max_dim), pick(s.max_dim), pick(s.max_n3)};
}

std::vector<UnitaryTransform> all_kinds(std::size_t n3, Rng& rng) {
    return {make_transform(TransformKind::identity, n3), make_transform(TransformKind::fft, n3),
            make_transform(TransformKind::dct, n3), make_transform(TransformKind::matrix, n3, random_unitary(n3, rng))};
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult bounded(std::string name, const Worst& w, double tol) {
    return {std::move(name), w.value <= tol, "max deviation " + fmt(w.value) + " (tolerance " + fmt(tol) + ")"};
}

CheckResult transforms_unitary(const Scale& s) {
    Rng rng(101);
    Worst w;
    for (std::size_t n3 : {std::size_t{1}, std::size_t{2}, std::size_t{5}, s.max_n3}) {
        for (const auto& t : all_kinds(n3, rng)) w.see(check_unitarity(t, s.trials, 1e-12, 7).max_deviation());
    }
    return bounded("transforms are unitary", w, 1e-12);
}

CheckResult tsvd_reconstructs(const Scale& s) {
    Rng rng(102);
    Worst w;
    for (int trial = 0; trial < s.trials; ++trial) {
        const Dims d = random_dims(rng, s);
        for (const auto& t : all_kinds(d.n3, rng)) {
            const auto x = random_tensor(d, rng);
            const auto f = tt_svd(x, t);
            w.see(relative_error(t_product(f.U, t_product(f.S, tensor_hermitian_transpose(f.V, t), t), t), x));
        }
    }
    return bounded("tt-SVD reconstructs its input", w, 1e-10);
}

CheckResult ttnn_matches_dense(const Scale& s) {
    Rng rng(103);
    Worst w;
    for (int trial = 0; trial < s.trials; ++trial) {
        const Dims d = random_dims(rng, s);
        for (const auto& t : all_kinds(d.n3, rng)) {
            const auto x = random_tensor(d, rng);
            const Matrix dense = bdiag(t.apply(x)).densify();
            const double ref = Eigen::JacobiSVD<Matrix>(dense).singularValues().sum();
            w.see(std::abs(ttnn(x, t) - ref) / ref);
        }
    }
    return bounded("TTNN equals the block-diagonal nuclear norm", w, 1e-10);
}

CheckResult duality_attained(const Scale& s) {
    Rng rng(104);
    Worst w;
    for (int trial = 0; trial < s.trials; ++trial) {
        const Dims d = random_dims(rng, s);
        const auto t = make_transform(TransformKind::fft, d.n3);
        const auto x = random_tensor(d, rng);
        const auto f = tt_svd(x, t);
        const auto r = static_cast<Eigen::Index>(std::min(d.n1, d.n2));
        const auto uh = t.apply(f.U);
        const auto vh = t.apply(f.V);
        const auto witness = t.apply_adjoint(from_slices(d.n3, [&](std::size_t k) -> RowMatrix {
            return uh.frontal_slice(k + 1).leftCols(r) * vh.frontal_slice(k + 1).leftCols(r).adjoint();
        }));
        const double nx = ttnn(x, t);
        w.see(std::max(transformed_spectral_norm(witness, t) - 1.0, 0.0));
        w.see(std::abs(inner_product(x, witness).real() - nx) / nx);
    }
    return bounded("dual-norm witness attains TTNN", w, 1e-9);
}

CheckResult prox_optimal(const Scale& s) {
    Rng rng(105);
    int beaten = 0;
    for (int trial = 0; trial < std::max(1, s.trials / 4); ++trial) {
        const Dims d = random_dims(rng, s);
        const auto t = make_transform(TransformKind::fft, d.n3);
        const auto y = random_tensor(d, rng);
        const double tau = 0.3 * transformed_spectral_norm(y, t);
        const auto out = t_tsvt(y, tau, t);
        const auto objective = [&](const ComplexTensor3& v) {
            const double r = frobenius_norm(v - y);
            return tau * ttnn(v, t) + 0.5 * r * r;
        };
        const double best = objective(out);
        const double scale = std::max(frobenius_norm(out), 1.0);
        for (int p = 0; p < s.perturbations; ++p) {
            const auto dir = random_tensor(d, rng);
            const double mag = scale * std::pow(10.0, rng.uniform(-4.0, 0.0));
            if (objective(out + (mag / frobenius_norm(dir)) * dir) < best) ++beaten;
        }
    }
    return {"T-TSVT minimizes the prox objective", beaten == 0,
            std::to_string(beaten) + " perturbations improved on the prox output"};
}

CheckResult prox_nonexpansive(const Scale& s) {
    Rng rng(106);
    Worst w;
    for (int trial = 0; trial < s.trials; ++trial) {
        const Dims d = random_dims(rng, s);
        const auto t = make_transform(TransformKind::dct, d.n3);
        const auto a = random_tensor(d, rng);
        const auto b = random_tensor(d, rng);
        const double tau = rng.uniform(0.0, 2.0);
        w.see(frobenius_norm(t_tsvt(a, tau, t) - t_tsvt(b, tau, t)) / frobenius_norm(a - b) - 1.0);
    }
    return bounded("T-TSVT is nonexpansive", w, 1e-12);
}

CheckResult operators_adjoint(const Scale& s) {
    Rng rng(107);
    Worst w;
    const std::size_t n = 2 * s.max_dim;
    const std::vector<SpecPtr> specs{
        std::make_shared<const SamplingSpec>(gen_pseudo_radial_mask(n, n + 2, s.max_n3, 4, 1)),
        std::make_shared<const SamplingSpec>(gen_vds_mask(n, n + 2, s.max_n3, 3.0, 2))};
    for (const auto& spec : specs) {
        for (int trial = 0; trial < s.trials; ++trial) {
            const auto x = random_tensor(spec->dims(), rng);
            std::vector<cplx> yv(spec->m());
            for (auto& v : yv) v = rng.complex_normal();
            const KSpaceVector y(std::move(yv), spec);
            const double lhs = inner_product(forward(x, spec), y).real();
            const double rhs = inner_product(x, adjoint(y)).real();
            w.see(std::abs(lhs - rhs) / (frobenius_norm(x) * norm(y)));
        }
    }
    return bounded("forward and adjoint operators are adjoint", w, 1e-12);
}

CheckResult x_update_normal_equations(const Scale& s) {
    Rng rng(108);
    Worst w;
    for (int trial = 0; trial < s.trials; ++trial) {
        const Dims d{2 * s.max_dim, s.max_dim + 1, s.max_n3};
        const auto spec = std::make_shared<const SamplingSpec>(gen_vds_mask(d.n1, d.n2, d.n3, 2.5, trial));
        const auto b = forward(random_tensor(d, rng), spec);
        const auto z = random_tensor(d, rng);
        const auto l = random_tensor(d, rng);
        const double mu = rng.uniform(0.1, 5.0);
        const auto x = x_update_cartesian(z, l, b, mu);
        const auto residual = adjoint(forward(x, spec)) + mu * x - adjoint(b) - mu * (z - l);
        w.see(frobenius_norm(residual) / (norm(b) + mu * frobenius_norm(z - l)));
    }
    return bounded("X-update solves its normal equations", w, 1e-10);
}

CheckResult generalized_matches_classic(const Scale& s) {
    Rng rng(109);
    const Dims d{2 * s.max_dim, 2 * s.max_dim, s.max_n3};
    const auto spec = std::make_shared<const SamplingSpec>(gen_bernoulli_mask(d.n1, d.n2, d.n3, 0.5, 3));
    const auto b = forward(random_tensor(d, rng), spec);
    const auto t = make_transform(TransformKind::fft, d.n3);
    AdmmConfig cfg(t);
    cfg.lambda = 0.05;
    cfg.mu = 2.0;
    cfg.max_iters = 15;
    cfg.rel_tol = 0.0;
    cfg.record_history = false;
    IterationParams p(t);
    p.gamma = 1.0 / cfg.mu;
    p.eta = cfg.eta;
    p.thresholds.assign(d.n3, cfg.lambda / cfg.mu);
    const auto a = solve(b, cfg).reconstruction;
    const auto g = solve_generalized(b, std::vector<IterationParams>(15, p), t, {0.0, false}).reconstruction;
    Worst w;
    w.see(relative_error(g, a));
    return bounded("constant generalized schedule equals classic ADMM", w, 1e-10);
}

CheckResult parallel_matches_sequential(const Scale& s) {
    Rng rng(110);
    const int saved = thread_count();
    const Dims d{3 * s.max_dim, 2 * s.max_dim, s.max_n3};
    const auto t = make_transform(TransformKind::fft, d.n3);
    const auto x = random_tensor(d, rng);
    set_thread_count(0);
    const auto seq = t_tsvt(x, 0.5, t);
    set_thread_count(4);
    const auto par = t_tsvt(x, 0.5, t);
    set_thread_count(saved);
    Worst w;
    w.see(relative_error(par, seq));
    return bounded("parallel slices agree with sequential", w, 1e-12);
}

}  // namespace

std::vector<CheckResult> run_checks(CheckLevel level) {
    const Scale s = level == CheckLevel::quick ? Scale{10, 500, 6, 5} : Scale{50, 10000, 12, 8};
    const std::vector<std::function<CheckResult(const Scale&)>> suite{
        transforms_unitary,        tsvd_reconstructs, ttnn_matches_dense,         duality_attained,
        prox_optimal,              prox_nonexpansive, operators_adjoint,          x_update_normal_equations,
        generalized_matches_classic, parallel_matches_sequential};
    std::vector<CheckResult> out;
    for (const auto& check : suite) {
        try {
            out.push_back(check(s));
        } catch (const std::exception& e) {
            out.push_back({"(check threw)", false, e.what()});
        }
    }
    return out;
}

}  // namespace ttlr
