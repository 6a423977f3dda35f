#include "ttlr/admm.hpp"

#include <chrono>
#include <cmath>

#include "ttlr/errors.hpp"
#include "ttlr/tsvd.hpp"

namespace ttlr {

namespace {

using Clock = std::chrono::steady_clock;

// F^H((alpha * S^H b + F(Z - L)) / (alpha * mask + beta)).
ComplexTensor3 cartesian_solve(const ComplexTensor3& z, const ComplexTensor3& l_prev, const KSpaceVector& b,
                               double alpha, double beta) {
    const auto& spec = b.spec();
    if (z.dims() != spec.dims() || l_prev.dims() != spec.dims()) {
        throw DimensionError("x-update: iterate dims do not match the sampling mask");
    }
    const auto kspace = spatial_fft(z - l_prev);
    std::vector<cplx> out(kspace.data().begin(), kspace.data().end());
    const auto& mask = spec.mask();
    const auto& offsets = spec.sampled_offsets();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= beta;
    for (std::size_t s = 0; s < offsets.size(); ++s) out[offsets[s]] += alpha * b.values()[s];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] /= alpha * mask[i] + beta;
    return spatial_ifft(ComplexTensor3(spec.dims(), std::move(out)));
}

struct Measurements {
    double fidelity;
    double ttnn;
};

Measurements measure(const ComplexTensor3& x, const KSpaceVector& b, const UnitaryTransform& t) {
    const auto ax = forward(x, b.spec_ptr());
    double r = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) r += std::norm(ax.values()[i] - b.values()[i]);
    return {0.5 * r, ttnn(x, t)};
}

void require_finite(const ComplexTensor3& v, const char* name, int iter) {
    if (!all_finite(v)) throw DivergenceError(std::string("non-finite ") + name, iter);
}

// Shared iteration loop. step(n, x, l) returns (Z_n, X_n, L_n).
struct Iterate {
    ComplexTensor3 z;
    ComplexTensor3 x;
    ComplexTensor3 l;
};

template <typename Step>
ReconReport run(const KSpaceVector& b, int iterations, double rel_tol, bool record, double lambda,
                const UnitaryTransform& measure_transform, Step step) {
    const auto start = Clock::now();
    auto x = adjoint(b);
    auto l = ComplexTensor3::zeros(x.dims());
    ReconReport report{x, 0, false, {}};
    for (int n = 1; n <= iterations; ++n) {
        Iterate next = step(n, x, l);
        require_finite(next.z, "Z", n);
        require_finite(next.x, "X", n);
        require_finite(next.l, "L", n);

        const double prev_norm = frobenius_norm(x);
        const double change = frobenius_norm(next.x - x);
        if (record) {
            const auto m = measure(next.x, b, measure_transform);
            IterationRecord rec;
            rec.iter = n;
            rec.fidelity = m.fidelity;
            rec.ttnn = m.ttnn;
            rec.objective = m.fidelity + lambda * m.ttnn;
            rec.primal_residual = frobenius_norm(next.z - next.x);
            rec.elapsed_ms = std::chrono::duration<double, std::milli>(Clock::now() - start).count();
            report.history.push_back(rec);
        }
        x = std::move(next.x);
        l = std::move(next.l);
        report.iterations_run = n;

        const bool stalled = prev_norm > 0.0 ? change / prev_norm < rel_tol : change == 0.0;
        if (rel_tol > 0.0 && stalled) {
            report.converged = true;
            break;
        }
    }
    report.reconstruction = std::move(x);
    return report;
}

}  // namespace

void AdmmConfig::validate() const {
    if (!(lambda >= 0.0)) throw ParameterError("lambda must be >= 0");
    if (!(mu > 0.0)) throw ParameterError("mu must be > 0");
    if (!(eta > 0.0)) throw ParameterError("eta must be > 0");
    if (max_iters < 1) throw ParameterError("max_iters must be >= 1");
    if (!(rel_tol >= 0.0)) throw ParameterError("rel_tol must be >= 0");
}

void IterationParams::validate(std::size_t nt) const {
    if (!(gamma >= 0.0)) throw ParameterError("gamma must be >= 0");
    if (!(eta >= 0.0)) throw ParameterError("eta must be >= 0");
    if (thresholds.size() != nt) {
        throw DimensionError("threshold vector has length " + std::to_string(thresholds.size()) + ", expected " +
                             std::to_string(nt));
    }
    if (transform.size() != nt) throw DimensionError("schedule transform size does not match nt");
    if (mode == ThresholdMode::absolute) {
        for (double v : thresholds) {
            if (!(v >= 0.0)) throw ParameterError("absolute thresholds must be >= 0");
        }
    }
}

double sigmoid(double a) {
    if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
    const double e = std::exp(a);
    return e / (1.0 + e);
}

ComplexTensor3 z_update(const ComplexTensor3& x_prev, const ComplexTensor3& l_prev, double lambda, double mu,
                        const UnitaryTransform& t) {
    if (!(mu > 0.0)) throw ParameterError("z_update: mu must be > 0");
    if (!(lambda >= 0.0)) throw ParameterError("z_update: lambda must be >= 0");
    return t_tsvt(x_prev + l_prev, lambda / mu, t);
}

ComplexTensor3 x_update_cartesian(const ComplexTensor3& z, const ComplexTensor3& l_prev, const KSpaceVector& b,
                                  double mu) {
    if (!(mu >= 0.0)) throw ParameterError("x_update_cartesian: mu must be >= 0");
    if (mu == 0.0 && b.spec().m() != b.spec().dims().size()) {
        throw NumericError("x_update_cartesian: mu = 0 with unsampled locations divides 0 by 0");
    }
    return cartesian_solve(z, l_prev, b, 1.0, mu);
}

ComplexTensor3 x_update_gamma(const ComplexTensor3& z, const ComplexTensor3& l_prev, const KSpaceVector& b,
                              double gamma) {
    if (!(gamma >= 0.0)) throw ParameterError("x_update_gamma: gamma must be >= 0");
    return cartesian_solve(z, l_prev, b, gamma, 1.0);
}

ComplexTensor3 x_update_general(const ComplexTensor3& z, const ComplexTensor3& l_prev, const ComplexTensor3& ahb,
                                double mu, const NormalSolver& solver) {
    if (!(mu > 0.0)) throw ParameterError("x_update_general: mu must be > 0");
    if (!solver) throw ParameterError("x_update_general: no normal-equation solver supplied");
    return solver(ahb + mu * (z - l_prev), mu);
}

NormalSolver cartesian_normal_solver(SpecPtr spec) {
    return [spec = std::move(spec)](const ComplexTensor3& rhs, double mu) {
        if (rhs.dims() != spec->dims()) throw DimensionError("normal solver: rhs dims do not match the mask");
        // A^H A = F^H M F, so (A^H A + mu)^{-1} = F^H (M + mu)^{-1} F.
        const auto k = spatial_fft(rhs);
        std::vector<cplx> out(k.data().begin(), k.data().end());
        for (std::size_t i = 0; i < out.size(); ++i) out[i] /= spec->mask()[i] + mu;
        return spatial_ifft(ComplexTensor3(spec->dims(), std::move(out)));
    };
}

ComplexTensor3 l_update(const ComplexTensor3& l_prev, const ComplexTensor3& z, const ComplexTensor3& x, double eta) {
    return l_prev - eta * (z - x);
}

ReconReport solve(const KSpaceVector& b, const AdmmConfig& config) {
    config.validate();
    if (config.transform.size() != b.spec().dims().n3) {
        throw DimensionError("solver transform size does not match nt");
    }
    const auto& t = config.transform;
    return run(b, config.max_iters, config.rel_tol, config.record_history, config.lambda, t,
               [&](int, const ComplexTensor3& x, const ComplexTensor3& l) {
                   auto z = z_update(x, l, config.lambda, config.mu, t);
                   auto xn = x_update_cartesian(z, l, b, config.mu);
                   auto ln = l_update(l, z, xn, config.eta);
                   return Iterate{std::move(z), std::move(xn), std::move(ln)};
               });
}

ReconReport solve_generalized(const KSpaceVector& b, const std::vector<IterationParams>& schedule,
                              const UnitaryTransform& init_transform, const GeneralizedOptions& options) {
    if (schedule.empty()) throw ParameterError("generalized schedule is empty");
    const std::size_t nt = b.spec().dims().n3;
    if (init_transform.size() != nt) throw DimensionError("initial transform size does not match nt");
    for (const auto& p : schedule) p.validate(nt);

    return run(b, static_cast<int>(schedule.size()), 0.0, options.record_history, options.objective_lambda,
               init_transform, [&](int n, const ComplexTensor3& x, const ComplexTensor3& l) {
                   const auto& p = schedule[static_cast<std::size_t>(n - 1)];
                   ComplexTensor3 z = [&] {
                       if (p.mode == ThresholdMode::absolute) return t_tsvt(x + l, p.thresholds, p.transform);
                       std::vector<double> scale(p.thresholds.size());
                       for (std::size_t i = 0; i < scale.size(); ++i) scale[i] = sigmoid(p.thresholds[i]);
                       return t_tsvt_relative(x + l, scale, p.transform);
                   }();
                   auto xn = x_update_gamma(z, l, b, p.gamma);
                   auto ln = l_update(l, z, xn, p.eta);
                   return Iterate{std::move(z), std::move(xn), std::move(ln)};
               });
}

}  // namespace ttlr
