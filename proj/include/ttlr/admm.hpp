#pragma once

#include <functional>
#include <vector>

#include "ttlr/mri.hpp"
#include "ttlr/tensor.hpp"
#include "ttlr/transforms.hpp"

namespace ttlr {

/// Hyperparameters of the classic TTNN-regularized ADMM:
///   min_X 1/2 ||A X - b||^2 + lambda * TTNN(X)
/// with penalty mu and multiplier step eta.
struct AdmmConfig {
    explicit AdmmConfig(UnitaryTransform t) : transform(std::move(t)) {}

    double lambda = 1e-2;
    double mu = 1.0;
    double eta = 1.0;
    int max_iters = 300;
    /// Stop once ||X_n - X_{n-1}|| / ||X_{n-1}|| < rel_tol. Zero disables.
    double rel_tol = 1e-6;
    UnitaryTransform transform;
    bool record_history = true;

    /// Throws ParameterError naming the offending field.
    void validate() const;
};

enum class ThresholdMode {
    /// thresholds[i] is tau for transformed slice i.
    absolute,
    /// thresholds[i] is a_i; slice i uses sigmoid(a_i) * (largest singular
    /// value of that slice).
    relative,
};

/// One entry of the generalized (per-iteration) schedule.
struct IterationParams {
    explicit IterationParams(UnitaryTransform t) : transform(std::move(t)) {}

    double gamma = 0.1;
    double eta = 1.0;
    ThresholdMode mode = ThresholdMode::absolute;
    std::vector<double> thresholds;
    UnitaryTransform transform;

    void validate(std::size_t nt) const;
};

struct IterationRecord {
    int iter = 0;
    double objective = 0.0;  ///< fidelity + lambda * ttnn
    double fidelity = 0.0;   ///< 1/2 ||A X - b||^2
    double ttnn = 0.0;
    double primal_residual = 0.0;  ///< ||Z - X||_F
    double elapsed_ms = 0.0;
};

struct ReconReport {
    ComplexTensor3 reconstruction;
    int iterations_run = 0;
    bool converged = false;
    std::vector<IterationRecord> history;
};

double sigmoid(double a);

/// Z = D_{lambda/mu}(X_prev + L_prev), the exact minimizer of
/// lambda*TTNN(Z) + mu/2 ||Z - X_prev - L_prev||^2.
ComplexTensor3 z_update(const ComplexTensor3& x_prev, const ComplexTensor3& l_prev, double lambda, double mu,
                        const UnitaryTransform& t);

/// Cartesian closed form
///   X = F^H((S^H b + mu F(Z - L)) / (mask + mu)).
/// mu = 0 is accepted only when every location is sampled; otherwise it
/// throws NumericError (0/0 at unsampled locations).
ComplexTensor3 x_update_cartesian(const ComplexTensor3& z, const ComplexTensor3& l_prev, const KSpaceVector& b,
                                  double mu);

/// gamma form X = F^H((gamma S^H b + F(Z - L)) / (gamma mask + 1)), defined
/// for every gamma >= 0 and equal to x_update_cartesian at gamma = 1/mu.
ComplexTensor3 x_update_gamma(const ComplexTensor3& z, const ComplexTensor3& l_prev, const KSpaceVector& b,
                              double gamma);

/// Solves (A^H A + mu) X = rhs for a caller-defined A.
using NormalSolver = std::function<ComplexTensor3(const ComplexTensor3& rhs, double mu)>;

/// X = (A^H A + mu)^{-1}(A^H b + mu (Z - L)) with the inverse supplied by
/// the caller. Only the Cartesian solver ships with the library.
ComplexTensor3 x_update_general(const ComplexTensor3& z, const ComplexTensor3& l_prev, const ComplexTensor3& ahb,
                                double mu, const NormalSolver& solver);

/// Exact NormalSolver for A = S o F on the given mask.
NormalSolver cartesian_normal_solver(SpecPtr spec);

/// L = L_prev - eta (Z - X).
ComplexTensor3 l_update(const ComplexTensor3& l_prev, const ComplexTensor3& z, const ComplexTensor3& x, double eta);

/// Classic ADMM. X_0 = A^H b, Z_0 = X_0, L_0 = 0, then Z -> X -> L until
/// rel_tol or max_iters. Throws DivergenceError on non-finite iterates.
ReconReport solve(const KSpaceVector& b, const AdmmConfig& config);

struct GeneralizedOptions {
    /// lambda used for the objective column of the history.
    double objective_lambda = 0.0;
    bool record_history = true;
};

/// Runs one iteration per schedule entry with per-iteration transform,
/// thresholds, gamma and eta. history ttnn values are measured under
/// init_transform.
ReconReport solve_generalized(const KSpaceVector& b, const std::vector<IterationParams>& schedule,
                              const UnitaryTransform& init_transform, const GeneralizedOptions& options = {});

}  // namespace ttlr
