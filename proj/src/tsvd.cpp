#include "ttlr/tsvd.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/SVD>

#include "ttlr/errors.hpp"
#include "ttlr/parallel.hpp"

namespace ttlr {

namespace {

using Svd = Eigen::BDCSVD<Matrix>;

Svd slice_svd(const SliceMap& slice, unsigned options, std::size_t k0) {
    Svd svd(Matrix(slice), options);
    if (svd.info() != Eigen::Success) throw NumericError("slice SVD did not converge", static_cast<std::ptrdiff_t>(k0 + 1));
    return svd;
}

std::vector<double> to_vector(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

// Rotates column c so that its largest-magnitude entry is real positive and
// returns the conjugate phase that was applied.
cplx canonicalize_column(Matrix& m, Eigen::Index c) {
    Eigen::Index arg = 0;
    m.col(c).cwiseAbs().maxCoeff(&arg);
    const cplx pivot = m(arg, c);
    const double mag = std::abs(pivot);
    if (mag == 0.0) return {1.0, 0.0};
    const cplx rot = std::conj(pivot) / mag;
    m.col(c) *= rot;
    m(arg, c) = mag;
    return rot;
}

ComplexTensor3 threshold_slices(const ComplexTensor3& y, const UnitaryTransform& t,
                                const std::function<double(std::size_t, double)>& tau_for) {
    const auto yhat = t.apply(y);
    auto shrunk = map_slices(yhat, [&](const SliceMap& slice, std::size_t k) -> RowMatrix {
        const auto svd = slice_svd(slice, Eigen::ComputeThinU | Eigen::ComputeThinV, k);
        const Eigen::VectorXd& sigma = svd.singularValues();
        const double top = sigma.size() > 0 ? sigma(0) : 0.0;
        const double tau = tau_for(k, top);
        const Eigen::VectorXd kept = (sigma.array() - tau).max(0.0).matrix();
        return svd.matrixU() * kept.asDiagonal() * svd.matrixV().adjoint();
    });
    return t.apply_adjoint(shrunk);
}

void require_transform(const ComplexTensor3& x, const UnitaryTransform& t, const char* op) {
    if (x.n3() != t.size()) {
        throw DimensionError(std::string(op) + ": transform size " + std::to_string(t.size()) +
                             " does not match n3 = " + std::to_string(x.n3()));
    }
}

}  // namespace

std::size_t MultirankVector::sum() const { return std::accumulate(ranks.begin(), ranks.end(), std::size_t{0}); }

ComplexTensor3 t_product(const ComplexTensor3& a, const ComplexTensor3& b, const UnitaryTransform& t) {
    if (a.n2() != b.n1()) {
        throw DimensionError("t_product: inner dimensions " + std::to_string(a.n2()) + " and " +
                             std::to_string(b.n1()) + " differ");
    }
    if (a.n3() != b.n3()) throw DimensionError("t_product: operands have different n3");
    require_transform(a, t, "t_product");
    const auto product = bdiag(t.apply(a)) * bdiag(t.apply(b));
    return t.apply_adjoint(fold(product));
}

ComplexTensor3 tensor_hermitian_transpose(const ComplexTensor3& a, const UnitaryTransform& t) {
    require_transform(a, t, "tensor_hermitian_transpose");
    const auto ahat = t.apply(a);
    return t.apply_adjoint(
        map_slices(ahat, [](const SliceMap& slice, std::size_t) -> RowMatrix { return slice.adjoint(); }));
}

ComplexTensor3 identity_tensor(std::size_t n, std::size_t n3, const UnitaryTransform& t) {
    if (n == 0 || n3 == 0) throw ParameterError("identity_tensor: sizes must be positive");
    if (t.size() != n3) throw DimensionError("identity_tensor: transform size does not match n3");
    const auto nn = static_cast<Eigen::Index>(n);
    return t.apply_adjoint(from_slices(n3, [&](std::size_t) -> RowMatrix { return RowMatrix::Identity(nn, nn); }));
}

bool is_unitary_tensor(const ComplexTensor3& q, const UnitaryTransform& t, double tol) {
    if (q.n1() != q.n2()) throw DimensionError("is_unitary_tensor: frontal slices must be square");
    require_transform(q, t, "is_unitary_tensor");
    const auto qh = tensor_hermitian_transpose(q, t);
    const auto eye = identity_tensor(q.n1(), q.n3(), t);
    const double bound = tol * std::sqrt(static_cast<double>(q.n1() * q.n3()));
    return frobenius_norm(t_product(qh, q, t) - eye) <= bound && frobenius_norm(t_product(q, qh, t) - eye) <= bound;
}

TtSvdFactors tt_svd(const ComplexTensor3& x, const UnitaryTransform& t) {
    require_transform(x, t, "tt_svd");
    const std::size_t n3 = x.n3();
    const auto n1 = static_cast<Eigen::Index>(x.n1());
    const auto n2 = static_cast<Eigen::Index>(x.n2());
    const Eigen::Index r = std::min(n1, n2);
    const auto xhat = t.apply(x);

    std::vector<RowMatrix> u(n3), s(n3), v(n3);
    std::vector<std::vector<double>> sigma(n3);
    parallel_for(n3, [&](std::size_t k) {
        const auto svd = slice_svd(xhat.frontal_slice(k + 1), Eigen::ComputeFullU | Eigen::ComputeFullV, k);
        Matrix uk = svd.matrixU();
        Matrix vk = svd.matrixV();
        for (Eigen::Index c = 0; c < n1; ++c) {
            const cplx rot = canonicalize_column(uk, c);
            if (c < r) vk.col(c) *= rot;
        }
        for (Eigen::Index c = r; c < n2; ++c) canonicalize_column(vk, c);
        u[k] = uk;
        v[k] = vk;
        s[k] = RowMatrix::Zero(n1, n2);
        for (Eigen::Index i = 0; i < r; ++i) s[k](i, i) = svd.singularValues()(i);
        sigma[k] = to_vector(svd.singularValues());
    });

    auto stack = [&](std::vector<RowMatrix>& slices) {
        return t.apply_adjoint(from_slices(n3, [&](std::size_t k) { return std::move(slices[k]); }));
    };
    return TtSvdFactors{stack(u), stack(s), stack(v), t, std::move(sigma)};
}

std::vector<std::vector<double>> transformed_singular_values(const ComplexTensor3& x, const UnitaryTransform& t) {
    require_transform(x, t, "transformed_singular_values");
    const auto xhat = t.apply(x);
    std::vector<std::vector<double>> sigma(x.n3());
    parallel_for(x.n3(), [&](std::size_t k) {
        sigma[k] = to_vector(slice_svd(xhat.frontal_slice(k + 1), 0, k).singularValues());
    });
    return sigma;
}

MultirankVector transformed_multirank(const ComplexTensor3& x, const UnitaryTransform& t, double tol) {
    if (tol < 0.0) throw ParameterError("rank tolerance must be nonnegative");
    const auto sigma = transformed_singular_values(x, t);
    double top = 0.0;
    for (const auto& s : sigma) {
        if (!s.empty()) top = std::max(top, s.front());
    }
    MultirankVector out;
    out.tolerance = tol;
    out.ranks.reserve(sigma.size());
    for (const auto& s : sigma) {
        out.ranks.push_back(top == 0.0 ? 0
                                       : static_cast<std::size_t>(std::count_if(
                                             s.begin(), s.end(), [&](double v) { return v > tol * top; })));
    }
    return out;
}

std::size_t sum_rank(const ComplexTensor3& x, const UnitaryTransform& t, double tol) {
    return transformed_multirank(x, t, tol).sum();
}

double ttnn(const ComplexTensor3& x, const UnitaryTransform& t) {
    double total = 0.0;
    for (const auto& s : transformed_singular_values(x, t)) total = std::accumulate(s.begin(), s.end(), total);
    return total;
}

double transformed_spectral_norm(const ComplexTensor3& x, const UnitaryTransform& t) {
    double top = 0.0;
    for (const auto& s : transformed_singular_values(x, t)) {
        if (!s.empty()) top = std::max(top, s.front());
    }
    return top;
}

ComplexTensor3 t_tsvt(const ComplexTensor3& y, double tau, const UnitaryTransform& t) {
    if (!(tau >= 0.0)) throw ParameterError("t_tsvt: threshold must be nonnegative");
    require_transform(y, t, "t_tsvt");
    return threshold_slices(y, t, [tau](std::size_t, double) { return tau; });
}

ComplexTensor3 t_tsvt(const ComplexTensor3& y, std::span<const double> tau, const UnitaryTransform& t) {
    require_transform(y, t, "t_tsvt");
    if (tau.size() != y.n3()) throw DimensionError("t_tsvt: threshold vector length must equal n3");
    for (double v : tau) {
        if (!(v >= 0.0)) throw ParameterError("t_tsvt: thresholds must be nonnegative");
    }
    return threshold_slices(y, t, [tau](std::size_t k, double) { return tau[k]; });
}

ComplexTensor3 t_tsvt_relative(const ComplexTensor3& y, std::span<const double> scale, const UnitaryTransform& t) {
    require_transform(y, t, "t_tsvt_relative");
    if (scale.size() != y.n3()) throw DimensionError("t_tsvt_relative: scale vector length must equal n3");
    for (double v : scale) {
        if (!(v >= 0.0)) throw ParameterError("t_tsvt_relative: scales must be nonnegative");
    }
    return threshold_slices(y, t, [scale](std::size_t k, double top) { return scale[k] * top; });
}

}  // namespace ttlr
