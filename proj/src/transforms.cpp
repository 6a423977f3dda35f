#include "ttlr/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fft.hpp"
#include "ttlr/errors.hpp"
#include "ttlr/parallel.hpp"
#include "ttlr/random.hpp"

namespace ttlr {

namespace {

using detail::FftDirection;

constexpr std::size_t kFibersPerTask = 256;

void require_size(const UnitaryTransform& t, const ComplexTensor3& x) {
    if (x.n3() != t.size()) {
        throw DimensionError("transform of size " + std::to_string(t.size()) + " applied to tensor with n3 = " +
                             std::to_string(x.n3()));
    }
}

// Applies fiber_op to every mode-3 fiber. fiber_op receives a contiguous
// length-n3 buffer and works in place; scratch has 2*n3 entries.
template <typename FiberOp>
ComplexTensor3 for_each_fiber(const ComplexTensor3& x, FiberOp fiber_op) {
    const std::size_t n3 = x.n3();
    const std::size_t stride = x.dims().slice_size();
    const auto in = x.data();
    std::vector<cplx> out(in.size());
    const std::size_t tasks = (stride + kFibersPerTask - 1) / kFibersPerTask;
    parallel_for(tasks, [&](std::size_t task) {
        std::vector<cplx> fiber(n3);
        std::vector<cplx> scratch(2 * n3);
        const std::size_t end = std::min(stride, (task + 1) * kFibersPerTask);
        for (std::size_t f = task * kFibersPerTask; f < end; ++f) {
            for (std::size_t k = 0; k < n3; ++k) fiber[k] = in[k * stride + f];
            fiber_op(fiber, scratch);
            for (std::size_t k = 0; k < n3; ++k) out[k * stride + f] = fiber[k];
        }
    });
    return ComplexTensor3(x.dims(), std::move(out));
}

void unitary_dft(std::vector<cplx>& fiber, FftDirection dir) {
    const std::size_t n = fiber.size();
    detail::dft_1d(fiber.data(), n, dir);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (auto& v : fiber) v *= scale;
}

double dct_weight(std::size_t k, std::size_t n) {
    return std::sqrt((k == 0 ? 1.0 : 2.0) / static_cast<double>(n));
}

// Orthonormal DCT-II through a length-2n DFT of the even extension. Valid
// for complex input since the construction is linear.
void dct2(std::vector<cplx>& fiber, std::vector<cplx>& ext) {
    const std::size_t n = fiber.size();
    for (std::size_t i = 0; i < n; ++i) {
        ext[i] = fiber[i];
        ext[2 * n - 1 - i] = fiber[i];
    }
    detail::dft_1d(ext.data(), 2 * n, FftDirection::forward);
    for (std::size_t k = 0; k < n; ++k) {
        const double phase = -std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
        fiber[k] = 0.5 * dct_weight(k, n) * std::polar(1.0, phase) * ext[k];
    }
}

// Orthonormal DCT-III (inverse of dct2): the cosine is split into its two
// exponentials, each summed by one length-2n DFT.
void dct3(std::vector<cplx>& fiber, std::vector<cplx>& ext) {
    const std::size_t n = fiber.size();
    std::vector<cplx> neg(2 * n, cplx{0.0, 0.0});
    std::fill(ext.begin(), ext.end(), cplx{0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        const double phase = std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
        const cplx c = dct_weight(k, n) * fiber[k];
        ext[k] = c * std::polar(1.0, phase);
        neg[k] = c * std::polar(1.0, -phase);
    }
    detail::dft_1d(ext.data(), 2 * n, FftDirection::backward);
    detail::dft_1d(neg.data(), 2 * n, FftDirection::forward);
    for (std::size_t i = 0; i < n; ++i) fiber[i] = 0.5 * (ext[i] + neg[i]);
}

ComplexTensor3 apply_matrix(const Matrix& u, const ComplexTensor3& x) {
    // Slice-major storage makes the data an n3 x (n1*n2) row-major matrix
    // whose columns are the fibers.
    using Fibers = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const auto n3 = static_cast<Eigen::Index>(x.n3());
    const auto cols = static_cast<Eigen::Index>(x.dims().slice_size());
    Eigen::Map<const Fibers> in(x.data().data(), n3, cols);
    std::vector<cplx> out(x.size());
    Eigen::Map<Fibers> result(out.data(), n3, cols);
    result.noalias() = u * in;
    return ComplexTensor3(x.dims(), std::move(out));
}

}  // namespace

std::string to_string(TransformKind kind) {
    switch (kind) {
        case TransformKind::fft: return "fft";
        case TransformKind::dct: return "dct";
        case TransformKind::identity: return "identity";
        case TransformKind::matrix: return "matrix";
    }
    return "unknown";
}

TransformKind parse_transform_kind(std::string_view name) {
    if (name == "fft") return TransformKind::fft;
    if (name == "dct") return TransformKind::dct;
    if (name == "identity") return TransformKind::identity;
    if (name == "matrix") return TransformKind::matrix;
    throw ParameterError("unknown transform kind '" + std::string(name) + "'");
}

ComplexTensor3 UnitaryTransform::apply(const ComplexTensor3& x) const {
    require_size(*this, x);
    switch (kind_) {
        case TransformKind::identity: return x;
        case TransformKind::matrix: return apply_matrix(*matrix_, x);
        case TransformKind::fft:
            if (size_ == 1) return x;
            return for_each_fiber(x, [](std::vector<cplx>& f, std::vector<cplx>&) {
                unitary_dft(f, FftDirection::forward);
            });
        case TransformKind::dct: return for_each_fiber(x, dct2);
    }
    throw ParameterError("unsupported transform kind");
}

ComplexTensor3 UnitaryTransform::apply_adjoint(const ComplexTensor3& xhat) const {
    require_size(*this, xhat);
    switch (kind_) {
        case TransformKind::identity: return xhat;
        case TransformKind::matrix: return apply_matrix(matrix_->adjoint(), xhat);
        case TransformKind::fft:
            if (size_ == 1) return xhat;
            return for_each_fiber(xhat, [](std::vector<cplx>& f, std::vector<cplx>&) {
                unitary_dft(f, FftDirection::backward);
            });
        case TransformKind::dct: return for_each_fiber(xhat, dct3);
    }
    throw ParameterError("unsupported transform kind");
}

UnitaryTransform make_transform(TransformKind kind, std::size_t n3, std::optional<Matrix> matrix) {
    if (n3 == 0) throw ParameterError("transform size must be positive");
    if (kind != TransformKind::matrix) {
        if (matrix) throw ParameterError("only kind=matrix takes an explicit matrix");
        return UnitaryTransform(kind, n3, nullptr);
    }
    if (!matrix) throw ParameterError("kind=matrix requires a matrix");
    const auto n = static_cast<Eigen::Index>(n3);
    if (matrix->rows() != n || matrix->cols() != n) {
        throw DimensionError("transform matrix must be " + std::to_string(n3) + "x" + std::to_string(n3));
    }
    const double deviation = (matrix->adjoint() * *matrix - Matrix::Identity(n, n)).norm();
    if (!(deviation <= 1e-10 * static_cast<double>(n3))) {
        throw UnitarityError("transform matrix is not unitary", deviation);
    }
    return UnitaryTransform(kind, n3, std::make_shared<const Matrix>(std::move(*matrix)));
}

Matrix dense_matrix(const UnitaryTransform& t) {
    const std::size_t n = t.size();
    // Basis tensor of dims (1, n, n): slice k holds e_k as a row, so fiber j
    // is the j-th standard basis vector.
    std::vector<cplx> basis(n * n, cplx{0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) basis[j * n + j] = 1.0;
    const auto image = t.apply(ComplexTensor3({1, n, n}, std::move(basis)));
    Matrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = image.data()[k * n + j];
        }
    }
    return m;
}

double UnitarityReport::max_deviation() const {
    return std::max({max_norm_deviation, max_inner_deviation, max_roundtrip_deviation});
}

UnitarityReport check_unitarity(const UnitaryTransform& t, int trials, double tol, std::uint64_t seed) {
    Rng rng(seed);
    UnitarityReport report;
    report.trials = trials;
    const Dims dims{4, 3, t.size()};
    for (int trial = 0; trial < trials; ++trial) {
        const auto x = random_tensor(dims, rng);
        const auto y = random_tensor(dims, rng);
        const auto tx = t.apply(x);
        const auto ty = t.apply(y);
        const double nx = frobenius_norm(x);
        const double ny = frobenius_norm(y);
        report.max_norm_deviation = std::max(report.max_norm_deviation, std::abs(frobenius_norm(tx) - nx) / nx);
        report.max_inner_deviation =
            std::max(report.max_inner_deviation, std::abs(inner_product(tx, ty) - inner_product(x, y)) / (nx * ny));
        report.max_roundtrip_deviation =
            std::max(report.max_roundtrip_deviation, relative_error(t.apply_adjoint(tx), x));
    }
    report.passed = report.max_deviation() <= tol;
    return report;
}

}  // namespace ttlr
