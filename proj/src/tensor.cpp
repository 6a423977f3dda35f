#include "ttlr/tensor.hpp"

#include <cmath>
#include <string>

#include "ttlr/errors.hpp"
#include "ttlr/parallel.hpp"

namespace ttlr {

namespace {

std::string dims_str(const Dims& d) {
    return "(" + std::to_string(d.n1) + "," + std::to_string(d.n2) + "," + std::to_string(d.n3) + ")";
}

void require_same_dims(const ComplexTensor3& a, const ComplexTensor3& b, const char* op) {
    if (a.dims() != b.dims()) {
        throw DimensionError(std::string(op) + ": dims " + dims_str(a.dims()) + " vs " +
                             dims_str(b.dims()));
    }
}

template <typename F>
ComplexTensor3 zip(const ComplexTensor3& a, const ComplexTensor3& b, const char* op, F f) {
    require_same_dims(a, b, op);
    std::vector<cplx> out(a.size());
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(da[i], db[i]);
    return ComplexTensor3(a.dims(), std::move(out));
}

}  // namespace

ComplexTensor3::ComplexTensor3(Dims dims, std::vector<cplx> data) : dims_(dims), data_(std::move(data)) {
    if (dims.n1 == 0 || dims.n2 == 0 || dims.n3 == 0) {
        throw DimensionError("tensor dims must be positive, got " + dims_str(dims));
    }
    if (data_.size() != dims.size()) {
        throw DimensionError("tensor data length " + std::to_string(data_.size()) +
                             " does not match dims " + dims_str(dims));
    }
}

ComplexTensor3 ComplexTensor3::zeros(Dims dims) {
    return ComplexTensor3(dims, std::vector<cplx>(dims.size()));
}

cplx ComplexTensor3::operator()(std::size_t i, std::size_t j, std::size_t k) const {
    if (i < 1 || i > n1() || j < 1 || j > n2() || k < 1 || k > n3()) {
        throw DimensionError("tensor index out of range");
    }
    return data_[((k - 1) * n1() + (i - 1)) * n2() + (j - 1)];
}

SliceMap ComplexTensor3::frontal_slice(std::size_t k) const {
    if (k < 1 || k > n3()) throw DimensionError("frontal slice index out of range");
    return SliceMap(data_.data() + (k - 1) * dims_.slice_size(),
                    static_cast<Eigen::Index>(n1()), static_cast<Eigen::Index>(n2()));
}

std::vector<cplx> ComplexTensor3::tube(std::size_t i, std::size_t j) const {
    std::vector<cplx> t(n3());
    for (std::size_t k = 1; k <= n3(); ++k) t[k - 1] = (*this)(i, j, k);
    return t;
}

ComplexTensor3 from_slices(std::size_t n3, const std::function<RowMatrix(std::size_t)>& make_slice) {
    if (n3 == 0) throw DimensionError("from_slices: n3 must be positive");
    std::vector<RowMatrix> slices(n3);
    parallel_for(n3, [&](std::size_t k) { slices[k] = make_slice(k); });

    const auto rows = static_cast<std::size_t>(slices[0].rows());
    const auto cols = static_cast<std::size_t>(slices[0].cols());
    const Dims dims{rows, cols, n3};
    std::vector<cplx> data(dims.size());
    for (std::size_t k = 0; k < n3; ++k) {
        if (static_cast<std::size_t>(slices[k].rows()) != rows ||
            static_cast<std::size_t>(slices[k].cols()) != cols) {
            throw DimensionError("from_slices: slice shapes differ");
        }
        std::copy(slices[k].data(), slices[k].data() + rows * cols, data.begin() + k * rows * cols);
    }
    return ComplexTensor3(dims, std::move(data));
}

ComplexTensor3 map_slices(const ComplexTensor3& x,
                          const std::function<RowMatrix(const SliceMap&, std::size_t)>& fn) {
    return from_slices(x.n3(), [&](std::size_t k) { return fn(x.frontal_slice(k + 1), k); });
}

double frobenius_norm(const ComplexTensor3& x) {
    double s = 0.0;
    for (const auto& v : x.data()) s += std::norm(v);
    return std::sqrt(s);
}

cplx inner_product(const ComplexTensor3& a, const ComplexTensor3& b) {
    require_same_dims(a, b, "inner_product");
    cplx s{0.0, 0.0};
    const auto da = a.data();
    const auto db = b.data();
    for (std::size_t i = 0; i < da.size(); ++i) s += std::conj(da[i]) * db[i];
    return s;
}

ComplexTensor3 operator+(const ComplexTensor3& a, const ComplexTensor3& b) {
    return zip(a, b, "add", [](cplx x, cplx y) { return x + y; });
}

ComplexTensor3 operator-(const ComplexTensor3& a, const ComplexTensor3& b) {
    return zip(a, b, "subtract", [](cplx x, cplx y) { return x - y; });
}

ComplexTensor3 operator*(cplx s, const ComplexTensor3& a) {
    std::vector<cplx> out(a.data().begin(), a.data().end());
    for (auto& v : out) v *= s;
    return ComplexTensor3(a.dims(), std::move(out));
}

ComplexTensor3 operator*(double s, const ComplexTensor3& a) {
    std::vector<cplx> out(a.data().begin(), a.data().end());
    for (auto& v : out) v *= s;
    return ComplexTensor3(a.dims(), std::move(out));
}

double relative_error(const ComplexTensor3& a, const ComplexTensor3& b) {
    const double diff = frobenius_norm(a - b);
    const double ref = frobenius_norm(b);
    return ref > 0.0 ? diff / ref : diff;
}

bool all_finite(const ComplexTensor3& x) {
    for (const auto& v : x.data()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

cplx BlockDiagView::operator()(std::size_t r, std::size_t c) const {
    const std::size_t n1 = source_.n1();
    const std::size_t n2 = source_.n2();
    if (r >= rows() || c >= cols()) throw DimensionError("block-diagonal index out of range");
    const std::size_t kr = r / n1;
    const std::size_t kc = c / n2;
    if (kr != kc) return {0.0, 0.0};
    return source_.data()[(kr * n1 + r % n1) * n2 + c % n2];
}

Matrix BlockDiagView::densify() const {
    const auto n1 = static_cast<Eigen::Index>(source_.n1());
    const auto n2 = static_cast<Eigen::Index>(source_.n2());
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(rows()), static_cast<Eigen::Index>(cols()));
    for (std::size_t k = 0; k < block_count(); ++k) {
        const auto kk = static_cast<Eigen::Index>(k);
        m.block(kk * n1, kk * n2, n1, n2) = block(k + 1);
    }
    return m;
}

BlockDiagView bdiag(ComplexTensor3 xhat) { return BlockDiagView(std::move(xhat)); }

ComplexTensor3 fold(const BlockDiagView& view) { return view.source(); }

BlockDiagView operator*(const BlockDiagView& a, const BlockDiagView& b) {
    const auto& sa = a.source();
    const auto& sb = b.source();
    if (sa.n2() != sb.n1() || sa.n3() != sb.n3()) {
        throw DimensionError("block-diagonal product: incompatible block shapes");
    }
    return BlockDiagView(from_slices(sa.n3(), [&](std::size_t k) -> RowMatrix {
        return sa.frontal_slice(k + 1) * sb.frontal_slice(k + 1);
    }));
}

}  // namespace ttlr
