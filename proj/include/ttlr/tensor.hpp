#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ttlr {

using cplx = std::complex<double>;

/// Row-major complex matrix; frontal slices are stored this way.
using RowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using SliceMap = Eigen::Map<const RowMatrix>;

struct Dims {
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    std::size_t n3 = 0;

    std::size_t size() const noexcept { return n1 * n2 * n3; }
    std::size_t slice_size() const noexcept { return n1 * n2; }
    bool operator==(const Dims&) const = default;
};

/// Dense n1 x n2 x n3 complex tensor.
///
/// Storage is slice-major and row-major within a slice: entry (i, j, k) lives
/// at offset ((k-1)*n1 + (i-1))*n2 + (j-1). Every frontal slice is therefore a
/// contiguous row-major n1 x n2 block. Indices in the public API are 1-based.
///
/// Values never change after construction; all operations return new tensors.
class ComplexTensor3 {
public:
    /// Throws DimensionError if any dim is zero or data.size() != n1*n2*n3.
    ComplexTensor3(Dims dims, std::vector<cplx> data);

    static ComplexTensor3 zeros(Dims dims);

    const Dims& dims() const noexcept { return dims_; }
    std::size_t n1() const noexcept { return dims_.n1; }
    std::size_t n2() const noexcept { return dims_.n2; }
    std::size_t n3() const noexcept { return dims_.n3; }
    std::size_t size() const noexcept { return data_.size(); }

    std::span<const cplx> data() const noexcept { return data_; }

    /// Entry (i, j, k), 1-based.
    cplx operator()(std::size_t i, std::size_t j, std::size_t k) const;

    /// Frontal slice k (1-based) as an n1 x n2 view into this tensor.
    SliceMap frontal_slice(std::size_t k) const;

    /// Tube (mode-3 fiber) at (i, j), 1-based.
    std::vector<cplx> tube(std::size_t i, std::size_t j) const;

    /// Releases the storage; leaves *this unusable. For move-out in pipelines.
    std::vector<cplx> take_data() && { return std::move(data_); }

private:
    Dims dims_;
    std::vector<cplx> data_;
};

/// Builds a tensor with n3 slices, each produced by make_slice(k0) with k0
/// 0-based. All slices must share one shape. Slices may be produced in
/// parallel (see parallel_for).
ComplexTensor3 from_slices(std::size_t n3, const std::function<RowMatrix(std::size_t)>& make_slice);

/// Applies fn to every frontal slice (k0 is 0-based) and stacks the results.
ComplexTensor3 map_slices(const ComplexTensor3& x,
                          const std::function<RowMatrix(const SliceMap&, std::size_t)>& fn);

double frobenius_norm(const ComplexTensor3& x);

/// sum over entries of conj(a) * b. Throws DimensionError on dims mismatch.
cplx inner_product(const ComplexTensor3& a, const ComplexTensor3& b);

ComplexTensor3 operator+(const ComplexTensor3& a, const ComplexTensor3& b);
ComplexTensor3 operator-(const ComplexTensor3& a, const ComplexTensor3& b);
ComplexTensor3 operator*(cplx s, const ComplexTensor3& a);
ComplexTensor3 operator*(double s, const ComplexTensor3& a);

/// ||a - b||_F / ||b||_F, or ||a||_F when b is zero.
double relative_error(const ComplexTensor3& a, const ComplexTensor3& b);

/// True when every entry is finite.
bool all_finite(const ComplexTensor3& x);

/// The (n1*n3) x (n2*n3) block-diagonal matrix whose k-th diagonal block is
/// frontal slice k of the source. Off-block entries are implicit zeros.
class BlockDiagView {
public:
    explicit BlockDiagView(ComplexTensor3 source) : source_(std::move(source)) {}

    const ComplexTensor3& source() const noexcept { return source_; }
    std::size_t block_count() const noexcept { return source_.n3(); }
    std::size_t rows() const noexcept { return source_.n1() * source_.n3(); }
    std::size_t cols() const noexcept { return source_.n2() * source_.n3(); }

    /// Block k, 1-based.
    SliceMap block(std::size_t k) const { return source_.frontal_slice(k); }

    /// Matrix entry (r, c), 0-based matrix indexing.
    cplx operator()(std::size_t r, std::size_t c) const;

    /// Materializes the full matrix including the zero blocks.
    Matrix densify() const;

private:
    ComplexTensor3 source_;
};

BlockDiagView bdiag(ComplexTensor3 xhat);
ComplexTensor3 fold(const BlockDiagView& view);

/// Block-diagonal matrix product: block k of the result is block k of a
/// times block k of b.
BlockDiagView operator*(const BlockDiagView& a, const BlockDiagView& b);

}  // namespace ttlr
