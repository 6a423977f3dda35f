#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "ttlr/tensor.hpp"

namespace ttlr {

enum class TransformKind { fft, dct, identity, matrix };

std::string to_string(TransformKind kind);
/// Throws ParameterError for unknown names.
TransformKind parse_transform_kind(std::string_view name);

/// A unitary map acting on every mode-3 fiber x(i, j, :) of a tensor.
///
/// fft and dct are unitary-normalized (1/sqrt(n3) on both directions; dct is
/// the orthonormal type-II / type-III pair) and are evaluated with fast
/// transforms. kind=matrix multiplies every fiber by a caller-supplied
/// unitary n3 x n3 matrix.
///
/// Only mode-3 transforms are provided. Transforms that mix the spatial
/// modes would plug in here as another kind.
class UnitaryTransform {
public:
    TransformKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return size_; }
    /// The supplied matrix for kind=matrix, nullptr otherwise.
    const Matrix* matrix() const noexcept { return matrix_.get(); }

    ComplexTensor3 apply(const ComplexTensor3& x) const;
    ComplexTensor3 apply_adjoint(const ComplexTensor3& xhat) const;

private:
    friend UnitaryTransform make_transform(TransformKind, std::size_t, std::optional<Matrix>);
    UnitaryTransform(TransformKind kind, std::size_t size, std::shared_ptr<const Matrix> matrix)
        : kind_(kind), size_(size), matrix_(std::move(matrix)) {}

    TransformKind kind_;
    std::size_t size_;
    std::shared_ptr<const Matrix> matrix_;
};

/// Throws ParameterError when n3 is zero or a matrix is missing/unexpected,
/// DimensionError when the matrix is not n3 x n3, and UnitarityError when
/// ||U^H U - I||_F > 1e-10 * n3.
UnitaryTransform make_transform(TransformKind kind, std::size_t n3, std::optional<Matrix> matrix = std::nullopt);

inline ComplexTensor3 apply(const UnitaryTransform& t, const ComplexTensor3& x) { return t.apply(x); }
inline ComplexTensor3 apply_adjoint(const UnitaryTransform& t, const ComplexTensor3& xhat) {
    return t.apply_adjoint(xhat);
}

/// The n3 x n3 matrix the transform applies to each fiber.
Matrix dense_matrix(const UnitaryTransform& t);

struct UnitarityReport {
    int trials = 0;
    double max_norm_deviation = 0.0;       ///< | ||T x|| - ||x|| | / ||x||
    double max_inner_deviation = 0.0;      ///< |<Tx,Ty> - <x,y>| / (||x|| ||y||)
    double max_roundtrip_deviation = 0.0;  ///< ||T^H T x - x|| / ||x||
    bool passed = false;

    double max_deviation() const;
};

/// Randomized isometry and adjoint probe on small tensors with n3 = t.size().
UnitarityReport check_unitarity(const UnitaryTransform& t, int trials, double tol, std::uint64_t seed = 1);

}  // namespace ttlr
