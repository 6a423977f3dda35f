#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ttlr/tensor.hpp"
#include "ttlr/transforms.hpp"

namespace ttlr {

/// Default relative cut for numerical rank, measured against the largest
/// singular value over all transformed slices.
inline constexpr double kDefaultRankTolerance = 1e-10;

/// X = U *T S *T V^H.
///
/// U is n1 x n1 x n3 and V is n2 x n2 x n3, both unitary under the
/// T-product; every transformed frontal slice of S is diagonal. Singular
/// vectors are phase-canonicalized: the largest-magnitude entry of each
/// column of a transformed slice of U (and of the trailing null-space
/// columns of V) is real and positive.
struct TtSvdFactors {
    ComplexTensor3 U;
    ComplexTensor3 S;
    ComplexTensor3 V;
    UnitaryTransform transform;
    /// singular_values[k] holds the min(n1, n2) nonincreasing singular
    /// values of transformed slice k (0-based).
    std::vector<std::vector<double>> singular_values;
};

struct MultirankVector {
    std::vector<std::size_t> ranks;
    double tolerance = kDefaultRankTolerance;

    std::size_t sum() const;
};

/// C = T^H(fold(bdiag(T(A)) * bdiag(T(B)))). A is n1 x n2 x n3, B is
/// n2 x n4 x n3.
ComplexTensor3 t_product(const ComplexTensor3& a, const ComplexTensor3& b, const UnitaryTransform& t);

/// T^H(fold(conjugate transpose of every transformed slice)).
ComplexTensor3 tensor_hermitian_transpose(const ComplexTensor3& a, const UnitaryTransform& t);

/// Tensor whose transformed slices are all the n x n identity.
ComplexTensor3 identity_tensor(std::size_t n, std::size_t n3, const UnitaryTransform& t);

/// ||Q^H Q - I||_F <= tol * sqrt(n*n3) and the same for Q Q^H.
bool is_unitary_tensor(const ComplexTensor3& q, const UnitaryTransform& t, double tol);

/// Full decomposition. Throws NumericError naming the slice on SVD failure.
TtSvdFactors tt_svd(const ComplexTensor3& x, const UnitaryTransform& t);

/// Per-slice nonincreasing singular values of T(x) without the vectors.
std::vector<std::vector<double>> transformed_singular_values(const ComplexTensor3& x, const UnitaryTransform& t);

MultirankVector transformed_multirank(const ComplexTensor3& x, const UnitaryTransform& t,
                                      double tol = kDefaultRankTolerance);
std::size_t sum_rank(const ComplexTensor3& x, const UnitaryTransform& t, double tol = kDefaultRankTolerance);

/// Transformed tensor nuclear norm: nuclear norm of the transformed
/// block-diagonal matrix.
double ttnn(const ComplexTensor3& x, const UnitaryTransform& t);

/// Largest singular value over all transformed slices.
double transformed_spectral_norm(const ComplexTensor3& x, const UnitaryTransform& t);

/// Proximal map of tau * ttnn: soft-thresholds the singular values of every
/// transformed slice and maps back. Throws ParameterError on negative tau.
ComplexTensor3 t_tsvt(const ComplexTensor3& y, double tau, const UnitaryTransform& t);

/// Per-slice thresholds; tau.size() must equal n3.
ComplexTensor3 t_tsvt(const ComplexTensor3& y, std::span<const double> tau, const UnitaryTransform& t);

/// Relative thresholds: slice i uses tau_i = scale[i] * (largest singular
/// value of transformed slice i).
ComplexTensor3 t_tsvt_relative(const ComplexTensor3& y, std::span<const double> scale, const UnitaryTransform& t);

}  // namespace ttlr
