#include "ttlr/random.hpp"

#include <Eigen/QR>

namespace ttlr {

ComplexTensor3 random_tensor(Dims dims, Rng& rng) {
    std::vector<cplx> data(dims.size());
    for (auto& v : data) v = rng.complex_normal();
    return ComplexTensor3(dims, std::move(data));
}

Matrix random_unitary(std::size_t n, Rng& rng) {
    const auto nn = static_cast<Eigen::Index>(n);
    Matrix g(nn, nn);
    for (Eigen::Index c = 0; c < nn; ++c) {
        for (Eigen::Index r = 0; r < nn; ++r) g(r, c) = rng.complex_normal();
    }
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index c = 0; c < nn; ++c) {
        const double mag = std::abs(r(c, c));
        if (mag > 0.0) q.col(c) *= r(c, c) / mag;
    }
    return q;
}

}  // namespace ttlr
