#pragma once

#include <cstdint>
#include <random>

#include "ttlr/tensor.hpp"

namespace ttlr {

/// Seeded generator shared by phantoms, masks, noise and the check suite.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    /// Complex normal with independent N(0,1) real and imaginary parts.
    cplx complex_normal() {
        const double re = normal();
        return {re, normal()};
    }

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Tensor with i.i.d. complex-normal entries.
ComplexTensor3 random_tensor(Dims dims, Rng& rng);

/// n x n unitary matrix from the QR factorization of a complex Gaussian
/// matrix, with R's diagonal phases folded back into Q.
Matrix random_unitary(std::size_t n, Rng& rng);

}  // namespace ttlr
