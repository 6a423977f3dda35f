#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "ttlr/tensor.hpp"
#include "ttlr/transforms.hpp"

namespace ttlr {

enum class PhantomKind { moving_ellipse, rotating_bars, low_tubal_rank };

std::string to_string(PhantomKind kind);
/// Throws ParameterError for unknown names.
PhantomKind parse_phantom_kind(std::string_view name);

struct PhantomParams {
    PhantomKind kind = PhantomKind::moving_ellipse;
    std::size_t nx = 64;
    std::size_t ny = 64;
    std::size_t nt = 8;
    std::uint64_t seed = 0;
    /// low_tubal_rank only: tubal rank r and the transform the factors are
    /// multiplied under.
    std::size_t rank = 2;
    TransformKind transform = TransformKind::fft;
};

/// Synthetic dynamic image series of dims (nx, ny, nt).
///
///  - moving_ellipse: static body and organ ellipses plus one ellipse whose
///    center oscillates sinusoidally over the frames.
///  - rotating_bars: two crossed bars rotating about the center frame to
///    frame.
///  - low_tubal_rank: t-product of random nx x r x nt and r x ny x nt
///    complex Gaussian factors, so the transformed multirank is at most r in
///    every slice.
ComplexTensor3 make_phantom(const PhantomParams& params);

}  // namespace ttlr
