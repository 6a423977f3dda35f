#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ttlr/tensor.hpp"

namespace ttlr {

// k-space convention: each frame (frontal slice k) is transformed by a
// unitary 2D DFT and fftshift-ed, so DC sits at 0-based index
// (floor(nx/2), floor(ny/2)). Image space is not shifted.

/// Centered unitary 2D DFT of every frame.
ComplexTensor3 spatial_fft(const ComplexTensor3& x);
/// Exact inverse (and adjoint) of spatial_fft.
ComplexTensor3 spatial_ifft(const ComplexTensor3& k);

/// 0-based index of the DC bin along an axis of length n.
inline std::size_t dc_index(std::size_t n) { return n / 2; }

/// Binary Cartesian sampling pattern over (nx, ny, nt), in tensor storage
/// order.
class SamplingSpec {
public:
    /// mask entries must be 0 or 1 and mask.size() must equal dims.size().
    SamplingSpec(Dims dims, std::vector<std::uint8_t> mask, std::uint64_t seed = 0, std::string descriptor = "custom");

    static SamplingSpec full(Dims dims);
    static SamplingSpec empty(Dims dims);

    const Dims& dims() const noexcept { return dims_; }
    const std::vector<std::uint8_t>& mask() const noexcept { return mask_; }
    /// Number of sampled locations.
    std::size_t m() const noexcept { return m_; }
    std::uint64_t seed() const noexcept { return seed_; }
    const std::string& descriptor() const noexcept { return descriptor_; }

    /// 1-based.
    bool sampled(std::size_t i, std::size_t j, std::size_t k) const;
    /// Sampled count in frame k (1-based).
    std::size_t frame_count(std::size_t k) const;
    /// Storage offsets of the sampled locations, ascending. This is the
    /// order of KSpaceVector entries.
    const std::vector<std::size_t>& sampled_offsets() const noexcept { return offsets_; }

private:
    Dims dims_;
    std::vector<std::uint8_t> mask_;
    std::vector<std::size_t> offsets_;
    std::size_t m_ = 0;
    std::uint64_t seed_ = 0;
    std::string descriptor_;
};

using SpecPtr = std::shared_ptr<const SamplingSpec>;

/// Measured k-space samples, ordered as SamplingSpec::sampled_offsets().
class KSpaceVector {
public:
    /// Throws DimensionError when values.size() != spec->m().
    KSpaceVector(std::vector<cplx> values, SpecPtr spec);

    const std::vector<cplx>& values() const noexcept { return values_; }
    const SamplingSpec& spec() const noexcept { return *spec_; }
    const SpecPtr& spec_ptr() const noexcept { return spec_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<cplx> values_;
    SpecPtr spec_;
};

double norm(const KSpaceVector& b);
cplx inner_product(const KSpaceVector& a, const KSpaceVector& b);

/// S: gathers the sampled entries of a k-space tensor.
KSpaceVector sample(const ComplexTensor3& kspace, SpecPtr spec);
/// S^H: scatters into a zero k-space tensor.
ComplexTensor3 scatter(const KSpaceVector& b);

/// A = S o F.
KSpaceVector forward(const ComplexTensor3& x, SpecPtr spec);
/// A^H = F^H o S^H (the zero-filled reconstruction).
ComplexTensor3 adjoint(const KSpaceVector& b);

/// The mask as a 0/1 complex tensor, i.e. S^H S applied to the all-one tensor.
ComplexTensor3 mask_tensor(const SamplingSpec& spec);

struct RadialOptions {
    /// Use the same spoke angles in every frame.
    bool freeze_angles = false;
    /// Angle of the first spoke in frame 1. Drawn from the seed when unset.
    std::optional<double> initial_angle;
};

/// Golden-angle increment between frames for pseudo-radial masks.
inline constexpr double kGoldenAngle = 1.9416110387254665;  // pi * (sqrt(5) - 1) / 2

/// `lines` spokes through DC per frame at angles theta0(frame) + l*pi/lines,
/// rasterized on the Cartesian grid with the midpoint line algorithm from DC
/// to the two boundary endpoints. Angle 0 runs along the first (nx) axis.
/// theta0 advances by kGoldenAngle per frame unless freeze_angles is set.
SamplingSpec gen_pseudo_radial_mask(std::size_t nx, std::size_t ny, std::size_t nt, std::size_t lines,
                                    std::uint64_t seed, const RadialOptions& options = {});

/// Per-frame pointwise Bernoulli sampling with an isotropic Gaussian density
/// (sigma = 0.25 * min(nx, ny) grid cells) scaled so the expected per-frame
/// count is nx*ny/accel. DC is always sampled. Requires accel > 1.
SamplingSpec gen_vds_mask(std::size_t nx, std::size_t ny, std::size_t nt, double accel, std::uint64_t seed);

/// Uniform i.i.d. Bernoulli(fraction) mask. Requires 0 <= fraction <= 1.
SamplingSpec gen_bernoulli_mask(std::size_t nx, std::size_t ny, std::size_t nt, double fraction, std::uint64_t seed);

/// 20*log10(||ref|| / ||rec - ref||) in dB; +infinity when rec == ref.
/// Throws ParameterError for a zero reference.
double snr(const ComplexTensor3& rec, const ComplexTensor3& ref);

/// Adds i.i.d. complex Gaussian noise with standard deviation sigma per
/// real/imaginary component.
KSpaceVector add_noise(const KSpaceVector& b, double sigma, std::uint64_t seed);

}  // namespace ttlr
