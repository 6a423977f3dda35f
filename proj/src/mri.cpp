#include "ttlr/mri.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fft.hpp"
#include "ttlr/errors.hpp"
#include "ttlr/parallel.hpp"
#include "ttlr/random.hpp"

namespace ttlr {

namespace {

// Circular shift of a row-major rows x cols frame by (dr, dc).
void roll_frame(const cplx* in, cplx* out, std::size_t rows, std::size_t cols, std::size_t dr, std::size_t dc) {
    for (std::size_t r = 0; r < rows; ++r) {
        const std::size_t rr = (r + dr) % rows;
        for (std::size_t c = 0; c < cols; ++c) out[rr * cols + (c + dc) % cols] = in[r * cols + c];
    }
}

ComplexTensor3 frame_transform(const ComplexTensor3& x, bool forward_dir) {
    const std::size_t nx = x.n1();
    const std::size_t ny = x.n2();
    const std::size_t frame = x.dims().slice_size();
    const double scale = 1.0 / std::sqrt(static_cast<double>(frame));
    // fftshift moves index 0 to floor(n/2); ifftshift is the reverse roll.
    const std::size_t sx = forward_dir ? nx / 2 : nx - nx / 2;
    const std::size_t sy = forward_dir ? ny / 2 : ny - ny / 2;
    const auto in = x.data();
    std::vector<cplx> out(in.size());
    parallel_for(x.n3(), [&](std::size_t k) {
        const cplx* src = in.data() + k * frame;
        cplx* dst = out.data() + k * frame;
        std::vector<cplx> buf(frame);
        if (forward_dir) {
            std::copy(src, src + frame, buf.begin());
            detail::dft_2d(buf.data(), nx, ny, detail::FftDirection::forward);
            roll_frame(buf.data(), dst, nx, ny, sx, sy);
        } else {
            roll_frame(src, buf.data(), nx, ny, sx, sy);
            detail::dft_2d(buf.data(), nx, ny, detail::FftDirection::backward);
            std::copy(buf.begin(), buf.end(), dst);
        }
        for (std::size_t i = 0; i < frame; ++i) dst[i] *= scale;
    });
    return ComplexTensor3(x.dims(), std::move(out));
}

void require_spec_dims(const ComplexTensor3& x, const SamplingSpec& spec) {
    if (x.dims() != spec.dims()) throw DimensionError("tensor dims do not match the sampling mask");
}

}  // namespace

ComplexTensor3 spatial_fft(const ComplexTensor3& x) { return frame_transform(x, true); }

ComplexTensor3 spatial_ifft(const ComplexTensor3& k) { return frame_transform(k, false); }

SamplingSpec::SamplingSpec(Dims dims, std::vector<std::uint8_t> mask, std::uint64_t seed, std::string descriptor)
    : dims_(dims), mask_(std::move(mask)), seed_(seed), descriptor_(std::move(descriptor)) {
    if (dims.n1 == 0 || dims.n2 == 0 || dims.n3 == 0) throw DimensionError("mask dims must be positive");
    if (mask_.size() != dims.size()) throw DimensionError("mask length does not match dims");
    for (std::size_t i = 0; i < mask_.size(); ++i) {
        if (mask_[i] > 1) throw ParameterError("mask entries must be 0 or 1");
        if (mask_[i]) offsets_.push_back(i);
    }
    m_ = offsets_.size();
}

SamplingSpec SamplingSpec::full(Dims dims) {
    return SamplingSpec(dims, std::vector<std::uint8_t>(dims.size(), 1), 0, "full");
}

SamplingSpec SamplingSpec::empty(Dims dims) {
    return SamplingSpec(dims, std::vector<std::uint8_t>(dims.size(), 0), 0, "empty");
}

bool SamplingSpec::sampled(std::size_t i, std::size_t j, std::size_t k) const {
    if (i < 1 || i > dims_.n1 || j < 1 || j > dims_.n2 || k < 1 || k > dims_.n3) {
        throw DimensionError("mask index out of range");
    }
    return mask_[((k - 1) * dims_.n1 + (i - 1)) * dims_.n2 + (j - 1)] != 0;
}

std::size_t SamplingSpec::frame_count(std::size_t k) const {
    if (k < 1 || k > dims_.n3) throw DimensionError("frame index out of range");
    const auto begin = mask_.begin() + static_cast<std::ptrdiff_t>((k - 1) * dims_.slice_size());
    return static_cast<std::size_t>(std::count(begin, begin + static_cast<std::ptrdiff_t>(dims_.slice_size()), 1));
}

KSpaceVector::KSpaceVector(std::vector<cplx> values, SpecPtr spec) : values_(std::move(values)), spec_(std::move(spec)) {
    if (!spec_) throw ParameterError("k-space vector needs a sampling spec");
    if (values_.size() != spec_->m()) {
        throw DimensionError("k-space vector has " + std::to_string(values_.size()) + " entries, mask samples " +
                             std::to_string(spec_->m()));
    }
}

double norm(const KSpaceVector& b) {
    double s = 0.0;
    for (const auto& v : b.values()) s += std::norm(v);
    return std::sqrt(s);
}

cplx inner_product(const KSpaceVector& a, const KSpaceVector& b) {
    if (a.size() != b.size()) throw DimensionError("k-space inner product: lengths differ");
    cplx s{0.0, 0.0};
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a.values()[i]) * b.values()[i];
    return s;
}

KSpaceVector sample(const ComplexTensor3& kspace, SpecPtr spec) {
    require_spec_dims(kspace, *spec);
    const auto data = kspace.data();
    std::vector<cplx> values;
    values.reserve(spec->m());
    for (const auto off : spec->sampled_offsets()) values.push_back(data[off]);
    return KSpaceVector(std::move(values), std::move(spec));
}

ComplexTensor3 scatter(const KSpaceVector& b) {
    const auto& spec = b.spec();
    std::vector<cplx> out(spec.dims().size(), cplx{0.0, 0.0});
    const auto& offsets = spec.sampled_offsets();
    for (std::size_t i = 0; i < offsets.size(); ++i) out[offsets[i]] = b.values()[i];
    return ComplexTensor3(spec.dims(), std::move(out));
}

KSpaceVector forward(const ComplexTensor3& x, SpecPtr spec) {
    require_spec_dims(x, *spec);
    return sample(spatial_fft(x), std::move(spec));
}

ComplexTensor3 adjoint(const KSpaceVector& b) { return spatial_ifft(scatter(b)); }

ComplexTensor3 mask_tensor(const SamplingSpec& spec) {
    std::vector<cplx> out(spec.mask().size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = spec.mask()[i] ? 1.0 : 0.0;
    return ComplexTensor3(spec.dims(), std::move(out));
}

double snr(const ComplexTensor3& rec, const ComplexTensor3& ref) {
    if (rec.dims() != ref.dims()) throw DimensionError("snr: dims differ");
    const double ref_norm = frobenius_norm(ref);
    if (ref_norm == 0.0) throw ParameterError("snr: reference tensor is zero");
    const double err = frobenius_norm(rec - ref);
    if (err == 0.0) return std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(ref_norm / err);
}

KSpaceVector add_noise(const KSpaceVector& b, double sigma, std::uint64_t seed) {
    if (!(sigma >= 0.0)) throw ParameterError("noise sigma must be nonnegative");
    if (sigma == 0.0) return b;
    Rng rng(seed);
    std::vector<cplx> values = b.values();
    for (auto& v : values) v += sigma * rng.complex_normal();
    return KSpaceVector(std::move(values), b.spec_ptr());
}

}  // namespace ttlr
