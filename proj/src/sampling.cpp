#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include "ttlr/errors.hpp"
#include "ttlr/mri.hpp"
#include "ttlr/random.hpp"

namespace ttlr {

namespace {

struct Pixel {
    long i;
    long j;
};

// Midpoint line from a to b, inclusive of both ends. The minor coordinate
// steps only when the line passes strictly beyond the midpoint.
void rasterize_segment(Pixel a, Pixel b, const std::function<void(Pixel)>& plot) {
    const long di = std::labs(b.i - a.i);
    const long dj = std::labs(b.j - a.j);
    const long si = b.i >= a.i ? 1 : -1;
    const long sj = b.j >= a.j ? 1 : -1;
    Pixel p = a;
    if (di >= dj) {
        long decision = 2 * dj - di;
        for (long s = 0; s <= di; ++s) {
            plot(p);
            if (decision > 0) {
                p.j += sj;
                decision -= 2 * di;
            }
            decision += 2 * dj;
            p.i += si;
        }
    } else {
        long decision = 2 * di - dj;
        for (long s = 0; s <= dj; ++s) {
            plot(p);
            if (decision > 0) {
                p.i += si;
                decision -= 2 * dj;
            }
            decision += 2 * di;
            p.j += sj;
        }
    }
}

// Grid point where the ray from the center along (ci, cj) + t*(c, s) leaves
// the nx x ny grid.
Pixel boundary_endpoint(std::size_t nx, std::size_t ny, Pixel center, double c, double s) {
    constexpr double eps = 1e-12;
    double t = std::numeric_limits<double>::infinity();
    if (std::abs(c) > eps) {
        t = std::min(t, (c > 0 ? static_cast<double>(nx - 1 - center.i) : static_cast<double>(center.i)) / std::abs(c));
    }
    if (std::abs(s) > eps) {
        t = std::min(t, (s > 0 ? static_cast<double>(ny - 1 - center.j) : static_cast<double>(center.j)) / std::abs(s));
    }
    if (!std::isfinite(t)) t = 0.0;
    const long i = std::clamp(center.i + std::lround(t * c), 0L, static_cast<long>(nx) - 1);
    const long j = std::clamp(center.j + std::lround(t * s), 0L, static_cast<long>(ny) - 1);
    return {i, j};
}

std::string describe(const std::string& pattern, const std::string& params) {
    return pattern + "(" + params + ")";
}

}  // namespace

SamplingSpec gen_pseudo_radial_mask(std::size_t nx, std::size_t ny, std::size_t nt, std::size_t lines,
                                    std::uint64_t seed, const RadialOptions& options) {
    if (nx == 0 || ny == 0 || nt == 0) throw ParameterError("radial mask: dims must be positive");
    if (lines < 1) throw ParameterError("radial mask: lines must be at least 1");
    if (lines > nx * ny) throw ParameterError("radial mask: lines exceeds nx*ny");

    Rng rng(seed);
    const double spacing = std::numbers::pi / static_cast<double>(lines);
    const double base = options.initial_angle ? *options.initial_angle : rng.uniform(0.0, spacing);
    const Pixel center{static_cast<long>(dc_index(nx)), static_cast<long>(dc_index(ny))};

    const Dims dims{nx, ny, nt};
    std::vector<std::uint8_t> mask(dims.size(), 0);
    for (std::size_t k = 0; k < nt; ++k) {
        const double theta0 = options.freeze_angles ? base : base + static_cast<double>(k) * kGoldenAngle;
        std::uint8_t* frame = mask.data() + k * dims.slice_size();
        const auto plot = [&](Pixel p) { frame[static_cast<std::size_t>(p.i) * ny + static_cast<std::size_t>(p.j)] = 1; };
        for (std::size_t l = 0; l < lines; ++l) {
            const double theta = theta0 + static_cast<double>(l) * spacing;
            const double c = std::cos(theta);
            const double s = std::sin(theta);
            rasterize_segment(center, boundary_endpoint(nx, ny, center, c, s), plot);
            rasterize_segment(center, boundary_endpoint(nx, ny, center, -c, -s), plot);
        }
    }
    std::ostringstream params;
    params << "lines=" << lines << ",freeze=" << options.freeze_angles << ",theta0=" << base;
    return SamplingSpec(dims, std::move(mask), seed, describe("radial", params.str()));
}

SamplingSpec gen_vds_mask(std::size_t nx, std::size_t ny, std::size_t nt, double accel, std::uint64_t seed) {
    if (nx == 0 || ny == 0 || nt == 0) throw ParameterError("vds mask: dims must be positive");
    if (!(accel > 1.0)) throw ParameterError("vds mask: acceleration must exceed 1");

    const std::size_t frame = nx * ny;
    const double sigma = 0.25 * static_cast<double>(std::min(nx, ny));
    const auto ci = static_cast<double>(dc_index(nx));
    const auto cj = static_cast<double>(dc_index(ny));
    const std::size_t dc = dc_index(nx) * ny + dc_index(ny);

    std::vector<double> density(frame);
    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            const double di = static_cast<double>(i) - ci;
            const double dj = static_cast<double>(j) - cj;
            density[i * ny + j] = std::exp(-(di * di + dj * dj) / (2.0 * sigma * sigma));
        }
    }

    // Scale c so that sum(min(1, c * density)) hits the target, with DC
    // counted as certain. The sum is monotone in c.
    const double target = static_cast<double>(frame) / accel;
    const auto expected = [&](double c) {
        double total = 1.0;
        for (std::size_t p = 0; p < frame; ++p) {
            if (p != dc) total += std::min(1.0, c * density[p]);
        }
        return total;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (expected(hi) < target && hi < 1e300) hi *= 2.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (expected(mid) < target ? lo : hi) = mid;
    }
    std::vector<double> prob(frame);
    for (std::size_t p = 0; p < frame; ++p) prob[p] = p == dc ? 1.0 : std::min(1.0, hi * density[p]);

    Rng rng(seed);
    const Dims dims{nx, ny, nt};
    std::vector<std::uint8_t> mask(dims.size(), 0);
    for (std::size_t k = 0; k < nt; ++k) {
        for (std::size_t p = 0; p < frame; ++p) {
            const double u = rng.uniform();
            mask[k * frame + p] = (p == dc || u < prob[p]) ? 1 : 0;
        }
    }
    std::ostringstream params;
    params << "accel=" << accel;
    return SamplingSpec(dims, std::move(mask), seed, describe("vds", params.str()));
}

SamplingSpec gen_bernoulli_mask(std::size_t nx, std::size_t ny, std::size_t nt, double fraction, std::uint64_t seed) {
    if (nx == 0 || ny == 0 || nt == 0) throw ParameterError("bernoulli mask: dims must be positive");
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw ParameterError("bernoulli mask: fraction must be in [0, 1]");
    Rng rng(seed);
    const Dims dims{nx, ny, nt};
    std::vector<std::uint8_t> mask(dims.size());
    for (auto& v : mask) v = rng.uniform() < fraction ? 1 : 0;
    std::ostringstream params;
    params << "fraction=" << fraction;
    return SamplingSpec(dims, std::move(mask), seed, describe("bernoulli", params.str()));
}

}  // namespace ttlr
