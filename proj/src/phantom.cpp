#include "ttlr/phantom.hpp"

#include <cmath>
#include <numbers>

#include "ttlr/errors.hpp"
#include "ttlr/random.hpp"
#include "ttlr/tsvd.hpp"

namespace ttlr {

namespace {

struct Ellipse {
    double cx, cy;  // center in [-1, 1] normalized coordinates
    double ax, ay;  // semi-axes
    double angle;
    double value;

    bool contains(double x, double y) const {
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        const double u = (c * (x - cx) + s * (y - cy)) / ax;
        const double v = (-s * (x - cx) + c * (y - cy)) / ay;
        return u * u + v * v <= 1.0;
    }
};

// Pixel centers mapped to [-1, 1] along each axis.
double coord(std::size_t idx, std::size_t n) {
    return n == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(idx) / static_cast<double>(n - 1);
}

template <typename Shade>
ComplexTensor3 render(std::size_t nx, std::size_t ny, std::size_t nt, Shade shade) {
    const Dims dims{nx, ny, nt};
    std::vector<cplx> data(dims.size());
    for (std::size_t k = 0; k < nt; ++k) {
        for (std::size_t i = 0; i < nx; ++i) {
            for (std::size_t j = 0; j < ny; ++j) {
                data[(k * nx + i) * ny + j] = shade(coord(i, nx), coord(j, ny), k);
            }
        }
    }
    return ComplexTensor3(dims, std::move(data));
}

ComplexTensor3 moving_ellipse(const PhantomParams& p) {
    Rng rng(p.seed);
    const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const std::vector<Ellipse> background = {
        {0.0, 0.0, 0.85, 0.70, 0.0, 0.35},
        {-0.35, -0.25, 0.20, 0.30, 0.3, 0.25},
        {0.40, 0.30, 0.15, 0.12, -0.4, 0.45},
    };
    return render(p.nx, p.ny, p.nt, [&](double x, double y, std::size_t k) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(p.nt);
        const Ellipse heart{0.10 + 0.18 * std::sin(t + phase), -0.05, 0.22, 0.18, 0.2, 0.6};
        double v = 0.0;
        for (const auto& e : background) {
            if (e.contains(x, y)) v += e.value;
        }
        if (heart.contains(x, y)) v += heart.value;
        return cplx{v, 0.0};
    });
}

ComplexTensor3 rotating_bars(const PhantomParams& p) {
    Rng rng(p.seed);
    const double phase = rng.uniform(0.0, std::numbers::pi);
    return render(p.nx, p.ny, p.nt, [&](double x, double y, std::size_t k) {
        const double theta = phase + std::numbers::pi * static_cast<double>(k) / static_cast<double>(p.nt);
        double v = (x * x + y * y <= 0.81) ? 0.2 : 0.0;
        for (int bar = 0; bar < 2; ++bar) {
            const double a = theta + bar * std::numbers::pi / 2.0;
            const double along = std::cos(a) * x + std::sin(a) * y;
            const double across = -std::sin(a) * x + std::cos(a) * y;
            if (std::abs(along) <= 0.7 && std::abs(across) <= 0.08) v += 0.5;
        }
        return cplx{v, 0.0};
    });
}

ComplexTensor3 low_tubal_rank(const PhantomParams& p) {
    if (p.rank < 1) throw ParameterError("low_tubal_rank phantom: rank must be at least 1");
    if (p.transform == TransformKind::matrix) {
        throw ParameterError("low_tubal_rank phantom: transform must be fft, dct or identity");
    }
    Rng rng(p.seed);
    const auto t = make_transform(p.transform, p.nt);
    const auto left = random_tensor({p.nx, p.rank, p.nt}, rng);
    const auto right = random_tensor({p.rank, p.ny, p.nt}, rng);
    return (1.0 / std::sqrt(static_cast<double>(p.rank))) * t_product(left, right, t);
}

}  // namespace

std::string to_string(PhantomKind kind) {
    switch (kind) {
        case PhantomKind::moving_ellipse: return "moving_ellipse";
        case PhantomKind::rotating_bars: return "rotating_bars";
        case PhantomKind::low_tubal_rank: return "low_tubal_rank";
    }
    return "unknown";
}

PhantomKind parse_phantom_kind(std::string_view name) {
    if (name == "moving_ellipse") return PhantomKind::moving_ellipse;
    if (name == "rotating_bars") return PhantomKind::rotating_bars;
    if (name == "low_tubal_rank") return PhantomKind::low_tubal_rank;
    throw ParameterError("unknown phantom kind '" + std::string(name) + "'");
}

ComplexTensor3 make_phantom(const PhantomParams& params) {
    if (params.nx == 0 || params.ny == 0 || params.nt == 0) throw ParameterError("phantom dims must be positive");
    switch (params.kind) {
        case PhantomKind::moving_ellipse: return moving_ellipse(params);
        case PhantomKind::rotating_bars: return rotating_bars(params);
        case PhantomKind::low_tubal_rank: return low_tubal_rank(params);
    }
    throw ParameterError("unknown phantom kind");
}

}  // namespace ttlr
