#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace ttlr::cli {

namespace fs = std::filesystem;

struct Globals {
    std::uint64_t seed = 0;
    int threads = 0;
    std::string out;
    std::vector<std::string> argv;
};

struct PhantomArgs {
    std::string kind = "moving_ellipse";
    std::size_t nx = 64, ny = 64, nt = 8, rank = 2;
    std::string transform = "fft";
    std::string pgm;
};

struct MaskArgs {
    std::string pattern = "radial";
    std::size_t nx = 64, ny = 64, nt = 8, lines = 16;
    double accel = 4.0;
    double fraction = 0.5;
    bool freeze = false;
    std::optional<double> angle;
};

struct ForwardArgs {
    std::string image, mask;
    double sigma = 0.0;
};

struct ReconArgs {
    std::string kspace, mask, config, ref, pgm;
};

struct TsvdArgs {
    std::string tensor;
    std::string transform = "fft";
    std::string matrix;
    double tol = 1e-10;
};

struct MetricsArgs {
    std::string rec, ref;
};

struct CheckArgs {
    std::string level = "quick";
};

// Each command returns its process exit code and writes one manifest when
// it has an output location.
int run_phantom(const Globals& g, const PhantomArgs& a);
int run_mask(const Globals& g, const MaskArgs& a);
int run_forward(const Globals& g, const ForwardArgs& a);
int run_recon(const Globals& g, const ReconArgs& a);
int run_tsvd(const Globals& g, const TsvdArgs& a);
int run_metrics(const Globals& g, const MetricsArgs& a);
int run_check(const Globals& g, const CheckArgs& a);

}  // namespace ttlr::cli
