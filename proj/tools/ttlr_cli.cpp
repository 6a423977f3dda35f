#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "ttlr/errors.hpp"
#include "ttlr/parallel.hpp"

namespace {

constexpr int kUsage = 2;
constexpr int kData = 3;
constexpr int kNumeric = 4;

}  // namespace

int main(int argc, char** argv) {
    using namespace ttlr::cli;

    Globals g;
    g.argv.assign(argv, argv + argc);

    CLI::App app{"Low-rank dynamic MRI reconstruction with transformed tensor nuclear norms"};
    app.require_subcommand(1);
    app.add_option("--seed", g.seed, "Seed for every random draw")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads for slice-parallel work; 0 runs sequentially")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--out", g.out, "Output path (or prefix for tsvd)");

    PhantomArgs phantom;
    auto* ph = app.add_subcommand("phantom", "Generate a synthetic image series");
    ph->add_option("--kind", phantom.kind, "moving_ellipse, rotating_bars or low_tubal_rank")->capture_default_str();
    ph->add_option("--nx", phantom.nx)->capture_default_str();
    ph->add_option("--ny", phantom.ny)->capture_default_str();
    ph->add_option("--nt", phantom.nt)->capture_default_str();
    ph->add_option("--rank", phantom.rank, "Tubal rank for low_tubal_rank")->capture_default_str();
    ph->add_option("--transform", phantom.transform, "Transform for low_tubal_rank")->capture_default_str();
    ph->add_option("--pgm", phantom.pgm, "Also write per-frame PGM images with this prefix");

    MaskArgs mask;
    auto* mk = app.add_subcommand("mask", "Generate a k-space sampling mask");
    mk->add_option("--pattern", mask.pattern, "radial, vds, bernoulli or full")->capture_default_str();
    mk->add_option("--nx", mask.nx)->capture_default_str();
    mk->add_option("--ny", mask.ny)->capture_default_str();
    mk->add_option("--nt", mask.nt)->capture_default_str();
    mk->add_option("--lines", mask.lines, "Spokes per frame (radial)")->capture_default_str();
    mk->add_option("--accel", mask.accel, "Acceleration factor R > 1 (vds)")->capture_default_str();
    mk->add_option("--fraction", mask.fraction, "Sampling probability (bernoulli)")->capture_default_str();
    mk->add_flag("--freeze", mask.freeze, "Use the same spoke angles in every frame (radial)");
    mk->add_option("--angle", mask.angle, "First spoke angle in radians instead of a seeded draw (radial)");

    ForwardArgs fwd;
    auto* fw = app.add_subcommand("forward", "Simulate undersampled k-space from an image series");
    fw->add_option("--image", fwd.image)->required();
    fw->add_option("--mask", fwd.mask)->required();
    fw->add_option("--sigma", fwd.sigma, "Noise std per real/imaginary component")->capture_default_str();

    ReconArgs recon;
    auto* rc = app.add_subcommand("recon", "Reconstruct an image series from k-space");
    rc->add_option("--kspace", recon.kspace)->required();
    rc->add_option("--mask", recon.mask, "Mask to verify against the one recorded in the k-space file");
    rc->add_option("--config", recon.config, "JSON solver configuration");
    rc->add_option("--ref", recon.ref, "Reference series; prints the SNR");
    rc->add_option("--pgm", recon.pgm, "Also write per-frame PGM images with this prefix");

    TsvdArgs tsvd;
    auto* ts = app.add_subcommand("tsvd", "Transformed t-SVD, TTNN and multirank of a tensor");
    ts->add_option("--tensor", tsvd.tensor)->required();
    ts->add_option("--transform", tsvd.transform, "identity, fft, dct or matrix")->capture_default_str();
    ts->add_option("--matrix", tsvd.matrix, "Transform matrix file for --transform matrix");
    ts->add_option("--tol", tsvd.tol, "Rank cut relative to the largest singular value")->capture_default_str();

    MetricsArgs metrics;
    auto* mt = app.add_subcommand("metrics", "SNR of a reconstruction against a reference");
    mt->add_option("--rec", metrics.rec)->required();
    mt->add_option("--ref", metrics.ref)->required();

    CheckArgs check;
    auto* ck = app.add_subcommand("check", "Run the built-in invariant suite");
    ck->add_option("--level", check.level, "quick or full")->capture_default_str();

    // Global flags may also follow the subcommand name.
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kUsage;
    }

    try {
        ttlr::set_thread_count(g.threads);
        if (*ph) return run_phantom(g, phantom);
        if (*mk) return run_mask(g, mask);
        if (*fw) return run_forward(g, fwd);
        if (*rc) return run_recon(g, recon);
        if (*ts) return run_tsvd(g, tsvd);
        if (*mt) return run_metrics(g, metrics);
        if (*ck) return run_check(g, check);
    } catch (const ttlr::DivergenceError& e) {
        std::cerr << "error: diverged at iteration " << e.iteration() << ": " << e.what() << "\n";
        return kNumeric;
    } catch (const ttlr::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kNumeric;
    } catch (const ttlr::ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ttlr::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kData;
    }
    return kUsage;
}
