#include "commands.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>

#include "ttlr/admm.hpp"
#include "ttlr/checks.hpp"
#include "ttlr/config.hpp"
#include "ttlr/errors.hpp"
#include "ttlr/io.hpp"
#include "ttlr/mri.hpp"
#include "ttlr/parallel.hpp"
#include "ttlr/phantom.hpp"
#include "ttlr/tsvd.hpp"

#ifndef TTLR_VERSION
#define TTLR_VERSION "unknown"
#endif

namespace ttlr::cli {

namespace {

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

// Collects what a run did and writes it next to its outputs.
class Manifest {
public:
    Manifest(const Globals& g, std::string command) : start_(Clock::now()) {
        doc_["command"] = std::move(command);
        doc_["argv"] = g.argv;
        doc_["seed"] = g.seed;
        doc_["threads"] = g.threads;
        doc_["version"] = TTLR_VERSION;
        doc_["parameters"] = json::object();
        doc_["inputs"] = json::array();
        doc_["outputs"] = json::array();
    }

    json& params() { return doc_["parameters"]; }
    void input(const fs::path& p) { doc_["inputs"].push_back(p.string()); }
    void output(const fs::path& p) { doc_["outputs"].push_back(p.string()); }
    void result(const std::string& key, json v) { doc_["results"][key] = std::move(v); }

    void write(const fs::path& path) {
        doc_["wall_time_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
        atomic_write(path, doc_.dump(2) + "\n");
    }

private:
    json doc_;
    Clock::time_point start_;
};

fs::path manifest_path(const fs::path& out) {
    fs::path p = out;
    p += ".manifest.json";
    return p;
}

fs::path require_out(const Globals& g, const char* command) {
    if (g.out.empty()) throw ParameterError(std::string(command) + ": --out is required");
    const fs::path out = g.out;
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    return out;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// Mask reference stored inside a k-space file: relative to the k-space
// file's directory when possible so the pair can be moved together.
std::string mask_reference(const fs::path& mask, const fs::path& kspace) {
    const fs::path base = fs::absolute(kspace).parent_path();
    const fs::path rel = fs::absolute(mask).lexically_relative(base);
    return rel.empty() ? fs::absolute(mask).string() : rel.string();
}

UnitaryTransform load_transform(const std::string& kind_name, const std::string& matrix, std::size_t n3) {
    const TransformKind kind = parse_transform_kind(kind_name);
    if (kind == TransformKind::matrix) {
        if (matrix.empty()) throw ParameterError("transform 'matrix' needs --matrix");
        return make_transform(kind, n3, read_transform_matrix(matrix));
    }
    if (!matrix.empty()) throw ParameterError("--matrix is only valid with --transform matrix");
    return make_transform(kind, n3);
}

json history_summary(const ReconReport& r) {
    json h = json::object();
    h["iterations_run"] = r.iterations_run;
    h["converged"] = r.converged;
    if (!r.history.empty()) {
        h["final_objective"] = r.history.back().objective;
        h["final_ttnn"] = r.history.back().ttnn;
    }
    return h;
}

}  // namespace

int run_phantom(const Globals& g, const PhantomArgs& a) {
    const fs::path out = require_out(g, "phantom");
    Manifest m(g, "phantom");
    PhantomParams p;
    p.kind = parse_phantom_kind(a.kind);
    p.nx = a.nx;
    p.ny = a.ny;
    p.nt = a.nt;
    p.seed = g.seed;
    p.rank = a.rank;
    p.transform = parse_transform_kind(a.transform);
    m.params() = {{"kind", a.kind}, {"nx", a.nx}, {"ny", a.ny}, {"nt", a.nt}, {"rank", a.rank},
                  {"transform", a.transform}};

    const auto x = make_phantom(p);
    write_tensor(out, x);
    m.output(out);
    if (!a.pgm.empty()) {
        for (const auto& f : write_pgm_frames(a.pgm, x)) m.output(f);
    }
    m.write(manifest_path(out));
    std::cout << "wrote " << out.string() << " dims " << x.n1() << "x" << x.n2() << "x" << x.n3() << "\n";
    return 0;
}

int run_mask(const Globals& g, const MaskArgs& a) {
    const fs::path out = require_out(g, "mask");
    Manifest m(g, "mask");
    m.params() = {{"pattern", a.pattern}, {"nx", a.nx}, {"ny", a.ny}, {"nt", a.nt}};

    std::optional<SamplingSpec> spec;
    if (a.pattern == "radial") {
        RadialOptions opt;
        opt.freeze_angles = a.freeze;
        opt.initial_angle = a.angle;
        m.params()["lines"] = a.lines;
        m.params()["freeze"] = a.freeze;
        if (a.angle) m.params()["angle"] = *a.angle;
        spec.emplace(gen_pseudo_radial_mask(a.nx, a.ny, a.nt, a.lines, g.seed, opt));
    } else if (a.pattern == "vds") {
        m.params()["accel"] = a.accel;
        spec.emplace(gen_vds_mask(a.nx, a.ny, a.nt, a.accel, g.seed));
    } else if (a.pattern == "bernoulli") {
        m.params()["fraction"] = a.fraction;
        spec.emplace(gen_bernoulli_mask(a.nx, a.ny, a.nt, a.fraction, g.seed));
    } else if (a.pattern == "full") {
        spec.emplace(SamplingSpec::full({a.nx, a.ny, a.nt}));
    } else {
        throw ParameterError("unknown mask pattern '" + a.pattern + "' (radial, vds, bernoulli, full)");
    }

    write_mask(out, *spec);
    m.output(out);
    m.result("sampled", spec->m());
    m.result("descriptor", spec->descriptor());
    m.write(manifest_path(out));
    std::cout << "sampled " << spec->m() << " of " << spec->dims().size() << " ("
              << format_double(double(spec->m()) / double(spec->dims().size())) << ")\n";
    return 0;
}

int run_forward(const Globals& g, const ForwardArgs& a) {
    const fs::path out = require_out(g, "forward");
    Manifest m(g, "forward");
    m.params() = {{"sigma", a.sigma}};
    const auto x = read_tensor(a.image);
    auto spec = std::make_shared<const SamplingSpec>(read_mask(a.mask));
    m.input(a.image);
    m.input(a.mask);
    if (x.dims() != spec->dims()) throw DimensionError("image and mask dims differ");

    const auto b = add_noise(forward(x, spec), a.sigma, g.seed);
    write_kspace(out, b, mask_reference(a.mask, out));
    m.output(out);
    m.write(manifest_path(out));
    std::cout << "wrote " << b.size() << " samples to " << out.string() << "\n";
    return 0;
}

int run_recon(const Globals& g, const ReconArgs& a) {
    const fs::path out = require_out(g, "recon");
    Manifest m(g, "recon");
    auto loaded = read_kspace(a.kspace);
    m.input(a.kspace);
    m.input(loaded.mask_path);
    KSpaceVector b = std::move(loaded.data);
    if (!a.mask.empty()) {
        auto spec = std::make_shared<const SamplingSpec>(read_mask(a.mask));
        if (spec->mask() != b.spec().mask() || spec->dims() != b.spec().dims()) {
            throw DimensionError("--mask differs from the mask recorded in " + a.kspace);
        }
        m.input(a.mask);
    }

    const std::size_t nt = b.spec().dims().n3;
    std::string config_text = "{}";
    fs::path base_dir;
    if (!a.config.empty()) {
        config_text = slurp(a.config);
        base_dir = fs::path(a.config).parent_path();
        m.input(a.config);
    }
    const RunConfig cfg = parse_run_config(config_text, nt, base_dir);
    m.params() = {{"config", json::parse(config_text)},
                  {"mode", cfg.mode == SolverMode::classic ? "classic" : "generalized"},
                  {"lambda", cfg.admm.lambda},
                  {"mu", cfg.admm.mu},
                  {"eta", cfg.admm.eta},
                  {"max_iters", cfg.admm.max_iters},
                  {"rel_tol", cfg.admm.rel_tol},
                  {"transform", to_string(cfg.admm.transform.kind())},
                  {"schedule_length", cfg.schedule.size()}};

    ReconReport report = cfg.mode == SolverMode::classic
                             ? solve(b, cfg.admm)
                             : solve_generalized(b, cfg.schedule, cfg.admm.transform,
                                                 {cfg.admm.lambda, cfg.admm.record_history});

    write_tensor(out, report.reconstruction);
    m.output(out);
    fs::path csv = out;
    csv += ".history.csv";
    atomic_write(csv, format_history_csv(report.history));
    m.output(csv);
    if (!a.pgm.empty()) {
        for (const auto& f : write_pgm_frames(a.pgm, report.reconstruction)) m.output(f);
    }
    m.result("solver", history_summary(report));

    std::cout << "iterations " << report.iterations_run << "\n";
    std::cout << "converged " << (report.converged ? "yes" : "no") << "\n";
    if (!a.ref.empty()) {
        const auto ref = read_tensor(a.ref);
        m.input(a.ref);
        const double db = snr(report.reconstruction, ref);
        const double zf = snr(adjoint(b), ref);
        m.result("snr_db", format_double(db));
        m.result("zero_filled_snr_db", format_double(zf));
        std::cout << "snr_db " << format_double(db) << "\n";
        std::cout << "zero_filled_snr_db " << format_double(zf) << "\n";
    }
    m.write(manifest_path(out));
    return 0;
}

int run_tsvd(const Globals& g, const TsvdArgs& a) {
    const fs::path out = require_out(g, "tsvd");
    Manifest m(g, "tsvd");
    m.params() = {{"transform", a.transform}, {"tol", a.tol}};
    if (!a.matrix.empty()) m.params()["matrix"] = a.matrix;
    const auto x = read_tensor(a.tensor);
    m.input(a.tensor);
    const auto t = load_transform(a.transform, a.matrix, x.n3());

    const auto f = tt_svd(x, t);
    const auto rank = transformed_multirank(x, t, a.tol);
    double nuclear = 0.0;
    for (const auto& s : f.singular_values)
        for (double v : s) nuclear += v;

    const auto named = [&](const char* suffix) {
        fs::path p = out;
        p += suffix;
        m.output(p);
        return p;
    };
    write_tensor(named("_U.t2"), f.U);
    write_tensor(named("_S.t2"), f.S);
    write_tensor(named("_V.t2"), f.V);
    atomic_write(named("_sv.txt"), format_singular_values(f.singular_values));

    std::ostringstream ranks;
    for (std::size_t i = 0; i < rank.ranks.size(); ++i) ranks << (i ? " " : "") << rank.ranks[i];
    m.result("ttnn", format_double(nuclear));
    m.result("multirank", rank.ranks);
    m.result("sum_rank", rank.sum());
    m.write(manifest_path(out));
    std::cout << "ttnn " << format_double(nuclear) << "\n";
    std::cout << "multirank " << ranks.str() << "\n";
    std::cout << "sum_rank " << rank.sum() << "\n";
    return 0;
}

int run_metrics(const Globals& g, const MetricsArgs& a) {
    Manifest m(g, "metrics");
    const auto rec = read_tensor(a.rec);
    const auto ref = read_tensor(a.ref);
    m.input(a.rec);
    m.input(a.ref);
    const double db = snr(rec, ref);
    const double rel = relative_error(rec, ref);
    std::cout << "snr_db " << format_double(db) << "\n";
    std::cout << "relative_error " << format_double(rel) << "\n";
    if (!g.out.empty()) {
        m.result("snr_db", format_double(db));
        m.result("relative_error", format_double(rel));
        m.write(g.out);
    }
    return 0;
}

int run_check(const Globals& g, const CheckArgs& a) {
    Manifest m(g, "check");
    m.params() = {{"level", a.level}};
    CheckLevel level;
    if (a.level == "quick") {
        level = CheckLevel::quick;
    } else if (a.level == "full") {
        level = CheckLevel::full;
    } else {
        throw ParameterError("check level must be quick or full");
    }
    int failed = 0;
    json results = json::array();
    for (const auto& r : run_checks(level)) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
        results.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        failed += r.passed ? 0 : 1;
    }
    std::cout << (failed ? std::to_string(failed) + " check(s) failed" : std::string("all checks passed")) << "\n";
    if (!g.out.empty()) {
        m.result("checks", results);
        m.write(g.out);
    }
    return failed ? 4 : 0;
}

}  // namespace ttlr::cli
