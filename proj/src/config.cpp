#include "ttlr/config.hpp"

#include <set>
#include <string>

#include "json.hpp"
#include "ttlr/errors.hpp"
#include "ttlr/io.hpp"

namespace ttlr {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& key, const std::string& why) {
    throw ParameterError("config key '" + key + "': " + why);
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        if (!allowed.count(key)) bad(where + key, "unknown key");
    }
}

double get_number(const json& obj, const std::string& key, double fallback, const std::string& where) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) bad(where + key, "must be a number");
    return v.get<double>();
}

UnitaryTransform parse_transform(const json& node, std::size_t nt, const std::filesystem::path& base_dir,
                                 const std::string& where) {
    if (!node.is_object()) bad(where, "must be an object with 'kind'");
    reject_unknown(node, {"kind", "matrix_path"}, where + ".");
    if (!node.contains("kind") || !node.at("kind").is_string()) bad(where + ".kind", "must be a string");
    TransformKind kind;
    try {
        kind = parse_transform_kind(node.at("kind").get<std::string>());
    } catch (const ParameterError& e) {
        bad(where + ".kind", e.what());
    }
    if (kind != TransformKind::matrix) {
        if (node.contains("matrix_path")) bad(where + ".matrix_path", "only valid for kind 'matrix'");
        return make_transform(kind, nt);
    }
    if (!node.contains("matrix_path") || !node.at("matrix_path").is_string()) {
        bad(where + ".matrix_path", "required for kind 'matrix'");
    }
    std::filesystem::path path = node.at("matrix_path").get<std::string>();
    if (path.is_relative()) path = base_dir / path;
    return make_transform(kind, nt, read_transform_matrix(path));
}

std::vector<double> parse_thresholds(const json& node, std::size_t nt, const std::string& where) {
    if (node.is_number()) return std::vector<double>(nt, node.get<double>());
    if (!node.is_array()) bad(where, "must be a number or an array");
    if (node.size() != nt) bad(where, "array length " + std::to_string(node.size()) + " != nt = " + std::to_string(nt));
    std::vector<double> out;
    for (const auto& v : node) {
        if (!v.is_number()) bad(where, "entries must be numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

RunConfig parse_run_config(std::string_view json_text, std::size_t nt, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ParameterError("config must be a JSON object");
    reject_unknown(root, {"lambda", "mu", "eta", "max_iters", "rel_tol", "transform", "mode", "schedule", "seed",
                          "record_history"},
                   "");

    const UnitaryTransform transform =
        root.contains("transform") ? parse_transform(root.at("transform"), nt, base_dir, "transform")
                                   : make_transform(TransformKind::fft, nt);
    RunConfig cfg{SolverMode::classic, AdmmConfig(transform), {}, 0};
    auto& admm = cfg.admm;
    admm.lambda = get_number(root, "lambda", admm.lambda, "");
    admm.mu = get_number(root, "mu", admm.mu, "");
    admm.eta = get_number(root, "eta", admm.eta, "");
    admm.rel_tol = get_number(root, "rel_tol", admm.rel_tol, "");
    if (root.contains("max_iters")) {
        if (!root.at("max_iters").is_number_integer()) bad("max_iters", "must be an integer");
        admm.max_iters = root.at("max_iters").get<int>();
    }
    if (root.contains("record_history")) {
        if (!root.at("record_history").is_boolean()) bad("record_history", "must be a boolean");
        admm.record_history = root.at("record_history").get<bool>();
    }
    if (root.contains("seed")) {
        if (!root.at("seed").is_number_unsigned()) bad("seed", "must be a nonnegative integer");
        cfg.seed = root.at("seed").get<std::uint64_t>();
    }
    if (root.contains("mode")) {
        const auto& m = root.at("mode");
        if (m == "classic") {
            cfg.mode = SolverMode::classic;
        } else if (m == "generalized") {
            cfg.mode = SolverMode::generalized;
        } else {
            bad("mode", "must be \"classic\" or \"generalized\"");
        }
    }

    try {
        admm.validate();
    } catch (const ParameterError& e) {
        const std::string msg = e.what();
        bad(msg.substr(0, msg.find(' ')), msg);
    }

    if (cfg.mode == SolverMode::generalized) {
        if (!root.contains("schedule") || !root.at("schedule").is_array() || root.at("schedule").empty()) {
            bad("schedule", "generalized mode needs a nonempty array");
        }
        const auto& sched = root.at("schedule");
        for (std::size_t n = 0; n < sched.size(); ++n) {
            const std::string where = "schedule[" + std::to_string(n) + "].";
            const auto& rec = sched[n];
            if (!rec.is_object()) bad(where.substr(0, where.size() - 1), "must be an object");
            reject_unknown(rec, {"gamma", "eta", "threshold_mode", "thresholds", "transform", "repeat"}, where);
            IterationParams p(rec.contains("transform")
                                  ? parse_transform(rec.at("transform"), nt, base_dir, where + "transform")
                                  : transform);
            p.gamma = get_number(rec, "gamma", p.gamma, where);
            p.eta = get_number(rec, "eta", p.eta, where);
            if (rec.contains("threshold_mode")) {
                const auto& m = rec.at("threshold_mode");
                if (m == "absolute") {
                    p.mode = ThresholdMode::absolute;
                } else if (m == "relative") {
                    p.mode = ThresholdMode::relative;
                } else {
                    bad(where + "threshold_mode", "must be \"absolute\" or \"relative\"");
                }
            }
            if (!rec.contains("thresholds")) bad(where + "thresholds", "required");
            p.thresholds = parse_thresholds(rec.at("thresholds"), nt, where + "thresholds");
            try {
                p.validate(nt);
            } catch (const Error& e) {
                bad(where.substr(0, where.size() - 1), e.what());
            }
            long repeat = 1;
            if (rec.contains("repeat")) {
                if (!rec.at("repeat").is_number_integer() || rec.at("repeat").get<long>() < 1) {
                    bad(where + "repeat", "must be a positive integer");
                }
                repeat = rec.at("repeat").get<long>();
            }
            for (long r = 0; r < repeat; ++r) cfg.schedule.push_back(p);
        }
    } else if (root.contains("schedule")) {
        bad("schedule", "only valid in generalized mode");
    }
    return cfg;
}

}  // namespace ttlr
