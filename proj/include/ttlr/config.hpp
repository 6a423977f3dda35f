#pragma once

#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include "ttlr/admm.hpp"

namespace ttlr {

enum class SolverMode { classic, generalized };

/// A reconstruction run configuration.
///
/// JSON keys: lambda, mu, eta, max_iters, rel_tol, transform {kind,
/// matrix_path?}, mode ("classic" | "generalized"), schedule, seed,
/// record_history. Schedule records carry gamma, eta, threshold_mode
/// ("absolute" | "relative"), thresholds (array of length nt, or a number
/// broadcast to all slices), an optional transform (defaults to the
/// top-level one) and an optional repeat count.
struct RunConfig {
    SolverMode mode = SolverMode::classic;
    AdmmConfig admm;
    std::vector<IterationParams> schedule;
    std::uint64_t seed = 0;
};

/// Parses and validates a configuration for a series with nt frames.
/// Relative matrix paths resolve against base_dir. Throws ParameterError
/// naming the offending key.
RunConfig parse_run_config(std::string_view json_text, std::size_t nt, const std::filesystem::path& base_dir = {});

}  // namespace ttlr
