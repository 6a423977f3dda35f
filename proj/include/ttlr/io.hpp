#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ttlr/admm.hpp"
#include "ttlr/mri.hpp"
#include "ttlr/tensor.hpp"

namespace ttlr {

// Binary tensor format "T2T1" (all integers little-endian):
//   magic "T2T1" | u32 n1 | u32 n2 | u32 n3 | u8 dtype | payload
// dtype 0: complex double, interleaved re/im, in tensor storage order.
// dtype 1: u8 mask values (0/1), same order.
//
// k-space format "T2K1":
//   magic "T2K1" | u64 m | m complex doubles (re, im) | u32 len | mask path
// The mask path is the sidecar T2T1 mask; a relative path is resolved
// against the directory of the k-space file.

enum class TensorDtype : std::uint8_t { complex_double = 0, mask_u8 = 1 };

/// Writes bytes to a temporary file next to path, then renames it over path.
void atomic_write(const std::filesystem::path& path, std::string_view bytes);

std::string encode_tensor(const ComplexTensor3& x);
std::string encode_mask(const SamplingSpec& spec);

void write_tensor(const std::filesystem::path& path, const ComplexTensor3& x);
ComplexTensor3 read_tensor(const std::filesystem::path& path);

void write_mask(const std::filesystem::path& path, const SamplingSpec& spec);
SamplingSpec read_mask(const std::filesystem::path& path);

void write_kspace(const std::filesystem::path& path, const KSpaceVector& b, const std::string& mask_path);

struct LoadedKSpace {
    KSpaceVector data;
    std::filesystem::path mask_path;
};

/// Reads the k-space vector and its sidecar mask.
LoadedKSpace read_kspace(const std::filesystem::path& path);

/// An n x n transform matrix stored as a T2T1 tensor of dims (n, n, 1).
Matrix read_transform_matrix(const std::filesystem::path& path);
void write_transform_matrix(const std::filesystem::path& path, const Matrix& m);

/// Shortest round-trip decimal representation; infinities print as "inf".
std::string format_double(double v);

/// One line per slice, space-separated, descending.
std::string format_singular_values(const std::vector<std::vector<double>>& sigma);

/// Header "iter,objective,fidelity,ttnn,primal_residual,elapsed_ms".
std::string format_history_csv(const std::vector<IterationRecord>& history);

/// Per-frame 8-bit magnitude PGM files <prefix>_<k>.pgm, k 1-based and
/// zero-padded, normalized to the tensor's global maximum magnitude.
std::vector<std::filesystem::path> write_pgm_frames(const std::filesystem::path& prefix, const ComplexTensor3& x);

}  // namespace ttlr
