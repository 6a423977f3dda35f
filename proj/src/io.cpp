#include "ttlr/io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "ttlr/errors.hpp"

namespace ttlr {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTensorMagic = "T2T1";
constexpr std::string_view kKSpaceMagic = "T2K1";

template <typename U>
void put_le(std::string& out, U v) {
    for (std::size_t b = 0; b < sizeof(U); ++b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xFF));
}

void put_double(std::string& out, double v) { put_le(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
public:
    Reader(std::string bytes, fs::path origin) : bytes_(std::move(bytes)), origin_(std::move(origin)) {}

    template <typename U>
    U get_le() {
        need(sizeof(U));
        U v = 0;
        for (std::size_t b = 0; b < sizeof(U); ++b) {
            v |= static_cast<U>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
        }
        pos_ += sizeof(U);
        return v;
    }

    double get_double() { return std::bit_cast<double>(get_le<std::uint64_t>()); }

    std::string get_bytes(std::size_t n) {
        need(n);
        std::string s = bytes_.substr(pos_, n);
        pos_ += n;
        return s;
    }

    void expect_magic(std::string_view magic) {
        if (get_bytes(magic.size()) != magic) fail("bad magic, expected " + std::string(magic));
    }

    void expect_end() {
        if (pos_ != bytes_.size()) fail("trailing bytes");
    }

    [[noreturn]] void fail(const std::string& why) const { throw IoError(origin_.string() + ": " + why); }

private:
    void need(std::size_t n) const {
        if (pos_ + n > bytes_.size()) fail("truncated file");
    }

    std::string bytes_;
    fs::path origin_;
    std::size_t pos_ = 0;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void put_header(std::string& out, const Dims& d, TensorDtype dtype) {
    out.append(kTensorMagic);
    for (std::size_t n : {d.n1, d.n2, d.n3}) {
        if (n > 0xFFFFFFFFu) throw IoError("tensor dimension does not fit in u32");
        put_le(out, static_cast<std::uint32_t>(n));
    }
    out.push_back(static_cast<char>(dtype));
}

Dims get_header(Reader& r, TensorDtype expected) {
    r.expect_magic(kTensorMagic);
    Dims d;
    d.n1 = r.get_le<std::uint32_t>();
    d.n2 = r.get_le<std::uint32_t>();
    d.n3 = r.get_le<std::uint32_t>();
    const auto dtype = r.get_le<std::uint8_t>();
    if (dtype != static_cast<std::uint8_t>(expected)) {
        r.fail("dtype tag " + std::to_string(dtype) + ", expected " + std::to_string(static_cast<int>(expected)));
    }
    if (d.n1 == 0 || d.n2 == 0 || d.n3 == 0) r.fail("zero dimension");
    return d;
}

}  // namespace

void atomic_write(const fs::path& path, std::string_view bytes) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
    }
}

std::string encode_tensor(const ComplexTensor3& x) {
    std::string out;
    out.reserve(17 + 16 * x.size());
    put_header(out, x.dims(), TensorDtype::complex_double);
    for (const auto& v : x.data()) {
        put_double(out, v.real());
        put_double(out, v.imag());
    }
    return out;
}

std::string encode_mask(const SamplingSpec& spec) {
    std::string out;
    put_header(out, spec.dims(), TensorDtype::mask_u8);
    for (auto v : spec.mask()) out.push_back(static_cast<char>(v));
    return out;
}

void write_tensor(const fs::path& path, const ComplexTensor3& x) { atomic_write(path, encode_tensor(x)); }

ComplexTensor3 read_tensor(const fs::path& path) {
    Reader r(slurp(path), path);
    const Dims d = get_header(r, TensorDtype::complex_double);
    std::vector<cplx> data(d.size());
    for (auto& v : data) {
        const double re = r.get_double();
        v = {re, r.get_double()};
    }
    r.expect_end();
    return ComplexTensor3(d, std::move(data));
}

void write_mask(const fs::path& path, const SamplingSpec& spec) { atomic_write(path, encode_mask(spec)); }

SamplingSpec read_mask(const fs::path& path) {
    Reader r(slurp(path), path);
    const Dims d = get_header(r, TensorDtype::mask_u8);
    std::vector<std::uint8_t> mask(d.size());
    for (auto& v : mask) {
        v = r.get_le<std::uint8_t>();
        if (v > 1) r.fail("mask value other than 0/1");
    }
    r.expect_end();
    return SamplingSpec(d, std::move(mask), 0, "file:" + path.filename().string());
}

void write_kspace(const fs::path& path, const KSpaceVector& b, const std::string& mask_path) {
    std::string out;
    out.append(kKSpaceMagic);
    put_le(out, static_cast<std::uint64_t>(b.size()));
    for (const auto& v : b.values()) {
        put_double(out, v.real());
        put_double(out, v.imag());
    }
    put_le(out, static_cast<std::uint32_t>(mask_path.size()));
    out.append(mask_path);
    atomic_write(path, out);
}

LoadedKSpace read_kspace(const fs::path& path) {
    Reader r(slurp(path), path);
    r.expect_magic(kKSpaceMagic);
    const auto m = r.get_le<std::uint64_t>();
    std::vector<cplx> values(m);
    for (auto& v : values) {
        const double re = r.get_double();
        v = {re, r.get_double()};
    }
    const auto len = r.get_le<std::uint32_t>();
    fs::path mask_path = r.get_bytes(len);
    r.expect_end();
    if (mask_path.is_relative()) mask_path = path.parent_path() / mask_path;
    auto spec = std::make_shared<const SamplingSpec>(read_mask(mask_path));
    if (spec->m() != m) {
        r.fail("holds " + std::to_string(m) + " samples but mask " + mask_path.string() + " has " +
               std::to_string(spec->m()));
    }
    return {KSpaceVector(std::move(values), std::move(spec)), mask_path};
}

Matrix read_transform_matrix(const fs::path& path) {
    const auto t = read_tensor(path);
    if (t.n3() != 1 || t.n1() != t.n2()) {
        throw IoError(path.string() + ": transform matrix must be stored with dims (n, n, 1)");
    }
    return Matrix(t.frontal_slice(1));
}

void write_transform_matrix(const fs::path& path, const Matrix& m) {
    const auto n = static_cast<std::size_t>(m.rows());
    if (m.cols() != m.rows()) throw DimensionError("transform matrix must be square");
    RowMatrix rm = m;
    write_tensor(path, ComplexTensor3({n, n, 1}, std::vector<cplx>(rm.data(), rm.data() + rm.size())));
}

std::string format_double(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return {buf, res.ptr};
}

std::string format_singular_values(const std::vector<std::vector<double>>& sigma) {
    std::string out;
    for (const auto& s : sigma) {
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (i) out.push_back(' ');
            out += format_double(s[i]);
        }
        out.push_back('\n');
    }
    return out;
}

std::string format_history_csv(const std::vector<IterationRecord>& history) {
    std::string out = "iter,objective,fidelity,ttnn,primal_residual,elapsed_ms\n";
    for (const auto& h : history) {
        out += std::to_string(h.iter) + "," + format_double(h.objective) + "," + format_double(h.fidelity) + "," +
               format_double(h.ttnn) + "," + format_double(h.primal_residual) + "," + format_double(h.elapsed_ms) +
               "\n";
    }
    return out;
}

std::vector<fs::path> write_pgm_frames(const fs::path& prefix, const ComplexTensor3& x) {
    double peak = 0.0;
    for (const auto& v : x.data()) peak = std::max(peak, std::abs(v));
    const std::size_t digits = std::to_string(x.n3()).size();
    std::vector<fs::path> written;
    for (std::size_t k = 1; k <= x.n3(); ++k) {
        std::string idx = std::to_string(k);
        idx.insert(0, digits - idx.size(), '0');
        fs::path path = prefix;
        path += "_" + idx + ".pgm";

        std::string out = "P5\n" + std::to_string(x.n2()) + " " + std::to_string(x.n1()) + "\n255\n";
        const auto slice = x.frontal_slice(k);
        for (Eigen::Index i = 0; i < slice.rows(); ++i) {
            for (Eigen::Index j = 0; j < slice.cols(); ++j) {
                const double level = peak > 0.0 ? 255.0 * std::abs(slice(i, j)) / peak : 0.0;
                out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(level))));
            }
        }
        atomic_write(path, out);
        written.push_back(path);
    }
    return written;
}

}  // namespace ttlr
