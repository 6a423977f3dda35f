#include "fft.hpp"

#include <map>
#include <mutex>
#include <tuple>

#include <fftw3.h>

namespace ttlr::detail {

namespace {

// FFTW planning is not thread-safe, execution with the new-array interface
// is. Plans are created once per shape under a lock and kept for the process.
class PlanCache {
public:
    using Key = std::tuple<std::size_t, std::size_t, int>;

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(std::size_t rows, std::size_t cols, int sign) {
        std::lock_guard lock(mutex_);
        const Key key{rows, cols, sign};
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        const std::size_t n = rows * cols;
        auto* scratch = fftw_alloc_complex(n);
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = rows == 1 ? fftw_plan_dft_1d(static_cast<int>(cols), scratch, scratch, sign, flags)
                                   : fftw_plan_dft_2d(static_cast<int>(rows), static_cast<int>(cols), scratch,
                                                      scratch, sign, flags);
        fftw_free(scratch);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<Key, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

int sign_of(FftDirection dir) { return dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD; }

}  // namespace

void dft_1d(cplx* buf, std::size_t n, FftDirection dir) {
    if (n <= 1) return;
    auto* p = reinterpret_cast<fftw_complex*>(buf);
    fftw_execute_dft(cache().get(1, n, sign_of(dir)), p, p);
}

void dft_2d(cplx* buf, std::size_t rows, std::size_t cols, FftDirection dir) {
    if (rows * cols <= 1) return;
    auto* p = reinterpret_cast<fftw_complex*>(buf);
    if (rows == 1 || cols == 1) {
        fftw_execute_dft(cache().get(1, rows * cols, sign_of(dir)), p, p);
        return;
    }
    fftw_execute_dft(cache().get(rows, cols, sign_of(dir)), p, p);
}

}  // namespace ttlr::detail
