#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <tuple>
#include <vector>

namespace hartree::detail {
namespace {

// Plans are created once per shape and shared. fftw_execute_dft is thread-safe,
// the planner is not, hence the lock around creation only.
class PlanCache {
public:
    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

    fftw_plan get(int dim, std::size_t n, FftDirection dir) {
        const auto key = std::make_tuple(dim, n, dir);
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;

        std::size_t total = dim == 1 ? n : n * n;
        std::vector<cplx> a(total), b(total);
        auto* in = reinterpret_cast<fftw_complex*>(a.data());
        auto* out = reinterpret_cast<fftw_complex*>(b.data());
        const int sign = dir == FftDirection::forward ? FFTW_FORWARD : FFTW_BACKWARD;
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fftw_plan plan = dim == 1
            ? fftw_plan_dft_1d(static_cast<int>(n), in, out, sign, flags)
            : fftw_plan_dft_2d(static_cast<int>(n), static_cast<int>(n), in, out, sign, flags);
        plans_.emplace(key, plan);
        return plan;
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, std::size_t, FftDirection>, fftw_plan> plans_;
};

PlanCache& cache() {
    static PlanCache instance;
    return instance;
}

}  // namespace

void dft(std::span<const cplx> in, std::span<cplx> out, int dim, std::size_t n, FftDirection dir) {
    fftw_plan plan = cache().get(dim, n, dir);
    // fftw's new-array interface takes a non-const input even for out-of-place plans.
    auto* src = const_cast<fftw_complex*>(reinterpret_cast<const fftw_complex*>(in.data()));
    fftw_execute_dft(plan, src, reinterpret_cast<fftw_complex*>(out.data()));
}

}  // namespace hartree::detail
