#pragma once

#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

namespace salma::detail {

// Cached FFTW plans, one pair per transform length per thread.  Plan
// creation goes through a global mutex (the FFTW planner is not
// thread-safe); execution uses per-thread buffers, so concurrent
// transforms on different threads are fine.
class FftEngine {
public:
    static FftEngine& instance() {
        thread_local FftEngine engine;
        return engine;
    }

    void fft(const std::complex<double>* in, std::complex<double>* out, int n) {
        execute(in, out, n, FFTW_FORWARD);
    }

    // Unscaled inverse; callers apply 1/n where needed.
    void ifft_unscaled(const std::complex<double>* in, std::complex<double>* out, int n) {
        execute(in, out, n, FFTW_BACKWARD);
    }

private:
    struct Plan {
        fftw_plan plan = nullptr;
        fftw_complex* in = nullptr;
        fftw_complex* out = nullptr;

        ~Plan() {
            if (plan) fftw_destroy_plan(plan);
            if (in) fftw_free(in);
            if (out) fftw_free(out);
        }
    };

    FftEngine() = default;

    Plan& get_plan(int n, int sign) {
        auto it = plans_.find({n, sign});
        if (it != plans_.end()) return *it->second;

        auto p = std::make_unique<Plan>();
        p->in = fftw_alloc_complex(static_cast<size_t>(n));
        p->out = fftw_alloc_complex(static_cast<size_t>(n));
        {
            static std::mutex planner_mutex;
            std::lock_guard<std::mutex> lock(planner_mutex);
            p->plan = fftw_plan_dft_1d(n, p->in, p->out, sign, FFTW_ESTIMATE);
        }
        if (!p->plan) throw std::runtime_error("fftw plan creation failed");
        auto [pos, _] = plans_.emplace(std::make_pair(n, sign), std::move(p));
        return *pos->second;
    }

    void execute(const std::complex<double>* in, std::complex<double>* out, int n, int sign) {
        if (n <= 0) throw std::invalid_argument("fft length must be positive");
        Plan& p = get_plan(n, sign);
        auto* pin = reinterpret_cast<std::complex<double>*>(p.in);
        std::copy(in, in + n, pin);
        fftw_execute(p.plan);
        auto* pout = reinterpret_cast<std::complex<double>*>(p.out);
        std::copy(pout, pout + n, out);
    }

    std::map<std::pair<int, int>, std::unique_ptr<Plan>> plans_;
};

inline std::vector<std::complex<double>> fft(const std::vector<std::complex<double>>& x) {
    std::vector<std::complex<double>> out(x.size());
    FftEngine::instance().fft(x.data(), out.data(), static_cast<int>(x.size()));
    return out;
}

inline std::vector<std::complex<double>> ifft(const std::vector<std::complex<double>>& x) {
    std::vector<std::complex<double>> out(x.size());
    const int n = static_cast<int>(x.size());
    FftEngine::instance().ifft_unscaled(x.data(), out.data(), n);
    for (auto& v : out) v /= static_cast<double>(n);
    return out;
}

}  // namespace salma::detail
