#pragma once

#include <complex>
#include <map>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace fhs::fft {

// FFTW's planner is not thread-safe; plans are cached behind a mutex and
// executed through the new-array interface. FFTW_UNALIGNED keeps new-array
// execution valid for arbitrary buffers.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache c;
    return c;
  }

  void execute(const std::vector<int>& dims, int sign, std::complex<double>* in,
               std::complex<double>* out) {
    fftw_plan p = plan_for(dims, sign);
    fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in), reinterpret_cast<fftw_complex*>(out));
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [k, p] : plans_) fftw_destroy_plan(p);
  }

  fftw_plan plan_for(const std::vector<int>& dims, int sign) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(dims, sign);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    std::size_t total = 1;
    for (int d : dims) total *= static_cast<std::size_t>(d);
    std::vector<std::complex<double>> scratch(total);
    fftw_plan p = fftw_plan_dft(static_cast<int>(dims.size()), dims.data(),
                                reinterpret_cast<fftw_complex*>(scratch.data()),
                                reinterpret_cast<fftw_complex*>(scratch.data()), sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, p);
    return p;
  }

  std::mutex mu_;
  std::map<std::pair<std::vector<int>, int>, fftw_plan> plans_;
};

inline void forward(const std::vector<int>& dims, std::complex<double>* in,
                    std::complex<double>* out) {
  PlanCache::instance().execute(dims, FFTW_FORWARD, in, out);
}

inline void backward(const std::vector<int>& dims, std::complex<double>* in,
                     std::complex<double>* out) {
  PlanCache::instance().execute(dims, FFTW_BACKWARD, in, out);
}

}  // namespace fhs::fft
