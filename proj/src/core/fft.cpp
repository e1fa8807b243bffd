#include "fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <vector>

namespace ostrovsky::detail {

namespace {

struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [n, p] : plans_) {
      fftw_destroy_plan(p.forward);
      fftw_destroy_plan(p.backward);
    }
  }

  // Planning is not thread-safe in FFTW; execution with the new-array
  // interface is, so only the lookup is locked.
  const PlanPair& get(int n) {
    std::lock_guard lock(mutex_);
    auto it = plans_.find(n);
    if (it != plans_.end()) return it->second;
    std::vector<std::complex<double>> a(n), b(n);
    auto* pa = reinterpret_cast<fftw_complex*>(a.data());
    auto* pb = reinterpret_cast<fftw_complex*>(b.data());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    PlanPair p;
    p.forward = fftw_plan_dft_1d(n, pa, pb, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_1d(n, pa, pb, FFTW_BACKWARD, flags);
    return plans_.emplace(n, p).first->second;
  }

 private:
  std::mutex mutex_;
  std::map<int, PlanPair> plans_;
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

void execute(fftw_plan plan, int n, const std::complex<double>* in, std::complex<double>* out) {
  if (in == out) {
    std::vector<std::complex<double>> tmp(in, in + n);
    fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(tmp.data()), reinterpret_cast<fftw_complex*>(out));
    return;
  }
  // fftw_execute_dft does not modify the input of an out-of-place c2c plan.
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(const_cast<std::complex<double>*>(in)),
                   reinterpret_cast<fftw_complex*>(out));
}

}  // namespace

void dft_forward(int n, const std::complex<double>* in, std::complex<double>* out) {
  execute(cache().get(n).forward, n, in, out);
}

void dft_backward(int n, const std::complex<double>* in, std::complex<double>* out) {
  execute(cache().get(n).backward, n, in, out);
}

}  // namespace ostrovsky::detail
