#pragma once

#include <cstdint>
#include <exception>
#include <mutex>
#include <random>

namespace hypgeo {

// Kernels that have an OpenMP path also keep a serial path; tests compare the two.
enum class Exec { serial, parallel };

void set_thread_count(int n);
int thread_count();

// Counter-derived substream: chunk k of a run seeded with `master` always draws the
// same numbers, whatever the thread count.
inline std::mt19937_64 substream(std::uint64_t master, std::uint64_t counter) {
  std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                    static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
                    0x68797067u};
  return std::mt19937_64(seq);
}

// Carries the first exception out of an OpenMP region.
class ErrorSlot {
 public:
  template <class F>
  void guard(F&& f) {
    try {
      f();
    } catch (...) {
      std::lock_guard<std::mutex> lock(m_);
      if (!e_) e_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (e_) std::rethrow_exception(e_);
  }

 private:
  std::mutex m_;
  std::exception_ptr e_;
};

}  // namespace hypgeo
