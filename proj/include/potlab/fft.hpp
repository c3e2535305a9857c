#pragma once

#include <fftw3.h>

#include <algorithm>
#include <complex>
#include <new>
#include <map>
#include <mutex>
#include <tuple>

#include "potlab/grid.hpp"

namespace potlab::spectral {

using cplx = std::complex<double>;

/// SIMD-aligned complex storage for FFTW. Alignment is identical for every
/// buffer, so a cached plan always takes the same code path.
class ComplexBuffer {
 public:
  ComplexBuffer() = default;
  explicit ComplexBuffer(std::size_t n)
      : data_(static_cast<cplx*>(fftw_malloc(sizeof(cplx) * n))), size_(n) {
    if (n != 0 && data_ == nullptr) throw std::bad_alloc();
    std::fill(data_, data_ + n, cplx{});
  }
  ComplexBuffer(const ComplexBuffer& o) : ComplexBuffer(o.size_) {
    std::copy(o.data_, o.data_ + size_, data_);
  }
  ComplexBuffer(ComplexBuffer&& o) noexcept : data_(o.data_), size_(o.size_) {
    o.data_ = nullptr;
    o.size_ = 0;
  }
  ComplexBuffer& operator=(ComplexBuffer o) noexcept {
    std::swap(data_, o.data_);
    std::swap(size_, o.size_);
    return *this;
  }
  ~ComplexBuffer() {
    if (data_ != nullptr) fftw_free(data_);
  }

  std::size_t size() const { return size_; }
  cplx* data() { return data_; }
  const cplx* data() const { return data_; }
  cplx& operator[](std::size_t i) { return data_[i]; }
  const cplx& operator[](std::size_t i) const { return data_[i]; }
  cplx* begin() { return data_; }
  cplx* end() { return data_ + size_; }
  const cplx* begin() const { return data_; }
  const cplx* end() const { return data_ + size_; }

 private:
  cplx* data_ = nullptr;
  std::size_t size_ = 0;
};

namespace detail {

// FFTW's planner is not thread-safe; execution of an existing plan on new
// arrays is. Plans are created once per (dim, N, sign) and kept for the
// lifetime of the process.
inline fftw_plan cached_plan(int dim, int pts, int sign) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(dim, pts, sign);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  int dims[3] = {pts, pts, pts};
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(pts);
  ComplexBuffer scratch(total);
  auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
  fftw_plan plan = fftw_plan_dft(dim, dims, p, p, sign, FFTW_ESTIMATE);
  if (plan == nullptr) throw Error("FFTW planning failed");
  plans.emplace(key, plan);
  return plan;
}

}  // namespace detail

/// Unnormalised in-place transform: sign -1 computes sum_j a_j e^{-2 pi i k.j / N}.
inline void fft_inplace(ComplexBuffer& buf, const Grid& g, int sign) {
  require(buf.size() == g.size(), "FFT buffer does not match grid");
  fftw_plan plan = detail::cached_plan(g.dim, g.pts, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* p = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(plan, p, p);
}

}  // namespace potlab::spectral
