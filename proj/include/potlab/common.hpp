#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace potlab {

inline constexpr double pi = std::numbers::pi;

// Error taxonomy. Every precondition failure maps to one of these so callers
// (and the CLI) can tell a configuration problem from a numerical one.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InvalidArgument : Error {
  using Error::Error;
};
struct MeanNotZero : Error {
  using Error::Error;
};
struct SupportOverflow : Error {
  using Error::Error;
};
struct QOutOfRange : Error {
  using Error::Error;
};
struct RadiusOutOfRange : Error {
  using Error::Error;
};
struct EpsilonTooSmallForBox : Error {
  using Error::Error;
};
struct NotDivergenceFree : Error {
  using Error::Error;
};
struct SphereMeanNonzero : Error {
  using Error::Error;
};
struct DomainError : Error {
  using Error::Error;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw InvalidArgument(what);
}

/// Pairwise (tree) summation. Result depends only on the input order, never
/// on how work was split, which keeps reports bit-stable.
inline double pairwise_sum(std::span<const double> v) {
  if (v.size() <= 32) {
    double s = 0.0;
    for (double x : v) s += x;
    return s;
  }
  const std::size_t half = v.size() / 2;
  return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

inline double pairwise_sum(const std::vector<double>& v) {
  return pairwise_sum(std::span<const double>(v));
}

}  // namespace potlab
