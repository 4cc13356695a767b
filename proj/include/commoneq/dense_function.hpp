#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "commoneq/group.hpp"

namespace commoneq {

// A complex-valued function on G, stored in canonical rank order. Its
// spectrum (see fourier.hpp) shares the same index space via the fixed
// duality isomorphism.
struct DenseFunction {
  std::vector<std::complex<double>> values;

  DenseFunction() = default;
  explicit DenseFunction(std::vector<std::complex<double>> v)
      : values(std::move(v)) {}

  static DenseFunction constant(const GroupSpec& g, std::complex<double> c);
  static DenseFunction from_real(std::vector<double> v);
  // Indicator 1_A for a set of ranks.
  static DenseFunction indicator(const GroupSpec& g,
                                 const std::vector<Rank>& set);

  std::int64_t size() const { return static_cast<std::int64_t>(values.size()); }

  // True when every value has |imag| <= tol.
  bool is_real(double tol) const;
  // True when real and every value lies in [-tol, 1 + tol].
  bool in_unit_range(double tol) const;

  std::complex<double> mean() const;

  // Real parts, throwing InternalCheckError if any |imag| > tol.
  std::vector<double> real_values(double tol) const;

  // 1 - f.
  DenseFunction complement() const;
};

}  // namespace commoneq
