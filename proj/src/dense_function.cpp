#include "commoneq/dense_function.hpp"

#include <cmath>
#include <stdexcept>

#include "commoneq/errors.hpp"

namespace commoneq {

DenseFunction DenseFunction::constant(const GroupSpec& g,
                                      std::complex<double> c) {
  DenseFunction f;
  f.values.assign(static_cast<std::size_t>(g.order()), c);
  return f;
}

DenseFunction DenseFunction::from_real(std::vector<double> v) {
  DenseFunction f;
  f.values.reserve(v.size());
  for (const double x : v) f.values.emplace_back(x, 0.0);
  return f;
}

DenseFunction DenseFunction::indicator(const GroupSpec& g,
                                       const std::vector<Rank>& set) {
  DenseFunction f = constant(g, 0.0);
  for (const Rank r : set) {
    if (r < 0 || r >= g.order()) {
      throw std::invalid_argument("indicator rank out of range");
    }
    f.values[static_cast<std::size_t>(r)] = 1.0;
  }
  return f;
}

bool DenseFunction::is_real(double tol) const {
  for (const auto& v : values) {
    if (std::abs(v.imag()) > tol) return false;
  }
  return true;
}

bool DenseFunction::in_unit_range(double tol) const {
  if (!is_real(tol)) return false;
  for (const auto& v : values) {
    if (v.real() < -tol || v.real() > 1.0 + tol) return false;
  }
  return true;
}

std::complex<double> DenseFunction::mean() const {
  std::complex<double> s = 0.0;
  for (const auto& v : values) s += v;
  return s / static_cast<double>(values.size());
}

std::vector<double> DenseFunction::real_values(double tol) const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) {
    if (std::abs(v.imag()) > tol) {
      throw InternalCheckError("function expected to be real has |imag| = " +
                               std::to_string(std::abs(v.imag())));
    }
    out.push_back(v.real());
  }
  return out;
}

DenseFunction DenseFunction::complement() const {
  DenseFunction out;
  out.values.reserve(values.size());
  for (const auto& v : values) out.values.push_back(1.0 - v);
  return out;
}

}  // namespace commoneq
