#include "commoneq/group.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace commoneq {

namespace {

std::int64_t math_mod(std::int64_t v, std::int64_t n) {
  const std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}

}  // namespace

std::string to_string(const GroupElement& e) {
  std::ostringstream out;
  out << '(';
  for (std::size_t i = 0; i < e.residues.size(); ++i) {
    if (i) out << ',';
    out << e.residues[i];
  }
  out << ')';
  return out.str();
}

GroupSpec::GroupSpec(std::vector<std::int64_t> factor_orders)
    : factors_(std::move(factor_orders)) {
  if (factors_.empty()) {
    throw std::invalid_argument("group needs at least one cyclic factor");
  }
  order_ = 1;
  exponent_ = 1;
  for (const std::int64_t n : factors_) {
    if (n < 2) {
      throw std::invalid_argument("cyclic factor orders must be >= 2, got " +
                                  std::to_string(n));
    }
    if (__builtin_mul_overflow(order_, n, &order_)) {
      throw std::invalid_argument("group order overflows 64 bits");
    }
    exponent_ = std::lcm(exponent_, n);  // lcm divides order, so no overflow
  }
  strides_.assign(factors_.size(), 1);
  for (int i = static_cast<int>(factors_.size()) - 2; i >= 0; --i) {
    strides_[static_cast<std::size_t>(i)] =
        strides_[static_cast<std::size_t>(i) + 1] *
        factors_[static_cast<std::size_t>(i) + 1];
  }
}

void GroupSpec::check_element(const GroupElement& x) const {
  if (x.residues.size() != factors_.size()) {
    throw std::invalid_argument("element has " +
                                std::to_string(x.residues.size()) +
                                " components, group has " +
                                std::to_string(factors_.size()));
  }
}

GroupElement GroupSpec::element(const std::vector<std::int64_t>& values) const {
  if (values.size() != factors_.size()) {
    throw std::invalid_argument("element/group dimension mismatch");
  }
  GroupElement e;
  e.residues.resize(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    e.residues[i] = math_mod(values[i], factors_[i]);
  }
  return e;
}

GroupElement GroupSpec::zero() const {
  GroupElement e;
  e.residues.assign(factors_.size(), 0);
  return e;
}

GroupElement GroupSpec::add(const GroupElement& x, const GroupElement& y) const {
  check_element(x);
  check_element(y);
  GroupElement e;
  e.residues.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    std::int64_t v = x.residues[i] + y.residues[i];
    if (v >= factors_[i]) v -= factors_[i];
    e.residues[i] = v;
  }
  return e;
}

GroupElement GroupSpec::neg(const GroupElement& x) const {
  check_element(x);
  GroupElement e;
  e.residues.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    e.residues[i] = x.residues[i] == 0 ? 0 : factors_[i] - x.residues[i];
  }
  return e;
}

GroupElement GroupSpec::scalar_mul(std::int64_t m, const GroupElement& x) const {
  check_element(x);
  GroupElement e;
  e.residues.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::int64_t mr = math_mod(m, factors_[i]);
    e.residues[i] = (mr * x.residues[i]) % factors_[i];
  }
  return e;
}

std::int64_t GroupSpec::element_order(const GroupElement& x) const {
  check_element(x);
  std::int64_t ord = 1;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    ord = std::lcm(ord, factors_[i] / std::gcd(x.residues[i], factors_[i]));
  }
  return ord;
}

GroupElement GroupSpec::max_order_element() const {
  GroupElement e;
  e.residues.assign(factors_.size(), 1);
  return e;
}

std::complex<double> GroupSpec::character_eval(const GroupElement& a,
                                               const GroupElement& x) const {
  check_element(a);
  check_element(x);
  double t = 0.0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    t += static_cast<double>((a.residues[i] * x.residues[i]) % factors_[i]) /
         static_cast<double>(factors_[i]);
  }
  return std::polar(1.0, 2.0 * std::numbers::pi * t);
}

bool GroupSpec::is_coprime_to_order(std::int64_t m) const {
  return std::gcd(math_mod(m, order_), order_) == 1;
}

Rank GroupSpec::rank(const GroupElement& x) const {
  check_element(x);
  Rank r = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    r += x.residues[i] * strides_[i];
  }
  return r;
}

GroupElement GroupSpec::unrank(Rank r) const {
  if (r < 0 || r >= order_) {
    throw std::invalid_argument("rank out of range: " + std::to_string(r));
  }
  GroupElement e;
  e.residues.resize(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    e.residues[i] = r / strides_[i];
    r %= strides_[i];
  }
  return e;
}

Rank GroupSpec::add_ranks(Rank x, Rank y) const {
  Rank out = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::int64_t s = strides_[i];
    std::int64_t v = x / s + y / s;
    x %= s;
    y %= s;
    if (v >= factors_[i]) v -= factors_[i];
    out += v * s;
  }
  return out;
}

Rank GroupSpec::neg_rank(Rank x) const {
  Rank out = 0;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    const std::int64_t s = strides_[i];
    const std::int64_t v = x / s;
    x %= s;
    out += (v == 0 ? 0 : factors_[i] - v) * s;
  }
  return out;
}

std::vector<Rank> GroupSpec::scalar_action_table(std::int64_t m) const {
  // Per-factor multiplier tables composed through the mixed-radix digits.
  std::vector<std::int64_t> mr(factors_.size());
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    mr[i] = math_mod(m, factors_[i]);
  }
  std::vector<Rank> table(static_cast<std::size_t>(order_));
  std::vector<std::int64_t> digits(factors_.size(), 0);
  for (Rank x = 0; x < order_; ++x) {
    Rank out = 0;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
      out += ((mr[i] * digits[i]) % factors_[i]) * strides_[i];
    }
    table[static_cast<std::size_t>(x)] = out;
    for (int i = static_cast<int>(factors_.size()) - 1; i >= 0; --i) {
      auto& dig = digits[static_cast<std::size_t>(i)];
      if (++dig < factors_[static_cast<std::size_t>(i)]) break;
      dig = 0;
    }
  }
  return table;
}

std::string GroupSpec::to_string() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < factors_.size(); ++i) {
    if (i) out << 'x';
    out << 'Z' << factors_[i];
  }
  return out.str();
}

GroupSpec parse_group(const std::string& text) {
  std::vector<std::int64_t> factors;
  std::string token;
  std::vector<std::string> tokens;
  for (const char c : text) {
    if (c == 'x' || c == 'X') {
      tokens.push_back(token);
      token.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
    }
  }
  tokens.push_back(token);
  for (const std::string& tok : tokens) {
    std::size_t pos = 0;
    if (pos < tok.size() && (tok[pos] == 'Z' || tok[pos] == 'z')) ++pos;
    if (pos < tok.size() && tok[pos] == '_') ++pos;
    if (pos >= tok.size()) {
      throw std::invalid_argument("bad group factor token '" + tok + "'");
    }
    std::int64_t n = 0;
    for (; pos < tok.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(tok[pos]))) {
        throw std::invalid_argument("bad group factor token '" + tok + "'");
      }
      n = n * 10 + (tok[pos] - '0');
      if (n > (std::int64_t{1} << 40)) {
        throw std::invalid_argument("group factor too large in '" + tok + "'");
      }
    }
    factors.push_back(n);
  }
  return GroupSpec(std::move(factors));
}

}  // namespace commoneq
