#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace commoneq {

// Canonical enumeration index of a group element, in [0, |G|).
using Rank = std::int64_t;

// Residue vector indexed by the cyclic factors of a GroupSpec. Always stored
// reduced, i.e. residues[i] in [0, n_i).
struct GroupElement {
  std::vector<std::int64_t> residues;

  bool operator==(const GroupElement&) const = default;
};

std::string to_string(const GroupElement& e);

// A finite Abelian group presented as Z_{n_1} x ... x Z_{n_m}. The factor
// list is the presentation; no structure finding happens here. Immutable
// after construction, all operations are pure.
class GroupSpec {
 public:
  // Throws std::invalid_argument on an empty list, a factor <= 1, or if the
  // order overflows a 64-bit integer.
  explicit GroupSpec(std::vector<std::int64_t> factor_orders);

  const std::vector<std::int64_t>& factors() const { return factors_; }
  int num_factors() const { return static_cast<int>(factors_.size()); }
  std::int64_t order() const { return order_; }
  std::int64_t exponent() const { return exponent_; }

  // Builds an element from arbitrary integers, reducing componentwise with
  // the mathematical mod (results in [0, n_i)).
  GroupElement element(const std::vector<std::int64_t>& values) const;
  GroupElement zero() const;

  GroupElement add(const GroupElement& x, const GroupElement& y) const;
  GroupElement neg(const GroupElement& x) const;
  GroupElement scalar_mul(std::int64_t m, const GroupElement& x) const;

  // Least m >= 1 with m*x = 0; always divides exponent().
  std::int64_t element_order(const GroupElement& x) const;

  // The all-ones residue vector; its order equals exponent(). Deterministic.
  GroupElement max_order_element() const;

  // Value of the character D(a) at x under the fixed duality
  //   D(a)(x) = exp(2*pi*i * sum_i a_i x_i / n_i),
  // multiplicative in both arguments, |result| = 1.
  std::complex<double> character_eval(const GroupElement& a,
                                      const GroupElement& x) const;

  // gcd(m mod order, order) == 1 on the reduced representative; m = 0 is not
  // coprime.
  bool is_coprime_to_order(std::int64_t m) const;

  // Mixed-radix enumeration, rank(x) = sum_i x_i * prod_{j>i} n_j. Bijection
  // between [0, order) and residue vectors.
  Rank rank(const GroupElement& x) const;
  GroupElement unrank(Rank r) const;

  // Rank-level arithmetic for hot loops.
  Rank add_ranks(Rank x, Rank y) const;
  Rank neg_rank(Rank x) const;
  // Table t with t[rank(x)] = rank(m*x).
  std::vector<Rank> scalar_action_table(std::int64_t m) const;

  std::string to_string() const;  // e.g. "Z6xZ4"

  bool operator==(const GroupSpec& other) const {
    return factors_ == other.factors_;
  }

 private:
  void check_element(const GroupElement& x) const;

  std::vector<std::int64_t> factors_;
  std::vector<std::int64_t> strides_;
  std::int64_t order_ = 0;
  std::int64_t exponent_ = 0;
};

// Parses the CLI group format "Z6xZ4" (case-insensitive, 'Z' per factor
// optional). Throws std::invalid_argument naming the offending token.
GroupSpec parse_group(const std::string& text);

}  // namespace commoneq
