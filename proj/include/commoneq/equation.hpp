#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "commoneq/dense_function.hpp"
#include "commoneq/group.hpp"

namespace commoneq {

// A single homogeneous linear equation L*v = 0 with integer coefficients.
// Coefficients are stored as given; reductions happen per group.
struct Equation {
  std::vector<std::int64_t> coeffs;

  explicit Equation(std::vector<std::int64_t> c);
  int arity() const { return static_cast<int>(coeffs.size()); }
};

// k x d integer system; only used for the generic brute-force multiplicity.
struct LinearSystem {
  std::vector<std::vector<std::int64_t>> rows;

  explicit LinearSystem(std::vector<std::vector<std::int64_t>> r);
  int arity() const { return static_cast<int>(rows.front().size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
};

struct CancelReport {
  bool exists = false;
  // Disjoint index pairs covering [0, d) with exponent(G) | (L_i + L_j),
  // present exactly when exists.
  std::vector<std::pair<int, int>> partition;
};

// Exhaustive backtracking over perfect matchings of the coefficient indices;
// returns a certificate partition when one exists. Odd arity never cancels.
CancelReport has_canceling_partition(const Equation& eq, const GroupSpec& g);

// A single equation has full rank in G iff some coefficient is coprime to |G|.
bool is_full_rank_single(const Equation& eq, const GroupSpec& g);

int count_coprime_coeffs(const Equation& eq, const GroupSpec& g);
// Index of the first coefficient coprime to |G|, or nullopt.
std::optional<int> first_coprime_index(const Equation& eq, const GroupSpec& g);

// |G|^(d-1); throws std::overflow_error if it exceeds 64 bits.
std::int64_t kernel_size(const Equation& eq, const GroupSpec& g);

// Kernel instances as a flat row-major array of ranks, |C| rows of d entries,
// in lexicographic order of the free coordinates (pivot = first coprime
// coefficient, solved by modular inverse). Throws when no pivot exists or the
// kernel exceeds the desk-scale guard of 1e8 entries.
std::vector<Rank> kernel_instances_flat(const Equation& eq, const GroupSpec& g);

// Same enumeration materialized as residue vectors (small groups only).
std::vector<std::vector<GroupElement>> enumerate_kernel(const Equation& eq,
                                                        const GroupSpec& g);

// Streaming enumeration: fn receives each instance as a span of d ranks.
template <class Fn>
void for_each_kernel_instance(const Equation& eq, const GroupSpec& g, Fn&& fn);

// t_L(f) = average of prod_i f(v_i) over all kernel instances. Exact
// enumeration; the k >= 2 overload filters G^d and rejects |G|^d > 1e8.
std::complex<double> multiplicity_bruteforce(const DenseFunction& f,
                                             const Equation& eq,
                                             const GroupSpec& g);
std::complex<double> multiplicity_bruteforce(const DenseFunction& f,
                                             const LinearSystem& sys,
                                             const GroupSpec& g);

// Number of kernel instances with a repeated coordinate.
std::int64_t count_noninjective(const Equation& eq, const GroupSpec& g);

// binom(d,2) * |G|^(d-2), valid when at least three coefficients are coprime
// to |G| (throws otherwise; the bound is not claimed below that).
std::int64_t noninjective_bound(const Equation& eq, const GroupSpec& g);

// Parses the CLI equation format "1,1,-2". Throws std::invalid_argument
// naming the offending token.
Equation parse_equation(const std::string& text);

// ---------------------------------------------------------------------------

template <class Fn>
void for_each_kernel_instance(const Equation& eq, const GroupSpec& g,
                              Fn&& fn) {
  const int d = eq.arity();
  const std::optional<int> pivot = first_coprime_index(eq, g);
  if (!pivot) {
    throw std::invalid_argument(
        "kernel enumeration needs a coefficient coprime to |G|");
  }
  const std::int64_t n = g.order();
  (void)kernel_size(eq, g);

  // Scalar action tables for the free coordinates and the pivot solver
  // y = -inv(L_p) * s, where s is the partial sum over free coordinates.
  std::vector<std::vector<Rank>> mul;
  std::vector<int> free_idx;
  for (int i = 0; i < d; ++i) {
    if (i == *pivot) continue;
    free_idx.push_back(i);
    mul.push_back(g.scalar_action_table(eq.coeffs[i]));
  }
  std::int64_t inv = 1;
  const std::int64_t e = g.exponent();
  const std::int64_t p_red = ((eq.coeffs[*pivot] % e) + e) % e;
  for (std::int64_t cand = 1; cand < e; ++cand) {
    if ((cand * p_red) % e == 1) {
      inv = cand;
      break;
    }
  }
  const std::vector<Rank> solve = g.scalar_action_table(-inv);

  const int nfree = d - 1;
  std::vector<Rank> vr(static_cast<std::size_t>(d), 0);
  std::vector<Rank> partial(static_cast<std::size_t>(nfree) + 1, 0);
  std::vector<Rank> val(static_cast<std::size_t>(nfree), 0);

  if (nfree == 0) {
    vr[static_cast<std::size_t>(*pivot)] = solve[0];
    fn(std::span<const Rank>(vr));
    return;
  }
  int q = 0;
  while (true) {
    if (val[static_cast<std::size_t>(q)] == n) {
      val[static_cast<std::size_t>(q)] = 0;
      if (q == 0) break;
      --q;
      ++val[static_cast<std::size_t>(q)];
      continue;
    }
    const Rank t = val[static_cast<std::size_t>(q)];
    partial[static_cast<std::size_t>(q) + 1] = g.add_ranks(
        partial[static_cast<std::size_t>(q)],
        mul[static_cast<std::size_t>(q)][static_cast<std::size_t>(t)]);
    vr[static_cast<std::size_t>(free_idx[static_cast<std::size_t>(q)])] = t;
    if (q == nfree - 1) {
      vr[static_cast<std::size_t>(*pivot)] =
          solve[static_cast<std::size_t>(partial[static_cast<std::size_t>(q) + 1])];
      fn(std::span<const Rank>(vr));
      ++val[static_cast<std::size_t>(q)];
    } else {
      ++q;
    }
  }
}

}  // namespace commoneq
