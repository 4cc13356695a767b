#include "commoneq/equation.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace commoneq {

namespace {

constexpr std::int64_t kKernelGuard = 100'000'000;  // desk-scale limit
constexpr std::int64_t kAddTableMax = 2048;         // order above which no n^2 table

std::int64_t math_mod(std::int64_t v, std::int64_t n) {
  const std::int64_t r = v % n;
  return r < 0 ? r + n : r;
}

std::int64_t checked_pow(std::int64_t base, int exp) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (__builtin_mul_overflow(out, base, &out)) {
      throw std::overflow_error("kernel size overflows 64 bits");
    }
  }
  return out;
}

// Precomputed tables for iterating the pivot-solved kernel.
struct Walk {
  int d = 0;
  int pivot = 0;
  int nfree = 0;
  std::int64_t n = 0;
  std::vector<int> free_idx;
  std::vector<std::vector<Rank>> mul;  // scalar action per free coordinate
  std::vector<Rank> solve;             // s -> pivot rank with L_p*pivot = -s
  std::vector<Rank> add;               // n*n rank-addition table when small
};

Walk make_walk(const Equation& eq, const GroupSpec& g) {
  const std::optional<int> pivot = first_coprime_index(eq, g);
  if (!pivot) {
    throw std::invalid_argument(
        "kernel enumeration needs a coefficient coprime to |G|");
  }
  if (kernel_size(eq, g) > kKernelGuard) {
    throw std::invalid_argument("kernel larger than the 1e8 desk-scale guard");
  }
  Walk w;
  w.d = eq.arity();
  w.pivot = *pivot;
  w.nfree = w.d - 1;
  w.n = g.order();
  for (int i = 0; i < w.d; ++i) {
    if (i == w.pivot) continue;
    w.free_idx.push_back(i);
    w.mul.push_back(g.scalar_action_table(eq.coeffs[static_cast<std::size_t>(i)]));
  }
  const std::int64_t e = g.exponent();
  const std::int64_t p_red = math_mod(eq.coeffs[static_cast<std::size_t>(w.pivot)], e);
  std::int64_t inv = 1;
  for (std::int64_t cand = 1; cand < e; ++cand) {
    if ((cand * p_red) % e == 1) {
      inv = cand;
      break;
    }
  }
  w.solve = g.scalar_action_table(-inv);
  if (w.n <= kAddTableMax && w.nfree >= 2) {
    w.add.resize(static_cast<std::size_t>(w.n * w.n));
    for (Rank x = 0; x < w.n; ++x) {
      for (Rank y = 0; y < w.n; ++y) {
        w.add[static_cast<std::size_t>(x * w.n + y)] = g.add_ranks(x, y);
      }
    }
  }
  return w;
}

}  // namespace

Equation::Equation(std::vector<std::int64_t> c) : coeffs(std::move(c)) {
  if (coeffs.size() < 2) {
    throw std::invalid_argument("equation needs at least 2 coefficients");
  }
}

LinearSystem::LinearSystem(std::vector<std::vector<std::int64_t>> r)
    : rows(std::move(r)) {
  if (rows.empty()) {
    throw std::invalid_argument("system needs at least one row");
  }
  const std::size_t d = rows.front().size();
  if (d < 2) {
    throw std::invalid_argument("system needs at least 2 columns");
  }
  if (rows.size() > d) {
    throw std::invalid_argument("system has more rows than columns");
  }
  for (const auto& row : rows) {
    if (row.size() != d) {
      throw std::invalid_argument("ragged system rows");
    }
  }
}

CancelReport has_canceling_partition(const Equation& eq, const GroupSpec& g) {
  const int d = eq.arity();
  if (d % 2 != 0) return {};
  const std::int64_t e = g.exponent();
  std::vector<std::int64_t> red(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    red[static_cast<std::size_t>(i)] = math_mod(eq.coeffs[static_cast<std::size_t>(i)], e);
  }
  const auto cancels = [&](int i, int j) {
    return (red[static_cast<std::size_t>(i)] + red[static_cast<std::size_t>(j)]) % e == 0;
  };
  std::vector<bool> matched(static_cast<std::size_t>(d), false);
  std::vector<std::pair<int, int>> pairs;
  const auto backtrack = [&](auto&& self) -> bool {
    int i = 0;
    while (i < d && matched[static_cast<std::size_t>(i)]) ++i;
    if (i == d) return true;
    matched[static_cast<std::size_t>(i)] = true;
    for (int j = i + 1; j < d; ++j) {
      if (matched[static_cast<std::size_t>(j)] || !cancels(i, j)) continue;
      matched[static_cast<std::size_t>(j)] = true;
      pairs.emplace_back(i, j);
      if (self(self)) return true;
      pairs.pop_back();
      matched[static_cast<std::size_t>(j)] = false;
    }
    matched[static_cast<std::size_t>(i)] = false;
    return false;
  };
  CancelReport report;
  report.exists = backtrack(backtrack);
  if (report.exists) report.partition = std::move(pairs);
  return report;
}

bool is_full_rank_single(const Equation& eq, const GroupSpec& g) {
  return first_coprime_index(eq, g).has_value();
}

int count_coprime_coeffs(const Equation& eq, const GroupSpec& g) {
  int count = 0;
  for (const std::int64_t c : eq.coeffs) {
    if (g.is_coprime_to_order(c)) ++count;
  }
  return count;
}

std::optional<int> first_coprime_index(const Equation& eq, const GroupSpec& g) {
  for (int i = 0; i < eq.arity(); ++i) {
    if (g.is_coprime_to_order(eq.coeffs[static_cast<std::size_t>(i)])) return i;
  }
  return std::nullopt;
}

std::int64_t kernel_size(const Equation& eq, const GroupSpec& g) {
  return checked_pow(g.order(), eq.arity() - 1);
}

std::vector<Rank> kernel_instances_flat(const Equation& eq,
                                        const GroupSpec& g) {
  const std::int64_t total = kernel_size(eq, g);
  const int d = eq.arity();
  if (total > kKernelGuard / d) {
    throw std::invalid_argument("kernel too large to materialize");
  }
  std::vector<Rank> flat;
  flat.reserve(static_cast<std::size_t>(total * d));
  for_each_kernel_instance(eq, g, [&](std::span<const Rank> v) {
    flat.insert(flat.end(), v.begin(), v.end());
  });
  return flat;
}

std::vector<std::vector<GroupElement>> enumerate_kernel(const Equation& eq,
                                                        const GroupSpec& g) {
  std::vector<std::vector<GroupElement>> out;
  out.reserve(static_cast<std::size_t>(kernel_size(eq, g)));
  for_each_kernel_instance(eq, g, [&](std::span<const Rank> v) {
    std::vector<GroupElement> inst;
    inst.reserve(v.size());
    for (const Rank r : v) inst.push_back(g.unrank(r));
    out.push_back(std::move(inst));
  });
  return out;
}

namespace {

// Kernel average of prod_i f(v_i) for real f: the free-coordinate product is
// carried down the odometer and the pivot factor is read through a composed
// table, so the innermost loop is three loads and two multiplies.
double real_kernel_sum(const std::vector<double>& f, const Walk& w,
                       const GroupSpec& g) {
  const std::int64_t n = w.n;
  std::vector<double> fsolve(static_cast<std::size_t>(n));
  for (Rank s = 0; s < n; ++s) {
    fsolve[static_cast<std::size_t>(s)] =
        f[static_cast<std::size_t>(w.solve[static_cast<std::size_t>(s)])];
  }
  const std::vector<Rank>& mul_last = w.mul[static_cast<std::size_t>(w.nfree - 1)];
  double total = 0.0;
  double comp = 0.0;  // Kahan correction over leaf blocks
  const auto add_block = [&](double block) {
    const double y = block - comp;
    const double t = total + y;
    comp = (t - total) - y;
    total = t;
  };
  const auto inner = [&](Rank base, double carried) {
    double block = 0.0;
    if (!w.add.empty()) {
      const Rank* row = w.add.data() + base * n;
      for (Rank t = 0; t < n; ++t) {
        block += f[static_cast<std::size_t>(t)] *
                 fsolve[static_cast<std::size_t>(row[mul_last[static_cast<std::size_t>(t)]])];
      }
    } else {
      for (Rank t = 0; t < n; ++t) {
        block += f[static_cast<std::size_t>(t)] *
                 fsolve[static_cast<std::size_t>(
                     g.add_ranks(base, mul_last[static_cast<std::size_t>(t)]))];
      }
    }
    add_block(carried * block);
  };

  const int ndig = w.nfree - 1;
  if (ndig == 0) {
    inner(0, 1.0);
    return total;
  }
  std::vector<Rank> val(static_cast<std::size_t>(ndig), 0);
  std::vector<Rank> sumr(static_cast<std::size_t>(ndig) + 1, 0);
  std::vector<double> prod(static_cast<std::size_t>(ndig) + 1, 1.0);
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
    const Rank step = w.mul[static_cast<std::size_t>(q)][static_cast<std::size_t>(t)];
    sumr[static_cast<std::size_t>(q) + 1] =
        w.add.empty()
            ? g.add_ranks(sumr[static_cast<std::size_t>(q)], step)
            : w.add[static_cast<std::size_t>(sumr[static_cast<std::size_t>(q)] * n + step)];
    prod[static_cast<std::size_t>(q) + 1] =
        prod[static_cast<std::size_t>(q)] * f[static_cast<std::size_t>(t)];
    if (q == ndig - 1) {
      inner(sumr[static_cast<std::size_t>(q) + 1],
            prod[static_cast<std::size_t>(q) + 1]);
      ++val[static_cast<std::size_t>(q)];
    } else {
      ++q;
    }
  }
  return total;
}

}  // namespace

std::complex<double> multiplicity_bruteforce(const DenseFunction& f,
                                             const Equation& eq,
                                             const GroupSpec& g) {
  if (f.size() != g.order()) {
    throw std::invalid_argument("function length does not match |G|");
  }
  const std::int64_t total = kernel_size(eq, g);
  const Walk w = make_walk(eq, g);
  if (f.is_real(1e-15)) {
    std::vector<double> fr(f.values.size());
    for (std::size_t i = 0; i < fr.size(); ++i) fr[i] = f.values[i].real();
    const double s = real_kernel_sum(fr, w, g);
    return {s / static_cast<double>(total), 0.0};
  }
  std::complex<double> sum = 0.0;
  for_each_kernel_instance(eq, g, [&](std::span<const Rank> v) {
    std::complex<double> p = 1.0;
    for (const Rank r : v) p *= f.values[static_cast<std::size_t>(r)];
    sum += p;
  });
  return sum / static_cast<double>(total);
}

std::complex<double> multiplicity_bruteforce(const DenseFunction& f,
                                             const LinearSystem& sys,
                                             const GroupSpec& g) {
  if (sys.num_rows() == 1) {
    return multiplicity_bruteforce(f, Equation(sys.rows.front()), g);
  }
  if (f.size() != g.order()) {
    throw std::invalid_argument("function length does not match |G|");
  }
  const int d = sys.arity();
  const int k = sys.num_rows();
  const std::int64_t n = g.order();
  if (checked_pow(n, d) > kKernelGuard) {
    throw std::invalid_argument("|G|^d exceeds the 1e8 brute-force guard");
  }
  std::vector<std::vector<std::vector<Rank>>> mul(static_cast<std::size_t>(k));
  for (int h = 0; h < k; ++h) {
    for (int i = 0; i < d; ++i) {
      mul[static_cast<std::size_t>(h)].push_back(
          g.scalar_action_table(sys.rows[static_cast<std::size_t>(h)][static_cast<std::size_t>(i)]));
    }
  }
  std::complex<double> sum = 0.0;
  std::int64_t count = 0;
  std::vector<Rank> val(static_cast<std::size_t>(d), 0);
  // partial[q][h]: row sums over the first q coordinates
  std::vector<std::vector<Rank>> partial(static_cast<std::size_t>(d) + 1,
                                         std::vector<Rank>(static_cast<std::size_t>(k), 0));
  std::vector<std::complex<double>> prod(static_cast<std::size_t>(d) + 1, 1.0);
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
    for (int h = 0; h < k; ++h) {
      partial[static_cast<std::size_t>(q) + 1][static_cast<std::size_t>(h)] = g.add_ranks(
          partial[static_cast<std::size_t>(q)][static_cast<std::size_t>(h)],
          mul[static_cast<std::size_t>(h)][static_cast<std::size_t>(q)][static_cast<std::size_t>(t)]);
    }
    prod[static_cast<std::size_t>(q) + 1] =
        prod[static_cast<std::size_t>(q)] * f.values[static_cast<std::size_t>(t)];
    if (q == d - 1) {
      bool solves = true;
      for (int h = 0; h < k && solves; ++h) {
        solves = partial[static_cast<std::size_t>(d)][static_cast<std::size_t>(h)] == 0;
      }
      if (solves) {
        sum += prod[static_cast<std::size_t>(d)];
        ++count;
      }
      ++val[static_cast<std::size_t>(q)];
    } else {
      ++q;
    }
  }
  return sum / static_cast<double>(count);
}

std::int64_t count_noninjective(const Equation& eq, const GroupSpec& g) {
  const int d = eq.arity();
  std::int64_t count = 0;
  for_each_kernel_instance(eq, g, [&](std::span<const Rank> v) {
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        if (v[static_cast<std::size_t>(i)] == v[static_cast<std::size_t>(j)]) {
          ++count;
          return;
        }
      }
    }
  });
  return count;
}

std::int64_t noninjective_bound(const Equation& eq, const GroupSpec& g) {
  if (count_coprime_coeffs(eq, g) < 3) {
    throw std::invalid_argument(
        "non-injective bound needs at least three coprime coefficients");
  }
  const int d = eq.arity();
  const std::int64_t pairs = static_cast<std::int64_t>(d) * (d - 1) / 2;
  std::int64_t out = checked_pow(g.order(), d - 2);
  if (__builtin_mul_overflow(out, pairs, &out)) {
    throw std::overflow_error("non-injective bound overflows 64 bits");
  }
  return out;
}

Equation parse_equation(const std::string& text) {
  std::vector<std::int64_t> coeffs;
  std::string token;
  std::vector<std::string> tokens;
  for (const char c : text) {
    if (c == ',') {
      tokens.push_back(token);
      token.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      token.push_back(c);
    }
  }
  tokens.push_back(token);
  for (const std::string& tok : tokens) {
    std::int64_t v = 0;
    const auto [ptr, ec] =
        std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      throw std::invalid_argument("bad coefficient token '" + tok + "'");
    }
    coeffs.push_back(v);
  }
  return Equation(std::move(coeffs));
}

}  // namespace commoneq
