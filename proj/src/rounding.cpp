#include "commoneq/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "commoneq/errors.hpp"
#include "commoneq/fourier.hpp"

namespace commoneq {

namespace {

constexpr double kIntTol = 1e-12;
constexpr std::int64_t kFallbackMaxOrder = 24;
constexpr std::int64_t kRoundingMaxOrder = 1024;

double product_of(const std::vector<double>& g, const Rank* row, int d) {
  double p = 1.0;
  for (int i = 0; i < d; ++i) p *= g[static_cast<std::size_t>(row[i])];
  return p;
}

// Injective-instance functional psi(g) = sum over injective v of prod g(v_i).
double injective_value(const KernelSplit& ks, const std::vector<double>& g) {
  double total = 0.0;
  const int d = ks.d;
  const std::int64_t rows = ks.injective_count();
  for (std::int64_t r = 0; r < rows; ++r) {
    total += product_of(g, ks.injective.data() + r * d, d);
  }
  return total;
}

std::int64_t count_rows_inside(const std::vector<Rank>& flat, int d,
                               const std::vector<std::uint8_t>& in_set) {
  std::int64_t count = 0;
  const std::int64_t rows = static_cast<std::int64_t>(flat.size()) / d;
  for (std::int64_t r = 0; r < rows; ++r) {
    const Rank* row = flat.data() + r * d;
    bool inside = true;
    for (int i = 0; i < d && inside; ++i) {
      inside = in_set[static_cast<std::size_t>(row[i])] != 0;
    }
    count += inside ? 1 : 0;
  }
  return count;
}

struct PairScan {
  double cur = 0.0;                // current functional value
  std::vector<double> linear;      // A1[p]: d(psi)/d(g[p])
  std::vector<double> cross;       // M[a*n+b] over fractional pairs a < b
};

// One pass over the injective instances: the functional value, its gradient,
// and the bilinear terms for fractional pairs. With h = 1-g in common mode
// the same structure accumulates the complement functional.
void scan(const KernelSplit& ks, const std::vector<double>& g,
          const std::vector<std::uint8_t>& fractional, std::int64_t n,
          PairScan& out) {
  const int d = ks.d;
  out.cur = 0.0;
  out.linear.assign(static_cast<std::size_t>(n), 0.0);
  out.cross.assign(static_cast<std::size_t>(n * n), 0.0);
  std::vector<double> pre(static_cast<std::size_t>(d) + 1, 1.0);
  std::vector<double> suf(static_cast<std::size_t>(d) + 1, 1.0);
  const std::int64_t rows = ks.injective_count();
  for (std::int64_t r = 0; r < rows; ++r) {
    const Rank* row = ks.injective.data() + r * d;
    for (int i = 0; i < d; ++i) {
      pre[static_cast<std::size_t>(i) + 1] =
          pre[static_cast<std::size_t>(i)] * g[static_cast<std::size_t>(row[i])];
    }
    suf[static_cast<std::size_t>(d)] = 1.0;
    for (int i = d - 1; i >= 0; --i) {
      suf[static_cast<std::size_t>(i)] =
          suf[static_cast<std::size_t>(i) + 1] * g[static_cast<std::size_t>(row[i])];
    }
    out.cur += pre[static_cast<std::size_t>(d)];
    for (int i = 0; i < d; ++i) {
      out.linear[static_cast<std::size_t>(row[i])] +=
          pre[static_cast<std::size_t>(i)] * suf[static_cast<std::size_t>(i) + 1];
    }
    for (int i = 0; i < d; ++i) {
      if (!fractional[static_cast<std::size_t>(row[i])]) continue;
      for (int j = i + 1; j < d; ++j) {
        if (!fractional[static_cast<std::size_t>(row[j])]) continue;
        double p = 1.0;
        for (int k = 0; k < d; ++k) {
          if (k != i && k != j) p *= g[static_cast<std::size_t>(row[k])];
        }
        const Rank a = std::min(row[i], row[j]);
        const Rank b = std::max(row[i], row[j]);
        out.cross[static_cast<std::size_t>(a * n + b)] += p;
      }
    }
  }
}

struct Move {
  Rank a = -1, b = -1;
  double eta = 0.0;
  double value = std::numeric_limits<double>::infinity();
  bool saturates_a = false;  // g[a] lands on {0,1}
  bool saturates_b = false;
  double a_target = 0.0;
  double b_target = 0.0;
};

}  // namespace

std::vector<Rank> RoundingResult::members() const {
  std::vector<Rank> out;
  for (std::size_t i = 0; i < membership.size(); ++i) {
    if (membership[i]) out.push_back(static_cast<Rank>(i));
  }
  return out;
}

KernelSplit build_kernel_split(const Equation& eq, const GroupSpec& g) {
  KernelSplit ks;
  ks.d = eq.arity();
  ks.total = kernel_size(eq, g);
  for_each_kernel_instance(eq, g, [&](std::span<const Rank> v) {
    bool repeated = false;
    for (std::size_t i = 0; i < v.size() && !repeated; ++i) {
      for (std::size_t j = i + 1; j < v.size() && !repeated; ++j) {
        repeated = v[i] == v[j];
      }
    }
    auto& bucket = repeated ? ks.noninjective : ks.injective;
    bucket.insert(bucket.end(), v.begin(), v.end());
  });
  return ks;
}

RoundingResult round_to_set(const DenseFunction& f, const Equation& eq,
                            const GroupSpec& g, RoundingMode mode,
                            const RoundingOptions& opts) {
  return round_to_set(f, eq, g, mode, build_kernel_split(eq, g), opts);
}

RoundingResult round_to_set(const DenseFunction& f, const Equation& eq,
                            const GroupSpec& g, RoundingMode mode,
                            const KernelSplit& split,
                            const RoundingOptions& opts) {
  const std::int64_t n = g.order();
  if (n > kRoundingMaxOrder) {
    throw std::invalid_argument("rounding is desk-scale (|G| <= 1024)");
  }
  if (!f.in_unit_range(kRealTol)) {
    throw std::invalid_argument("round_to_set expects a real function into [0,1]");
  }
  const bool common = mode == RoundingMode::Common;
  std::vector<double> vals = f.real_values(kRealTol);
  for (double& v : vals) v = std::clamp(v, 0.0, 1.0);
  const double target_sum =
      std::accumulate(vals.begin(), vals.end(), 0.0);

  std::vector<std::uint8_t> fractional(static_cast<std::size_t>(n), 0);
  std::int64_t frac_count = 0;
  for (std::int64_t i = 0; i < n; ++i) {
    const double v = vals[static_cast<std::size_t>(i)];
    if (v > kIntTol && v < 1.0 - kIntTol) {
      fractional[static_cast<std::size_t>(i)] = 1;
      ++frac_count;
    } else {
      vals[static_cast<std::size_t>(i)] = v > 0.5 ? 1.0 : 0.0;
    }
  }

  const int cap = static_cast<int>(std::min<std::int64_t>(
      opts.cap_factor * n, std::numeric_limits<int>::max()));
  int iterations = 0;
  bool need_fallback = false;
  PairScan main_scan, comp_scan;
  std::vector<double> comp_vals;

  while (frac_count >= 2) {
    if (iterations >= cap) {
      need_fallback = true;
      break;
    }
    scan(split, vals, fractional, n, main_scan);
    if (common) {
      comp_vals.assign(vals.size(), 0.0);
      for (std::size_t i = 0; i < vals.size(); ++i) comp_vals[i] = 1.0 - vals[i];
      scan(split, comp_vals, fractional, n, comp_scan);
    }
    const double cur = main_scan.cur + (common ? comp_scan.cur : 0.0);

    // g[a] += eta, g[b] -= eta changes the functional by beta*eta + alpha*eta^2
    // with alpha <= 0 (the quadratic is concave for nonnegative g), so the
    // minimum over the feasible interval sits at an endpoint, where at least
    // one of the two values saturates.
    Move best;
    Move best_interior;
    std::vector<Rank> frac_idx;
    for (std::int64_t i = 0; i < n; ++i) {
      if (fractional[static_cast<std::size_t>(i)]) frac_idx.push_back(i);
    }
    for (std::size_t ia = 0; ia < frac_idx.size(); ++ia) {
      for (std::size_t ib = ia + 1; ib < frac_idx.size(); ++ib) {
        const Rank a = frac_idx[ia];
        const Rank b = frac_idx[ib];
        const double ga = vals[static_cast<std::size_t>(a)];
        const double gb = vals[static_cast<std::size_t>(b)];
        double beta = main_scan.linear[static_cast<std::size_t>(a)] -
                      main_scan.linear[static_cast<std::size_t>(b)];
        double alpha = -main_scan.cross[static_cast<std::size_t>(a * n + b)];
        if (common) {
          beta -= comp_scan.linear[static_cast<std::size_t>(a)] -
                  comp_scan.linear[static_cast<std::size_t>(b)];
          alpha -= comp_scan.cross[static_cast<std::size_t>(a * n + b)];
        }
        const double lo = std::max(-ga, gb - 1.0);
        const double hi = std::min(1.0 - ga, gb);
        for (const double eta : {lo, hi}) {
          const double value = cur + beta * eta + alpha * eta * eta;
          if (value < best.value) {
            best.a = a;
            best.b = b;
            best.eta = eta;
            best.value = value;
            if (eta == hi) {
              best.saturates_a = 1.0 - ga <= gb;
              best.saturates_b = gb <= 1.0 - ga;
              best.a_target = 1.0;
              best.b_target = 0.0;
            } else {
              best.saturates_a = -ga >= gb - 1.0;
              best.saturates_b = gb - 1.0 >= -ga;
              best.a_target = 0.0;
              best.b_target = 1.0;
            }
          }
        }
        if (alpha > 0.0) {  // numerically convex fluke; try the vertex
          const double eta_s = -beta / (2.0 * alpha);
          if (eta_s > lo && eta_s < hi) {
            const double value = cur + beta * eta_s + alpha * eta_s * eta_s;
            if (value < best_interior.value) {
              best_interior = Move{a, b, eta_s, value, false, false, 0.0, 0.0};
            }
          }
        }
      }
    }

    ++iterations;
    if (best.a >= 0 && best.value <= cur + kIntTol) {
      const Rank a = best.a;
      const Rank b = best.b;
      if (best.saturates_a) {
        vals[static_cast<std::size_t>(b)] -= best.eta;
        vals[static_cast<std::size_t>(a)] = best.a_target;
      }
      if (best.saturates_b) {
        if (!best.saturates_a) vals[static_cast<std::size_t>(a)] += best.eta;
        vals[static_cast<std::size_t>(b)] = best.b_target;
      }
      for (const Rank p : {a, b}) {
        double& v = vals[static_cast<std::size_t>(p)];
        const bool was_frac = fractional[static_cast<std::size_t>(p)] != 0;
        if (v <= kIntTol || v >= 1.0 - kIntTol) {
          v = v > 0.5 ? 1.0 : 0.0;
          if (was_frac) {
            fractional[static_cast<std::size_t>(p)] = 0;
            --frac_count;
          }
        }
      }
    } else if (best_interior.a >= 0 && best_interior.value < cur - kIntTol) {
      vals[static_cast<std::size_t>(best_interior.a)] += best_interior.eta;
      vals[static_cast<std::size_t>(best_interior.b)] -= best_interior.eta;
    } else {
      need_fallback = true;
      break;
    }
  }

  std::vector<std::uint8_t> membership(static_cast<std::size_t>(n), 0);
  bool used_fallback = false;

  if (need_fallback) {
    if (n > kFallbackMaxOrder) {
      throw std::invalid_argument(
          "rounding local search stalled after " + std::to_string(iterations) +
          " iterations and |G| = " + std::to_string(n) +
          " is too large for the exhaustive fallback");
    }
    used_fallback = true;
    std::vector<std::int64_t> sizes;
    const auto lo_size = static_cast<std::int64_t>(std::floor(target_sum));
    const auto hi_size = static_cast<std::int64_t>(std::ceil(target_sum));
    for (std::int64_t s : {lo_size, hi_size}) {
      s = std::clamp<std::int64_t>(s, 0, n);
      if (sizes.empty() || sizes.back() != s) sizes.push_back(s);
    }
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> probe(static_cast<std::size_t>(n), 0);
    std::vector<double> probe_vals(static_cast<std::size_t>(n), 0.0);
    for (const std::int64_t s : sizes) {
      std::vector<int> comb(static_cast<std::size_t>(s));
      for (std::int64_t i = 0; i < s; ++i) comb[static_cast<std::size_t>(i)] = static_cast<int>(i);
      while (true) {
        std::fill(probe.begin(), probe.end(), 0);
        std::fill(probe_vals.begin(), probe_vals.end(), 0.0);
        for (const int idx : comb) {
          probe[static_cast<std::size_t>(idx)] = 1;
          probe_vals[static_cast<std::size_t>(idx)] = 1.0;
        }
        double value = injective_value(split, probe_vals);
        if (common) {
          for (double& v : probe_vals) v = 1.0 - v;
          value += injective_value(split, probe_vals);
        }
        if (value < best_value) {
          best_value = value;
          membership = probe;
        }
        // next combination
        int i = static_cast<int>(s) - 1;
        while (i >= 0 &&
               comb[static_cast<std::size_t>(i)] ==
                   static_cast<int>(n) - static_cast<int>(s) + i) {
          --i;
        }
        if (i < 0) break;
        ++comb[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < static_cast<int>(s); ++j) {
          comb[static_cast<std::size_t>(j)] = comb[static_cast<std::size_t>(j) - 1] + 1;
        }
      }
      if (s == 0) break;  // the empty set was the single combination
    }
  } else {
    if (frac_count == 1) {
      std::int64_t p = -1;
      for (std::int64_t i = 0; i < n; ++i) {
        if (fractional[static_cast<std::size_t>(i)]) p = i;
      }
      if (mode == RoundingMode::Sidorenko) {
        // psi is monotone in each coordinate; dropping the leftover point
        // can only decrease it and keeps |A| > sum - 1.
        vals[static_cast<std::size_t>(p)] = 0.0;
      } else {
        // linear in the single value, so compare the two endpoints directly
        std::vector<double> at0 = vals, at1 = vals;
        at0[static_cast<std::size_t>(p)] = 0.0;
        at1[static_cast<std::size_t>(p)] = 1.0;
        std::vector<double> at0c(at0.size()), at1c(at1.size());
        for (std::size_t i = 0; i < at0.size(); ++i) {
          at0c[i] = 1.0 - at0[i];
          at1c[i] = 1.0 - at1[i];
        }
        const double v0 = injective_value(split, at0) + injective_value(split, at0c);
        const double v1 = injective_value(split, at1) + injective_value(split, at1c);
        vals[static_cast<std::size_t>(p)] = v1 < v0 ? 1.0 : 0.0;
      }
    }
    for (std::int64_t i = 0; i < n; ++i) {
      membership[static_cast<std::size_t>(i)] = vals[static_cast<std::size_t>(i)] > 0.5 ? 1 : 0;
    }
  }

  RoundingResult res;
  res.mode = mode;
  res.membership = membership;
  res.size = std::count(membership.begin(), membership.end(), 1);
  res.iterations = iterations;
  res.used_fallback = used_fallback;

  std::vector<std::uint8_t> comp_membership(membership.size());
  for (std::size_t i = 0; i < membership.size(); ++i) {
    comp_membership[i] = membership[i] ? 0 : 1;
  }
  const std::int64_t inj_in = count_rows_inside(split.injective, split.d, membership);
  const std::int64_t inj_out = count_rows_inside(split.injective, split.d, comp_membership);
  res.noninj_in_set = count_rows_inside(split.noninjective, split.d, membership);
  res.noninj_in_complement =
      count_rows_inside(split.noninjective, split.d, comp_membership);
  const double total = static_cast<double>(split.total);
  res.t_set = static_cast<double>(inj_in + res.noninj_in_set) / total;
  res.t_complement = static_cast<double>(inj_out + res.noninj_in_complement) / total;
  res.t_f = multiplicity_bruteforce(f, eq, g).real();
  res.t_one_minus_f = multiplicity_bruteforce(f.complement(), eq, g).real();

  if (mode == RoundingMode::Sidorenko) {
    const bool size_ok =
        static_cast<double>(res.size) >= target_sum - 1.0 - kTol;
    const bool bound_ok =
        res.t_set <=
        res.t_f + static_cast<double>(res.noninj_in_set) / total + kTol;
    res.inequality_ok = size_ok && bound_ok;
  } else {
    res.inequality_ok =
        res.t_set + res.t_complement <=
        res.t_f + res.t_one_minus_f +
            static_cast<double>(res.noninj_in_set + res.noninj_in_complement) /
                total +
            kTol;
  }
  if (!res.inequality_ok) {
    throw InternalCheckError("rounded set fails the conversion inequality");
  }
  return res;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::FullySidorenko:
      return "FullySidorenko";
    case Classification::FullyCommonNotFullySidorenko:
      return "FullyCommonNotFullySidorenko";
    case Classification::NotFullyCommon:
      return "NotFullyCommon";
    case Classification::NotApplicable:
      return "NotApplicable";
  }
  return "?";
}

Verdict classify(const Equation& eq, const GroupSpec& g) {
  const int d = eq.arity();
  Verdict v;
  v.corollary_constant =
      static_cast<double>(d) * d / deviation_bound(d, 1).universal;
  if (count_coprime_coeffs(eq, g) < d) {
    v.classification = Classification::NotApplicable;
    return v;
  }
  const CancelReport cancel = has_canceling_partition(eq, g);
  if (cancel.exists) {
    v.classification = Classification::FullySidorenko;
    v.partition = cancel.partition;
    return v;
  }
  const UncommonWitness w = build_uncommon_witness(eq, g);
  VerdictMargins m;
  if (d % 2 == 1) {
    v.classification = Classification::FullyCommonNotFullySidorenko;
    m.achieved = w.verification.t_f;
    m.target = std::pow(0.5, d);
  } else {
    v.classification = Classification::NotFullyCommon;
    m.achieved = w.verification.common_sum;
    m.target = std::pow(0.5, d - 1);
  }
  m.margin = m.achieved - m.target;
  v.margins = m;
  v.witness_certificate = w.certificate;
  return v;
}

CorollaryReport corollary_sets(const Equation& eq, const GroupSpec& g) {
  const Verdict verdict = classify(eq, g);
  if (verdict.classification == Classification::NotApplicable) {
    throw NotApplicableError("coefficients share a factor with |G|");
  }
  if (verdict.classification == Classification::FullySidorenko) {
    throw NoWitnessError("fully Sidorenko equation has no corollary sets");
  }
  const UncommonWitness w = build_uncommon_witness(eq, g);
  const KernelSplit split = build_kernel_split(eq, g);
  CorollaryReport rep;
  rep.classification = verdict.classification;
  rep.corollary_constant = verdict.corollary_constant;
  rep.above_threshold =
      static_cast<double>(g.order()) > verdict.corollary_constant;
  const int d = eq.arity();
  if (d % 2 == 1) {
    rep.rounding = round_to_set(w.f, eq, g, RoundingMode::Sidorenko, split);
    rep.set_value = rep.rounding.t_set;
    const double density = static_cast<double>(rep.rounding.size) /
                           static_cast<double>(g.order());
    rep.reference = std::pow(density, d);
  } else {
    rep.rounding = round_to_set(w.f, eq, g, RoundingMode::Common, split);
    rep.set_value = rep.rounding.t_set + rep.rounding.t_complement;
    rep.reference = std::pow(0.5, d - 1);
  }
  rep.margin = rep.set_value - rep.reference;
  return rep;
}

}  // namespace commoneq
