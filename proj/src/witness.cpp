#include "commoneq/witness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "commoneq/errors.hpp"
#include "commoneq/fourier.hpp"

namespace commoneq {

namespace {

constexpr std::int64_t kGridGuard = 200'000'000;

void require_all_coprime(const Equation& eq, const GroupSpec& g) {
  for (const std::int64_t c : eq.coeffs) {
    if (!g.is_coprime_to_order(c)) {
      throw NotApplicableError("coefficient " + std::to_string(c) +
                               " is not coprime to |G| = " +
                               std::to_string(g.order()));
    }
  }
}

double golden_min(const WitnessPlan& plan, double lo, double hi,
                  double* best_phi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double c = hi - kInvPhi * (hi - lo);
  double d = lo + kInvPhi * (hi - lo);
  double fc = psi(plan, c);
  double fd = psi(plan, d);
  double best_v = fc;
  *best_phi = c;
  if (fd < best_v) {
    best_v = fd;
    *best_phi = d;
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - kInvPhi * (hi - lo);
      fc = psi(plan, c);
      if (fc < best_v) {
        best_v = fc;
        *best_phi = c;
      }
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + kInvPhi * (hi - lo);
      fd = psi(plan, d);
      if (fd < best_v) {
        best_v = fd;
        *best_phi = d;
      }
    }
  }
  return best_v;
}

}  // namespace

WitnessPlan build_plan(const Equation& eq, const GroupSpec& g) {
  require_all_coprime(eq, g);
  if (g.exponent() < 3) {
    throw std::invalid_argument(
        "exponent-2 group: the phase construction needs an element of order "
        ">= 3; use witness_exponent2");
  }
  const CancelReport cancel = has_canceling_partition(eq, g);
  if (cancel.exists) {
    throw NoWitnessError(
        "a canceling partition exists; no negative-deviation witness");
  }

  WitnessPlan plan{g, eq, g.max_order_element(), {}, {}, 0, {}, 0, 0.0};
  const int d = eq.arity();
  const std::int64_t n = g.order();
  if (g.element_order(plan.a) != g.exponent()) {
    throw InternalCheckError("all-ones element does not have maximal order");
  }

  // U = {L_i * a}, deduplicated.
  for (int i = 0; i < d; ++i) {
    plan.u.push_back(
        g.rank(g.scalar_mul(eq.coeffs[static_cast<std::size_t>(i)], plan.a)));
  }
  std::sort(plan.u.begin(), plan.u.end());
  plan.u.erase(std::unique(plan.u.begin(), plan.u.end()), plan.u.end());
  for (const Rank b : plan.u) {
    if (b == 0 || g.neg_rank(b) == b) {
      throw InternalCheckError(
          "U contains 0 or a self-inverse element despite coprimality");
    }
  }

  // One representative per +/- pair; ascending scan keeps the smaller rank.
  for (const Rank b : plan.u) {
    const Rank nb = g.neg_rank(b);
    if (std::binary_search(plan.u.begin(), plan.u.end(), nb) && nb < b) {
      continue;  // partner already in S
    }
    plan.s.push_back(b);
  }
  plan.r = static_cast<int>(plan.s.size());

  plan.period_den = 1;
  for (int j = 0; j < plan.r; ++j) {
    if (__builtin_mul_overflow(plan.period_den, std::int64_t{2} * d,
                               &plan.period_den)) {
      throw std::invalid_argument("(2d)^r overflows 64 bits");
    }
  }

  // lookup[rank] = +-(j+1) when rank = +-s_j, else 0.
  std::vector<int> lookup(static_cast<std::size_t>(n), 0);
  for (int j = 0; j < plan.r; ++j) {
    lookup[static_cast<std::size_t>(plan.s[static_cast<std::size_t>(j)])] = j + 1;
    lookup[static_cast<std::size_t>(
        g.neg_rank(plan.s[static_cast<std::size_t>(j)]))] = -(j + 1);
  }
  std::vector<std::vector<Rank>> mul;
  mul.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    mul.push_back(g.scalar_action_table(eq.coeffs[static_cast<std::size_t>(i)]));
  }

  // Powers (2d)^(r-j) for j=1..r.
  std::vector<std::int64_t> weight(static_cast<std::size_t>(plan.r) + 1, 1);
  for (int j = plan.r - 1; j >= 1; --j) {
    weight[static_cast<std::size_t>(j)] =
        weight[static_cast<std::size_t>(j) + 1] * 2 * d;
  }

  for (Rank x = 1; x < n; ++x) {
    PlanInstance inst;
    inst.x = x;
    bool member = true;
    for (int i = 0; i < d && member; ++i) {
      const int v = lookup[static_cast<std::size_t>(
          mul[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)])];
      if (v == 0) {
        member = false;
      } else {
        inst.level.push_back(std::abs(v));
        inst.sign.push_back(v > 0 ? 1 : -1);
      }
    }
    if (!member) continue;

    // The paper's key claim: some level has unbalanced signs, otherwise the
    // signature would assemble into a canceling partition. This certifies
    // c_x != 0.
    std::vector<std::int64_t> net(static_cast<std::size_t>(plan.r) + 1, 0);
    for (int i = 0; i < d; ++i) {
      net[static_cast<std::size_t>(inst.level[static_cast<std::size_t>(i)])] +=
          inst.sign[static_cast<std::size_t>(i)];
    }
    if (std::all_of(net.begin(), net.end(),
                    [](std::int64_t v) { return v == 0; })) {
      throw InternalCheckError(
          "balanced signature at every level for x = " + std::to_string(x) +
          "; contradicts the absence of a canceling partition");
    }
    for (int j = 1; j <= plan.r; ++j) {
      inst.c_num += net[static_cast<std::size_t>(j)] *
                    weight[static_cast<std::size_t>(j)];
    }
    if (inst.c_num == 0 || 2 * std::abs(inst.c_num) > plan.period_den) {
      throw InternalCheckError("frequency c_x out of range for x = " +
                               std::to_string(x));
    }
    if (g.element_order(g.unrank(x)) != g.exponent()) {
      throw InternalCheckError("member of X without maximal order: x = " +
                               std::to_string(x));
    }
    plan.instances.push_back(std::move(inst));
  }

  // a and -a always belong to X, and frequencies pair up as c_{-x} = -c_x.
  const Rank a_rank = g.rank(plan.a);
  std::vector<std::int64_t> c_of(static_cast<std::size_t>(n), 0);
  bool has_a = false;
  bool has_neg_a = false;
  for (const PlanInstance& inst : plan.instances) {
    c_of[static_cast<std::size_t>(inst.x)] = inst.c_num;
    has_a = has_a || inst.x == a_rank;
    has_neg_a = has_neg_a || inst.x == g.neg_rank(a_rank);
  }
  if (!has_a || !has_neg_a) {
    throw InternalCheckError("X does not contain +-a");
  }
  for (const PlanInstance& inst : plan.instances) {
    if (c_of[static_cast<std::size_t>(g.neg_rank(inst.x))] != -inst.c_num) {
      throw InternalCheckError("X is not frequency-antisymmetric");
    }
  }

  plan.threshold = static_cast<double>(plan.x_size()) /
                   (2.0 * std::sqrt(2.0) * static_cast<double>(plan.period_den));
  return plan;
}

DenseFunction phase_function(const WitnessPlan& plan, double phi) {
  const GroupSpec& g = plan.group;
  DenseFunction gp = DenseFunction::constant(g, 0.0);
  gp.values[0] = 0.5;
  const double amp = 1.0 / (4.0 * plan.r);
  double denom = 1.0;
  for (int j = 0; j < plan.r; ++j) {
    denom *= 2.0 * plan.eq.arity();
    const std::complex<double> v =
        std::polar(amp, 2.0 * std::numbers::pi * phi / denom);
    const Rank s = plan.s[static_cast<std::size_t>(j)];
    gp.values[static_cast<std::size_t>(s)] = v;
    gp.values[static_cast<std::size_t>(g.neg_rank(s))] = std::conj(v);
  }
  return gp;
}

DenseFunction witness_function(const WitnessPlan& plan, double phi) {
  const GroupSpec& g = plan.group;
  const DenseFunction gp = phase_function(plan, phi);
  DenseFunction f = idft(g, Spectrum{gp.values});
  if (!f.is_real(kRealTol)) {
    throw InternalCheckError("witness function is not real");
  }
  const double mean = f.mean().real();
  if (std::abs(mean - 0.5) > kRealTol) {
    throw InternalCheckError("witness mean " + std::to_string(mean) +
                             " is not 1/2");
  }
  for (auto& v : f.values) {
    const double re = v.real();
    if (re < -kRealTol || re > 1.0 + kRealTol) {
      throw InternalCheckError("witness value " + std::to_string(re) +
                               " outside [0,1]");
    }
    v = std::clamp(re, 0.0, 1.0);
  }
  return f;
}

double psi(const WitnessPlan& plan, double phi) {
  const double den = static_cast<double>(plan.period_den);
  double sum = 0.0;
  for (const PlanInstance& inst : plan.instances) {
    sum += std::cos(2.0 * std::numbers::pi *
                    (static_cast<double>(inst.c_num) / den) * phi);
  }
  return sum;
}

PhaseSearchResult find_negative_phase(const WitnessPlan& plan) {
  const double period = plan.period();
  const std::int64_t base =
      std::max<std::int64_t>(100'000, static_cast<std::int64_t>(std::ceil(1000.0 * period)));
  for (const std::int64_t mult : {std::int64_t{1}, std::int64_t{10}}) {
    const std::int64_t n = base * mult;
    if (n > kGridGuard) {
      throw std::invalid_argument("phase grid beyond the desk-scale guard");
    }
    double best_v = psi(plan, 0.0);
    double best_phi = 0.0;
    for (std::int64_t k = 1; k <= n; ++k) {
      const double phi = period * static_cast<double>(k) / static_cast<double>(n);
      const double v = psi(plan, phi);
      if (v < best_v) {
        best_v = v;
        best_phi = phi;
      }
    }
    const double h = period / static_cast<double>(n);
    double refined_phi = best_phi;
    const double refined_v =
        golden_min(plan, std::max(0.0, best_phi - h),
                   std::min(period, best_phi + h), &refined_phi);
    if (refined_v < best_v) {
      best_v = refined_v;
      best_phi = refined_phi;
    }
    if (best_v <= -plan.threshold) {
      return {best_phi, best_v, n};
    }
  }
  throw InternalCheckError(
      "phase search exhausted without reaching the threshold; the plan is "
      "corrupt or the resolution ladder is insufficient");
}

DeviationBound deviation_bound(int d, int r) {
  if (r < 1 || r > d) {
    throw std::invalid_argument("deviation bound needs 1 <= r <= d");
  }
  const double sqrt2 = std::sqrt(2.0);
  DeviationBound b{};
  b.tight = 1.0 / (std::pow(4.0 * r, d) * 2.0 * sqrt2 * std::pow(2.0 * d, r));
  b.universal =
      1.0 / (std::pow(2.0, 3 * d + 1) * sqrt2 * std::pow(double(d), 2 * d));
  return b;
}

DenseFunction witness_exponent2(const Equation& eq, const GroupSpec& g) {
  if (g.exponent() != 2) {
    throw std::invalid_argument("witness_exponent2 needs an exponent-2 group");
  }
  if (eq.arity() % 2 == 0) {
    throw std::invalid_argument("witness_exponent2 needs odd arity");
  }
  require_all_coprime(eq, g);
  const GroupElement a = g.max_order_element();
  DenseFunction f;
  f.values.reserve(static_cast<std::size_t>(g.order()));
  for (Rank x = 0; x < g.order(); ++x) {
    const std::complex<double> chi = g.character_eval(a, g.unrank(x));
    f.values.emplace_back(0.5 - 0.25 * (chi.real() > 0 ? 1.0 : -1.0), 0.0);
  }
  return f;
}

UncommonWitness build_uncommon_witness(const Equation& eq, const GroupSpec& g,
                                       double tol) {
  require_all_coprime(eq, g);
  if (has_canceling_partition(eq, g).exists) {
    throw NoWitnessError(
        "a canceling partition exists; the equation is fully Sidorenko");
  }
  const int d = eq.arity();
  UncommonWitness w;
  w.certificate.delta_universal = deviation_bound(d, 1).universal;

  if (g.exponent() == 2) {
    // Odd d is implied here: with exponent 2 and odd coefficients, any
    // pairing of an even number of indices would cancel.
    w.f = witness_exponent2(eq, g);
    w.certificate.path = WitnessPath::ExponentTwo;
    w.certificate.phi_star = 0.0;
    w.certificate.psi_value = -1.0;  // the single spectral term, normalized
    w.certificate.threshold = 1.0;
    w.certificate.r = 0;
    w.certificate.x_size = 1;
    w.certificate.delta_tight = std::pow(0.25, d);
  } else {
    WitnessPlan plan = build_plan(eq, g);
    const PhaseSearchResult search = find_negative_phase(plan);
    w.f = witness_function(plan, search.phi_star);
    w.certificate.path = WitnessPath::PhaseSearch;
    w.certificate.phi_star = search.phi_star;
    w.certificate.psi_value = search.psi_value;
    w.certificate.threshold = plan.threshold;
    w.certificate.r = plan.r;
    w.certificate.x_size = plan.x_size();
    w.certificate.delta_tight =
        std::pow(4.0 * plan.r, -d) * plan.threshold;
    w.plan = std::move(plan);
  }

  w.certificate.deviation = deviation(w.f, eq, g);

  WitnessVerification& v = w.verification;
  v.mean = w.f.mean().real();
  v.mean_ok = std::abs(v.mean - 0.5) <= kRealTol;
  v.range_ok = w.f.in_unit_range(kRealTol);
  const std::complex<double> t_f = multiplicity_fourier(w.f, eq, g);
  v.t_f = t_f.real();
  v.common_sum = common_sum(w.f, eq, g);
  if (d % 2 == 1) {
    v.bound = std::pow(0.5, d) - w.certificate.delta_tight;
    v.inequality_ok = v.t_f <= v.bound + tol;
  } else {
    v.bound = std::pow(0.5, d - 1) - 2.0 * w.certificate.delta_tight;
    v.inequality_ok = v.common_sum <= v.bound + tol;
  }
  w.certificate.verified =
      v.mean_ok && v.range_ok && v.inequality_ok &&
      w.certificate.deviation <= -w.certificate.delta_tight + tol;
  return w;
}

}  // namespace commoneq
