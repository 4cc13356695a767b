#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "commoneq/errors.hpp"
#include "commoneq/fourier.hpp"
#include "commoneq/witness.hpp"
#include "test_util.hpp"

using namespace commoneq;

namespace {

struct PlanCase {
  GroupSpec group;
  Equation eq;
};

std::vector<PlanCase> plan_cases() {
  return {
      {GroupSpec({5}), Equation({1, 1, 1})},
      {GroupSpec({5}), Equation({1, 1, 1, 1})},
      {GroupSpec({7}), Equation({1, 1, 1, 1})},
      {GroupSpec({7, 3}), Equation({1, 1, 2})},
      {GroupSpec({11}), Equation({1, 2, 3})},
      {GroupSpec({5}), Equation({1, 1, 2, 2})},
      {GroupSpec({6}), Equation({1, 5, 1})},
      {GroupSpec({4, 2}), Equation({1, 1, 1})},
      {GroupSpec({9}), Equation({1, 1, 2, 2, 1})},
  };
}

}  // namespace

TEST_CASE("plan for Z5 x+y+z") {
  const GroupSpec z5({5});
  const WitnessPlan plan = build_plan(Equation({1, 1, 1}), z5);
  CHECK(plan.a == z5.element({1}));
  CHECK(plan.u == std::vector<Rank>{1});
  CHECK(plan.s == std::vector<Rank>{1});
  CHECK(plan.r == 1);
  CHECK(plan.period_den == 6);
  REQUIRE(plan.instances.size() == 2);
  CHECK(plan.instances[0].x == 1);
  CHECK(plan.instances[0].c_num == 3);  // c = 1/2
  CHECK(plan.instances[1].x == 4);
  CHECK(plan.instances[1].c_num == -3);
  CHECK(plan.threshold == doctest::Approx(2.0 / (2.0 * std::sqrt(2.0) * 6.0)));
}

TEST_CASE("plan for Z7 with four variables") {
  const GroupSpec z7({7});
  const WitnessPlan plan = build_plan(Equation({1, 1, 1, 1}), z7);
  CHECK(plan.r == 1);
  CHECK(plan.period_den == 8);
  REQUIRE(plan.instances.size() == 2);
  CHECK(plan.instances[0].x == 1);
  CHECK(plan.instances[0].c_num == 4);  // c = 4 * (1/8) = 1/2
  CHECK(plan.instances[1].x == 6);
  CHECK(plan.instances[1].c_num == -4);
}

TEST_CASE("plan structural invariants across cases") {
  for (const PlanCase& pc : plan_cases()) {
    const GroupSpec& g = pc.group;
    const WitnessPlan plan = build_plan(pc.eq, g);
    const Rank a_rank = g.rank(plan.a);
    bool saw_a = false;
    bool saw_neg_a = false;
    for (const PlanInstance& inst : plan.instances) {
      saw_a = saw_a || inst.x == a_rank;
      saw_neg_a = saw_neg_a || inst.x == g.neg_rank(a_rank);
      CHECK(inst.c_num != 0);
      CHECK(2 * std::abs(inst.c_num) <= plan.period_den);
      CHECK(g.element_order(g.unrank(inst.x)) == g.exponent());
    }
    CHECK(saw_a);
    CHECK(saw_neg_a);
    CHECK(plan.r <= pc.eq.arity());
    for (const Rank b : plan.u) {
      CHECK(b != 0);
      CHECK(g.neg_rank(b) != b);
    }
  }
}

TEST_CASE("plan preconditions") {
  CHECK_THROWS_AS(build_plan(Equation({1, 1, 1}), GroupSpec({2, 2})),
                  std::invalid_argument);  // exponent 2
  CHECK_THROWS_AS(build_plan(Equation({1, -1}), GroupSpec({7})), NoWitnessError);
  CHECK_THROWS_AS(build_plan(Equation({2, 3}), GroupSpec({6})), NotApplicableError);
}

TEST_CASE("phase function values and support") {
  const GroupSpec z5({5});
  const WitnessPlan plan = build_plan(Equation({1, 1, 1}), z5);

  const DenseFunction g0 = phase_function(plan, 0.0);
  CHECK(g0.is_real(1e-15));
  CHECK(g0.values[0].real() == doctest::Approx(0.5));
  CHECK(g0.values[1].real() == doctest::Approx(0.25));
  CHECK(g0.values[4].real() == doctest::Approx(0.25));

  const DenseFunction g1 = phase_function(plan, 1.0);
  const std::complex<double> expected =
      std::polar(0.25, 2.0 * std::numbers::pi / 6.0);
  CHECK(std::abs(g1.values[1] - expected) < 1e-12);
  CHECK(std::abs(g1.values[4] - std::conj(expected)) < 1e-12);

  for (const PlanCase& pc : plan_cases()) {
    const WitnessPlan p = build_plan(pc.eq, pc.group);
    int nonzero = 0;
    for (const auto& v : phase_function(p, 0.37).values) {
      if (std::abs(v) > 0.0) ++nonzero;
    }
    CHECK(nonzero == 2 * p.r + 1);
  }
}

TEST_CASE("witness function closed form on Z5") {
  const GroupSpec z5({5});
  const WitnessPlan plan = build_plan(Equation({1, 1, 1}), z5);
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> phase(0.0, 6.0);
  for (int it = 0; it < 20; ++it) {
    const double phi = phase(rng);
    const DenseFunction f = witness_function(plan, phi);
    for (Rank x = 0; x < 5; ++x) {
      const double expected =
          0.5 + 0.5 * std::cos(2.0 * std::numbers::pi *
                               (phi / 6.0 - static_cast<double>(x) / 5.0));
      CHECK(f.values[static_cast<std::size_t>(x)].real() ==
            doctest::Approx(expected).epsilon(1e-10));
    }
  }
}

TEST_CASE("witness function is real, in range, mean 1/2, and inverts to g_phi") {
  std::mt19937_64 rng(43);
  for (const PlanCase& pc : plan_cases()) {
    const WitnessPlan plan = build_plan(pc.eq, pc.group);
    std::uniform_real_distribution<double> phase(0.0, plan.period());
    for (int it = 0; it < 100; ++it) {
      const double phi = phase(rng);
      const DenseFunction f = witness_function(plan, phi);
      CHECK(f.is_real(1e-12));
      CHECK(f.in_unit_range(1e-12));
      CHECK(std::abs(f.mean().real() - 0.5) <= 1e-12);
    }
    const double phi = phase(rng);
    const DenseFunction f = witness_function(plan, phi);
    const Spectrum s = dft(pc.group, f);
    const DenseFunction gp = phase_function(plan, phi);
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
      CHECK(std::abs(s.coeffs[i] - gp.values[i]) < 1e-9);
    }
  }
}

TEST_CASE("psi closed form, bounds, and calibration") {
  std::mt19937_64 rng(47);
  const GroupSpec z5({5});
  const WitnessPlan zplan = build_plan(Equation({1, 1, 1}), z5);
  for (double phi = 0.0; phi <= 6.0; phi += 0.25) {
    CHECK(psi(zplan, phi) ==
          doctest::Approx(2.0 * std::cos(std::numbers::pi * phi)).epsilon(1e-12));
  }
  CHECK(psi(zplan, 1.0) == doctest::Approx(-2.0));

  for (const PlanCase& pc : plan_cases()) {
    const WitnessPlan plan = build_plan(pc.eq, pc.group);
    const double x_size = static_cast<double>(plan.x_size());
    CHECK(psi(plan, 0.0) == doctest::Approx(x_size));
    CHECK(std::abs(psi(plan, 0.123)) <= x_size + 1e-12);

    // near the left boundary psi stays >= |X|/sqrt(2)
    for (double phi = 0.0; phi <= 0.25; phi += 0.01) {
      CHECK(psi(plan, phi) >= x_size / std::sqrt(2.0) - 1e-12);
    }

    // periodicity
    std::uniform_real_distribution<double> phase(0.0, plan.period());
    for (int it = 0; it < 25; ++it) {
      const double phi = phase(rng);
      CHECK(psi(plan, phi) ==
            doctest::Approx(psi(plan, phi + plan.period())).epsilon(1e-9));
    }

    // deviation(f_phi) = (4r)^-d * psi(phi), linking the shortcut to the
    // generic Fourier route
    const double scale = std::pow(4.0 * plan.r, -pc.eq.arity());
    for (int it = 0; it < 20; ++it) {
      const double phi = phase(rng);
      const DenseFunction f = witness_function(plan, phi);
      CHECK(std::abs(deviation(f, pc.eq, pc.group) - scale * psi(plan, phi)) <
            1e-9);
    }

    // trapezoid average over one period vanishes
    const int steps = 100000;
    double integral = 0.0;
    for (int k = 0; k <= steps; ++k) {
      const double phi =
          plan.period() * static_cast<double>(k) / static_cast<double>(steps);
      const double wgt = (k == 0 || k == steps) ? 0.5 : 1.0;
      integral += wgt * psi(plan, phi);
    }
    integral /= static_cast<double>(steps);
    CHECK(std::abs(integral) < 1e-6);
  }
}

TEST_CASE("negative phase search meets the threshold everywhere") {
  for (const PlanCase& pc : plan_cases()) {
    const WitnessPlan plan = build_plan(pc.eq, pc.group);
    const PhaseSearchResult res = find_negative_phase(plan);
    CHECK(res.psi_value <= -plan.threshold);
    CHECK(res.phi_star >= 0.0);
    CHECK(res.phi_star <= plan.period());
    CHECK(psi(plan, res.phi_star) == doctest::Approx(res.psi_value));
  }
}

TEST_CASE("negative phase search finds the analytic optimum on Z5") {
  const GroupSpec z5({5});
  const WitnessPlan plan = build_plan(Equation({1, 1, 1}), z5);
  const PhaseSearchResult res = find_negative_phase(plan);
  // psi = 2cos(pi*phi) has its minimum -2 at phi = 1
  CHECK(std::abs(res.phi_star - 1.0) < 1e-4);
  CHECK(res.psi_value == doctest::Approx(-2.0).epsilon(1e-10));
  const double dev = deviation(witness_function(plan, res.phi_star),
                               Equation({1, 1, 1}), z5);
  CHECK(std::abs(dev - (-1.0 / 32.0)) < 1e-6);
}

TEST_CASE("deviation bounds") {
  const DeviationBound b3 = deviation_bound(3, 1);
  CHECK(b3.universal == doctest::Approx(9.47e-7).epsilon(0.01));
  CHECK(b3.tight == doctest::Approx(9.21e-4).epsilon(0.01));
  CHECK(b3.tight >= b3.universal);

  const DeviationBound b4 = deviation_bound(4, 2);
  CHECK(b4.universal == doctest::Approx(1.317e-9).epsilon(0.01));
  CHECK(b4.tight >= b4.universal);

  for (int d = 2; d <= 6; ++d) {
    for (int r = 1; r <= d; ++r) {
      CHECK(deviation_bound(d, r).tight >= deviation_bound(d, r).universal);
    }
  }
  CHECK_THROWS_AS(deviation_bound(3, 0), std::invalid_argument);
  CHECK_THROWS_AS(deviation_bound(3, 4), std::invalid_argument);
}

TEST_CASE("exponent-2 witness") {
  for (const auto& factors :
       std::vector<std::vector<std::int64_t>>{{2}, {2, 2}}) {
    const GroupSpec g(factors);
    const Equation eq({1, 1, 1});
    const DenseFunction f = witness_exponent2(eq, g);
    CHECK(std::abs(f.mean().real() - 0.5) < 1e-15);
    for (const auto& v : f.values) {
      CHECK((std::abs(v.real() - 0.25) < 1e-15 || std::abs(v.real() - 0.75) < 1e-15));
    }
    // single surviving spectral term (-1/4)^3
    const double t = multiplicity_bruteforce(f, eq, g).real();
    CHECK(t == doctest::Approx(1.0 / 8.0 - 1.0 / 64.0).epsilon(1e-12));
    CHECK(deviation(f, eq, g) == doctest::Approx(-1.0 / 64.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(witness_exponent2(Equation({1, 1, 1}), GroupSpec({5})),
                  std::invalid_argument);
  CHECK_THROWS_AS(witness_exponent2(Equation({1, 1, 1, 1}), GroupSpec({2, 2})),
                  std::invalid_argument);
}

TEST_CASE("uncommon witness for Z5 x+y+z") {
  const GroupSpec z5({5});
  const Equation eq({1, 1, 1});
  const UncommonWitness w = build_uncommon_witness(eq, z5);
  CHECK(w.certificate.path == WitnessPath::PhaseSearch);
  CHECK(w.certificate.verified);
  const double t = multiplicity_bruteforce(w.f, eq, z5).real();
  CHECK(t == doctest::Approx(3.0 / 32.0).epsilon(1e-9));
  CHECK(t < 1.0 / 8.0);
}

TEST_CASE("uncommon witness for even arity keeps the common sum low") {
  const GroupSpec z5({5});
  const Equation eq({1, 1, 1, 1});
  const UncommonWitness w = build_uncommon_witness(eq, z5);
  CHECK(w.certificate.verified);
  const double cs = multiplicity_bruteforce(w.f, eq, z5).real() +
                    multiplicity_bruteforce(w.f.complement(), eq, z5).real();
  CHECK(cs < 1.0 / 8.0);
  CHECK(cs == doctest::Approx(w.verification.common_sum).epsilon(1e-9));
}

TEST_CASE("uncommon witness on a composite product group") {
  const GroupSpec g({7, 3});
  const Equation eq({1, 1, 2});
  const UncommonWitness w = build_uncommon_witness(eq, g);
  CHECK(w.certificate.verified);
  const double dev_bf = multiplicity_bruteforce(w.f, eq, g).real() -
                        std::pow(w.f.mean().real(), 3);
  CHECK(dev_bf < 0.0);
  CHECK(std::abs(dev_bf - w.certificate.deviation) < 1e-9);
}

TEST_CASE("uncommon witness dispatches to the exponent-2 path") {
  const GroupSpec g({2, 2});
  const UncommonWitness w = build_uncommon_witness(Equation({1, 1, 1}), g);
  CHECK(w.certificate.path == WitnessPath::ExponentTwo);
  CHECK(w.certificate.verified);
  CHECK(w.certificate.deviation == doctest::Approx(-1.0 / 64.0).epsilon(1e-12));
  CHECK_FALSE(w.plan.has_value());
}

TEST_CASE("uncommon witness errors") {
  CHECK_THROWS_AS(build_uncommon_witness(Equation({1, -1}), GroupSpec({7})),
                  NoWitnessError);
  CHECK_THROWS_AS(build_uncommon_witness(Equation({2, 3}), GroupSpec({6})),
                  NotApplicableError);
}
