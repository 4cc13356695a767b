#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "commoneq/errors.hpp"
#include "commoneq/fourier.hpp"
#include "test_util.hpp"

using namespace commoneq;

TEST_CASE("spectrum of point mass and constants") {
  const GroupSpec g({3, 4});
  DenseFunction point = DenseFunction::constant(g, 0.0);
  point.values[0] = static_cast<double>(g.order());
  const Spectrum s = dft(g, point);
  for (const auto& c : s.coeffs) CHECK(std::abs(c - 1.0) < 1e-12);

  const std::complex<double> c{0.3, -0.1};
  const Spectrum sc = dft(g, DenseFunction::constant(g, c));
  CHECK(std::abs(sc.coeffs[0] - c) < 1e-12);
  for (std::size_t a = 1; a < sc.coeffs.size(); ++a) {
    CHECK(std::abs(sc.coeffs[a]) < 1e-12);
  }
}

TEST_CASE("coefficient zero is the mean and real f gives conjugate symmetry") {
  std::mt19937_64 rng(3);
  const GroupSpec g({6, 2});
  const DenseFunction f = test::random_unit_function(g, rng);
  const Spectrum s = dft(g, f);
  CHECK(std::abs(s.coeffs[0] - f.mean()) < 1e-12);
  for (Rank a = 0; a < g.order(); ++a) {
    const Rank na = g.neg_rank(a);
    CHECK(std::abs(s.coeffs[static_cast<std::size_t>(na)] -
                   std::conj(s.coeffs[static_cast<std::size_t>(a)])) < 1e-12);
  }
}

TEST_CASE("Parseval and Plancherel") {
  std::mt19937_64 rng(5);
  for (const auto& factors :
       std::vector<std::vector<std::int64_t>>{{5}, {2, 2, 2}, {12}, {3, 5}}) {
    const GroupSpec g(factors);
    for (int it = 0; it < 10; ++it) {
      const DenseFunction f1 = test::random_complex_function(g, rng);
      const DenseFunction f2 = test::random_complex_function(g, rng);
      const Spectrum s1 = dft(g, f1);
      const Spectrum s2 = dft(g, f2);
      std::complex<double> lhs = 0.0;
      for (std::size_t a = 0; a < s1.coeffs.size(); ++a) {
        lhs += s1.coeffs[a] * std::conj(s2.coeffs[a]);
      }
      std::complex<double> rhs = 0.0;
      for (std::size_t x = 0; x < f1.values.size(); ++x) {
        rhs += f1.values[x] * std::conj(f2.values[x]);
      }
      rhs /= static_cast<double>(g.order());
      CHECK(std::abs(lhs - rhs) < 1e-9);

      double power = 0.0;
      for (const auto& cc : s1.coeffs) power += std::norm(cc);
      double mean_sq = 0.0;
      for (const auto& v : f1.values) mean_sq += std::norm(v);
      mean_sq /= static_cast<double>(g.order());
      CHECK(std::abs(power - mean_sq) < 1e-9);
    }
  }
}

TEST_CASE("inversion round-trips") {
  std::mt19937_64 rng(7);
  const GroupSpec g({4, 3});
  for (int it = 0; it < 100; ++it) {
    const DenseFunction f = test::random_complex_function(g, rng);
    const DenseFunction back = idft(g, dft(g, f));
    for (std::size_t i = 0; i < f.values.size(); ++i) {
      CHECK(std::abs(back.values[i] - f.values[i]) < 1e-9);
    }
  }

  Spectrum flat;
  flat.coeffs.assign(static_cast<std::size_t>(g.order()), 0.0);
  flat.coeffs[0] = {0.25, 0.0};
  const DenseFunction constant = idft(g, flat);
  for (const auto& v : constant.values) CHECK(std::abs(v - 0.25) < 1e-12);
}

TEST_CASE("conjugate-symmetric spectra invert to real functions") {
  std::mt19937_64 rng(11);
  const GroupSpec g({8, 3});
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Spectrum s;
  s.coeffs.assign(static_cast<std::size_t>(g.order()), 0.0);
  for (Rank a = 0; a < g.order(); ++a) {
    const Rank na = g.neg_rank(a);
    if (na < a) continue;
    if (na == a) {
      s.coeffs[static_cast<std::size_t>(a)] = unit(rng);
    } else {
      const std::complex<double> v{unit(rng), unit(rng)};
      s.coeffs[static_cast<std::size_t>(a)] = v;
      s.coeffs[static_cast<std::size_t>(na)] = std::conj(v);
    }
  }
  CHECK(idft(g, s).is_real(1e-12));
}

TEST_CASE("fourier multiplicity equals brute force on random cases") {
  std::mt19937_64 rng(13);
  const std::vector<GroupSpec> groups = {
      GroupSpec({5}),    GroupSpec({2, 2}), GroupSpec({24}), GroupSpec({6, 4}),
      GroupSpec({3, 3}), GroupSpec({7}),    GroupSpec({2, 3, 4})};
  std::uniform_int_distribution<std::int64_t> coeff(-3, 3);
  std::uniform_int_distribution<int> arity(2, 4);
  int done = 0;
  double max_err = 0.0;
  while (done < 200) {
    const GroupSpec& g = groups[static_cast<std::size_t>(done) % groups.size()];
    std::vector<std::int64_t> c(static_cast<std::size_t>(arity(rng)));
    for (auto& x : c) x = coeff(rng);
    const Equation eq(c);
    if (!is_full_rank_single(eq, g)) continue;
    const DenseFunction f = test::random_unit_function(g, rng);
    const auto mf = multiplicity_fourier(f, eq, g);
    const auto mb = multiplicity_bruteforce(f, eq, g);
    max_err = std::max(max_err, std::abs(mf - mb));
    ++done;
  }
  CHECK(max_err < 1e-9);
}

TEST_CASE("fourier multiplicity of constants") {
  const GroupSpec g({3, 4});
  for (const Equation& eq :
       {Equation({1, 1, -1}), Equation({1, 1, 1, 1}), Equation({1, 5})}) {
    const double c = 0.6;
    const auto t = multiplicity_fourier(DenseFunction::constant(g, c), eq, g);
    CHECK(std::abs(t - std::pow(c, eq.arity())) < 1e-9);
  }
  CHECK(std::abs(multiplicity_fourier(DenseFunction::indicator(GroupSpec({5}), {1, 2}),
                                      Equation({1, 1, -1}), GroupSpec({5})) -
                 1.0 / 25.0) < 1e-9);
}

TEST_CASE("full rank is required") {
  const GroupSpec z6({6});
  const DenseFunction f = DenseFunction::constant(z6, 0.5);
  CHECK_THROWS_AS(multiplicity_fourier(f, Equation({2, 3}), z6),
                  std::invalid_argument);
}

TEST_CASE("nonzero spectral indices for coprime coefficients") {
  // With x != 0 and gcd(L_i, |G|) = 1, the index L_i*x never collapses to 0.
  for (const auto& factors :
       std::vector<std::vector<std::int64_t>>{{5}, {2, 3}, {8}, {3, 3}}) {
    const GroupSpec g(factors);
    for (std::int64_t m = -7; m <= 7; ++m) {
      if (!g.is_coprime_to_order(m)) continue;
      const auto table = g.scalar_action_table(m);
      for (Rank x = 1; x < g.order(); ++x) {
        CHECK(table[static_cast<std::size_t>(x)] != 0);
      }
    }
  }
}

TEST_CASE("deviation basics") {
  const GroupSpec z5({5});
  const Equation schur({1, 1, -1});
  CHECK(std::abs(deviation(DenseFunction::constant(z5, 0.7), schur, z5)) < 1e-12);

  std::mt19937_64 rng(17);
  for (int it = 0; it < 30; ++it) {
    const DenseFunction f = test::random_unit_function(z5, rng);
    const double dev = deviation(f, schur, z5);
    const double t = multiplicity_fourier(f, schur, z5).real();
    const double mean = f.mean().real();
    CHECK(std::abs(dev - (t - mean * mean * mean)) < 1e-9);
  }
}

TEST_CASE("deviation flips sign with the complement by parity") {
  std::mt19937_64 rng(19);
  const GroupSpec g({7});
  for (const Equation& eq : {Equation({1, 1, -1}), Equation({1, 1, 1, 1})}) {
    for (int it = 0; it < 25; ++it) {
      const DenseFunction f = test::random_unit_function(g, rng);
      const double dev = deviation(f, eq, g);
      const double dev_c = deviation(f.complement(), eq, g);
      const double expected = eq.arity() % 2 == 0 ? dev : -dev;
      CHECK(std::abs(dev_c - expected) < 1e-9);
    }
  }
}

TEST_CASE("deviation requires a real function") {
  const GroupSpec z5({5});
  CHECK_THROWS_AS(
      deviation(DenseFunction::constant(z5, {0.1, 0.4}), Equation({1, 1, -1}), z5),
      std::invalid_argument);
}

TEST_CASE("common_sum closed forms") {
  const GroupSpec z5({5});
  for (const Equation& eq : {Equation({1, 1, -1}), Equation({1, 1, 1, 1})}) {
    const double value = common_sum(DenseFunction::constant(z5, 0.5), eq, z5);
    CHECK(std::abs(value - std::pow(0.5, eq.arity() - 1)) < 1e-9);
  }

  // odd arity: the deviations cancel and only the mean terms remain
  std::mt19937_64 rng(23);
  const Equation odd({1, 1, 1});
  for (int it = 0; it < 50; ++it) {
    const DenseFunction f = test::random_unit_function(z5, rng);
    const double mean = f.mean().real();
    const double closed = std::pow(mean, 3) + std::pow(1.0 - mean, 3);
    CHECK(std::abs(common_sum(f, odd, z5) - closed) < 1e-9);
  }

  // even arity: mean terms plus twice the deviation
  const Equation even({1, 1, 1, 1});
  const GroupSpec z7({7});
  for (int it = 0; it < 50; ++it) {
    const DenseFunction f = test::random_unit_function(z7, rng);
    const double mean = f.mean().real();
    const double closed = std::pow(mean, 4) + std::pow(1.0 - mean, 4) +
                          2.0 * deviation(f, even, z7);
    CHECK(std::abs(common_sum(f, even, z7) - closed) < 1e-9);
  }
}

TEST_CASE("common_sum rejects out-of-range functions") {
  const GroupSpec z5({5});
  CHECK_THROWS_AS(common_sum(DenseFunction::constant(z5, 1.5), Equation({1, 1}), z5),
                  std::invalid_argument);
  CHECK_THROWS_AS(common_sum(DenseFunction::constant(z5, -0.25), Equation({1, 1}), z5),
                  std::invalid_argument);
}
