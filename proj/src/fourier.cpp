#include "commoneq/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "commoneq/errors.hpp"
#include "commoneq/tolerance.hpp"

namespace commoneq {

namespace {

// Character matrix row: D(a)(x) for all x, computed through per-factor
// digit phases.
std::vector<std::complex<double>> character_row(const GroupSpec& g,
                                                Rank a_rank) {
  const std::int64_t n = g.order();
  const GroupElement a = g.unrank(a_rank);
  const int m = g.num_factors();
  std::vector<std::complex<double>> row(static_cast<std::size_t>(n));
  std::vector<std::int64_t> digits(static_cast<std::size_t>(m), 0);
  for (Rank x = 0; x < n; ++x) {
    double t = 0.0;
    for (int i = 0; i < m; ++i) {
      const std::int64_t ni = g.factors()[static_cast<std::size_t>(i)];
      t += static_cast<double>((a.residues[static_cast<std::size_t>(i)] *
                                digits[static_cast<std::size_t>(i)]) %
                               ni) /
           static_cast<double>(ni);
    }
    row[static_cast<std::size_t>(x)] = std::polar(1.0, 2.0 * std::numbers::pi * t);
    for (int i = m - 1; i >= 0; --i) {
      auto& dig = digits[static_cast<std::size_t>(i)];
      if (++dig < g.factors()[static_cast<std::size_t>(i)]) break;
      dig = 0;
    }
  }
  return row;
}

void require_full_rank(const Equation& eq, const GroupSpec& g) {
  if (!is_full_rank_single(eq, g)) {
    throw std::invalid_argument(
        "equation does not have full rank in G (no coprime coefficient)");
  }
}

std::complex<double> spectral_sum(const Spectrum& s, const Equation& eq,
                                  const GroupSpec& g, bool skip_zero) {
  if (static_cast<std::int64_t>(s.coeffs.size()) != g.order()) {
    throw std::invalid_argument("spectrum length does not match |G|");
  }
  require_full_rank(eq, g);
  const std::int64_t n = g.order();
  const int d = eq.arity();
  std::vector<std::vector<Rank>> mul;
  mul.reserve(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    mul.push_back(g.scalar_action_table(eq.coeffs[static_cast<std::size_t>(i)]));
  }
  std::complex<double> sum = 0.0;
  for (Rank x = skip_zero ? 1 : 0; x < n; ++x) {
    std::complex<double> p = 1.0;
    for (int i = 0; i < d; ++i) {
      p *= s.coeffs[static_cast<std::size_t>(
          mul[static_cast<std::size_t>(i)][static_cast<std::size_t>(x)])];
    }
    sum += p;
  }
  return sum;
}

}  // namespace

Spectrum dft(const GroupSpec& g, const DenseFunction& f) {
  if (f.size() != g.order()) {
    throw std::invalid_argument("function length does not match |G|");
  }
  const std::int64_t n = g.order();
  Spectrum s;
  s.coeffs.resize(static_cast<std::size_t>(n));
  for (Rank a = 0; a < n; ++a) {
    const auto row = character_row(g, a);
    std::complex<double> acc = 0.0;
    for (Rank x = 0; x < n; ++x) {
      acc += row[static_cast<std::size_t>(x)] * f.values[static_cast<std::size_t>(x)];
    }
    s.coeffs[static_cast<std::size_t>(a)] = acc / static_cast<double>(n);
  }
  return s;
}

DenseFunction idft(const GroupSpec& g, const Spectrum& s) {
  if (static_cast<std::int64_t>(s.coeffs.size()) != g.order()) {
    throw std::invalid_argument("spectrum length does not match |G|");
  }
  const std::int64_t n = g.order();
  DenseFunction f;
  f.values.assign(static_cast<std::size_t>(n), 0.0);
  for (Rank a = 0; a < n; ++a) {
    const std::complex<double> c = s.coeffs[static_cast<std::size_t>(a)];
    if (c == 0.0) continue;
    // D(a)(-x) = conj(D(a)(x))
    const auto row = character_row(g, a);
    for (Rank x = 0; x < n; ++x) {
      f.values[static_cast<std::size_t>(x)] += c * std::conj(row[static_cast<std::size_t>(x)]);
    }
  }
  return f;
}

std::complex<double> multiplicity_fourier(const DenseFunction& f,
                                          const Equation& eq,
                                          const GroupSpec& g) {
  return multiplicity_fourier(dft(g, f), eq, g);
}

std::complex<double> multiplicity_fourier(const Spectrum& s,
                                          const Equation& eq,
                                          const GroupSpec& g) {
  return spectral_sum(s, eq, g, /*skip_zero=*/false);
}

double deviation(const DenseFunction& f, const Equation& eq,
                 const GroupSpec& g) {
  if (!f.is_real(kRealTol)) {
    throw std::invalid_argument("deviation expects a real-valued function");
  }
  return deviation(dft(g, f), eq, g);
}

double deviation(const Spectrum& s, const Equation& eq, const GroupSpec& g) {
  const std::complex<double> sum = spectral_sum(s, eq, g, /*skip_zero=*/true);
  if (std::abs(sum.imag()) > kTol) {
    throw InternalCheckError("deviation has imaginary residue " +
                             std::to_string(sum.imag()));
  }
  return sum.real();
}

double common_sum(const DenseFunction& f, const Equation& eq,
                  const GroupSpec& g) {
  if (!f.in_unit_range(kRealTol)) {
    throw std::invalid_argument("common_sum expects a real function into [0,1]");
  }
  const Spectrum s = dft(g, f);
  Spectrum sc;  // spectrum of 1 - f: mean flips around 1, the rest negates
  sc.coeffs.resize(s.coeffs.size());
  sc.coeffs[0] = 1.0 - s.coeffs[0];
  for (std::size_t a = 1; a < s.coeffs.size(); ++a) sc.coeffs[a] = -s.coeffs[a];
  const std::complex<double> total =
      multiplicity_fourier(s, eq, g) + multiplicity_fourier(sc, eq, g);
  if (std::abs(total.imag()) > kTol) {
    throw InternalCheckError("common_sum has imaginary residue " +
                             std::to_string(total.imag()));
  }
  return total.real();
}

}  // namespace commoneq
