#pragma once

#include <complex>
#include <vector>

#include "commoneq/dense_function.hpp"
#include "commoneq/equation.hpp"
#include "commoneq/group.hpp"

namespace commoneq {

// Fourier coefficients of a DenseFunction, index a <-> character D(a).
// coeffs[0] is the mean of the originating function.
struct Spectrum {
  std::vector<std::complex<double>> coeffs;
};

// f_hat(a) = (1/|G|) sum_x D(a)(x) f(x). Naive O(|G|^2); desk-scale groups
// keep this exact-structured rather than fast.
Spectrum dft(const GroupSpec& g, const DenseFunction& f);

// f(x) = sum_a coeffs[a] D(a)(-x); inverse of dft.
DenseFunction idft(const GroupSpec& g, const Spectrum& s);

// t_L(f) = sum_{x in G} prod_i f_hat(D(L_i x)). Requires full rank in G.
std::complex<double> multiplicity_fourier(const DenseFunction& f,
                                          const Equation& eq,
                                          const GroupSpec& g);
// Same with a precomputed spectrum (the public overload is dft + this).
std::complex<double> multiplicity_fourier(const Spectrum& s,
                                          const Equation& eq,
                                          const GroupSpec& g);

// Sum over x != 0 of prod_i f_hat(D(L_i x)), which equals t_L(f) - E(f)^d.
// f must be real; the residual imaginary part is checked against kTol and
// discarded.
double deviation(const DenseFunction& f, const Equation& eq,
                 const GroupSpec& g);
double deviation(const Spectrum& s, const Equation& eq, const GroupSpec& g);

// t_L(f) + t_L(1-f) for real f with range in [0,1].
double common_sum(const DenseFunction& f, const Equation& eq,
                  const GroupSpec& g);

}  // namespace commoneq
