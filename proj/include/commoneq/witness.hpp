#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "commoneq/dense_function.hpp"
#include "commoneq/equation.hpp"
#include "commoneq/group.hpp"
#include "commoneq/tolerance.hpp"

namespace commoneq {

// One element x of the active set X, with its signature: for each coordinate
// i, L_i*x = sign[i] * s_{level[i]} (levels are 1-based). The frequency is
// c_x = c_num / (2d)^r, an exact integer over the common denominator.
struct PlanInstance {
  Rank x = 0;
  std::vector<int> level;
  std::vector<int> sign;
  std::int64_t c_num = 0;
};

// Construction data for the sparse-spectrum witness: the maximal-order
// element a, the coefficient orbit U = {L_i * a}, one representative per
// +/- pair in S, the active set X, and the phase-search acceptance threshold
// |X| / (2*sqrt(2)*(2d)^r).
struct WitnessPlan {
  GroupSpec group;
  Equation eq;
  GroupElement a;
  std::vector<Rank> u;              // U, ascending ranks
  std::vector<Rank> s;              // s_1..s_r, ascending ranks
  int r = 0;
  std::vector<PlanInstance> instances;  // X, ascending ranks
  std::int64_t period_den = 0;      // (2d)^r
  double threshold = 0.0;

  double period() const { return static_cast<double>(period_den); }
  std::int64_t x_size() const {
    return static_cast<std::int64_t>(instances.size());
  }
};

// Builds the plan. Requires every coefficient coprime to |G|, exponent >= 3
// (exponent-2 groups route to witness_exponent2) and no canceling partition.
// Certifies c_x != 0 for every x in X via the unbalanced-level check and
// validates all structural invariants; violations throw InternalCheckError.
WitnessPlan build_plan(const Equation& eq, const GroupSpec& g);

// The sparse spectrum g_phi: value 1/(4r) * e(phi/(2d)^j) at s_j, the
// conjugate at -s_j, 1/2 at 0, zero elsewhere. e(t) = exp(2*pi*i*t).
DenseFunction phase_function(const WitnessPlan& plan, double phi);

// f_phi = idft of g_phi. Real within kRealTol, values in [0,1] (clamped
// after the assertion), mean 1/2 within kRealTol.
DenseFunction witness_function(const WitnessPlan& plan, double phi);

// psi(phi) = sum_{x in X} cos(2*pi*c_x*phi) = (4r)^d * deviation(f_phi).
double psi(const WitnessPlan& plan, double phi);

struct PhaseSearchResult {
  double phi_star = 0.0;
  double psi_value = 0.0;
  std::int64_t grid_points = 0;
};

// Grid scan of psi over [0, (2d)^r] with N = max(1e5, 1000*(2d)^r) points,
// golden-section refinement around the best point, then one 10x-grid retry.
// Succeeds when psi(phi*) <= -plan.threshold; the underlying set of good
// phases has positive measure, so failure throws InternalCheckError.
PhaseSearchResult find_negative_phase(const WitnessPlan& plan);

struct DeviationBound {
  double tight;      // (4r)^-d / (2*sqrt(2)*(2d)^r)
  double universal;  // 1 / (2^(3d+1)*sqrt(2)*d^(2d))
};

DeviationBound deviation_bound(int d, int r);

// Witness for exponent-2 groups and odd arity, where the phase construction
// is unavailable: f = 1/2 - (1/4)*chi_a with values in {1/4, 3/4}, mean 1/2
// and deviation (-1/4)^d.
DenseFunction witness_exponent2(const Equation& eq, const GroupSpec& g);

enum class WitnessPath { PhaseSearch, ExponentTwo };

struct WitnessCertificate {
  WitnessPath path = WitnessPath::PhaseSearch;
  double phi_star = 0.0;
  double psi_value = 0.0;
  double deviation = 0.0;        // measured through the Fourier route
  double threshold = 0.0;        // phase-search acceptance level on psi
  double delta_tight = 0.0;      // guaranteed |deviation| lower bound
  double delta_universal = 0.0;  // the d-only bound
  std::int64_t x_size = 0;
  int r = 0;
  bool verified = false;
};

// The inequalities backing certificate.verified, kept for reporting.
struct WitnessVerification {
  double mean = 0.0;
  double t_f = 0.0;         // t_L(f) through the Fourier route
  double common_sum = 0.0;  // t_L(f) + t_L(1-f); only meaningful for even d
  double bound = 0.0;       // right-hand side of the parity inequality
  bool mean_ok = false;
  bool range_ok = false;
  bool inequality_ok = false;
};

struct UncommonWitness {
  DenseFunction f;
  WitnessCertificate certificate;
  WitnessVerification verification;
  std::optional<WitnessPlan> plan;  // absent on the exponent-2 path
};

// Dispatches to the phase construction or the exponent-2 one and verifies
// the certificate inequalities: E(f) = 1/2; odd d: t_L(f) <= 2^-d - delta;
// even d: t_L(f) + t_L(1-f) <= 2^(1-d) - 2*delta. tol scales the slack on
// those checks.
UncommonWitness build_uncommon_witness(const Equation& eq, const GroupSpec& g,
                                       double tol = kTol);

}  // namespace commoneq
