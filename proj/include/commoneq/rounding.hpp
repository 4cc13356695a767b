#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "commoneq/dense_function.hpp"
#include "commoneq/equation.hpp"
#include "commoneq/group.hpp"
#include "commoneq/tolerance.hpp"
#include "commoneq/witness.hpp"

namespace commoneq {

// Kernel instances split into injective ones and those with a repeated
// coordinate, stored flat (row-major, d ranks per row). Build once per
// (L, G) and reuse.
struct KernelSplit {
  int d = 0;
  std::int64_t total = 0;  // |C(L)|
  std::vector<Rank> injective;
  std::vector<Rank> noninjective;

  std::int64_t injective_count() const {
    return static_cast<std::int64_t>(injective.size()) / d;
  }
  std::int64_t noninjective_count() const {
    return static_cast<std::int64_t>(noninjective.size()) / d;
  }
};

KernelSplit build_kernel_split(const Equation& eq, const GroupSpec& g);

enum class RoundingMode { Sidorenko, Common };

struct RoundingResult {
  RoundingMode mode = RoundingMode::Sidorenko;
  std::vector<std::uint8_t> membership;  // bit per canonical rank
  std::int64_t size = 0;                 // |A|
  double t_set = 0.0;                    // t_L(A)
  double t_complement = 0.0;             // t_L(A^C)
  std::int64_t noninj_in_set = 0;        // |C^# intersect A^d|
  std::int64_t noninj_in_complement = 0;
  double t_f = 0.0;                      // t_L(f) for the input f
  double t_one_minus_f = 0.0;
  int iterations = 0;
  bool used_fallback = false;
  bool inequality_ok = false;

  std::vector<Rank> members() const;
};

struct RoundingOptions {
  // Iteration cap is cap_factor * |G|; after that the exhaustive fallback
  // over set sizes floor/ceil of E(f)*|G| runs (permitted only for
  // |G| <= 24).
  int cap_factor = 50;
};

// Converts a [0,1]-valued function into a set by iterated pairwise mass
// transfer on the injective-instance functional, then verifies the
// conversion inequalities exactly from kernel scans:
//   Sidorenko: |A| >= E(f)|G| - 1 and t_L(A) <= t_L(f) + |C^# n A^d|/|C|
//   Common:    t_L(A) + t_L(A^C) <= t_L(f) + t_L(1-f)
//                                   + (|C^# n A^d| + |C^# n (A^C)^d|)/|C|
// Throws InternalCheckError if verification fails and std::invalid_argument
// when the fallback would be needed on a group with |G| > 24.
RoundingResult round_to_set(const DenseFunction& f, const Equation& eq,
                            const GroupSpec& g, RoundingMode mode,
                            const RoundingOptions& opts = {});
RoundingResult round_to_set(const DenseFunction& f, const Equation& eq,
                            const GroupSpec& g, RoundingMode mode,
                            const KernelSplit& split,
                            const RoundingOptions& opts = {});

enum class Classification {
  FullySidorenko,
  FullyCommonNotFullySidorenko,
  NotFullyCommon,
  NotApplicable,
};

const char* to_string(Classification c);

struct VerdictMargins {
  double achieved = 0.0;  // t_L(f) (odd d) or t_L(f)+t_L(1-f) (even d)
  double target = 0.0;    // 2^-d or 2^(1-d)
  double margin = 0.0;    // achieved - target
};

struct Verdict {
  Classification classification = Classification::NotApplicable;
  std::optional<std::vector<std::pair<int, int>>> partition;
  std::optional<WitnessCertificate> witness_certificate;
  std::optional<VerdictMargins> margins;
  double corollary_constant = 0.0;  // d^2 / Delta(d)
};

// The four-way classification:
//   some coefficient shares a factor with |G|      -> NotApplicable
//   d even, canceling partition exists             -> FullySidorenko
//   d odd                                          -> FullyCommonNotFullySidorenko
//   d even, no canceling partition                 -> NotFullyCommon
// Negative cases carry a verified witness certificate.
Verdict classify(const Equation& eq, const GroupSpec& g);

struct CorollaryReport {
  Classification classification = Classification::NotApplicable;
  double corollary_constant = 0.0;
  bool above_threshold = false;  // |G| > corollary_constant
  RoundingResult rounding;
  double set_value = 0.0;  // t_L(A1), or t_L(A2) + t_L(A2^C)
  double reference = 0.0;  // (|A1|/|G|)^d, or 2^(1-d)
  double margin = 0.0;     // set_value - reference
};

// Rounds the constructed witness function to a set and reports the achieved
// margins. Below the corollary constant the sign of the margin is not
// guaranteed; the report flags that regime. Throws NoWitnessError /
// NotApplicableError on positive classifications.
CorollaryReport corollary_sets(const Equation& eq, const GroupSpec& g);

}  // namespace commoneq
