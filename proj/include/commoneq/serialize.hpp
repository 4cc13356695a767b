#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "commoneq/dense_function.hpp"
#include "commoneq/rounding.hpp"
#include "commoneq/witness.hpp"

namespace commoneq {

// All numbers are written with up to 17 significant digits (%.17g), which
// round-trips doubles exactly; identical inputs produce byte-identical
// output.
std::string format_double(double v);

// Minimal streaming JSON writer with deterministic field order.
class JsonWriter {
 public:
  void begin_object();
  void end_object();
  void begin_array();
  void end_array();
  void key(const std::string& name);
  void value(const std::string& v);
  void value(const char* v);
  void value(double v);
  void value(std::int64_t v);
  void value(int v);
  void value(bool v);

  std::string str() const { return out_; }

 private:
  void comma();
  std::string out_;
  std::vector<bool> need_comma_;
  bool pending_key_ = false;
};

// Array of plain reals when the function is real within kRealTol, otherwise
// an array of [re, im] pairs; canonical rank order either way.
void write_dense_function(JsonWriter& w, const DenseFunction& f);

void write_certificate(JsonWriter& w, const WitnessCertificate& cert);

std::string verdict_json(const GroupSpec& g, const Equation& eq,
                         const Verdict& v);

std::string witness_json(const GroupSpec& g, const Equation& eq,
                         const UncommonWitness& w);

std::string corollary_json(const GroupSpec& g, const Equation& eq,
                           const CorollaryReport& report);

}  // namespace commoneq
