#include "commoneq/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace commoneq {

std::string format_double(double v) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument("refusing to serialize a non-finite number");
  }
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void JsonWriter::comma() {
  if (!need_comma_.empty() && need_comma_.back() && !pending_key_) {
    out_ += ',';
  }
  if (!need_comma_.empty() && !pending_key_) need_comma_.back() = true;
  pending_key_ = false;
}

void JsonWriter::begin_object() {
  comma();
  out_ += '{';
  need_comma_.push_back(false);
}

void JsonWriter::end_object() {
  out_ += '}';
  need_comma_.pop_back();
}

void JsonWriter::begin_array() {
  comma();
  out_ += '[';
  need_comma_.push_back(false);
}

void JsonWriter::end_array() {
  out_ += ']';
  need_comma_.pop_back();
}

void JsonWriter::key(const std::string& name) {
  comma();
  out_ += '"';
  out_ += name;
  out_ += "\":";
  pending_key_ = true;
}

void JsonWriter::value(const std::string& v) {
  comma();
  out_ += '"';
  for (const char c : v) {
    switch (c) {
      case '"':
        out_ += "\\\"";
        break;
      case '\\':
        out_ += "\\\\";
        break;
      case '\n':
        out_ += "\\n";
        break;
      default:
        out_ += c;
    }
  }
  out_ += '"';
}

void JsonWriter::value(const char* v) { value(std::string(v)); }

void JsonWriter::value(double v) {
  comma();
  out_ += format_double(v);
}

void JsonWriter::value(std::int64_t v) {
  comma();
  out_ += std::to_string(v);
}

void JsonWriter::value(int v) { value(static_cast<std::int64_t>(v)); }

void JsonWriter::value(bool v) {
  comma();
  out_ += v ? "true" : "false";
}

void write_dense_function(JsonWriter& w, const DenseFunction& f) {
  w.begin_array();
  if (f.is_real(kRealTol)) {
    for (const auto& v : f.values) w.value(v.real());
  } else {
    for (const auto& v : f.values) {
      w.begin_array();
      w.value(v.real());
      w.value(v.imag());
      w.end_array();
    }
  }
  w.end_array();
}

void write_certificate(JsonWriter& w, const WitnessCertificate& cert) {
  w.begin_object();
  w.key("path");
  w.value(cert.path == WitnessPath::PhaseSearch ? "phase-search"
                                                : "exponent-two");
  w.key("phi_star");
  w.value(cert.phi_star);
  w.key("psi_value");
  w.value(cert.psi_value);
  w.key("deviation");
  w.value(cert.deviation);
  w.key("threshold");
  w.value(cert.threshold);
  w.key("delta_tight");
  w.value(cert.delta_tight);
  w.key("delta_universal");
  w.value(cert.delta_universal);
  w.key("X_size");
  w.value(cert.x_size);
  w.key("r");
  w.value(cert.r);
  w.key("verified");
  w.value(cert.verified);
  w.end_object();
}

namespace {

void write_header(JsonWriter& w, const GroupSpec& g, const Equation& eq) {
  w.key("group");
  w.value(g.to_string());
  w.key("equation");
  w.begin_array();
  for (const std::int64_t c : eq.coeffs) w.value(c);
  w.end_array();
  w.key("d");
  w.value(eq.arity());
}

}  // namespace

std::string verdict_json(const GroupSpec& g, const Equation& eq,
                         const Verdict& v) {
  JsonWriter w;
  w.begin_object();
  write_header(w, g, eq);
  w.key("classification");
  w.value(to_string(v.classification));
  if (v.partition) {
    w.key("partition");
    w.begin_array();
    for (const auto& [i, j] : *v.partition) {
      w.begin_array();
      w.value(i);
      w.value(j);
      w.end_array();
    }
    w.end_array();
  }
  if (v.witness_certificate) {
    w.key("witness_certificate");
    write_certificate(w, *v.witness_certificate);
  }
  w.key("corollary_constant");
  w.value(v.corollary_constant);
  w.key("margins");
  w.begin_object();
  if (v.margins) {
    w.key("achieved");
    w.value(v.margins->achieved);
    w.key("target");
    w.value(v.margins->target);
    w.key("margin");
    w.value(v.margins->margin);
  }
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

std::string witness_json(const GroupSpec& g, const Equation& eq,
                         const UncommonWitness& w) {
  JsonWriter j;
  j.begin_object();
  write_header(j, g, eq);
  j.key("certificate");
  write_certificate(j, w.certificate);
  j.key("checks");
  j.begin_object();
  j.key("mean");
  j.value(w.verification.mean);
  j.key("t_f");
  j.value(w.verification.t_f);
  j.key("common_sum");
  j.value(w.verification.common_sum);
  j.key("bound");
  j.value(w.verification.bound);
  j.key("mean_ok");
  j.value(w.verification.mean_ok);
  j.key("range_ok");
  j.value(w.verification.range_ok);
  j.key("inequality_ok");
  j.value(w.verification.inequality_ok);
  j.end_object();
  j.key("f");
  write_dense_function(j, w.f);
  j.end_object();
  return j.str() + "\n";
}

std::string corollary_json(const GroupSpec& g, const Equation& eq,
                           const CorollaryReport& report) {
  JsonWriter w;
  w.begin_object();
  write_header(w, g, eq);
  w.key("classification");
  w.value(to_string(report.classification));
  w.key("corollary_constant");
  w.value(report.corollary_constant);
  w.key("above_threshold");
  w.value(report.above_threshold);
  w.key("set");
  w.begin_array();
  for (const Rank r : report.rounding.members()) w.value(r);
  w.end_array();
  w.key("set_size");
  w.value(report.rounding.size);
  w.key("t_set");
  w.value(report.rounding.t_set);
  w.key("t_complement");
  w.value(report.rounding.t_complement);
  w.key("noninjective_in_set");
  w.value(report.rounding.noninj_in_set);
  w.key("noninjective_in_complement");
  w.value(report.rounding.noninj_in_complement);
  w.key("set_value");
  w.value(report.set_value);
  w.key("reference");
  w.value(report.reference);
  w.key("margin");
  w.value(report.margin);
  w.end_object();
  return w.str() + "\n";
}

}  // namespace commoneq
