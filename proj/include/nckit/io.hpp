#pragma once

// JSON file schemas:
//   complex  = [re, im]
//   matrix   = row-major nested array of complex
//   algebra  = {"blocks": [{"dim": n, "mult": m}, ...]}
//   element  = {"algebra": algebra, "blocks": [matrix, ...]}
//   state    = {"algebra": algebra, "densities": [matrix, ...], "trace": "can" | "rep"}
//   orlicz   = {"family": "power" | "coshm1" | "expm1" | "tabulated", "params": {...}}
//   boolean  = {"atoms": A}
//   measure  = {"weights": [w_1, ..., w_A]}      (an infinite weight is "inf")
//   canonical= {"f": [...], "weights": [...], "gamma": g}

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include "nckit/algebra.hpp"
#include "nckit/boolean_lp.hpp"
#include "nckit/orlicz.hpp"
#include "nckit/states.hpp"

namespace nckit::io {

using json = nlohmann::json;

inline Error bad(const std::string& what) { return Error(ErrorKind::InvalidInput, what); }

inline double number_from_json(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "Infinity") return kInf;
    if (s == "-inf" || s == "-Infinity") return -kInf;
  }
  throw bad("expected a number");
}

inline json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

inline Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw bad("complex scalar must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

inline json complex_to_json(Complex z) { return json::array({number_to_json(z.real()), number_to_json(z.imag())}); }

inline Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw bad("matrix must be a nonempty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw bad("matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw bad("ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline MatrixAlgebra algebra_from_json(const json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j["blocks"].is_array()) throw bad("algebra needs a \"blocks\" array");
  std::vector<Block> blocks;
  for (const auto& b : j["blocks"]) {
    if (!b.is_object() || !b.contains("dim")) throw bad("each block needs \"dim\"");
    blocks.push_back({b["dim"].get<int>(), b.value("mult", 1)});
  }
  return MatrixAlgebra(std::move(blocks));
}

inline json algebra_to_json(const MatrixAlgebra& a) {
  json blocks = json::array();
  for (const auto& b : a.blocks()) blocks.push_back({{"dim", b.dim}, {"mult", b.mult}});
  return {{"blocks", blocks}};
}

inline std::vector<Matrix> blocks_from_json(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array()) throw bad(std::string("missing \"") + key + "\" array");
  std::vector<Matrix> out;
  for (const auto& m : j[key]) out.push_back(matrix_from_json(m));
  return out;
}

inline AlgebraElement element_from_json(const json& j) {
  if (!j.is_object() || !j.contains("algebra")) throw bad("element needs \"algebra\"");
  return AlgebraElement(algebra_from_json(j["algebra"]), blocks_from_json(j, "blocks"));
}

inline json element_to_json(const AlgebraElement& x) {
  json blocks = json::array();
  for (const auto& b : x.blocks()) blocks.push_back(matrix_to_json(b));
  return {{"algebra", algebra_to_json(x.algebra())}, {"blocks", blocks}};
}

inline TraceFlavor flavor_from_string(const std::string& s) {
  if (s == "can") return TraceFlavor::Can;
  if (s == "rep") return TraceFlavor::Rep;
  throw bad("trace must be \"can\" or \"rep\"");
}

inline StateDensity state_from_json(const json& j, const Tolerances& tol = {}) {
  if (!j.is_object() || !j.contains("algebra")) throw bad("state needs \"algebra\"");
  auto a = algebra_from_json(j["algebra"]);
  AlgebraElement h(a, blocks_from_json(j, "densities"));
  const auto flavor = flavor_from_string(j.value("trace", std::string("can")));
  return StateDensity(std::move(h), TraceSpec::of(flavor, a), tol);
}

inline json state_to_json(const StateDensity& s) {
  json blocks = json::array();
  for (const auto& b : s.density().blocks()) blocks.push_back(matrix_to_json(b));
  const auto f = s.trace().flavor();
  if (f == TraceFlavor::Weighted) throw bad("weighted-trace states have no file form");
  return {{"algebra", algebra_to_json(s.algebra())}, {"densities", blocks}, {"trace", to_string(f)}};
}

inline OrliczFunction orlicz_from_json(const json& j) {
  if (!j.is_object() || !j.contains("family")) throw bad("Orlicz file needs \"family\"");
  const auto fam = j["family"].get<std::string>();
  const json params = j.value("params", json::object());
  if (fam == "power") return OrliczFunction::power(params.at("p").get<double>(), params.value("scale", 1.0));
  if (fam == "coshm1") return OrliczFunction::cosh_minus_one(params.value("scale", 1.0));
  if (fam == "expm1") return OrliczFunction::exp_minus_one(params.value("scale", 1.0));
  if (fam == "tabulated") {
    std::vector<double> xs, ys;
    for (const auto& p : params.at("points")) {
      if (!p.is_array() || p.size() != 2) throw bad("tabulated points are [x, y] pairs");
      xs.push_back(p[0].get<double>());
      ys.push_back(p[1].get<double>());
    }
    const bool cutoff = params.value("cutoff", false);
    const double slope = cutoff ? 0.0 : number_from_json(params.at("tail_slope"));
    return OrliczFunction::tabulated(std::move(xs), std::move(ys), slope, cutoff);
  }
  throw bad("unknown Orlicz family \"" + fam + "\"");
}

inline FiniteBooleanAlgebra boolean_from_json(const json& j) {
  if (!j.is_object() || !j.contains("atoms")) throw bad("boolean file needs \"atoms\"");
  return FiniteBooleanAlgebra(j["atoms"].get<int>());
}

inline std::vector<double> reals_from_json(const json& j) {
  if (!j.is_array()) throw bad("expected an array of numbers");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(number_from_json(v));
  return out;
}

inline MeasureVector measure_from_json(const json& j) {
  if (!j.is_object() || !j.contains("weights")) throw bad("measure file needs \"weights\"");
  return MeasureVector(reals_from_json(j["weights"]));
}

inline CanonicalLpElement canonical_from_json(const json& j) {
  if (!j.is_object() || !j.contains("f") || !j.contains("weights")) throw bad("canonical class needs \"f\" and \"weights\"");
  return CanonicalLpElement(reals_from_json(j["f"]), MeasureVector(reals_from_json(j["weights"])), j.value("gamma", 1.0));
}

inline json canonical_to_json(const CanonicalLpElement& x) {
  json f = json::array();
  json w = json::array();
  for (double v : x.function()) f.push_back(number_to_json(v));
  for (double v : x.measure().weights()) w.push_back(number_to_json(v));
  return {{"f", f}, {"weights", w}, {"gamma", x.gamma()}};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bad("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json parse(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw bad(origin + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Report output

/// Twelve significant digits, trailing zeros kept: 5 → "5.00000000000".
inline std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.12g", v);
  return buf;
}

namespace detail {

inline void dump(const json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
  switch (j.type()) {
    case json::value_t::number_float: {
      const double v = j.get<double>();
      out += std::isfinite(v) ? format_number(v) : "\"" + format_number(v) + "\"";
      return;
    }
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + json(it.key()).dump() + ": ";
        dump(it.value(), out, indent, depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Short arrays of scalars (complex numbers, small vectors) stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
      if (flat) {
        out += "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          dump(j[i], out, indent, depth + 1);
        }
        out += "]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        out += pad;
        dump(j[i], out, indent, depth + 1);
      }
      out += "\n" + close_pad + "]";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace detail

/// JSON text with every floating-point number printed to 12 significant digits.
inline std::string dump_report(const json& j, int indent = 2) {
  std::string out;
  detail::dump(j, out, indent, 0);
  return out;
}

/// FNV-1a, used to fingerprint input files in reports.
inline std::string digest(const std::vector<std::string>& contents) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (const auto& c : contents) {
    for (unsigned char ch : c) {
      h ^= ch;
      h *= 0x100000001b3ull;
    }
    h ^= 0xff;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace nckit::io
