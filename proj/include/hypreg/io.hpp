#pragma once

// Curve spec files and tabular reports (CSV, JSON, human) with a fixed field order.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "model.hpp"

namespace hypreg {

struct ConfigError : Error {
  using Error::Error;
};

// JSON curve spec. Coefficients are exact rationals in ascending powers of x, given as
// strings ("-7/2", "0.25") or integers; "roots" may replace "coefficients".
//
//   {"coefficients": ["0", "24", "-50", "35", "-10", "1"],
//    "Q": "0", "R": "1",
//    "P": {"re": "1/2", "im": "1/2", "sheet": 1}}
struct CurveSpec {
  RatPoly h;
  std::optional<Rat> Q, R; // x-coordinates of Weierstrass points
  std::optional<Rat> P_re, P_im;
  int P_sheet = 1;
};

namespace detail {
inline Rat json_rational(const nlohmann::json &v, const std::string &where) {
  if (v.is_number_integer()) return Rat(Int(v.get<long long>()));
  if (v.is_string()) {
    try {
      return parse_rational(v.get<std::string>());
    } catch (const PreconditionError &e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": expected a rational as a string or an integer");
}
inline void only_keys(const nlohmann::json &o, const std::vector<std::string> &allowed, const std::string &where) {
  for (auto it = o.begin(); it != o.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError(where + ": unknown key '" + it.key() + "'");
}
} // namespace detail

inline CurveSpec parse_curve_spec(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw ConfigError(std::string("curve spec is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("curve spec must be a JSON object");
  detail::only_keys(j, {"coefficients", "roots", "leading", "Q", "R", "P"}, "curve spec");
  CurveSpec s;
  if (j.contains("coefficients") == j.contains("roots")) throw ConfigError("curve spec: give exactly one of 'coefficients' and 'roots'");
  if (j.contains("coefficients")) {
    if (!j["coefficients"].is_array()) throw ConfigError("curve spec: 'coefficients' must be an array");
    if (j.contains("leading")) throw ConfigError("curve spec: 'leading' only goes with 'roots'");
    std::vector<Rat> c;
    for (std::size_t k = 0; k < j["coefficients"].size(); ++k)
      c.push_back(detail::json_rational(j["coefficients"][k], "coefficients[" + std::to_string(k) + "]"));
    s.h = RatPoly(c);
  } else {
    if (!j["roots"].is_array()) throw ConfigError("curve spec: 'roots' must be an array");
    std::vector<Rat> r;
    for (std::size_t k = 0; k < j["roots"].size(); ++k) r.push_back(detail::json_rational(j["roots"][k], "roots[" + std::to_string(k) + "]"));
    Rat lead = j.contains("leading") ? detail::json_rational(j["leading"], "leading") : Rat(1);
    if (lead == 0) throw ConfigError("curve spec: leading coefficient is zero");
    s.h = RatPoly::monomial(lead, 0) * RatPoly::from_roots(r);
  }
  if (s.h.degree() < 3) throw ConfigError("curve spec: deg h must be at least 3");
  if (j.contains("Q")) s.Q = detail::json_rational(j["Q"], "Q");
  if (j.contains("R")) s.R = detail::json_rational(j["R"], "R");
  if (j.contains("P")) {
    const auto &p = j["P"];
    if (!p.is_object()) throw ConfigError("curve spec: 'P' must be an object");
    detail::only_keys(p, {"re", "im", "sheet"}, "P");
    if (!p.contains("re")) throw ConfigError("P: missing 're'");
    s.P_re = detail::json_rational(p["re"], "P.re");
    s.P_im = p.contains("im") ? detail::json_rational(p["im"], "P.im") : Rat(0);
    if (p.contains("sheet")) {
      if (!p["sheet"].is_number_integer() || std::abs(p["sheet"].get<long long>()) != 1)
        throw ConfigError("P.sheet must be 1 or -1");
      s.P_sheet = static_cast<int>(p["sheet"].get<long long>());
    }
  }
  return s;
}

inline CurveSpec read_curve_spec(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read curve spec '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_curve_spec(ss.str());
}

// ---------------------------------------------------------------------------
// reports

enum class Format { Human, CSV, JSON };

inline Format parse_format(const std::string &s) {
  if (s == "human") return Format::Human;
  if (s == "csv" || s == "CSV") return Format::CSV;
  if (s == "json" || s == "JSON") return Format::JSON;
  throw ConfigError("unknown format '" + s + "' (human, csv, json)");
}

inline std::string fmt_double(double v, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v + 0.0);
  return buf;
}
inline std::string fmt_complex(cplx z, int digits = 12) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "%.*g%+.*gi", digits, z.real() + 0.0, digits, z.imag() + 0.0);
  return buf;
}

// A titled table of rows; every row has the same columns in the same order.
struct Table {
  std::string title;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::ordered_json>> rows;

  void add(std::vector<nlohmann::ordered_json> row) {
    if (row.size() != columns.size()) throw StructuralError("table '" + title + "': row width mismatch");
    rows.push_back(std::move(row));
  }
};

struct Report {
  std::string command;
  std::vector<std::pair<std::string, nlohmann::ordered_json>> summary;
  std::vector<Table> tables;

  void set(const std::string &k, nlohmann::ordered_json v) {
    for (auto &kv : summary)
      if (kv.first == k) {
        kv.second = std::move(v);
        return;
      }
    summary.emplace_back(k, std::move(v));
  }
};

namespace detail {
inline std::string cell(const nlohmann::ordered_json &v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) return fmt_double(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return v.dump();
}
inline std::string csv_escape(const std::string &s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char c : s) o += c == '"' ? std::string("\"\"") : std::string(1, c);
  return o + "\"";
}
} // namespace detail

inline std::string render(const Report &r, Format f) {
  std::ostringstream out;
  if (f == Format::JSON) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    nlohmann::ordered_json s = nlohmann::ordered_json::object();
    for (auto &[k, v] : r.summary) s[k] = v;
    j["summary"] = s;
    nlohmann::ordered_json ts = nlohmann::ordered_json::array();
    for (auto &t : r.tables) {
      nlohmann::ordered_json tj;
      tj["title"] = t.title;
      nlohmann::ordered_json rows = nlohmann::ordered_json::array();
      for (auto &row : t.rows) {
        nlohmann::ordered_json o;
        for (std::size_t c = 0; c < row.size(); ++c) o[t.columns[c]] = row[c];
        rows.push_back(o);
      }
      tj["rows"] = rows;
      ts.push_back(tj);
    }
    j["tables"] = ts;
    out << j.dump(2) << "\n";
    return out.str();
  }
  if (f == Format::CSV) {
    // one block per table, preceded by the summary as key,value lines
    out << "key,value\n";
    for (auto &[k, v] : r.summary) out << detail::csv_escape(k) << "," << detail::csv_escape(detail::cell(v)) << "\n";
    for (auto &t : r.tables) {
      out << "\n# " << t.title << "\n";
      for (std::size_t c = 0; c < t.columns.size(); ++c) out << (c ? "," : "") << detail::csv_escape(t.columns[c]);
      out << "\n";
      for (auto &row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << detail::csv_escape(detail::cell(row[c]));
        out << "\n";
      }
    }
    return out.str();
  }
  out << r.command << "\n";
  std::size_t w = 0;
  for (auto &kv : r.summary) w = std::max(w, kv.first.size());
  for (auto &[k, v] : r.summary) out << "  " << k << std::string(w - k.size() + 2, ' ') << detail::cell(v) << "\n";
  for (auto &t : r.tables) {
    out << "\n" << t.title << "\n";
    std::vector<std::size_t> width(t.columns.size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) width[c] = t.columns[c].size();
    for (auto &row : t.rows)
      for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], detail::cell(row[c]).size());
    for (std::size_t c = 0; c < t.columns.size(); ++c) out << "  " << t.columns[c] << std::string(width[c] - t.columns[c].size(), ' ');
    out << "\n";
    for (auto &row : t.rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        std::string s = detail::cell(row[c]);
        out << "  " << s << std::string(width[c] - s.size(), ' ');
      }
      out << "\n";
    }
  }
  return out.str();
}

} // namespace hypreg
