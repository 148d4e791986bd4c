#pragma once
// ============================================================================
// Deterministic rendering of classification, dimension-table, and
// verification reports in the three output formats (json / csv / text).
//
// Output is byte-stable: key order in JSON objects is fixed at insertion,
// arrays preserve the (already canonical) order of the underlying results,
// and no floating-point values ever appear -- every scalar is an exact
// rational function rendered through RatFunc::str().
// ============================================================================

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgr/tangent.hpp"

namespace qgr {

using ordered_json = nlohmann::ordered_json;

enum class Format { json, csv, text };

inline Format parse_format(const std::string& s) {
  if (s == "json") return Format::json;
  if (s == "csv") return Format::csv;
  if (s == "text") return Format::text;
  throw std::invalid_argument("unknown format: " + s + " (expected json, csv, or text)");
}

namespace detail_report {

inline std::string csv_cell(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::string row_str(const Vec& row) {
  std::string out;
  for (size_t i = 0; i < row.size(); ++i) {
    if (i) out += ' ';
    out += row[i].str();
  }
  return out;
}

inline std::string classify_status(const ClassifyResult& res) {
  if (res.refusedAudit) return "refused-audit";
  if (res.unsupported) return "unsupported";
  return "ok";
}

}  // namespace detail_report

// ----------------------------------------------------------------------
// classify
// ----------------------------------------------------------------------

namespace detail_report {

/// Basis rows rendered as values on the canonical coordinate words.  Unlike
/// monomial-class coordinates, word values never reference the root-vector
/// convention, so the rendered report is identical under either convention.
inline std::vector<Vec> value_rows(const UbarModel& M, const TangentSpace& T) {
  Echelon e(M.dim());
  for (const Vec& t : T.basis) e.insert(M.vals_of_t(t));
  return e.canonical_basis();
}

}  // namespace detail_report

inline ordered_json classify_json(const UbarModel& M, const ClassifyResult& res) {
  ordered_json j;
  j["N"] = res.N;
  j["r"] = res.r;
  j["truncation"] = res.truncation;
  j["max_dim"] = res.maxDim;
  j["status"] = detail_report::classify_status(res);
  ordered_json audit;
  audit["certified"] = res.audit.certified;
  audit["boundary_case"] = res.audit.boundaryCase;
  audit["chain_bound"] = res.audit.chainBound;
  audit["lines"] = res.audit.lines;
  j["audit"] = audit;
  ordered_json labels = ordered_json::array();
  for (const ZWord& w : M.chosen_words()) labels.push_back(zword_name(w, true));
  j["basis_labels"] = labels;
  ordered_json spaces = ordered_json::array();
  for (const TangentSpace& T : res.spaces) {
    ordered_json s;
    s["name"] = T.name;
    s["dim"] = T.dim;
    s["gamma_dim"] = T.gammaDim;
    ordered_json basis = ordered_json::array();
    for (const Vec& row : detail_report::value_rows(M, T)) {
      ordered_json jr = ordered_json::array();
      for (const RatFunc& x : row) jr.push_back(x.str());
      basis.push_back(jr);
    }
    s["basis"] = basis;
    ordered_json c;
    c["counit"] = T.certs.counit;
    c["coideal"] = T.certs.coideal;
    c["k_stable"] = T.certs.kstable;
    s["certificates"] = c;
    spaces.push_back(s);
  }
  j["spaces"] = spaces;
  j["notes"] = res.notes;
  return j;
}

inline std::string render_classify(const UbarModel& M, const ClassifyResult& res, Format f) {
  using detail_report::classify_status;
  using detail_report::row_str;
  if (f == Format::json) return classify_json(M, res).dump(2) + "\n";
  std::ostringstream os;
  if (f == Format::csv) {
    os << "N,r,truncation,max_dim,status\n"
       << res.N << ',' << res.r << ',' << res.truncation << ',' << res.maxDim << ','
       << classify_status(res) << "\n\n";
    os << "name,dim,gamma_dim,counit,coideal,k_stable,basis\n";
    for (const TangentSpace& T : res.spaces) {
      os << detail_report::csv_cell(T.name) << ',' << T.dim << ',' << T.gammaDim << ','
         << (T.certs.counit ? "pass" : "fail") << ',' << (T.certs.coideal ? "pass" : "fail")
         << ',' << (T.certs.kstable ? "pass" : "fail") << ',';
      const auto rows = detail_report::value_rows(M, T);
      for (size_t i = 0; i < rows.size(); ++i) {
        if (i) os << ';';
        os << row_str(rows[i]);
      }
      os << '\n';
    }
    return os.str();
  }
  os << "classification for N=" << res.N << ", r=" << res.r << "\n";
  os << "truncation: " << res.truncation << "\n";
  os << "max dim: " << res.maxDim << (res.beyondAuto ? " (beyond the classified bound)" : "")
     << "\n";
  os << "audit: " << (res.audit.certified ? "certified" : "not certified") << " (chain bound "
     << res.audit.chainBound << ")\n";
  for (const std::string& line : res.audit.lines) os << "  " << line << "\n";
  if (res.refusedAudit) {
    os << "status: refused-audit\n";
    for (const std::string& n : res.notes) os << "  note: " << n << "\n";
    return os.str();
  }
  os << "spaces: " << res.spaces.size() << "\n";
  for (const TangentSpace& T : res.spaces) {
    os << "  " << T.name << "  dim " << T.dim << "  Gamma-dim " << T.gammaDim
       << "  certificates: counit=" << (T.certs.counit ? "pass" : "fail")
       << " coideal=" << (T.certs.coideal ? "pass" : "fail")
       << " k-stable=" << (T.certs.kstable ? "pass" : "fail") << "\n";
    for (const Vec& row : detail_report::value_rows(M, T))
      os << "    row: " << row_str(row) << "\n";
  }
  if (!res.notes.empty()) {
    os << "notes:\n";
    for (const std::string& n : res.notes) os << "  - " << n << "\n";
  }
  os << "status: " << classify_status(res) << "\n";
  return os.str();
}

// ----------------------------------------------------------------------
// dims
// ----------------------------------------------------------------------

struct DimRow {
  int k = 0;
  long long computed = 0;
  long long predicted = 0;
  [[nodiscard]] bool match() const { return computed == predicted; }
};

inline std::string render_dims(int N, int r, const std::vector<DimRow>& rows, Format f) {
  bool all = true;
  for (const DimRow& d : rows) all = all && d.match();
  if (f == Format::json) {
    ordered_json j;
    j["N"] = N;
    j["r"] = r;
    ordered_json arr = ordered_json::array();
    for (const DimRow& d : rows) {
      ordered_json e;
      e["k"] = d.k;
      e["computed"] = d.computed;
      e["predicted"] = d.predicted;
      e["match"] = d.match();
      arr.push_back(e);
    }
    j["rows"] = arr;
    j["all_match"] = all;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  if (f == Format::csv) {
    os << "k,computed,predicted,match\n";
    for (const DimRow& d : rows)
      os << d.k << ',' << d.computed << ',' << d.predicted << ','
         << (d.match() ? "yes" : "MISMATCH") << '\n';
    return os.str();
  }
  os << "graded dimensions for N=" << N << ", r=" << r << "\n";
  os << "  k  computed  predicted\n";
  for (const DimRow& d : rows)
    os << "  " << d.k << "  " << d.computed << "  " << d.predicted
       << (d.match() ? "" : "  MISMATCH") << "\n";
  os << (all ? "all levels match\n" : "MISMATCH detected\n");
  return os.str();
}

// ----------------------------------------------------------------------
// verify
// ----------------------------------------------------------------------

struct SuiteResult {
  std::string suite;
  bool pass = true;
  std::string witness;             // first counterexample, empty if pass
  std::vector<std::string> lines;  // per-check summaries
};

inline std::string render_verify(const SuiteResult& res, Format f) {
  if (f == Format::json) {
    ordered_json j;
    j["suite"] = res.suite;
    j["pass"] = res.pass;
    j["checks"] = res.lines;
    j["witness"] = res.witness;
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  if (f == Format::csv) {
    os << "suite,pass,witness\n"
       << res.suite << ',' << (res.pass ? "yes" : "no") << ','
       << detail_report::csv_cell(res.witness) << "\n\n";
    os << "check\n";
    for (const std::string& line : res.lines) os << detail_report::csv_cell(line) << '\n';
    return os.str();
  }
  os << "verify suite: " << res.suite << "\n";
  for (const std::string& line : res.lines) os << "  " << line << "\n";
  if (!res.pass) os << "  counterexample: " << res.witness << "\n";
  os << (res.pass ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace qgr
