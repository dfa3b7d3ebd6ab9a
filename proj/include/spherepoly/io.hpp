#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "spherepoly/christoffel.hpp"
#include "spherepoly/kernelfact.hpp"
#include "spherepoly/measure.hpp"
#include "spherepoly/moments.hpp"
#include "spherepoly/orthopoly.hpp"
#include "spherepoly/szego.hpp"

namespace spherepoly::io {

using nlohmann::json;

/// Malformed or invalid measure-spec / table input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline json index_json(const MultiIndex& a) { return json(a.entries()); }

inline std::string index_text(const MultiIndex& a) {
  std::string s = "[";
  for (std::size_t j = 0; j < a.dim(); ++j) {
    if (j) s += ",";
    s += std::to_string(a[j]);
  }
  return s + "]";
}

/// Text that reads back to the same double.
inline std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// ---------------------------------------------------------------- specs

inline MeasureSpec spec_from_json(const json& j) {
  try {
    MeasureSpec spec;
    spec.d = j.at("d").get<std::size_t>();
    if (spec.d == 0) throw ParseError("d must be >= 1");
    spec.weight.g = SparsePolynomial(spec.d);
    if (j.contains("weight")) {
      const json& w = j.at("weight");
      spec.weight.scale = w.value("scale", 1.0);
      spec.weight.exponent = w.value("exponent", 2.0);
      for (const json& t : w.value("g", json::array())) {
        const std::vector<unsigned> idx = t.at("index").get<std::vector<unsigned>>();
        if (idx.size() != spec.d) throw ParseError("weight term index has wrong length");
        spec.weight.g.add(MultiIndex(idx), cplx(t.value("re", 0.0), t.value("im", 0.0)));
      }
    } else {
      spec.weight.scale = 0.0;
    }
    for (const json& a : j.value("atoms", json::array())) {
      Point p;
      for (const json& c : a.at("point")) p.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
      spec.atoms.emplace_back(std::move(p), a.at("mass").get<double>());
    }
    spec.validate();
    return spec;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(std::string("measure spec: ") + e.what());
  }
}

inline json spec_to_json(const MeasureSpec& spec) {
  json g = json::array();
  for (const auto& [a, c] : spec.weight.g.terms()) g.push_back({{"index", index_json(a)}, {"re", c.real()}, {"im", c.imag()}});
  json atoms = json::array();
  for (const Atom& at : spec.atoms) {
    json p = json::array();
    for (const cplx& c : at.point()) p.push_back({c.real(), c.imag()});
    atoms.push_back({{"point", p}, {"mass", at.mass()}});
  }
  return {{"d", spec.d}, {"weight", {{"scale", spec.weight.scale}, {"exponent", spec.weight.exponent}, {"g", g}}}, {"atoms", atoms}};
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MeasureSpec load_spec(const std::string& path) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return spec_from_json(j);
}

// ---------------------------------------------------------------- kernel

inline std::string kernel_csv(const MomentKernel& K) {
  std::string out = "rank_row,rank_col,index_row,index_col,re,im\n";
  const std::vector<MultiIndex> idx = shortlex_range(K.d, K.N);
  for (std::size_t m = 0; m <= K.N; ++m)
    for (std::size_t n = 0; n <= K.N; ++n)
      out += std::to_string(m) + "," + std::to_string(n) + ",\"" + index_text(idx[m]) + "\",\"" + index_text(idx[n]) + "\"," +
             num(K(m, n).real()) + "," + num(K(m, n).imag()) + "\n";
  return out;
}

inline json kernel_json(const MomentKernel& K) {
  json rows = json::array();
  for (std::size_t m = 0; m <= K.N; ++m) {
    json row = json::array();
    for (std::size_t n = 0; n <= K.N; ++n) row.push_back({K(m, n).real(), K(m, n).imag()});
    rows.push_back(row);
  }
  json idx = json::array();
  for (const MultiIndex& a : shortlex_range(K.d, K.N)) idx.push_back(index_json(a));
  return {{"d", K.d}, {"N", K.N}, {"provenance", to_string(K.provenance)}, {"indices", idx}, {"entries", rows}};
}

inline json entropy_json(const EntropyResult& e) {
  json j;
  if (e.neg_infinity) {
    j["log_integral"] = "neg_infinity";
  } else {
    j["log_integral"] = e.log_integral;
  }
  j["method"] = to_string(e.method);
  j["nodes"] = e.nodes;
  return j;
}

// ---------------------------------------------------------------- gamma table

inline std::string gamma_csv(const VerblunskyTable& t, std::size_t d) {
  std::string out = "i,j,index_i,index_j,re,im,defect\n";
  const std::vector<MultiIndex> idx = shortlex_range(d, t.N);
  for (std::size_t i = 0; i <= t.N; ++i)
    for (std::size_t j = i + 1; j <= t.N; ++j)
      out += std::to_string(i) + "," + std::to_string(j) + ",\"" + index_text(idx[i]) + "\",\"" + index_text(idx[j]) + "\"," +
             num(t(i, j).real()) + "," + num(t(i, j).imag()) + "," + num(t.d(i, j)) + "\n";
  return out;
}

inline json gamma_json(const VerblunskyTable& t, std::size_t d) {
  json entries = json::array();
  const std::vector<MultiIndex> idx = shortlex_range(d, t.N);
  for (std::size_t i = 0; i <= t.N; ++i)
    for (std::size_t j = i + 1; j <= t.N; ++j)
      entries.push_back({{"i", i},
                         {"j", j},
                         {"index_i", index_json(idx[i])},
                         {"index_j", index_json(idx[j])},
                         {"re", t(i, j).real()},
                         {"im", t(i, j).imag()},
                         {"defect", t.d(i, j)}});
  return {{"d", d}, {"N", t.N}, {"max_abs", t.max_abs()}, {"gamma", entries}};
}

inline std::string diagonal_csv(const MomentKernel& K) {
  std::string out = "rank,index,value\n";
  const std::vector<MultiIndex> idx = shortlex_range(K.d, K.N);
  for (std::size_t r = 0; r <= K.N; ++r) out += std::to_string(r) + ",\"" + index_text(idx[r]) + "\"," + num(K(r, r).real()) + "\n";
  return out;
}

namespace detail {

/// Splits a CSV line on commas outside double quotes; quotes are dropped.
inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells(1);
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (ch == ',' && !quoted) {
      cells.emplace_back();
    } else if (ch != '\r') {
      cells.back() += ch;
    }
  }
  return cells;
}

inline std::vector<std::map<std::string, std::string>> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV");
  const std::vector<std::string> header = split_csv_line(line);
  std::vector<std::map<std::string, std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != header.size()) throw ParseError("CSV row has " + std::to_string(cells.size()) + " cells, expected " + std::to_string(header.size()));
    std::map<std::string, std::string> row;
    for (std::size_t k = 0; k < cells.size(); ++k) row[header[k]] = cells[k];
    rows.push_back(std::move(row));
  }
  return rows;
}

inline const std::string& cell(const std::map<std::string, std::string>& row, const std::string& key) {
  auto it = row.find(key);
  if (it == row.end()) throw ParseError("CSV column missing: " + key);
  return it->second;
}

inline double to_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("bad number: " + s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad number: " + s);
  }
}

inline std::size_t to_size(const std::string& s) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(s, &used);
    if (used != s.size()) throw ParseError("bad integer: " + s);
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw ParseError("bad integer: " + s);
  }
}

}  // namespace detail

/// Reads the gamma CSV written by gamma_csv. N is the largest j present.
inline VerblunskyTable parse_gamma_csv(const std::string& text) {
  const auto rows = detail::parse_csv(text);
  std::size_t N = 0;
  for (const auto& row : rows) N = std::max(N, detail::to_size(detail::cell(row, "j")));
  VerblunskyTable t = VerblunskyTable::zeros(N);
  for (const auto& row : rows) {
    const std::size_t i = detail::to_size(detail::cell(row, "i")), j = detail::to_size(detail::cell(row, "j"));
    if (i >= j) throw ParseError("gamma CSV: need i < j");
    t.set(i, j, cplx(detail::to_double(detail::cell(row, "re")), detail::to_double(detail::cell(row, "im"))));
  }
  return t;
}

/// Reads the diagonal CSV written by diagonal_csv; also returns d from the index column.
inline std::vector<double> parse_diagonal_csv(const std::string& text, std::size_t* d = nullptr) {
  const auto rows = detail::parse_csv(text);
  std::vector<double> diag(rows.size(), 0.0);
  std::vector<bool> seen(rows.size(), false);
  for (const auto& row : rows) {
    const std::size_t r = detail::to_size(detail::cell(row, "rank"));
    if (r >= rows.size() || seen[r]) throw ParseError("diagonal CSV: ranks must be 0..n-1 without repeats");
    seen[r] = true;
    diag[r] = detail::to_double(detail::cell(row, "value"));
    if (d && r == 0) {
      const std::string idx = detail::cell(row, "index");
      *d = static_cast<std::size_t>(std::count(idx.begin(), idx.end(), ',')) + 1;
    }
  }
  return diag;
}

// ---------------------------------------------------------------- polynomials

inline std::string polynomials_csv(const OrthonormalSystem& sys) {
  std::string out = "family,rank,index,coeff_rank,coeff_index,re,im\n";
  const std::vector<MultiIndex> idx = shortlex_range(sys.d(), sys.N);
  auto dump = [&](const char* family, const std::vector<BallPolynomial>& polys) {
    for (std::size_t r = 0; r < polys.size(); ++r)
      for (std::size_t b = 0; b < polys[r].coeffs.size(); ++b)
        out += std::string(family) + "," + std::to_string(r) + ",\"" + index_text(idx[r]) + "\"," + std::to_string(b) + ",\"" +
               index_text(idx[b]) + "\"," + num(polys[r].coeffs[b].real()) + "," + num(polys[r].coeffs[b].imag()) + "\n";
  };
  dump("phi", sys.phi);
  dump("Phi", sys.Phi);
  dump("phi_sharp", sys.phiSharp);
  return out;
}

inline json polynomial_json(const BallPolynomial& p) {
  json c = json::array();
  for (const cplx& x : p.coeffs) c.push_back({x.real(), x.imag()});
  return c;
}

inline json polynomials_json(const OrthonormalSystem& sys) {
  json phi = json::array(), Phi = json::array(), sharp = json::array();
  const std::vector<MultiIndex> idx = shortlex_range(sys.d(), sys.N);
  for (std::size_t r = 0; r <= sys.N; ++r) {
    phi.push_back({{"rank", r}, {"index", index_json(idx[r])}, {"coeffs", polynomial_json(sys.phi[r])}});
    Phi.push_back({{"rank", r}, {"index", index_json(idx[r])}, {"coeffs", polynomial_json(sys.Phi[r])}});
    sharp.push_back({{"rank", r}, {"index", index_json(idx[r])}, {"coeffs", polynomial_json(sys.phiSharp[r])}});
  }
  return {{"d", sys.d()}, {"N", sys.N}, {"phi", phi}, {"Phi", Phi}, {"phi_sharp", sharp}};
}

// ---------------------------------------------------------------- christoffel

/// One row per level n whose last rank fits: lambda_n(z), the lower edge, and
/// the product of 1 - |gamma_{0,k}|^2 up to that rank.
struct ChristoffelRow {
  unsigned n = 0;
  MultiIndex alpha;
  double lambda_upper = 0.0;
  double lower_bound = 0.0;
  double product_of_defects = 0.0;
};

inline std::vector<ChristoffelRow> christoffel_rows(const OrthonormalSystem& sys, const VerblunskyTable& table, const EntropyResult& ent,
                                                    const Point& z) {
  std::vector<ChristoffelRow> rows;
  for (unsigned n = 0; level_last_rank(sys.d(), n) <= sys.N; ++n) {
    const std::size_t r = static_cast<std::size_t>(level_last_rank(sys.d(), n));
    double prod = 1.0;
    for (std::size_t k = 1; k <= r; ++k) prod *= table.d(0, k) * table.d(0, k);
    const TailBracket b = lambda_tail_bracket(sys, ent, z, n);
    rows.push_back({n, MultiIndex::level_last(sys.d(), n), b.upper, b.lower, prod});
  }
  return rows;
}

inline std::string christoffel_csv(const std::vector<ChristoffelRow>& rows) {
  std::string out = "n,alpha_n,lambda_upper,lower_bound,product_of_defects\n";
  for (const ChristoffelRow& r : rows)
    out += std::to_string(r.n) + ",\"" + index_text(r.alpha) + "\"," + num(r.lambda_upper) + "," + num(r.lower_bound) + "," +
           num(r.product_of_defects) + "\n";
  return out;
}

inline json christoffel_json(const std::vector<ChristoffelRow>& rows, const Point& z) {
  json pts = json::array();
  for (const cplx& c : z) pts.push_back({c.real(), c.imag()});
  json levels = json::array();
  for (const ChristoffelRow& r : rows)
    levels.push_back({{"n", r.n},
                      {"alpha_n", index_json(r.alpha)},
                      {"lambda_upper", r.lambda_upper},
                      {"lower_bound", r.lower_bound},
                      {"product_of_defects", r.product_of_defects}});
  json j = {{"z", pts}, {"levels", levels}};
  if (!rows.empty()) j["bracket"] = {{"lower", rows.back().lower_bound}, {"upper", rows.back().lambda_upper}, {"width", rows.back().lambda_upper - rows.back().lower_bound}};
  return j;
}

// ---------------------------------------------------------------- report

inline json szego_json(const SzegoReport& rep) {
  json first = json::array();
  for (const FirstListRow& r : rep.first_list)
    first.push_back({{"rank", r.rank},
                     {"index", index_json(r.index)},
                     {"monic_norm", r.monic_norm},
                     {"inv_leading_sq", r.inv_leading_sq},
                     {"det_ratio", r.det_ratio},
                     {"defect_product", r.defect_product},
                     {"residual", r.residual}});
  json second = json::array();
  for (const SecondListRow& r : rep.second_list)
    second.push_back({{"rank", r.rank},
                      {"index", index_json(r.index)},
                      {"product", r.product},
                      {"sharp", r.sharp},
                      {"cd_sum", r.cd_sum},
                      {"lambda_inverse", r.lambda_inverse},
                      {"residual", r.residual}});
  const SecondListRow& last = rep.final_second();
  json j = {{"d", rep.d},
            {"N", rep.N},
            {"kernel", to_string(rep.kernel_provenance)},
            {"first_list", first},
            {"second_list", second},
            {"szego_quantity", last.product},
            {"lambda_N", last.cd_sum},
            {"residuals", {{"first_list", rep.first_residual}, {"second_list", rep.second_residual}}},
            {"max_abs_gamma", rep.max_gamma},
            {"tail_abs_gamma", rep.tail_gamma},
            {"entropy", entropy_json(rep.entropy)},
            {"entropy_rhs", rep.entropy_rhs},
            {"candidate", rep.candidate_note},
            {"bracket", {{"lower", rep.bracket_lower}, {"upper", rep.bracket_upper}, {"width", rep.bracket_upper - rep.bracket_lower}}},
            {"gap", rep.gap},
            {"error_budget", rep.error_budget},
            {"verdict", to_string(rep.verdict)}};
  j["sv_slack"] = rep.sv_slack ? json(*rep.sv_slack) : json(nullptr);
  j["hinf_upper"] = rep.hinf_upper ? json(*rep.hinf_upper) : json(nullptr);
  if (rep.ac_minimizer_norm) j["ac_minimizer_norm"] = *rep.ac_minimizer_norm;
  return j;
}

}  // namespace spherepoly::io
