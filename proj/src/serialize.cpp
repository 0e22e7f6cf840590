#include "upq/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace upq {

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double number_from(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename T, typename ToJson>
Json current_to_json(const StepCurrent<T>& c, ToJson value) {
  Json pieces = Json::array();
  for (std::size_t i = 0; i < c.pieces(); ++i)
    pieces.push_back({{"from", c.breaks()[i]}, {"to", c.breaks()[i + 1]}, {"value", value(c.values()[i])}});
  return {{"variant", to_string(c.variant())}, {"pieces", pieces}};
}

CurrentVariant variant_from(const std::string& s) {
  for (auto v : {CurrentVariant::triangular, CurrentVariant::iwasawa, CurrentVariant::group, CurrentVariant::compact})
    if (to_string(v) == s) return v;
  throw InvalidInput("unknown current variant '" + s + "'");
}

template <typename T, typename FromJson>
StepCurrent<T> current_from_json(const Json& j, FromJson value) {
  std::vector<double> breaks;
  std::vector<T> vals;
  for (const auto& piece : j.at("pieces")) {
    if (breaks.empty()) breaks.push_back(piece.at("from").get<double>());
    breaks.push_back(piece.at("to").get<double>());
    vals.push_back(value(piece.at("value")));
  }
  return StepCurrent<T>(variant_from(j.at("variant").get<std::string>()), std::move(breaks), std::move(vals));
}

} // namespace

Json to_json(const CMatrix& m) {
  Json data = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index k = 0; k < m.cols(); ++k) data.push_back({m(i, k).real(), m(i, k).imag()});
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

CMatrix matrix_from_json(const Json& j) {
  const auto rows = j.at("rows").get<Eigen::Index>(), cols = j.at("cols").get<Eigen::Index>();
  const auto& data = j.at("data");
  if (static_cast<Eigen::Index>(data.size()) != rows * cols) throw InvalidInput("matrix JSON has the wrong entry count");
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& e = data[static_cast<std::size_t>(i * cols + k)];
      m(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  return m;
}

Json to_json(const Signature& sig) { return {{"p", sig.p}, {"q", sig.q}}; }

Signature signature_from_json(const Json& j) { return Signature{j.at("p").get<int>(), j.at("q").get<int>()}; }

Json to_json(const IwasawaElement& p) {
  return {{"signature", to_json(p.sig())}, {"s", to_json(p.s.matrix())}, {"n", to_json(p.h.n())}, {"z", to_json(p.h.z())}};
}

IwasawaElement iwasawa_from_json(const Json& j) {
  const Signature sig = signature_from_json(j.at("signature"));
  return {TriangularS(sig, matrix_from_json(j.at("s"))),
          HeisenbergElement(sig, matrix_from_json(j.at("n")), matrix_from_json(j.at("z")))};
}

Json to_json(const GroupElement& g) { return {{"signature", to_json(g.sig())}, {"matrix", to_json(g.matrix())}}; }

GroupElement group_from_json(const Json& j) {
  return GroupElement(signature_from_json(j.at("signature")), matrix_from_json(j.at("matrix")));
}

Json to_json(const PCurrent& c) {
  return current_to_json(c, [](const IwasawaElement& v) { return to_json(v); });
}

PCurrent pcurrent_from_json(const Json& j) { return current_from_json<IwasawaElement>(j, iwasawa_from_json); }

Json to_json(const GCurrent& c) {
  return current_to_json(c, [](const GroupElement& v) { return to_json(v); });
}

GCurrent gcurrent_from_json(const Json& j) { return current_from_json<GroupElement>(j, group_from_json); }

Json to_json(const Configuration& c) {
  Json pts = Json::array();
  for (std::size_t i = 0; i < c.points.size(); ++i) {
    const RVector coords = s_coordinates(c.points[i].s.matrix());
    Json point{{"s", std::vector<double>(coords.data(), coords.data() + coords.size())}, {"x", c.points[i].x}};
    if (i < c.outside.size() && c.outside[i]) point["outside"] = true;
    pts.push_back(point);
  }
  return pts;
}

Json to_json(const CocycleCombination& v) {
  Json terms = Json::array();
  for (const auto& [c, p] : v.terms()) terms.push_back({{"coeff", {c.real(), c.imag()}}, {"generator", to_json(p)}});
  return terms;
}

Json to_json(const GramMatrixEstimate& g) {
  RMatrix se = g.std_error;
  CMatrix se_c = se.cast<cplx>();
  return {{"gram", to_json(g.gram)},
          {"std_error", to_json(se_c)},
          {"eigenvalues", g.eigenvalues},
          {"lambda_min", g.lambda_min},
          {"lambda_min_std_error", g.lambda_min_std_error},
          {"n_samples", g.n_samples},
          {"seed", g.seed}};
}

Json to_json(const ReportRow& r) {
  return {{"suite", r.suite},
          {"check", r.check},
          {"anchor", r.anchor},
          {"estimate", number_or_null(r.estimate)},
          {"reference", number_or_null(r.reference)},
          {"std_error", number_or_null(r.std_error)},
          {"tolerance", number_or_null(r.tolerance)},
          {"verdict", r.pass ? "pass" : "fail"},
          {"seed", r.seed}};
}

Json to_json(const Report& r) {
  Json rows = Json::array();
  std::size_t failures = 0;
  for (const auto& row : r.rows) {
    rows.push_back(to_json(row));
    failures += row.pass ? 0 : 1;
  }
  Json plots = Json::array();
  for (const auto& p : r.plots) plots.push_back(p.file);
  return {{"schema", r.schema},
          {"summary", {{"rows", r.rows.size()}, {"failures", failures}, {"verdict", failures == 0 ? "pass" : "fail"}}},
          {"rows", rows},
          {"plots", plots}};
}

Report report_from_json(const Json& j) {
  Report r;
  r.schema = j.at("schema").get<std::string>();
  if (r.schema != kReportSchema) throw InvalidInput("unsupported report schema '" + r.schema + "'");
  for (const auto& row : j.at("rows")) {
    ReportRow x;
    x.suite = row.at("suite").get<std::string>();
    x.check = row.at("check").get<std::string>();
    x.anchor = row.at("anchor").get<std::string>();
    x.estimate = number_from(row.at("estimate"));
    x.reference = number_from(row.at("reference"));
    x.std_error = number_from(row.at("std_error"));
    x.tolerance = number_from(row.at("tolerance"));
    x.pass = row.at("verdict").get<std::string>() == "pass";
    x.seed = row.at("seed").get<std::uint64_t>();
    r.rows.push_back(std::move(x));
  }
  return r;
}

std::string to_csv(const Report& r) {
  std::ostringstream out;
  out << "suite,check,estimate,reference,std_error,tolerance,verdict,seed,anchor\n";
  for (const auto& row : r.rows)
    out << csv_field(row.suite) << ',' << csv_field(row.check) << ',' << csv_number(row.estimate) << ','
        << csv_number(row.reference) << ',' << csv_number(row.std_error) << ',' << csv_number(row.tolerance) << ','
        << (row.pass ? "pass" : "fail") << ',' << row.seed << ',' << csv_field(row.anchor) << '\n';
  return out.str();
}

} // namespace upq
