#include "gwb/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>

namespace gwb {

namespace {

void dump_value(const Json& j, std::string* out, int indent, int depth);

void append_indent(std::string* out, int indent, int depth) {
  if (indent > 0) {
    out->push_back('\n');
    out->append(static_cast<std::size_t>(indent * depth), ' ');
  }
}

void dump_number(const Json& j, std::string* out) {
  if (j.is_number_integer()) {
    out->append(std::to_string(j.get<std::int64_t>()));
    return;
  }
  if (j.is_number_unsigned()) {
    out->append(std::to_string(j.get<std::uint64_t>()));
    return;
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(Errc::io_error, "canonical_dump: non-finite number");
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out->append(buf);
}

void dump_value(const Json& j, std::string* out, int indent, int depth) {
  switch (j.type()) {
    case Json::value_t::null:
      out->append("null");
      break;
    case Json::value_t::boolean:
      out->append(j.get<bool>() ? "true" : "false");
      break;
    case Json::value_t::string:
      out->append(Json(j.get<std::string>()).dump());
      break;
    case Json::value_t::array: {
      out->push_back('[');
      bool first = true;
      for (const auto& item : j) {
        if (!first) out->push_back(',');
        first = false;
        append_indent(out, indent, depth + 1);
        dump_value(item, out, indent, depth + 1);
      }
      if (!j.empty()) append_indent(out, indent, depth);
      out->push_back(']');
      break;
    }
    case Json::value_t::object: {
      out->push_back('{');
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out->push_back(',');
        first = false;
        append_indent(out, indent, depth + 1);
        out->append(Json(it.key()).dump());
        out->push_back(':');
        if (indent > 0) out->push_back(' ');
        dump_value(it.value(), out, indent, depth + 1);
      }
      if (!j.empty()) append_indent(out, indent, depth);
      out->push_back('}');
      break;
    }
    default:
      dump_number(j, out);
      break;
  }
}

double number_field(const Json& j, const std::string& field) {
  if (!j.contains(field))
    fail(Errc::parse_error, "missing field '" + field + "'");
  if (!j.at(field).is_number())
    fail(Errc::parse_error, "field '" + field + "' must be a number");
  return j.at(field).get<double>();
}

}  // namespace

std::string canonical_dump(const Json& j, int indent) {
  std::string out;
  dump_value(j, &out, indent, 0);
  out.push_back('\n');
  return out;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_error, "cannot open '" + path + "' for reading");
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    fail(Errc::parse_error, "invalid JSON in '" + path + "': " + e.what());
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::io_error, "cannot open '" + path + "' for writing");
  out << content;
  if (!out) fail(Errc::io_error, "write to '" + path + "' failed");
}

Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    fail(Errc::parse_error, "field '" + field + "' must be a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array() || j[0].empty())
    fail(Errc::parse_error, "field '" + field + "' rows must be non-empty arrays");
  const std::size_t cols = j[0].size();
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols)
      fail(Errc::parse_error, "field '" + field + "' row " + std::to_string(i) +
                                  " has inconsistent length");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!j[i][c].is_number())
        fail(Errc::parse_error, "field '" + field + "' entry (" + std::to_string(i) + ", " +
                                    std::to_string(c) + ") is not a number");
      m(static_cast<Index>(i), static_cast<Index>(c)) = j[i][c].get<double>();
    }
  }
  return m;
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty())
    fail(Errc::parse_error, "field '" + field + "' must be a non-empty array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      fail(Errc::parse_error,
           "field '" + field + "' entry " + std::to_string(i) + " is not a number");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

Json gaussian_to_json(const GaussianMeasure& g) {
  Json j;
  j["mean"] = vector_to_json(g.mean);
  j["cov"] = matrix_to_json(g.cov.mat());
  return j;
}

GaussianMeasure gaussian_from_json(const Json& j) {
  if (!j.contains("mean") || !j.contains("cov"))
    fail(Errc::parse_error, "Gaussian measure needs 'mean' and 'cov' fields");
  const Vector mean = vector_from_json(j.at("mean"), "mean");
  const Matrix cov = matrix_from_json(j.at("cov"), "cov");
  return GaussianMeasure(mean, SymMatrix::covariance(cov));
}

Json prior_to_json(const PriorSpec& p) {
  Json j;
  j["mu"] = vector_to_json(p.mu);
  j["cov"] = matrix_to_json(p.cov.mat());
  j["tau"] = p.tau;
  j["gamma"] = p.gamma;
  j["rf"] = p.rf;
  return j;
}

PriorSpec prior_from_json(const Json& j) {
  PriorSpec p;
  if (!j.contains("mu") || !j.contains("cov"))
    fail(Errc::parse_error, "prior needs 'mu' and 'cov' fields");
  p.mu = vector_from_json(j.at("mu"), "mu");
  p.cov = SymMatrix::covariance(matrix_from_json(j.at("cov"), "cov"));
  if (j.contains("tau")) p.tau = number_field(j, "tau");
  if (j.contains("gamma")) p.gamma = number_field(j, "gamma");
  if (j.contains("rf")) p.rf = number_field(j, "rf");
  p.validate();
  return p;
}

Json views_to_json(const ViewSet& v) {
  Json j;
  j["target"] = v.target == ViewTarget::DriftSpace ? "drift" : "returns";
  j["confidence"] = v.confidence;
  j["P"] = matrix_to_json(v.P);
  j["nu"] = vector_to_json(v.nu);
  j["covV"] = matrix_to_json(v.cov.mat());
  return j;
}

ViewSet views_from_json(const Json& j) {
  ViewSet v;
  if (!j.contains("target") || !j.at("target").is_string())
    fail(Errc::parse_error, "view set needs a string 'target' field");
  const std::string target = j.at("target").get<std::string>();
  if (target == "drift")
    v.target = ViewTarget::DriftSpace;
  else if (target == "returns")
    v.target = ViewTarget::ReturnSpace;
  else
    fail(Errc::parse_error, "field 'target' must be 'drift' or 'returns', got '" + target + "'");
  for (const char* field : {"P", "nu", "covV"})
    if (!j.contains(field)) fail(Errc::parse_error, std::string("missing field '") + field + "'");
  v.P = matrix_from_json(j.at("P"), "P");
  v.nu = vector_from_json(j.at("nu"), "nu");
  v.cov = SymMatrix::covariance(matrix_from_json(j.at("covV"), "covV"));
  v.confidence = j.contains("confidence") ? number_field(j, "confidence") : 0.5;
  validate_views(v, v.P.cols());
  return v;
}

Json posterior_to_json(const PosteriorUpdate& p) {
  Json j;
  j["method"] = method_name(p.method);
  j["mean"] = vector_to_json(p.mean);
  j["cov"] = matrix_to_json(p.cov.mat());
  if (p.lambda.has_value()) {
    if (std::isinf(*p.lambda))
      j["lambda_used"] = "inf";
    else
      j["lambda_used"] = *p.lambda;
  } else {
    j["lambda_used"] = nullptr;
  }
  return j;
}

PosteriorUpdate posterior_from_json(const Json& j) {
  PosteriorUpdate p;
  if (!j.contains("mean") || !j.contains("cov"))
    fail(Errc::parse_error, "posterior needs 'mean' and 'cov' fields");
  p.mean = vector_from_json(j.at("mean"), "mean");
  p.cov = SymMatrix::covariance(matrix_from_json(j.at("cov"), "cov"));
  const std::string method = j.contains("method") ? j.at("method").get<std::string>() : "bl1";
  if (method == "bl1")
    p.method = UpdateMethod::BL1;
  else if (method == "bl2")
    p.method = UpdateMethod::BL2;
  else if (method == "gwb1")
    p.method = UpdateMethod::GWB1;
  else if (method == "gwb2")
    p.method = UpdateMethod::GWB2;
  else
    fail(Errc::parse_error, "unknown method '" + method + "'");
  if (j.contains("lambda_used") && !j.at("lambda_used").is_null()) {
    const auto& lam = j.at("lambda_used");
    if (lam.is_string()) {
      if (lam.get<std::string>() != "inf")
        fail(Errc::parse_error, "field 'lambda_used' string form must be 'inf'");
      p.lambda = std::numeric_limits<double>::infinity();
    } else if (lam.is_number()) {
      p.lambda = lam.get<double>();
    } else {
      fail(Errc::parse_error, "field 'lambda_used' must be a number, 'inf', or null");
    }
  }
  return p;
}

Json report_to_json(const RunReport& r) {
  Json j;
  j["methods"] = r.methods;
  j["sharpe"] = matrix_to_json(r.sharpe);
  j["delta_s"] = matrix_to_json(r.delta_s);
  j["tstat"] = matrix_to_json(r.tstat);
  j["config"] = r.config;
  Json seeds = Json::array();
  for (const auto s : r.seeds) seeds.push_back(s);
  j["seeds"] = seeds;
  j["diagnostics"] = r.diagnostics.is_null() ? Json::object() : r.diagnostics;
  return j;
}

RunReport report_from_json(const Json& j) {
  RunReport r;
  for (const char* field : {"methods", "sharpe", "delta_s", "tstat"})
    if (!j.contains(field)) fail(Errc::parse_error, std::string("missing field '") + field + "'");
  r.methods = j.at("methods").get<std::vector<std::string>>();
  r.sharpe = matrix_from_json(j.at("sharpe"), "sharpe");
  r.delta_s = matrix_from_json(j.at("delta_s"), "delta_s");
  r.tstat = matrix_from_json(j.at("tstat"), "tstat");
  if (j.contains("config")) r.config = j.at("config");
  if (j.contains("seeds")) {
    for (const auto& s : j.at("seeds")) r.seeds.push_back(s.get<std::uint64_t>());
  }
  if (j.contains("diagnostics")) r.diagnostics = j.at("diagnostics");
  const Index m = static_cast<Index>(r.methods.size());
  if (r.sharpe.cols() != m || r.delta_s.rows() != m || r.delta_s.cols() != m ||
      r.tstat.rows() != m || r.tstat.cols() != m)
    fail(Errc::parse_error, "report tables do not match the method list");
  return r;
}

}  // namespace gwb
