#include "parsum/json_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace parsum {

using nlohmann::ordered_json;

nlohmann::ordered_json parse_json_text(const std::string& text) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

nlohmann::ordered_json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json_text(buf.str());
}

namespace {

double require_number(const ordered_json& j, const char* what) {
  if (!j.is_number()) throw SchemaError(std::string(what) + " must be a number");
  return j.get<double>();
}

Complex read_entry(const ordered_json& e) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number())
    return {e[0].get<double>(), e[1].get<double>()};
  throw SchemaError("matrix entry must be a number or an [re, im] pair");
}

Matrix read_entries(const ordered_json& rows, Eigen::Index dim_rows,
                    Eigen::Index dim_cols) {
  if (!rows.is_array() ||
      static_cast<Eigen::Index>(rows.size()) != dim_rows)
    throw SchemaError("entries must be an array with one row per dimension");
  Matrix m(dim_rows, dim_cols);
  for (Eigen::Index i = 0; i < dim_rows; ++i) {
    const auto& row = rows[static_cast<size_t>(i)];
    if (!row.is_array() ||
        static_cast<Eigen::Index>(row.size()) != dim_cols)
      throw SchemaError("entries rows must all have the declared length");
    for (Eigen::Index j = 0; j < dim_cols; ++j)
      m(i, j) = read_entry(row[static_cast<size_t>(j)]);
  }
  return m;
}

ordered_json write_entries(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Matrix read_matrix(const ordered_json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("entries"))
    throw SchemaError("matrix needs \"dim\" and \"entries\"");
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() < 1)
    throw SchemaError("\"dim\" must be a positive integer");
  auto dim = static_cast<Eigen::Index>(j["dim"].get<long long>());
  return read_entries(j["entries"], dim, dim);
}

ordered_json write_matrix(const Matrix& m) {
  ordered_json out;
  out["dim"] = static_cast<long long>(m.rows());
  out["entries"] = write_entries(m);
  return out;
}

Charge read_charge(const ordered_json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j.contains("weights"))
    throw SchemaError("charge needs \"atoms\" and \"weights\"");
  const auto& atoms = j["atoms"];
  const auto& weights = j["weights"];
  if (!atoms.is_array() || atoms.empty())
    throw SchemaError("\"atoms\" must be a nonempty array");
  if (!weights.is_array() || weights.size() != atoms.size())
    throw SchemaError("\"weights\" must match \"atoms\" in length");
  std::vector<std::string> labels;
  for (const auto& a : atoms) {
    if (!a.is_string()) throw SchemaError("atom labels must be strings");
    labels.push_back(a.get<std::string>());
  }
  Eigen::VectorXd w(static_cast<Eigen::Index>(weights.size()));
  for (Eigen::Index i = 0; i < w.size(); ++i)
    w[i] = require_number(weights[static_cast<size_t>(i)], "weight");
  try {
    return Charge(AtomSpace(std::move(labels)), std::move(w));
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());  // duplicate atom labels and the like
  }
}

ordered_json write_charge(const Charge& c) {
  ordered_json out;
  out["atoms"] = c.space().atoms();
  ordered_json w = ordered_json::array();
  for (Eigen::Index i = 0; i < c.size(); ++i) w.push_back(c.weights()[i]);
  out["weights"] = std::move(w);
  return out;
}

MatrixFunctional read_functional(const ordered_json& j, double psd_tol) {
  if (!j.is_object() || !j.contains("d") || !j.contains("rho"))
    throw SchemaError("functional needs \"d\" and \"rho\"");
  if (!j["d"].is_number_integer() || j["d"].get<long long>() < 1)
    throw SchemaError("\"d\" must be a positive integer");
  auto d = static_cast<Eigen::Index>(j["d"].get<long long>());
  Matrix rho = read_entries(j["rho"], d, d);
  return MatrixFunctional::from_density(std::move(rho), psd_tol);
}

ordered_json write_functional(const MatrixFunctional& w) {
  ordered_json out;
  out["d"] = static_cast<long long>(w.d());
  out["rho"] = write_entries(w.density());
  return out;
}

OperatorKernel read_kernel(const ordered_json& j, double psd_tol) {
  if (!j.is_object() || !j.contains("points") || !j.contains("fiber_dim") ||
      !j.contains("blocks"))
    throw SchemaError("kernel needs \"points\", \"fiber_dim\" and \"blocks\"");
  const auto& pts = j["points"];
  if (!pts.is_array() || pts.empty())
    throw SchemaError("\"points\" must be a nonempty array");
  std::vector<std::string> points;
  for (const auto& p : pts) {
    if (!p.is_string()) throw SchemaError("point labels must be strings");
    points.push_back(p.get<std::string>());
  }
  if (!j["fiber_dim"].is_number_integer() ||
      j["fiber_dim"].get<long long>() < 1)
    throw SchemaError("\"fiber_dim\" must be a positive integer");
  auto d = static_cast<Eigen::Index>(j["fiber_dim"].get<long long>());

  const auto& blocks = j["blocks"];
  if (!blocks.is_object()) throw SchemaError("\"blocks\" must be an object");
  std::map<std::pair<std::string, std::string>, Matrix> parsed;
  for (const auto& [key, val] : blocks.items()) {
    // Keys are "s,t"; the split must name two known points. Labels that
    // themselves contain commas are resolved by trying every split and
    // requiring exactly one to match.
    std::pair<std::string, std::string> found;
    int matches = 0;
    for (size_t pos = key.find(','); pos != std::string::npos;
         pos = key.find(',', pos + 1)) {
      std::string s = key.substr(0, pos), t = key.substr(pos + 1);
      bool s_ok = std::find(points.begin(), points.end(), s) != points.end();
      bool t_ok = std::find(points.begin(), points.end(), t) != points.end();
      if (s_ok && t_ok) {
        found = {s, t};
        ++matches;
      }
    }
    if (matches != 1)
      throw SchemaError("block key does not name a point pair: " + key);
    parsed[found] = read_entries(val, d, d);
  }
  try {
    return OperatorKernel::from_blocks(std::move(points), d, parsed, psd_tol);
  } catch (const std::invalid_argument& e) {
    // Missing blocks / duplicate labels are schema problems; dimension and
    // positivity problems keep their own types.
    if (dynamic_cast<const DimensionError*>(&e)) throw;
    throw SchemaError(e.what());
  }
}

ordered_json write_kernel(const OperatorKernel& k) {
  ordered_json out;
  out["points"] = k.points();
  out["fiber_dim"] = static_cast<long long>(k.fiber_dim());
  ordered_json blocks = ordered_json::object();
  for (Eigen::Index s = 0; s < k.point_count(); ++s)
    for (Eigen::Index t = 0; t < k.point_count(); ++t) {
      std::string key = k.points()[static_cast<size_t>(s)] + "," +
                        k.points()[static_cast<size_t>(t)];
      blocks[key] = write_entries(k.block(s, t));
    }
  out["blocks"] = std::move(blocks);
  return out;
}

namespace {

void dump_rec(const ordered_json& j, std::string& out) {
  switch (j.type()) {
    case nlohmann::json::value_t::null:
      out += "null";
      break;
    case nlohmann::json::value_t::boolean:
      out += j.get<bool>() ? "true" : "false";
      break;
    case nlohmann::json::value_t::number_integer:
      out += std::to_string(j.get<long long>());
      break;
    case nlohmann::json::value_t::number_unsigned:
      out += std::to_string(j.get<unsigned long long>());
      break;
    case nlohmann::json::value_t::number_float: {
      double v = j.get<double>();
      if (!std::isfinite(v))
        throw std::invalid_argument("cannot serialize non-finite number");
      char buf[64];
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      out += buf;
      break;
    }
    case nlohmann::json::value_t::string:
      // Reuse the library's escaping by dumping the string value alone.
      out += ordered_json(j.get<std::string>()).dump();
      break;
    case nlohmann::json::value_t::array: {
      out += '[';
      bool first = true;
      for (const auto& el : j) {
        if (!first) out += ',';
        first = false;
        dump_rec(el, out);
      }
      out += ']';
      break;
    }
    case nlohmann::json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [key, val] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += ordered_json(key).dump();
        out += ':';
        dump_rec(val, out);
      }
      out += '}';
      break;
    }
    default:
      throw std::invalid_argument("unsupported JSON value type");
  }
}

}  // namespace

std::string dump_json(const ordered_json& j) {
  std::string out;
  dump_rec(j, out);
  return out;
}

}  // namespace parsum
