#include "squashkit/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "squashkit/error.hpp"

namespace squashkit::io {

namespace {

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorCode::ParseError, "complex entries must be [re, im] pairs");
  }
  const Complex z(j[0].get<double>(), j[1].get<double>());
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) throw Error(ErrorCode::ParseError, "non-finite entry");
  return z;
}

std::size_t size_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() <= 0) {
    throw Error(ErrorCode::ParseError, std::string("missing or invalid '") + key + "'");
  }
  return static_cast<std::size_t>(j.at(key).get<long long>());
}

}  // namespace

Json to_json(const ComplexMatrix& m) {
  Json j;
  if (m.is_square()) {
    j["dim"] = m.rows();
  } else {
    j["rows"] = m.rows();
    j["cols"] = m.cols();
  }
  Json entries = Json::array();
  for (const auto& z : m.entries()) entries.push_back(Json::array({z.real(), z.imag()}));
  j["entries"] = std::move(entries);
  return j;
}

ComplexMatrix matrix_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "matrix must be a JSON object");
  std::size_t rows = 0;
  std::size_t cols = 0;
  if (j.contains("dim")) {
    rows = cols = size_field(j, "dim");
  } else {
    rows = size_field(j, "rows");
    cols = size_field(j, "cols");
  }
  if (!j.contains("entries") || !j.at("entries").is_array() || j.at("entries").size() != rows * cols) {
    throw Error(ErrorCode::ParseError, "'entries' must hold rows * cols complex pairs");
  }
  std::vector<Complex> entries;
  entries.reserve(rows * cols);
  for (const auto& e : j.at("entries")) entries.push_back(complex_from_json(e));
  return ComplexMatrix(rows, cols, std::move(entries));
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (const auto& z : v) out.push_back(Json::array({z.real(), z.imag()}));
  return out;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "vector must be an array of [re, im] pairs");
  Vector v;
  for (const auto& e : j) v.push_back(complex_from_json(e));
  return v;
}

Json to_json(const Bb84Povm& p) {
  Json j;
  j["dim"] = p.dim();
  Json elements;
  for (const char* name : {"z0", "z1", "x0", "x1"}) elements[name] = to_json(p.element(parse_label(name)));
  j["elements"] = std::move(elements);
  return j;
}

Bb84Povm povm_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("elements")) throw Error(ErrorCode::ParseError, "POVM needs 'elements'");
  const auto& e = j.at("elements");
  for (const char* name : {"z0", "z1", "x0", "x1"}) {
    if (!e.contains(name)) throw Error(ErrorCode::ParseError, std::string("POVM element '") + name + "' missing");
  }
  Bb84Povm p(matrix_from_json(e.at("z0")), matrix_from_json(e.at("z1")), matrix_from_json(e.at("x0")),
             matrix_from_json(e.at("x1")));
  if (j.contains("dim") && size_field(j, "dim") != p.dim()) {
    throw Error(ErrorCode::ParseError, "'dim' disagrees with the element shapes");
  }
  return p;
}

Json to_json(const FiniteGroup& g) {
  Json j;
  j["order"] = g.order();
  j["cayley"] = g.cayley();
  j["identity"] = g.identity();
  return j;
}

FiniteGroup group_from_json(const Json& j) {
  try {
    auto table = j.at("cayley").get<std::vector<std::vector<int>>>();
    const int identity = j.contains("identity") ? j.at("identity").get<int>() : 0;
    if (j.contains("order") && j.at("order").get<std::size_t>() != table.size()) {
      throw Error(ErrorCode::InvalidGroup, "'order' disagrees with the Cayley table");
    }
    return FiniteGroup(std::move(table), identity);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("group JSON: ") + e.what());
  }
}

Json to_json(const LabelAction& a) {
  Json out = Json::array();
  for (const auto& perm : a.perms()) {
    Json images = Json::array();
    for (int c = 0; c < 4; ++c) images.push_back(label_name(label_from_cyclic(perm[c])));
    out.push_back(std::move(images));
  }
  return out;
}

LabelAction action_from_json(const FiniteGroup& g, const Json& j) {
  if (!j.is_array()) throw Error(ErrorCode::ParseError, "label action must be an array");
  std::vector<LabelPermutation> perms;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 4) {
      throw Error(ErrorCode::ParseError, "each label map lists the images of z0, x0, z1, x1");
    }
    LabelPermutation perm{};
    for (std::size_t c = 0; c < 4; ++c) {
      if (entry[c].is_string()) {
        perm[c] = cyclic_index(parse_label(entry[c].get<std::string>()));
      } else if (entry[c].is_number_integer()) {
        perm[c] = entry[c].get<int>();
      } else {
        throw Error(ErrorCode::ParseError, "label images must be names or cyclic indices");
      }
    }
    perms.push_back(perm);
  }
  return LabelAction(g, std::move(perms));
}

Json to_json(const SquashMap& f) {
  Json j;
  j["in_dim"] = f.in_dim();
  Json kraus = Json::array();
  for (const auto& k : f.kraus()) kraus.push_back(to_json(k));
  j["kraus"] = std::move(kraus);
  return j;
}

SquashMap squash_from_json(const Json& j) {
  const std::size_t d = size_field(j, "in_dim");
  if (!j.contains("kraus") || !j.at("kraus").is_array()) throw Error(ErrorCode::ParseError, "squash needs 'kraus'");
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : j.at("kraus")) kraus.push_back(matrix_from_json(k));
  return SquashMap(d, std::move(kraus));
}

Json to_json(const DetectorModel& model) {
  Json j;
  j["N"] = model.sector.photons();
  j["dim"] = model.sector.dim();
  j["povm"] = to_json(model.povm);
  j["U_N"] = to_json(model.u_n);
  Json states;
  for (const Label l : kAllLabels) states[label_name(l)] = to_json(model.state(l));
  j["states"] = std::move(states);
  return j;
}

Json to_json(const FeasibilityReport& report) {
  Json j;
  j["verdict"] = std::string(to_string(report.verdict));
  j["gap"] = report.gap;
  j["iterations"] = report.iterations;
  if (report.witness) {
    j["witness"] = {{"theta", report.witness->theta},
                    {"value", report.witness->value},
                    {"state", to_json(report.witness->state)}};
  }
  if (report.verification) j["verification"] = to_json(*report.verification);
  if (report.squash) j["squash"] = to_json(*report.squash);
  return j;
}

Json to_json(const AttackResult& result) {
  Json j;
  j["qber"] = result.qber;
  j["eve_accuracy"] = result.eve_accuracy;
  j["trials"] = result.trials;
  j["analytic"] = {{"qber", result.analytic_qber}, {"eve_accuracy", result.analytic_eve_accuracy}};
  j["degenerate"] = result.degenerate;
  return j;
}

Json to_json(const VerificationReport& report) {
  Json j;
  j["residual_z"] = report.residual_z;
  j["residual_x"] = report.residual_x;
  j["residual_tp"] = report.residual_tp;
  j["spot_check"] = report.spot_check;
  j["spot_samples"] = report.spot_samples;
  j["passed"] = report.passed;
  return j;
}

Json to_json(const SymmetryReport& report) {
  Json j;
  Json residuals = Json::array();
  for (const auto& r : report.residuals) residuals.push_back({{"relation", r.relation}, {"value", r.value}});
  j["residuals"] = std::move(residuals);
  j["max_residual"] = report.max_residual;
  j["phase_normalized"] = report.phase_normalized;
  j["passed"] = report.passed;
  return j;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, "'" + path + "': " + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const std::string& path, const Json& j) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + tmp + "'");
    out << dump(j);
    if (!out) throw Error(ErrorCode::ParseError, "write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw Error(ErrorCode::ParseError, "cannot move output into '" + path + "'");
  }
}

}  // namespace squashkit::io
