#include "iorobust/dataset_io.hpp"

#include "iorobust/error.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace iorobust {

using json = nlohmann::json;
using Index = Eigen::Index;

namespace {

Vector to_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw DataError(what + " must be an array of numbers");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw DataError(what + " must contain only numbers");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Observation to_observation(const json& j, const ForwardProblem& problem, const std::string& what) {
  if (!j.is_object() || !j.contains("b") || !j.contains("x_star")) {
    throw DataError(what + " must be an object with \"b\" and \"x_star\"");
  }
  Observation obs = make_observation(to_vector(j.at("b"), what + ".b"), to_vector(j.at("x_star"), what + ".x_star"));
  validate_observation(problem, obs);
  return obs;
}

json observations_json(const std::vector<Observation>& list) {
  json out = json::array();
  for (const Observation& obs : list) out.push_back({{"b", to_json(obs.b)}, {"x_star", to_json(obs.x_star)}});
  return out;
}

}  // namespace

Dataset parse_dataset(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("dataset is not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("A") || !doc.contains("observations")) {
    throw DataError("dataset must be an object with \"A\" and \"observations\"");
  }

  const json& rows = doc.at("A");
  if (!rows.is_array() || rows.empty()) throw DataError("\"A\" must be a nonempty array of rows");
  const std::size_t n = rows[0].is_array() ? rows[0].size() : 0;
  Dataset data;
  data.problem.A = Matrix(static_cast<Index>(rows.size()), static_cast<Index>(n));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Vector row = to_vector(rows[i], "A row " + std::to_string(i + 1));
    if (static_cast<std::size_t>(row.size()) != n) throw DataError("\"A\" rows have inconsistent lengths");
    data.problem.A.row(static_cast<Index>(i)) = row.transpose();
  }
  try {
    data.problem.validate();
  } catch (const UsageError& e) {
    throw DataError(e.what());
  }

  const json& train = doc.at("observations");
  if (!train.is_array()) throw DataError("\"observations\" must be an array");
  for (std::size_t k = 0; k < train.size(); ++k) {
    data.train.push_back(to_observation(train[k], data.problem, "observation " + std::to_string(k + 1)));
  }
  if (doc.contains("validation") && !doc.at("validation").is_null()) {
    const json& val = doc.at("validation");
    if (!val.is_array()) throw DataError("\"validation\" must be an array");
    for (std::size_t l = 0; l < val.size(); ++l) {
      data.validation.push_back(to_observation(val[l], data.problem, "validation " + std::to_string(l + 1)));
    }
  }
  if (doc.contains("c_true") && !doc.at("c_true").is_null()) {
    Vector c = to_vector(doc.at("c_true"), "c_true");
    if (c.size() != data.problem.num_cols()) throw DataError("c_true has the wrong length");
    data.truth = GroundTruth{std::move(c)};
  }
  if (doc.contains("seed") && doc.at("seed").is_number_unsigned()) data.seed = doc.at("seed").get<std::uint64_t>();
  return data;
}

std::string dataset_to_json(const Dataset& data) {
  json doc;
  json rows = json::array();
  for (Index i = 0; i < data.problem.A.rows(); ++i) rows.push_back(to_json(data.problem.A.row(i).transpose()));
  doc["A"] = std::move(rows);
  doc["observations"] = observations_json(data.train);
  doc["validation"] = observations_json(data.validation);
  doc["c_true"] = data.truth ? to_json(data.truth->c_true) : json(nullptr);
  if (data.seed) doc["seed"] = *data.seed;
  return doc.dump(1) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw UsageError("cannot write " + path.string());
  out << text;
  if (!out) throw UsageError("failed writing " + path.string());
}

Dataset read_dataset(const std::filesystem::path& path) { return parse_dataset(read_text_file(path)); }

void write_dataset(const std::filesystem::path& path, const Dataset& data) { write_text_file(path, dataset_to_json(data)); }

Vector parse_vector(std::string_view text, std::string_view key) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw DataError(std::string("vector file is not valid JSON: ") + e.what());
  }
  if (doc.is_object()) {
    const std::string k(key);
    if (!doc.contains(k)) throw DataError("vector file has no \"" + k + "\" entry");
    return to_vector(doc.at(k), k);
  }
  return to_vector(doc, "vector");
}

Vector read_vector(const std::filesystem::path& path, std::string_view key) {
  return parse_vector(read_text_file(path), key);
}

}  // namespace iorobust
