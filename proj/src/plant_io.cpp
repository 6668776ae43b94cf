#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ncsverify/errors.hpp"
#include "ncsverify/sysmodel.hpp"

namespace ncsverify {

namespace {

using nlohmann::json;

Eigen::MatrixXd matrix_field(const json& doc, const char* key, Eigen::Index n,
                             const Eigen::MatrixXd& fallback) {
  if (!doc.contains(key)) return fallback;
  const auto& arr = doc.at(key);
  if (!arr.is_array() || arr.size() != static_cast<std::size_t>(n * n)) {
    throw InputError(std::string("plant field '") + key + "' must hold n*n numbers (row-major)");
  }
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& v = arr[static_cast<std::size_t>(i * n + j)];
      if (!v.is_number()) throw InputError(std::string("plant field '") + key + "' holds a non-number");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) arr.push_back(m(i, j));
  }
  return arr;
}

}  // namespace

PlantModel parse_plant_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("plant file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw InputError("plant file must hold a JSON object");
  static const std::set<std::string> known{"n", "a_open", "a_closed", "q_weight", "w_cov"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw InputError("unknown plant key '" + key + "'");
  }
  if (!doc.contains("n") || !doc.at("n").is_number_integer() || doc.at("n").get<long long>() < 1) {
    throw InputError("plant field 'n' must be a positive integer");
  }
  if (!doc.contains("a_open")) throw InputError("plant field 'a_open' is required");
  const auto n = static_cast<Eigen::Index>(doc.at("n").get<long long>());
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  return PlantModel(matrix_field(doc, "a_open", n, eye), matrix_field(doc, "a_closed", n, Eigen::MatrixXd::Zero(n, n)),
                    matrix_field(doc, "q_weight", n, eye), matrix_field(doc, "w_cov", n, eye));
}

PlantModel load_plant_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open plant file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_plant_json(ss.str());
}

std::string plant_to_json(const PlantModel& plant) {
  json doc{{"n", plant.dim()},
           {"a_open", matrix_json(plant.a_open())},
           {"a_closed", matrix_json(plant.a_closed())},
           {"q_weight", matrix_json(plant.q_weight())},
           {"w_cov", matrix_json(plant.w_cov())}};
  return doc.dump(2);
}

}  // namespace ncsverify
