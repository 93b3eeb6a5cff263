#include "kreindil/model_io.hpp"

#include <fstream>
#include <sstream>

namespace kreindil {

namespace {

CMatrix read_matrix(const nlohmann::json& re, const nlohmann::json* im, Index dim,
                    const std::string& name) {
  auto check_shape = [&](const nlohmann::json& arr, const std::string& label) {
    if (!arr.is_array() || static_cast<Index>(arr.size()) != dim) {
      throw InvalidArgument("model: " + label + " must be an array of " + std::to_string(dim) +
                            " rows");
    }
    for (const auto& row : arr) {
      if (!row.is_array() || static_cast<Index>(row.size()) != dim) {
        throw InvalidArgument("model: every row of " + label + " must have " +
                              std::to_string(dim) + " entries");
      }
      for (const auto& x : row) {
        if (!x.is_number()) throw InvalidArgument("model: " + label + " has a non-numeric entry");
      }
    }
  };
  check_shape(re, name + "_re");
  if (im) check_shape(*im, name + "_im");
  CMatrix out(dim, dim);
  for (Index r = 0; r < dim; ++r) {
    for (Index c = 0; c < dim; ++c) {
      const double x = re[r][c].get<double>();
      const double y = im ? (*im)[r][c].get<double>() : 0.0;
      out(r, c) = Complex(x, y);
    }
  }
  if (!out.allFinite()) throw InvalidArgument("model: " + name + " has a non-finite entry");
  return out;
}

std::optional<double> read_optional(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  if (!doc[key].is_number()) throw InvalidArgument(std::string("model: ") + key + " must be a number");
  return doc[key].get<double>();
}

}  // namespace

nlohmann::json matrix_to_json(const CMatrix& m, bool imaginary) {
  nlohmann::json rows = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(imaginary ? m(r, c).imag() : m(r, c).real());
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_to_json(const CVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Index k = 0; k < v.size(); ++k) out.push_back({v[k].real(), v[k].imag()});
  return out;
}

ModelFile parse_model(const nlohmann::json& doc) {
  if (!doc.is_object()) throw InvalidArgument("model: top level must be an object");
  if (!doc.contains("dim") || !doc["dim"].is_number_integer() || doc["dim"].get<long long>() < 1) {
    throw InvalidArgument("model: \"dim\" must be a positive integer");
  }
  const Index dim = doc["dim"].get<Index>();
  if (!doc.contains("A_re")) throw InvalidArgument("model: \"A_re\" is required");
  ModelFile model;
  model.spec.generator =
      read_matrix(doc["A_re"], doc.contains("A_im") ? &doc["A_im"] : nullptr, dim, "A");
  if (doc.contains("metric_re")) {
    model.spec.metric = read_matrix(doc["metric_re"],
                                    doc.contains("metric_im") ? &doc["metric_im"] : nullptr, dim,
                                    "metric");
  } else if (doc.contains("metric_im")) {
    throw InvalidArgument("model: \"metric_im\" given without \"metric_re\"");
  }
  model.spec.validate();
  model.beta = read_optional(doc, "beta");
  model.theta = read_optional(doc, "theta");
  return model;
}

nlohmann::json model_to_json(const ModelFile& model) {
  nlohmann::json doc;
  doc["dim"] = model.spec.dim();
  doc["A_re"] = matrix_to_json(model.spec.generator, false);
  doc["A_im"] = matrix_to_json(model.spec.generator, true);
  if (model.spec.metric) {
    doc["metric_re"] = matrix_to_json(*model.spec.metric, false);
    doc["metric_im"] = matrix_to_json(*model.spec.metric, true);
  }
  if (model.beta) doc["beta"] = *model.beta;
  if (model.theta) doc["theta"] = *model.theta;
  return doc;
}

ModelFile load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("model: " + path.string() + " is not valid JSON (" + e.what() + ")");
  }
  return parse_model(doc);
}

void save_model(const ModelFile& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write model file " + path.string());
  out << model_to_json(model).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace kreindil
