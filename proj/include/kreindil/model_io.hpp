#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "kreindil/operator_core.hpp"

namespace kreindil {

/// {"dim", "A_re", "A_im", "metric_re"?, "metric_im"?, "beta"?, "theta"?}
struct ModelFile {
  OperatorSpec spec;
  std::optional<double> beta;
  std::optional<double> theta;
};

/// Validates shapes, finiteness and metric positivity. Throws InvalidArgument.
ModelFile parse_model(const nlohmann::json& doc);
nlohmann::json model_to_json(const ModelFile& model);

/// Throws std::runtime_error on I/O failure, InvalidArgument on bad content.
ModelFile load_model(const std::filesystem::path& path);
void save_model(const ModelFile& model, const std::filesystem::path& path);

nlohmann::json matrix_to_json(const CMatrix& m, bool imaginary);
nlohmann::json vector_to_json(const CVector& v);

}  // namespace kreindil
