#pragma once

// YAML instance files. See docs/instance_schema.md for the layout.

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "screenopt/errors.hpp"
#include "screenopt/model.hpp"

namespace screenopt::io {

/// Malformed input file. key() is the dotted path of the offending entry.
class SchemaError : public Error {
 public:
  SchemaError(std::string key, const std::string& message)
      : Error(key + ": " + message), key_(std::move(key)) {}
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

ProblemInstance parse_instance(const std::string& yaml_text);
ProblemInstance load_instance(const std::filesystem::path& path);

/// Normalized description of an instance (family, parameters, grid sizes).
nlohmann::ordered_json instance_summary(const ProblemInstance& instance);

}  // namespace screenopt::io
