#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace dualitylab {

struct TaskRecord {
  std::string kind;
  std::string name;
  bool pass = false;
  nlohmann::json details;  // parameters as exact fraction strings, indices, residuals
};

struct Report {
  std::string tool_version;
  std::string timestamp;
  std::vector<TaskRecord> records;

  int passed() const;
  int failed() const;

  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& j);

  void write(const std::string& path) const;
  static Report read(const std::string& path);
};

std::string iso_timestamp_now();

}  // namespace dualitylab
