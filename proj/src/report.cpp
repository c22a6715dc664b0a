#include "dualitylab/report.hpp"

#include <chrono>
#include <fstream>
#include <stdexcept>

#include "dualitylab/version.hpp"

namespace dualitylab {

int Report::passed() const {
  int n = 0;
  for (const auto& r : records) n += r.pass ? 1 : 0;
  return n;
}

int Report::failed() const { return static_cast<int>(records.size()) - passed(); }

nlohmann::json Report::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records) {
    nlohmann::json jr{{"kind", r.kind}, {"name", r.name}, {"pass", r.pass}};
    if (!r.details.is_null()) jr["details"] = r.details;
    recs.push_back(std::move(jr));
  }
  return nlohmann::json{{"tool_version", tool_version},
                        {"timestamp", timestamp},
                        {"records", std::move(recs)},
                        {"summary", {{"passed", passed()}, {"failed", failed()}}}};
}

Report Report::from_json(const nlohmann::json& j) {
  Report r;
  r.tool_version = j.at("tool_version").get<std::string>();
  r.timestamp = j.value("timestamp", std::string());
  for (const auto& jr : j.at("records")) {
    TaskRecord rec;
    rec.kind = jr.at("kind").get<std::string>();
    rec.name = jr.at("name").get<std::string>();
    rec.pass = jr.at("pass").get<bool>();
    if (jr.contains("details")) rec.details = jr.at("details");
    r.records.push_back(std::move(rec));
  }
  const auto& s = j.at("summary");
  if (s.at("passed").get<int>() != r.passed() || s.at("failed").get<int>() != r.failed())
    throw std::runtime_error("report: summary counts disagree with records");
  return r;
}

void Report::write(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write " + path);
  out << to_json().dump(2) << "\n";
}

Report Report::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("report: cannot read " + path);
  nlohmann::json j;
  in >> j;
  return from_json(j);
}

std::string iso_timestamp_now() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&tt));
  return buf;
}

}  // namespace dualitylab
