#ifndef RDL_REPORT_HPP_
#define RDL_REPORT_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "rdl/audit.hpp"
#include "rdl/dual.hpp"
#include "rdl/experiments.hpp"
#include "rdl/measure.hpp"

namespace rdl {

inline constexpr const char* kVersion = "0.1.0";

// Hex SHA-256.
std::string sha256_hex(const std::string& bytes);
std::string file_digest(const std::string& path);
// Digest of a canonical text rendering of the support, masses and
// hypothesis values (used for built-in fixtures).
std::string problem_digest(const Problem& problem);

struct ReportMeta {
  std::optional<std::uint64_t> seed;
  std::string loss;
  std::string dataset_digest;
  std::map<std::string, std::string> config;
  bool timestamp = true;
};

// Non-finite values become the strings "inf", "-inf" and "nan".
nlohmann::json number(double v);
nlohmann::json to_json(const AuditRecord& a);
nlohmann::json to_json(const SweepRow& r, const std::string& parameter_name);
nlohmann::json to_json(const DualSolution& d);
nlohmann::json meta_json(const ReportMeta& meta);
// {meta, rows, runs, audits}.
nlohmann::json report_json(const SweepReport& report, const ReportMeta& meta);

// One header line, then one line per row. Extra columns are the union of the
// rows' extra keys, sorted.
void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, const std::string& parameter_name);
void write_audit_csv(std::ostream& os, const std::vector<AuditRecord>& audits);

// %.17g, with inf/-inf/nan spelled out.
std::string format_double(double v);

}  // namespace rdl

#endif  // RDL_REPORT_HPP_
