#include "rdl/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "rdl/error.hpp"

namespace rdl {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[md[i] >> 4]);
    out.push_back(hex[md[i] & 15]);
  }
  return out;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return sha256_hex(ss.str());
}

std::string problem_digest(const Problem& problem) {
  std::ostringstream os;
  const Matrix& h = problem.hypotheses().matrix();
  for (std::size_t i = 0; i < problem.size(); ++i) {
    const LabeledPoint& p = problem.measure().point(i);
    os << p.y << ' ' << format_double(problem.measure().mass(i));
    for (Eigen::Index j = 0; j < p.x.size(); ++j) os << ' ' << format_double(p.x[j]);
    os << " |";
    for (Eigen::Index j = 0; j < h.cols(); ++j) os << ' ' << format_double(h(static_cast<Eigen::Index>(i), j));
    os << '\n';
  }
  return sha256_hex(os.str());
}

nlohmann::json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

nlohmann::json to_json(const AuditRecord& a) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [k, v] : a.parameters) params[k] = number(v);
  return {{"name", a.name},   {"lhs", number(a.lhs)},   {"rhs", number(a.rhs)},   {"holds", a.holds},
          {"slack", number(a.slack)}, {"applicable", a.applicable}, {"parameters", params}, {"note", a.note}};
}

nlohmann::json to_json(const SweepRow& r, const std::string& parameter_name) {
  nlohmann::json j = {{parameter_name, number(r.parameter)},
                      {"excess_risk", number(r.excess_risk)},
                      {"l1_distance", number(r.l1_distance)},
                      {"zero_one", number(r.zero_one)},
                      {"l1_norm", number(r.l1_norm)},
                      {"l2_norm", number(r.l2_norm)}};
  for (const auto& [k, v] : r.extra) j[k] = number(v);
  return j;
}

nlohmann::json to_json(const DualSolution& d) {
  nlohmann::json q = nlohmann::json::array();
  for (double v : d.q) q.push_back(number(v));
  nlohmann::json j = {{"q", q},
                      {"objective", number(d.objective)},
                      {"feas_residual", number(d.feas_residual)},
                      {"primal_best", number(d.primal_best)},
                      {"gap", number(d.gap)},
                      {"provenance", std::string(to_string(d.provenance))}};
  if (d.primal_termination) j["primal_termination"] = std::string(to_string(*d.primal_termination));
  return j;
}

nlohmann::json meta_json(const ReportMeta& meta) {
  nlohmann::json j = {{"loss", meta.loss}, {"dataset_digest", meta.dataset_digest}, {"version", kVersion}};
  j["seed"] = meta.seed ? nlohmann::json(*meta.seed) : nlohmann::json(nullptr);
  j["config"] = meta.config;
  if (meta.timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["timestamp"] = buf;
  }
  return j;
}

nlohmann::json report_json(const SweepReport& report, const ReportMeta& meta) {
  nlohmann::json j;
  j["meta"] = meta_json(meta);
  j["meta"]["kind"] = report.kind;
  j["meta"]["report_config"] = report.config;
  j["meta"]["seeds"] = report.seeds;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : report.rows) j["rows"].push_back(to_json(r, report.parameter_name));
  j["runs"] = nlohmann::json::array();
  for (const auto& r : report.runs) j["runs"].push_back(to_json(r, report.parameter_name));
  j["audits"] = nlohmann::json::array();
  for (const auto& a : report.audits) j["audits"].push_back(to_json(a));
  return j;
}

void write_csv(std::ostream& os, const std::vector<SweepRow>& rows, const std::string& parameter_name) {
  std::set<std::string> extra;
  for (const auto& r : rows) {
    for (const auto& [k, v] : r.extra) extra.insert(k);
  }
  os << parameter_name << ",excess_risk,l1_distance,zero_one,l1_norm,l2_norm";
  for (const auto& k : extra) os << ',' << k;
  os << '\n';
  for (const auto& r : rows) {
    os << format_double(r.parameter) << ',' << format_double(r.excess_risk) << ',' << format_double(r.l1_distance)
       << ',' << format_double(r.zero_one) << ',' << format_double(r.l1_norm) << ',' << format_double(r.l2_norm);
    for (const auto& k : extra) {
      os << ',';
      if (auto it = r.extra.find(k); it != r.extra.end()) os << format_double(it->second);
    }
    os << '\n';
  }
}

void write_audit_csv(std::ostream& os, const std::vector<AuditRecord>& audits) {
  os << "name,lhs,rhs,slack,holds,applicable,note\n";
  for (const auto& a : audits) {
    os << a.name << ',' << format_double(a.lhs) << ',' << format_double(a.rhs) << ',' << format_double(a.slack) << ','
       << (a.holds ? 1 : 0) << ',' << (a.applicable ? 1 : 0) << ",\"" << a.note << "\"\n";
  }
}

}  // namespace rdl
