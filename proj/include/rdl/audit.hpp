#ifndef RDL_AUDIT_HPP_
#define RDL_AUDIT_HPP_

#include <map>
#include <string>

namespace rdl {

// One checked inequality lhs <= rhs. Records that are not applicable (a
// hypothesis of the inequality fails) count as holding.
struct AuditRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  double slack = 0.0;  // rhs - lhs
  bool applicable = true;
  std::map<std::string, double> parameters;
  std::string note;
};

inline constexpr double kAuditTolerance = 1e-9;

inline AuditRecord make_audit(std::string name, double lhs, double rhs,
                              std::map<std::string, double> parameters = {}) {
  AuditRecord r;
  r.name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.holds = lhs <= rhs + kAuditTolerance;
  r.parameters = std::move(parameters);
  return r;
}

inline AuditRecord not_applicable(std::string name, std::string why,
                                  std::map<std::string, double> parameters = {}) {
  AuditRecord r;
  r.name = std::move(name);
  r.applicable = false;
  r.holds = true;
  r.note = std::move(why);
  r.parameters = std::move(parameters);
  return r;
}

}  // namespace rdl

#endif  // RDL_AUDIT_HPP_
