#ifndef RDL_CLI_HPP_
#define RDL_CLI_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace rdl::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitSolver = 3;

struct RunConfig {
  std::string subcommand;
  std::string experiment;  // converge | generalize | regpath | zo | audit
  std::string data;
  std::string format;  // libsvm | csv; inferred from the extension when empty
  std::string label_col = "label";
  std::string fixture;
  std::string loss = "logistic";
  std::optional<std::string> step_rule;
  std::optional<std::size_t> max_iters;
  double lambda = 0.0;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string csv;
  bool normalize = false;
  bool strict = false;
  std::string epsilon;
  std::size_t iters = 100;
  std::vector<std::size_t> n_grid = {100, 1000, 10000};
  std::vector<std::string> p_grid = {"0.5", "1", "2", "inf"};
  std::size_t n_seeds = 20;
  std::size_t splits = 5;
  std::vector<double> weights;
  bool timestamp = true;

  // Every field as text, for report metadata.
  std::map<std::string, std::string> to_map() const;
};

// Exit codes: 0 success, 1 usage error, 2 data error, 3 solver
// non-convergence (always for ConvergenceError, for iteration caps under
// --strict).
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rdl::cli

#endif  // RDL_CLI_HPP_
