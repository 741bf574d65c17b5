#pragma once
// Check catalog and scenario runner.  Every numbered verification of the
// toolkit is registered here under a stable id (module.topic.ref) together
// with the reference tag it certifies, a pinned tolerance, and a
// deterministic seeded runner.  The CLI binary and the acceptance suite both
// drive this catalog; reports carry no timestamps so repeated runs with the
// same scenario and seed are byte-identical.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace qfiber {
namespace checks {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr uint64_t kDefaultSeed = 20260813ull;

// Outcome of one check run.  The final verdict is computed centrally as
// aux_ok && measured <= tolerance, so scenario-level tolerance overrides can
// tighten or loosen the numeric gate but never bypass the structural and
// order conditions folded into aux_ok.
struct CheckResult {
  double measured = 0.0;
  double tolerance = 0.0;
  std::optional<double> order;  // refinement exponent when the check fits one
  bool aux_ok = true;           // conditions beyond the numeric gate
  nlohmann::json inputs = nlohmann::json::object();  // effective parameters
};

struct CheckDef {
  std::string id;       // module.topic.ref; stable across releases
  std::string ref;      // catalog reference tag certified by this check
  std::string summary;  // one human-readable line
  std::function<CheckResult(uint64_t seed, const nlohmann::json& params)> run;
};

// Sorted by id, ids unique, at least 30 entries.
const std::vector<CheckDef>& catalog();
const CheckDef* find_check(const std::string& id);

struct RunOptions {
  uint64_t seed = kDefaultSeed;
  bool parallel = false;
  std::vector<std::string> ids;  // empty = whole catalog
  std::map<std::string, double> tolerance_override;
  std::map<std::string, nlohmann::json> params;  // per-check parameter objects
};

struct CheckRecord {
  std::string id;
  std::string ref;
  std::string inputs_digest;  // 16-hex digest of the effective inputs JSON
  double measured = 0.0;
  double tolerance = 0.0;
  std::optional<double> order;
  bool pass = false;
  std::string error;  // nonempty when the runner threw; pass stays false
};

struct SuiteReport {
  std::string scenario = "ad-hoc";
  uint64_t seed = kDefaultSeed;
  std::vector<CheckRecord> records;  // sorted by id
  int passed() const;
  int failed() const;
  bool pass() const;
};

// Runs options.ids (whole catalog when empty).  Each check draws its own
// stream derive_seed(seed, id), so sequential and parallel execution merge
// to identical reports, ordered by id.
SuiteReport run_suite(const RunOptions& options, const std::string& scenario_name);

nlohmann::json report_json(const SuiteReport& report);
std::string report_markdown(const SuiteReport& report);

// FNV-1a 64-bit digest as fixed-width lowercase hex.
std::string digest_hex(const std::string& bytes);

// Strict scenario loader: unknown keys, unknown check ids, and wrong value
// types throw std::invalid_argument (a configuration error, exit code 2).
// Recognized keys: name (required), seed, modules, checks, tolerances,
// params, output.  *name_out receives the scenario name, *output_out the
// optional output directory ("" when absent).
RunOptions parse_scenario(const nlohmann::json& scenario, std::string* name_out,
                          std::string* output_out);

}  // namespace checks
}  // namespace qfiber
