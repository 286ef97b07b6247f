#pragma once

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "nfc/interval.hpp"
#include "nfc/params.hpp"

namespace nfc::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitBoundFailure = 1;
inline constexpr int kExitHypothesis = 2;
inline constexpr int kExitUsage = 3;

inline constexpr const char* kToolVersion = "nfc 0.1.0";

struct Config {
  params::ConstructionParams params = params::default_params();
  std::uint64_t seed = 1;
  std::string output = "csv";  // csv | json
  std::optional<Interval> window;
  std::vector<std::string> points;  // point specs: idx:V | mid:STAGE:LEVEL | random
  int level = -1;                   // -n/--level for orbit & crossings
  // report-specific knobs, all optional in the config document
  long long ell = -1, ellbar = -1, instances = -1, c = -1, offset_e = 5;
  std::vector<long long> r_list;
  std::vector<long long> sizes;
};

// Loads the JSON config document (empty path = defaults only); flag
// overrides are applied by the caller. Throws std::runtime_error with
// location info on parse errors.
Config load_config(const std::string& path);

// Point spec parsing against a built system; "random" uses rng.
std::string points_help();

int cmd_validate(const Config& cfg, std::ostream& out);
int cmd_heights(const Config& cfg, std::ostream& out);
int cmd_decompose(const Config& cfg, const std::string& idx_text,
                  std::ostream& out);
int cmd_orbit(const Config& cfg, std::ostream& out);
int cmd_crossings(const Config& cfg, std::ostream& out);
int cmd_report(const Config& cfg, const std::string& which, std::ostream& out);

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

}  // namespace nfc::cli
