#pragma once

#include <cstdint>
#include <string>

#include "sqz/json_io.hpp"

namespace sqz {

// Exit codes: 0 success, 1 usage/domain errors, 2 verification failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCheckFailed = 2;

struct RunConfig {
  std::string command;  // modulus | reduced-modulus | slit-map | squeeze |
                        // sweep | partition | verify | plot
  std::string domain_arg;
  std::string barriers_arg;
  std::string suite;    // verify: thm1 | rw | thm2 | thm3 | polarization | lemma2
  int resolution = 256;
  std::string output;   // empty = stdout
  std::string format = "json";  // json | csv | svg
  std::uint64_t seed = 0;
  std::string cache_dir;        // empty: use SQUEEZELAB_CACHE_DIR if set
  bool no_cache = false;

  double z_re = 0.0, z_im = 0.0;  // marked point
  double q = 0.1, a = 0.4;        // slit-map / rw parameters
  int truncation = 30;
  double alpha1 = 1.0, alpha2 = 1.0;
  int harmonics = 4;
  int samples = 24;   // sweep points
  int trials = 5;     // thm2 barrier sets / polarization batch scale
};

// Stable cache key: hash of command, canonicalized inputs, resolution, seed,
// and the library version.
std::string cache_key(const RunConfig& cfg, const Json& canonical_inputs);

int run(const RunConfig& cfg);

}  // namespace sqz
