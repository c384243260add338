#pragma once

#include "nng/params.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace nng {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  PhysicalParams params;
  size_t state_selector = 2;  // counts physical eigenvalues from the top
  double t_max = 4e12;        // s
  size_t n_steps = 2000;      // samples on [0, t_max], endpoints included
  double lambda = 1.0;        // applied through scale_params
  uint64_t seed = 12345;
  uint64_t mc_samples = 1'000'000;
  std::string output_dir = "out";
  bool literal_cross_term = false;

  /// Throws ConfigError naming the offending key.
  void validate() const;
  /// Physical parameters after applying lambda.
  PhysicalParams effective_params() const;
  double time_at(size_t i) const;
  /// `key = value` lines that load_config reads back to the same config.
  std::string echo() const;
};

/// Flat `key = value` lines, `#` comments. Omitted keys take the built-in
/// defaults. G is the stored effective value: with `g_scale`, G becomes
/// (G if given, else 6.67408e-11) x g_scale.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig load_config(const std::string& path);

}  // namespace nng
