#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "bipro/error.hpp"

namespace bipro {

inline constexpr std::size_t kDefaultMaxOrder = 10000;
inline constexpr std::size_t kDefaultMaxSubgroups = 100000;
inline constexpr std::uint64_t kDefaultSeed = 0xB1F0;
inline constexpr int kDefaultRetries = 16;

struct Tolerances {
  double eigen = 1e-8;        // eigenvalue clustering, positivity, orthogonality
  double rounding = 1e-6;     // rounding to integers (dimensions, multiplicities)
  double projection = 1e-7;   // max-abs coefficient equality of 2-box elements
};

enum class OutputFormat { text, json, dot };

struct Config {
  Tolerances tol;
  std::uint64_t seed = kDefaultSeed;
  std::size_t max_order = kDefaultMaxOrder;
  std::size_t max_subgroups = kDefaultMaxSubgroups;
  OutputFormat format = OutputFormat::text;
  unsigned jobs = 1;
  std::size_t samples = 32;  // randomized instances per group (per seed)
  bool timing = false;       // record wall-clock ms in reports

  void validate() const {
    if (!(tol.eigen > 0) || !(tol.rounding > 0) || !(tol.projection > 0))
      throw DomainError("tolerances must be positive");
    if (max_order == 0 || max_subgroups == 0) throw DomainError("caps must be positive");
    if (jobs == 0) throw DomainError("parallelism degree must be positive");
  }
};

}  // namespace bipro
