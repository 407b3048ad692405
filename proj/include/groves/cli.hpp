#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "groves/core.hpp"

namespace groves::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFixtureMismatch = 3;

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Mechanism mini-grammar:
///   vcg | linear:a0,a1,...,a_{n-1} | oel:k=K | table:@file.json
///   | bcgc:<inner> | bcgc-grid:<inner>
/// `bcgc-grid` takes the surplus max over `grid`, which must then be given.
Mechanism parse_mechanism(const std::string& spec, const Setting& setting,
                          const std::optional<GridSpec>& grid = std::nullopt);

/// Runs one invocation; argv[0] is the program name. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace groves::cli
