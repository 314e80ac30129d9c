#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace superres::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line. Normal output goes to `out`, diagnostics to `err`.
/// Returns 0 on success, 1 on a domain error (the message carries the error
/// name), 2 on a usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Edit distance used for "did you mean" hints.
std::size_t edit_distance(std::string_view a, std::string_view b);

/// Closest candidate to `word`, or empty when nothing is close enough.
std::string closest_match(std::string_view word, const std::vector<std::string>& candidates);

}  // namespace superres::cli
