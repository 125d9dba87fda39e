#pragma once

#include <iosfwd>

namespace revpred::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kInternalError = 1;
inline constexpr int kConfigError = 2;  // bad flags, config file or predictor name
inline constexpr int kDataError = 3;    // unreadable or unusable data

/// Entry point of the `revpred` tool: stats, prepare, evaluate, predict, synth.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace revpred::cli
