#ifndef TOKENLAB_VERSION_HPP
#define TOKENLAB_VERSION_HPP

namespace tokenlab {

inline constexpr const char* kToolName = "token_lab";
inline constexpr const char* kToolVersion = "0.1.0";

// Default experiment seed; fixed, never wall-clock derived.
inline constexpr unsigned long long kDefaultSeed = 0x5EED70CEull;

}  // namespace tokenlab

#endif  // TOKENLAB_VERSION_HPP
