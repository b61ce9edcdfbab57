#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace pxg {

enum class Errc {
  length_mismatch,
  level_out_of_range,
  disconnected,
  resource_cap,
  shape_mismatch,
  depth_exceeded,
  invalid_param,
  rejection_budget_exceeded,
  profile_exhausted,
  trials_too_small,
  io_error,
  parse_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::level_out_of_range: return "LevelOutOfRange";
    case Errc::disconnected: return "Disconnected";
    case Errc::resource_cap: return "ResourceCap";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::depth_exceeded: return "DepthExceeded";
    case Errc::invalid_param: return "InvalidParam";
    case Errc::rejection_budget_exceeded: return "RejectionBudgetExceeded";
    case Errc::profile_exhausted: return "ProfileExhausted";
    case Errc::trials_too_small: return "TrialsTooSmall";
    case Errc::io_error: return "IoError";
    case Errc::parse_error: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }
  const char* name() const { return errc_name(code_); }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& msg) { throw Error(code, msg); }

inline void require(bool cond, Errc code, const std::string& msg) {
  if (!cond) fail(code, msg);
}

// Resource limits for enumeration sizes, lattice widths and matrix dimensions.
// The CLI lets PIXELGRAPH_CAP override max_items.
struct Caps {
  std::uint64_t max_items = std::uint64_t(1) << 20;

  // Largest exponent e with 2^e <= max_items.
  int max_exponent() const {
    int e = 0;
    while ((std::uint64_t(1) << (e + 1)) <= max_items && e < 62) ++e;
    return e;
  }
};

}  // namespace pxg
