#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

namespace algsim {

// Virtual time in integer nanoseconds. The public unit of the simulator is
// the millisecond; keeping the internal clock integral makes every latency
// and departure time exactly reproducible (no floating-point drift in the
// event loop).
using VirtualTime = std::int64_t;

constexpr VirtualTime kNsPerMs = 1'000'000;
constexpr VirtualTime kNsPerSec = 1'000'000'000;
constexpr VirtualTime kNsPerMin = 60'000'000'000;

inline VirtualTime vt_from_ms(double ms) {
  return static_cast<VirtualTime>(std::llround(ms * static_cast<double>(kNsPerMs)));
}

inline double vt_to_ms(VirtualTime t) {
  return static_cast<double>(t) / static_cast<double>(kNsPerMs);
}

// Fixed six-decimal millisecond rendering, exact for nanosecond-granular
// values. Used by the trace writer so that identical runs emit identical
// bytes.
inline std::string vt_ms_string(VirtualTime t) {
  bool neg = t < 0;
  if (neg) t = -t;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%s%lld.%06lld", neg ? "-" : "",
                static_cast<long long>(t / kNsPerMs),
                static_cast<long long>(t % kNsPerMs));
  return buf;
}

}  // namespace algsim
