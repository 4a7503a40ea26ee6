#ifndef TNSLICE_TYPES_HPP
#define TNSLICE_TYPES_HPP

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace tnslice {

template <class Tag>
struct Quantity
{
  std::int64_t v = 0;

  constexpr Quantity () = default;
  constexpr explicit Quantity (std::int64_t value) : v (value) {}

  constexpr auto operator<=> (const Quantity &) const = default;

  constexpr Quantity operator+ (Quantity o) const { return Quantity (v + o.v); }
  constexpr Quantity operator- (Quantity o) const { return Quantity (v - o.v); }
  constexpr Quantity operator* (std::int64_t k) const { return Quantity (v * k); }
  constexpr Quantity &operator+= (Quantity o) { v += o.v; return *this; }
  constexpr Quantity &operator-= (Quantity o) { v -= o.v; return *this; }
};

struct TimeTag {};
struct RateTag {};
struct BytesTag {};

// Nanoseconds since simulation start.
using Time = Quantity<TimeTag>;
// Bits per second.
using Rate = Quantity<RateTag>;
using Bytes = Quantity<BytesTag>;

constexpr std::int64_t kNsPerSec = 1000000000;

constexpr Time Nanos (std::int64_t ns) { return Time (ns); }
constexpr Time Micros (std::int64_t us) { return Time (us * 1000); }
constexpr Time Millis (std::int64_t ms) { return Time (ms * 1000000); }
inline Time Seconds (double s) { return Time (std::llround (s * 1e9)); }
inline Rate Mbps (double m) { return Rate (std::llround (m * 1e6)); }

inline double ToSeconds (Time t) { return t.v / 1e9; }
inline double ToMillis (Time t) { return t.v / 1e6; }
inline double ToMbps (Rate r) { return r.v / 1e6; }

// Serialization time of `size` at `rate`, rounded up to the next nanosecond.
Time TxTime (Bytes size, Rate rate);

// Floor of k * size * 8 / rate in ns, used to place CBR emissions on an exact grid.
Time GridOffset (std::int64_t k, Bytes size, Rate rate);

enum class TnClass : std::uint8_t { A, B, C, D };
enum class Color : std::uint8_t { Green, Yellow, Red };

char ToChar (TnClass c);
TnClass TnClassFromString (const std::string &s);
const char *ToString (Color c);

struct FlowId
{
  std::uint32_t v = 0;
  auto operator<=> (const FlowId &) const = default;
};

using VlanId = std::uint16_t;
using Dscp = std::uint8_t;

enum class ErrorCode
{
  UnknownVlan,
  UnknownDscpNoDefault,
  UnknownPair,
  UnknownLeaf,
  CirSumExceeded,
  MissingGlobal,
  ParseError,
  ValidationError,
  IoError,
  RuntimeError,
};

const char *ToString (ErrorCode c);

class Error : public std::runtime_error
{
public:
  Error (ErrorCode code, const std::string &what)
    : std::runtime_error (what), m_code (code) {}

  ErrorCode Code () const { return m_code; }

private:
  ErrorCode m_code;
};

} // namespace tnslice

#endif
