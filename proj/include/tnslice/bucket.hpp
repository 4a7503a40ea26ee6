#ifndef TNSLICE_BUCKET_HPP
#define TNSLICE_BUCKET_HPP

#include "tnslice/types.hpp"

#include <limits>

namespace tnslice {

constexpr Time kNever = Time (std::numeric_limits<std::int64_t>::max ());

// Lazily refilled byte bucket. Sub-byte accrual is kept in m_frac (units of
// bit-nanoseconds / 8e9) so that long-run fill rates are exact.
class Bucket
{
public:
  Bucket () = default;
  Bucket (Bytes capacity, Rate fillRate, Time now = Time (0));

  void Refill (Time now);
  void Consume (Bytes b) { m_tokens -= b.v; }
  bool Holds (Bytes b) const { return m_tokens >= b.v; }

  // Earliest instant at which Tokens() >= target if nothing is consumed.
  Time TimeUntil (std::int64_t target) const;

  std::int64_t Tokens () const { return m_tokens; }
  Bytes Capacity () const { return Bytes (m_capacity); }
  Rate FillRate () const { return m_rate; }
  Time LastUpdate () const { return m_last; }

  void SetTokens (std::int64_t tokens);

private:
  std::int64_t m_capacity = 0;
  std::int64_t m_tokens = 0;
  Rate m_rate;
  Time m_last;
  std::int64_t m_frac = 0;
};

} // namespace tnslice

#endif
