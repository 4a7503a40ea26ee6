#include "tnslice/bucket.hpp"

#include <algorithm>

namespace tnslice {

namespace {
constexpr std::int64_t kScale = 8 * kNsPerSec;
}

Bucket::Bucket (Bytes capacity, Rate fillRate, Time now)
  : m_capacity (capacity.v), m_tokens (capacity.v), m_rate (fillRate), m_last (now)
{
}

void
Bucket::Refill (Time now)
{
  if (now <= m_last)
    {
      return;
    }
  if (m_tokens >= m_capacity)
    {
      m_last = now;
      m_frac = 0;
      return;
    }
  __int128 acc = static_cast<__int128> (m_rate.v) * (now.v - m_last.v) + m_frac;
  __int128 whole = acc / kScale;
  m_last = now;
  if (whole >= m_capacity - m_tokens)
    {
      m_tokens = m_capacity;
      m_frac = 0;
      return;
    }
  m_tokens += static_cast<std::int64_t> (whole);
  m_frac = static_cast<std::int64_t> (acc % kScale);
}

Time
Bucket::TimeUntil (std::int64_t target) const
{
  if (m_tokens >= target)
    {
      return m_last;
    }
  if (target > m_capacity || m_rate.v == 0)
    {
      return kNever;
    }
  __int128 need = static_cast<__int128> (target - m_tokens) * kScale - m_frac;
  __int128 dt = (need + m_rate.v - 1) / m_rate.v;
  __int128 t = m_last.v + dt;
  if (t >= kNever.v)
    {
      return kNever;
    }
  return Time (static_cast<std::int64_t> (t));
}

void
Bucket::SetTokens (std::int64_t tokens)
{
  m_tokens = std::min (tokens, m_capacity);
  m_frac = 0;
}

} // namespace tnslice
