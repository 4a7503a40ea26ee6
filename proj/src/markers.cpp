#include "tnslice/markers.hpp"

#include <algorithm>

namespace tnslice {

TrTcm::TrTcm (const TrTcmConfig &cfg)
  : m_c (cfg.cbs, cfg.cir), m_p (cfg.pbs, cfg.pir)
{
}

Color
TrTcm::Mark (Bytes size, Time now)
{
  m_c.Refill (now);
  m_p.Refill (now);
  if (!m_p.Holds (size))
    {
      return Color::Red;
    }
  if (m_c.Holds (size))
    {
      m_c.Consume (size);
      m_p.Consume (size);
      return Color::Green;
    }
  m_p.Consume (size);
  return Color::Yellow;
}

void
TrTcm::Absorb (Bytes size, Time now)
{
  m_c.Refill (now);
  m_p.Refill (now);
  m_c.SetTokens (std::max<std::int64_t> (0, m_c.Tokens () - size.v));
  m_p.SetTokens (std::max<std::int64_t> (0, m_p.Tokens () - size.v));
}

TwoColor::TwoColor (Rate cir, Bytes cbs) : m_b (cbs, cir)
{
}

bool
TwoColor::Conform (Bytes size, Time now)
{
  m_b.Refill (now);
  if (!m_b.Holds (size))
    {
      return false;
    }
  m_b.Consume (size);
  return true;
}

IetfDisposition
IetfIngress (TrTcm &slice, TwoColor *cls, TnClass classTn, Bytes size, Time now)
{
  if (cls != nullptr)
    {
      if (!cls->Conform (size, now))
        {
          return {IetfDisposition::Drop, classTn, Color::Red};
        }
      slice.Absorb (size, now);
      return {IetfDisposition::Pass, classTn, Color::Green};
    }
  switch (slice.Mark (size, now))
    {
    case Color::Green: return {IetfDisposition::Pass, classTn, Color::Green};
    case Color::Yellow: return {IetfDisposition::Deprioritized, TnClass::D, Color::Yellow};
    case Color::Red: break;
    }
  return {IetfDisposition::Drop, classTn, Color::Red};
}

LinDisposition
LinIngress (TrTcm *flow, Bytes size, Time now)
{
  if (flow == nullptr)
    {
      return LinDisposition::LowQueue;
    }
  switch (flow->Mark (size, now))
    {
    case Color::Green: return LinDisposition::HighQueue;
    case Color::Yellow: return LinDisposition::LowQueue;
    case Color::Red: break;
    }
  return LinDisposition::Drop;
}

} // namespace tnslice
