#include <doctest.h>

#include "tnslice/markers.hpp"

using namespace tnslice;

namespace {

TrTcm
Marker (double cir, double pir, std::int64_t cbs, std::int64_t pbs)
{
  return TrTcm (TrTcmConfig{Mbps (cir), Mbps (pir), Bytes (cbs), Bytes (pbs)});
}

} // namespace

TEST_CASE ("trTCM colors")
{
  TrTcm m = Marker (10, 20, 3000, 5000);
  CHECK (m.Mark (Bytes (1500), Time (0)) == Color::Green);
  CHECK (m.Tc () == 1500);
  CHECK (m.Tp () == 3500);
  CHECK (m.Mark (Bytes (1500), Time (0)) == Color::Green);
  // Committed bucket empty, peak still has 2000.
  CHECK (m.Mark (Bytes (1500), Time (0)) == Color::Yellow);
  CHECK (m.Tc () == 0);
  CHECK (m.Tp () == 500);
  CHECK (m.Mark (Bytes (1500), Time (0)) == Color::Red);
  CHECK (m.Tp () == 500);
  // 1 ms at 20 Mb/s gives 2500 B of peak, 1250 B of committed.
  CHECK (m.Mark (Bytes (1500), Millis (1)) == Color::Yellow);
  CHECK (m.Tc () == 1250);
  CHECK (m.Tp () == 1500);
}

TEST_CASE ("absorbed traffic stops at zero")
{
  TrTcm m = Marker (10, 20, 3000, 5000);
  m.Absorb (Bytes (4000), Time (0));
  CHECK (m.Tc () == 0);
  CHECK (m.Tp () == 1000);
  m.Absorb (Bytes (4000), Time (0));
  CHECK (m.Tp () == 0);
}

TEST_CASE ("two-color limiter")
{
  TwoColor c (Mbps (8), Bytes (2000));
  CHECK (c.Conform (Bytes (1500), Time (0)));
  CHECK_FALSE (c.Conform (Bytes (1500), Time (0)));
  CHECK (c.Tokens () == 500);
  CHECK (c.Conform (Bytes (1500), Millis (1)));
}

TEST_CASE ("IETF: a conforming class passes green on its TN class")
{
  TrTcm slice = Marker (36, 36, 15380, 15380);
  TwoColor video (Mbps (32), Bytes (15380));
  int pass = 0;
  std::int64_t step = TxTime (Bytes (1538), Mbps (32)).v;
  for (int k = 0; k < 1000; ++k)
    {
      IetfDisposition d = IetfIngress (slice, &video, TnClass::B, Bytes (1538), Time (k * step));
      if (d.kind == IetfDisposition::Pass && d.tnClass == TnClass::B && d.color == Color::Green)
        {
          ++pass;
        }
    }
  CHECK (pass == 1000);
}

TEST_CASE ("IETF: a class above its limit is dropped")
{
  TrTcm slice = Marker (36, 36, 15380, 15380);
  TwoColor tele (Mbps (4), Bytes (15380));
  // One second at 100 Mb/s: about 4 Mb/s plus the initial burst conforms.
  std::int64_t step = TxTime (Bytes (1538), Mbps (100)).v;
  int n = static_cast<int> (kNsPerSec / step);
  int pass = 0;
  int drop = 0;
  for (int k = 0; k < n; ++k)
    {
      IetfDisposition d = IetfIngress (slice, &tele, TnClass::C, Bytes (1538), Time (k * step));
      pass += d.kind == IetfDisposition::Pass ? 1 : 0;
      drop += d.kind == IetfDisposition::Drop ? 1 : 0;
    }
  CHECK (pass + drop == n);
  double passedMbps = pass * 1538.0 * 8 / 1e6;
  CHECK (passedMbps == doctest::Approx (4 + 15380 * 8 / 1e6).epsilon (0.03));
}

TEST_CASE ("IETF: a slice without class limiters is marked by the slice trTCM")
{
  TrTcm slice = Marker (1.2, 100, 1538, 1538);
  std::int64_t step = TxTime (Bytes (1538), Mbps (50)).v;
  int green = 0;
  int deprio = 0;
  int drop = 0;
  for (int k = 0; k < 4000; ++k)
    {
      IetfDisposition d = IetfIngress (slice, nullptr, TnClass::A, Bytes (1538), Time (k * step));
      if (d.kind == IetfDisposition::Pass)
        {
          CHECK (d.tnClass == TnClass::A);
          ++green;
        }
      else if (d.kind == IetfDisposition::Deprioritized)
        {
          CHECK (d.tnClass == TnClass::D);
          CHECK (d.color == Color::Yellow);
          ++deprio;
        }
      else
        {
          ++drop;
        }
    }
  // 50 Mb/s is below the peak rate: nothing red, 1.2 of 50 green.
  CHECK (drop == 0);
  CHECK (static_cast<double> (green) / 4000 == doctest::Approx (1.2 / 50).epsilon (0.05));
  CHECK (green + deprio == 4000);
}

TEST_CASE ("Lin: in-profile flow goes high, excess goes low, beyond peak is dropped")
{
  TrTcm urllc = Marker (1.2, 1.2 * 1.5, 50000, 1538);
  std::int64_t slow = TxTime (Bytes (1538), Mbps (1.2)).v;
  int high = 0;
  for (int k = 1; k <= 100; ++k)
    {
      high += LinIngress (&urllc, Bytes (1538), Time (k * slow)) == LinDisposition::HighQueue ? 1 : 0;
    }
  CHECK (high == 100);

  TrTcm burst = Marker (1.2, 100, 1538, 1538);
  std::int64_t fast = TxTime (Bytes (1538), Mbps (50)).v;
  int low = 0;
  for (int k = 1; k <= 1000; ++k)
    {
      low += LinIngress (&burst, Bytes (1538), Time (k * fast)) == LinDisposition::LowQueue ? 1 : 0;
    }
  CHECK (low > 950);

  TrTcm tight = Marker (1, 1, 1538, 1538);
  CHECK (LinIngress (&tight, Bytes (1538), Time (0)) == LinDisposition::HighQueue);
  CHECK (LinIngress (&tight, Bytes (1538), Time (0)) == LinDisposition::Drop);
}

TEST_CASE ("Lin: best effort always goes to the low queue")
{
  for (int k = 0; k < 10; ++k)
    {
      CHECK (LinIngress (nullptr, Bytes (1538), Time (k)) == LinDisposition::LowQueue);
    }
}
