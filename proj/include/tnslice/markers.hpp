#ifndef TNSLICE_MARKERS_HPP
#define TNSLICE_MARKERS_HPP

#include "tnslice/bucket.hpp"
#include "tnslice/policer_htb.hpp"

namespace tnslice {

struct TrTcmConfig
{
  Rate cir;
  Rate pir;
  Bytes cbs = kDefaultFrame;
  Bytes pbs = kDefaultFrame;
};

// Color-blind two-rate three-color marker.
class TrTcm
{
public:
  TrTcm () = default;
  explicit TrTcm (const TrTcmConfig &cfg);

  Color Mark (Bytes size, Time now);
  // Charges traffic already committed elsewhere; balances stop at zero.
  void Absorb (Bytes size, Time now);

  std::int64_t Tc () const { return m_c.Tokens (); }
  std::int64_t Tp () const { return m_p.Tokens (); }
  Bucket &Committed () { return m_c; }
  Bucket &Peak () { return m_p; }

private:
  Bucket m_c;
  Bucket m_p;
};

// Single-rate two-color limiter: conforming traffic consumes, the rest is out.
class TwoColor
{
public:
  TwoColor () = default;
  TwoColor (Rate cir, Bytes cbs);

  bool Conform (Bytes size, Time now);
  std::int64_t Tokens () const { return m_b.Tokens (); }

private:
  Bucket m_b;
};

struct IetfDisposition
{
  enum Kind { Pass, Deprioritized, Drop };
  Kind kind = Drop;
  TnClass tnClass = TnClass::D;
  Color color = Color::Red;
};

// Class stage (absent for best effort) then slice stage. Traffic admitted by
// a class limiter is committed: it passes green and draws down the slice
// buckets so that best effort only gets what the classes leave over.
IetfDisposition IetfIngress (TrTcm &slice, TwoColor *cls, TnClass classTn, Bytes size, Time now);

enum class LinDisposition { HighQueue, LowQueue, Drop };

// `flow` is null for best-effort traffic.
LinDisposition LinIngress (TrTcm *flow, Bytes size, Time now);

} // namespace tnslice

#endif
