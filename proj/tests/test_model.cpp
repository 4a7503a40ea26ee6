#include <doctest.h>

#include "tnslice/model.hpp"

using namespace tnslice;

namespace {

Packet
Tagged (const QosMap &m, const std::string &slice, Dscp dscp)
{
  Packet p;
  p.vlan = m.VlanOf (slice);
  p.dscp = dscp;
  p.size = Bytes (1538);
  return p;
}

} // namespace

TEST_CASE ("classification by vlan and dscp")
{
  QosMap m = StandardQosMap ();
  CHECK (m.Classify (Tagged (m, "ToD", 38)) == ClassKey{"ToD", "Video"});
  CHECK (m.Classify (Tagged (m, "URLLC", 46)) == ClassKey{"URLLC", "URLLC"});
  CHECK (m.Classify (Tagged (m, "eMBB", 0)) == ClassKey{"eMBB", "BE"});
  // BE is the slice default, so an unlisted code point lands there too.
  CHECK (m.Classify (Tagged (m, "eMBB", 17)) == ClassKey{"eMBB", "BE"});
}

TEST_CASE ("classification does not touch the packet and is repeatable")
{
  QosMap m = StandardQosMap ();
  Packet p = Tagged (m, "ToD", 28);
  Packet before = p;
  ClassKey a = m.Classify (p);
  ClassKey b = m.Classify (p);
  CHECK (a == b);
  CHECK (a == ClassKey{"ToD", "Telemetry"});
  CHECK (p.dscp == before.dscp);
  CHECK (p.vlan == before.vlan);
  CHECK_FALSE (p.tnClass.has_value ());
}

TEST_CASE ("classification errors")
{
  QosMap m = StandardQosMap ();
  try
    {
      m.Classify (4000, 0);
      FAIL ("expected UnknownVlan");
    }
  catch (const Error &e)
    {
      CHECK (e.Code () == ErrorCode::UnknownVlan);
    }
  // ToD has no default class.
  try
    {
      m.Classify (m.VlanOf ("ToD"), 5);
      FAIL ("expected UnknownDscpNoDefault");
    }
  catch (const Error &e)
    {
      CHECK (e.Code () == ErrorCode::UnknownDscpNoDefault);
    }
}

TEST_CASE ("mapping to TN classes")
{
  QosMap m = StandardQosMap ();
  CHECK (m.MapToTnClass ({"ToD", "Telemetry"}) == TnClass::C);
  CHECK (m.MapToTnClass ({"eMBB", "VC"}) == TnClass::C);
  CHECK (m.MapToTnClass ({"URLLC", "URLLC"}) == TnClass::A);
  CHECK (m.MapToTnClass ({"ToD", "Video"}) == TnClass::B);
  CHECK (m.MapToTnClass ({"eMBB", "BE"}) == TnClass::D);
  CHECK_THROWS_AS (m.MapToTnClass ({"ToD", "BE"}), Error);
}

TEST_CASE ("every reachable class has exactly one TN class")
{
  QosMap m = StandardQosMap ();
  for (const auto &e : m.Entries ())
    {
      CHECK (m.MapToTnClass ({e.slice, e.cls}) == e.tnClass);
    }
}

TEST_CASE ("table validation")
{
  std::vector<SliceVlan> slices = {{"a", 1}, {"b", 2}};
  CHECK_NOTHROW (QosMap (slices, {{"a", "x", 1, 10, TnClass::B, false}, {"b", "y", 2, 10, TnClass::C, true}})
                   .Validate ());
  CHECK_THROWS_AS (QosMap (slices, {{"a", "x", 1, 10, TnClass::B, false}, {"a", "z", 2, 10, TnClass::C, false}})
                     .Validate (),
                   Error);
  CHECK_THROWS_AS (QosMap (slices, {{"a", "x", 1, 10, TnClass::B, true}, {"a", "z", 2, 11, TnClass::C, true}})
                     .Validate (),
                   Error);
  CHECK_THROWS_AS (QosMap (slices, {{"c", "x", 1, 10, TnClass::B, false}}).Validate (), Error);
}

TEST_CASE ("serialization times")
{
  // 1538 B at 100 Mb/s is 123.04 us.
  CHECK (TxTime (Bytes (1538), Mbps (100)) == Nanos (123040));
  // Rounded up to the next nanosecond.
  CHECK (TxTime (Bytes (1), Mbps (3)) == Nanos (2667));
  CHECK (GridOffset (3, Bytes (1538), Mbps (100)) == Nanos (369120));
}
