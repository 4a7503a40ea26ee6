#include "tnslice/model.hpp"

#include <map>
#include <set>

namespace tnslice {

Time
TxTime (Bytes size, Rate rate)
{
  if (rate.v <= 0)
    {
      throw Error (ErrorCode::ValidationError, "link rate must be positive");
    }
  __int128 bits = static_cast<__int128> (size.v) * 8 * kNsPerSec;
  return Time (static_cast<std::int64_t> ((bits + rate.v - 1) / rate.v));
}

Time
GridOffset (std::int64_t k, Bytes size, Rate rate)
{
  __int128 bits = static_cast<__int128> (k) * size.v * 8 * kNsPerSec;
  return Time (static_cast<std::int64_t> (bits / rate.v));
}

char
ToChar (TnClass c)
{
  return static_cast<char> ('A' + static_cast<int> (c));
}

TnClass
TnClassFromString (const std::string &s)
{
  if (s.size () == 1 && s[0] >= 'A' && s[0] <= 'D')
    {
      return static_cast<TnClass> (s[0] - 'A');
    }
  throw Error (ErrorCode::ValidationError, "invalid TN class '" + s + "'");
}

const char *
ToString (Color c)
{
  switch (c)
    {
    case Color::Green: return "green";
    case Color::Yellow: return "yellow";
    case Color::Red: return "red";
    }
  return "?";
}

const char *
ToString (ErrorCode c)
{
  switch (c)
    {
    case ErrorCode::UnknownVlan: return "UnknownVlan";
    case ErrorCode::UnknownDscpNoDefault: return "UnknownDscpNoDefault";
    case ErrorCode::UnknownPair: return "UnknownPair";
    case ErrorCode::UnknownLeaf: return "UnknownLeaf";
    case ErrorCode::CirSumExceeded: return "CirSumExceeded";
    case ErrorCode::MissingGlobal: return "MissingGlobal";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::ValidationError: return "ValidationError";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::RuntimeError: return "RuntimeError";
    }
  return "Unknown";
}

QosMap::QosMap (std::vector<SliceVlan> slices, std::vector<QosMapEntry> entries)
  : m_slices (std::move (slices)), m_entries (std::move (entries))
{
}

ClassKey
QosMap::Classify (const Packet &pkt) const
{
  return Classify (pkt.vlan, pkt.dscp);
}

ClassKey
QosMap::Classify (VlanId vlan, Dscp dscp) const
{
  const SliceVlan *slice = nullptr;
  for (const auto &s : m_slices)
    {
      if (s.vlan == vlan)
        {
          slice = &s;
          break;
        }
    }
  if (slice == nullptr)
    {
      throw Error (ErrorCode::UnknownVlan, "no slice for vlan " + std::to_string (vlan));
    }
  const QosMapEntry *fallback = nullptr;
  for (const auto &e : m_entries)
    {
      if (e.slice != slice->slice)
        {
          continue;
        }
      if (e.dscpIn == dscp)
        {
          return {e.slice, e.cls};
        }
      if (e.isDefault && fallback == nullptr)
        {
          fallback = &e;
        }
    }
  if (fallback == nullptr)
    {
      throw Error (ErrorCode::UnknownDscpNoDefault,
                   "dscp " + std::to_string (dscp) + " unmapped in slice " + slice->slice);
    }
  return {fallback->slice, fallback->cls};
}

TnClass
QosMap::MapToTnClass (const ClassKey &key) const
{
  for (const auto &e : m_entries)
    {
      if (e.slice == key.slice && e.cls == key.cls)
        {
          return e.tnClass;
        }
    }
  throw Error (ErrorCode::UnknownPair, "no mapping for " + key.Str ());
}

VlanId
QosMap::VlanOf (const std::string &slice) const
{
  for (const auto &s : m_slices)
    {
      if (s.slice == slice)
        {
          return s.vlan;
        }
    }
  throw Error (ErrorCode::UnknownVlan, "slice " + slice + " has no vlan");
}

void
QosMap::Validate () const
{
  std::set<std::string> names;
  std::set<VlanId> vlans;
  for (const auto &s : m_slices)
    {
      if (!names.insert (s.slice).second || !vlans.insert (s.vlan).second)
        {
          throw Error (ErrorCode::ValidationError, "duplicate slice or vlan for " + s.slice);
        }
    }
  std::set<ClassKey> keys;
  std::set<std::pair<std::string, int>> dscps;
  std::map<std::string, int> defaults;
  for (const auto &e : m_entries)
    {
      if (names.count (e.slice) == 0)
        {
          throw Error (ErrorCode::ValidationError, "mapping row references unknown slice " + e.slice);
        }
      if (e.dscpIn > 63)
        {
          throw Error (ErrorCode::ValidationError, "dscp out of range in " + e.slice + "/" + e.cls);
        }
      if (!keys.insert ({e.slice, e.cls}).second)
        {
          throw Error (ErrorCode::ValidationError, "duplicate class " + e.slice + "/" + e.cls);
        }
      if (!dscps.insert ({e.slice, e.dscpIn}).second)
        {
          throw Error (ErrorCode::ValidationError,
                       "duplicate dscp " + std::to_string (e.dscpIn) + " in slice " + e.slice);
        }
      if (e.isDefault && ++defaults[e.slice] > 1)
        {
          throw Error (ErrorCode::ValidationError, "more than one default class in " + e.slice);
        }
    }
}

QosMap
StandardQosMap ()
{
  std::vector<SliceVlan> slices = {{"URLLC", 10}, {"ToD", 20}, {"eMBB", 30}};
  std::vector<QosMapEntry> entries = {
    {"URLLC", "URLLC", 82, 46, TnClass::A, false},
    {"ToD", "Video", 130, 38, TnClass::B, false},
    {"ToD", "Telemetry", 131, 28, TnClass::C, false},
    {"eMBB", "VC", 2, 28, TnClass::C, false},
    {"eMBB", "BE", 9, 0, TnClass::D, true},
  };
  return QosMap (std::move (slices), std::move (entries));
}

} // namespace tnslice
