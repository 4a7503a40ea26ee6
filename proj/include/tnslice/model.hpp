#ifndef TNSLICE_MODEL_HPP
#define TNSLICE_MODEL_HPP

#include "tnslice/types.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tnslice {

struct Packet
{
  std::uint64_t id = 0;
  FlowId flow;
  Bytes size;
  VlanId vlan = 0;
  Dscp dscp = 0;
  std::optional<TnClass> tnClass;
  std::optional<Color> color;
  Time createdAt;
  std::optional<Time> deliveredAt;
};

struct SliceVlan
{
  std::string slice;
  VlanId vlan = 0;
};

struct QosMapEntry
{
  std::string slice;
  std::string cls;
  int fiveQi = 0;
  Dscp dscpIn = 0;
  TnClass tnClass = TnClass::D;
  // Catches DSCP values no other entry of the slice claims.
  bool isDefault = false;
};

struct ClassKey
{
  std::string slice;
  std::string cls;

  auto operator<=> (const ClassKey &) const = default;
  std::string Str () const { return cls.empty () ? slice : slice + "/" + cls; }
};

class QosMap
{
public:
  QosMap () = default;
  QosMap (std::vector<SliceVlan> slices, std::vector<QosMapEntry> entries);

  // Throws Error(UnknownVlan / UnknownDscpNoDefault).
  ClassKey Classify (const Packet &pkt) const;
  ClassKey Classify (VlanId vlan, Dscp dscp) const;
  // Throws Error(UnknownPair).
  TnClass MapToTnClass (const ClassKey &key) const;

  const std::vector<SliceVlan> &Slices () const { return m_slices; }
  const std::vector<QosMapEntry> &Entries () const { return m_entries; }
  VlanId VlanOf (const std::string &slice) const;

  // Throws Error(ValidationError) on duplicate (slice, class), duplicate DSCP
  // within a slice, more than one default per slice, or unknown slice names.
  void Validate () const;

private:
  std::vector<SliceVlan> m_slices;
  std::vector<QosMapEntry> m_entries;
};

// Slice/class/5QI/DSCP/TN-class rows used by every experiment preset.
QosMap StandardQosMap ();

} // namespace tnslice

#endif
