#ifndef TNSLICE_POLICER_HTB_HPP
#define TNSLICE_POLICER_HTB_HPP

#include "tnslice/bucket.hpp"
#include "tnslice/model.hpp"

#include <deque>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tnslice {

constexpr Bytes kDefaultFrame (1538);
constexpr int kDefaultQueueCap = 1000;
// Time constant of the borrowed-rate estimate used to split excess tokens.
constexpr Time kShareMemory = Millis (100);

struct PolicerNodeSpec
{
  std::string name;
  Rate cir;
  Rate pir;
  Bytes cbs = kDefaultFrame;
  Bytes pbs = kDefaultFrame;
  std::optional<Bytes> quantum;
  std::optional<int> priority;
  int queueCap = kDefaultQueueCap;
  std::vector<PolicerNodeSpec> children;
};

struct PolicerSpec
{
  // Root of the tree; its children are slices, theirs are classes.
  std::optional<PolicerNodeSpec> global;
};

enum class Level { Global, Slice, Class };

struct Admission
{
  enum Kind { Admitted, Queued, Dropped };
  Kind kind = Queued;
  Time at;
};

struct Released
{
  Packet pkt;
  Time at;
  int leaf = -1;
};

struct LeafStats
{
  std::uint64_t offered = 0;
  std::uint64_t admitted = 0;
  std::uint64_t dropped = 0;
  std::int64_t admittedBytes = 0;
  // Bytes admitted on tokens lent by an ancestor.
  std::int64_t borrowedBytes = 0;
};

class PolicerTree
{
public:
  struct Node
  {
    std::string name;
    Level level = Level::Global;
    int parent = -1;
    std::vector<int> children;
    Bucket cir;
    Bucket pir;
    Bytes quantum = kDefaultFrame;
    bool quantumSet = false;
    int priority = 0;

    // Leaf-only state.
    ClassKey key;
    std::deque<Packet> queue;
    int queueCap = kDefaultQueueCap;
    // Recently borrowed bytes per byte of effective quantum, decaying with
    // kShareMemory; the lowest value wins the next borrowed token.
    double share = 0;
    Time shareAt;
    std::uint64_t lastServed = 0;
    LeafStats stats;

    bool IsLeaf () const { return children.empty (); }
  };

  // Throws Error(MissingGlobal / CirSumExceeded / ValidationError).
  static PolicerTree Build (const PolicerSpec &spec);

  // Looks up (slice, class); a class-less slice answers for any of its classes.
  int LeafIndex (const ClassKey &key) const;

  // Queues the packet at its leaf and releases whatever became admissible at
  // `now` (including, possibly, this packet) into `out`.
  Admission Offer (int leaf, const Packet &pkt, Time now, std::vector<Released> &out);
  Admission Offer (const ClassKey &key, const Packet &pkt, Time now, std::vector<Released> &out);

  void Drain (Time now, std::vector<Released> &out);

  // Earliest future instant at which some backlogged head becomes admissible,
  // valid after the last Offer/Drain.
  Time NextWake () const { return m_nextWake; }

  bool TryBorrow (int node, Bytes bytes, Time now);

  void RefillAll (Time now);

  const Node &At (int i) const { return m_nodes[i]; }
  Node &At (int i) { return m_nodes[i]; }
  int Size () const { return static_cast<int> (m_nodes.size ()); }
  const std::vector<int> &Leaves () const { return m_leaves; }
  std::size_t Backlog () const;

private:
  int AddNode (const PolicerNodeSpec &spec, Level level, int parent);
  int FindLender (int leaf, Bytes size) const;
  bool OwnAdmissible (const Node &n, Bytes size) const;
  void AdmitOwn (int leaf, Time now, std::vector<Released> &out);
  void AdmitBorrowed (int leaf, int lender, Time now, std::vector<Released> &out);
  std::pair<int, int> PriorityKey (int leaf) const;
  std::int64_t EffectiveQuantum (int leaf) const;
  double ShareAt (int leaf, Time now) const;
  int Arbitrate (const std::vector<int> &candidates, Time now);
  void ComputeNextWake ();
  Time LeafWake (int leaf) const;

  std::vector<Node> m_nodes;
  std::vector<int> m_leaves;
  std::map<ClassKey, int> m_index;
  std::uint64_t m_turns = 0;
  bool m_hierWeights = false;
  Time m_nextWake = kNever;
};

} // namespace tnslice

#endif
