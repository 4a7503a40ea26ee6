#ifndef TNSLICE_SCHED_HPP
#define TNSLICE_SCHED_HPP

#include "tnslice/model.hpp"
#include "tnslice/policer_htb.hpp"

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tnslice {

class BoundedFifo
{
public:
  explicit BoundedFifo (int cap = kDefaultQueueCap) : m_cap (cap) {}

  bool Push (Packet pkt);
  Packet Pop ();
  const Packet &Front () const { return m_q.front (); }
  bool Empty () const { return m_q.empty (); }
  std::size_t Size () const { return m_q.size (); }
  std::uint64_t Drops () const { return m_drops; }
  std::uint64_t Enqueued () const { return m_enq; }

private:
  std::deque<Packet> m_q;
  int m_cap;
  std::uint64_t m_drops = 0;
  std::uint64_t m_enq = 0;
};

// Classic deficit round robin over a fixed set of FIFOs.
class DrrSet
{
public:
  int Add (Bytes quantum, int cap);
  bool Push (int q, Packet pkt);
  // Rotates until some queue has credit for its head; returns that head's
  // size without removing it. Repeated calls are idempotent until Pop.
  std::optional<Bytes> Select ();
  Packet Pop ();
  bool Empty () const { return m_active.empty (); }
  const BoundedFifo &Queue (int q) const { return m_queues[q].fifo; }
  std::int64_t Deficit (int q) const { return m_queues[q].deficit; }

private:
  struct Entry
  {
    Bytes quantum;
    std::int64_t deficit = 0;
    bool credited = false;
    BoundedFifo fifo;
  };
  std::vector<Entry> m_queues;
  std::deque<int> m_active;
};

struct QueueStat
{
  std::string id;
  std::size_t occupancy = 0;
  std::uint64_t drops = 0;
};

class EgressScheduler
{
public:
  virtual ~EgressScheduler () = default;
  virtual bool Enqueue (Packet pkt) = 0;
  virtual std::optional<Packet> Dequeue () = 0;
  virtual std::size_t Size () const = 0;
  virtual std::vector<QueueStat> Stats () const = 0;
};

struct PriorityLevel
{
  TnClass cls = TnClass::A;
  std::string label;
};

struct BankSpec
{
  // Highest priority first.
  std::vector<PriorityLevel> priority;
  std::vector<std::pair<TnClass, Bytes>> drr;
  int queueCap = kDefaultQueueCap;
  // Where classes with no queue of their own go; unset means drop.
  std::optional<TnClass> fallback;
};

BankSpec CoarseBank (Bytes qb, Bytes qc, Bytes qd);
BankSpec TwoPriorityBank ();

// Strict priority queues ahead of a DRR set, keyed by TN class.
class QueueBank : public EgressScheduler
{
public:
  QueueBank (const BankSpec &spec, std::string node);

  bool Enqueue (Packet pkt) override;
  std::optional<Packet> Dequeue () override;
  std::size_t Size () const override { return m_size; }
  std::vector<QueueStat> Stats () const override;

  const BoundedFifo *QueueFor (TnClass c) const;

private:
  struct Slot
  {
    bool priority = false;
    int index = -1;
  };
  std::string m_node;
  std::vector<BoundedFifo> m_prio;
  std::vector<std::string> m_prioLabels;
  DrrSet m_drr;
  std::vector<TnClass> m_drrClasses;
  std::map<TnClass, Slot> m_slots;
  std::size_t m_size = 0;
  std::uint64_t m_unmapped = 0;
};

struct HierBankSpec
{
  std::map<std::string, Bytes> sliceQuantum;
  std::map<ClassKey, Bytes> classQuantum;
  Bytes defaultQuantum = kDefaultFrame;
  int queueCap = kDefaultQueueCap;
};

// Outer DRR over slices, inner DRR over the classes of each slice.
class HierDrrBank : public EgressScheduler
{
public:
  using Classifier = std::function<ClassKey (const Packet &)>;

  HierDrrBank (const HierBankSpec &spec, const std::vector<ClassKey> &classes,
               Classifier classify, std::string node);

  bool Enqueue (Packet pkt) override;
  std::optional<Packet> Dequeue () override;
  std::size_t Size () const override { return m_size; }
  std::vector<QueueStat> Stats () const override;

private:
  struct SliceState
  {
    std::string name;
    Bytes quantum;
    std::int64_t deficit = 0;
    bool credited = false;
    DrrSet inner;
    std::vector<std::string> classNames;
  };
  std::string m_node;
  Classifier m_classify;
  std::vector<SliceState> m_slices;
  std::map<ClassKey, std::pair<int, int>> m_where;
  std::deque<int> m_active;
  std::size_t m_size = 0;
};

} // namespace tnslice

#endif
