#include "tnslice/sched.hpp"

#include <algorithm>

namespace tnslice {

bool
BoundedFifo::Push (Packet pkt)
{
  if (static_cast<int> (m_q.size ()) >= m_cap)
    {
      m_drops++;
      return false;
    }
  m_q.push_back (std::move (pkt));
  m_enq++;
  return true;
}

Packet
BoundedFifo::Pop ()
{
  Packet p = std::move (m_q.front ());
  m_q.pop_front ();
  return p;
}

int
DrrSet::Add (Bytes quantum, int cap)
{
  if (quantum.v <= 0)
    {
      throw Error (ErrorCode::ValidationError, "DRR quantum must be positive");
    }
  m_queues.push_back ({quantum, 0, false, BoundedFifo (cap)});
  return static_cast<int> (m_queues.size ()) - 1;
}

bool
DrrSet::Push (int q, Packet pkt)
{
  Entry &e = m_queues[q];
  bool wasEmpty = e.fifo.Empty ();
  if (!e.fifo.Push (std::move (pkt)))
    {
      return false;
    }
  if (wasEmpty)
    {
      e.deficit = 0;
      e.credited = false;
      m_active.push_back (q);
    }
  return true;
}

std::optional<Bytes>
DrrSet::Select ()
{
  while (!m_active.empty ())
    {
      Entry &e = m_queues[m_active.front ()];
      if (!e.credited)
        {
          e.deficit += e.quantum.v;
          e.credited = true;
        }
      if (e.deficit >= e.fifo.Front ().size.v)
        {
          return e.fifo.Front ().size;
        }
      e.credited = false;
      m_active.push_back (m_active.front ());
      m_active.pop_front ();
    }
  return std::nullopt;
}

Packet
DrrSet::Pop ()
{
  int q = m_active.front ();
  Entry &e = m_queues[q];
  Packet p = e.fifo.Pop ();
  e.deficit -= p.size.v;
  if (e.fifo.Empty ())
    {
      e.deficit = 0;
      e.credited = false;
      m_active.pop_front ();
    }
  return p;
}

BankSpec
CoarseBank (Bytes qb, Bytes qc, Bytes qd)
{
  BankSpec s;
  s.priority = {{TnClass::A, "A"}};
  s.drr = {{TnClass::B, qb}, {TnClass::C, qc}, {TnClass::D, qd}};
  return s;
}

BankSpec
TwoPriorityBank ()
{
  BankSpec s;
  s.priority = {{TnClass::A, "HPQ"}, {TnClass::B, "LPQ"}};
  return s;
}

QueueBank::QueueBank (const BankSpec &spec, std::string node) : m_node (std::move (node))
{
  for (const auto &p : spec.priority)
    {
      if (m_slots.count (p.cls))
        {
          throw Error (ErrorCode::ValidationError, "TN class queued twice in bank " + m_node);
        }
      m_slots[p.cls] = {true, static_cast<int> (m_prio.size ())};
      m_prio.emplace_back (spec.queueCap);
      m_prioLabels.push_back (p.label.empty () ? std::string (1, ToChar (p.cls)) : p.label);
    }
  for (const auto &[cls, q] : spec.drr)
    {
      if (m_slots.count (cls))
        {
          throw Error (ErrorCode::ValidationError, "TN class queued twice in bank " + m_node);
        }
      m_slots[cls] = {false, m_drr.Add (q, spec.queueCap)};
      m_drrClasses.push_back (cls);
    }
  if (spec.fallback)
    {
      auto it = m_slots.find (*spec.fallback);
      if (it == m_slots.end ())
        {
          throw Error (ErrorCode::ValidationError, "bank fallback class has no queue in " + m_node);
        }
      for (TnClass c : {TnClass::A, TnClass::B, TnClass::C, TnClass::D})
        {
          if (!m_slots.count (c))
            {
              m_slots[c] = it->second;
            }
        }
    }
}

bool
QueueBank::Enqueue (Packet pkt)
{
  auto it = m_slots.find (pkt.tnClass.value_or (TnClass::D));
  if (it == m_slots.end ())
    {
      m_unmapped++;
      return false;
    }
  bool ok = it->second.priority ? m_prio[it->second.index].Push (std::move (pkt))
                                : m_drr.Push (it->second.index, std::move (pkt));
  if (ok)
    {
      m_size++;
    }
  return ok;
}

std::optional<Packet>
QueueBank::Dequeue ()
{
  for (auto &q : m_prio)
    {
      if (!q.Empty ())
        {
          m_size--;
          return q.Pop ();
        }
    }
  if (m_drr.Select ())
    {
      m_size--;
      return m_drr.Pop ();
    }
  return std::nullopt;
}

const BoundedFifo *
QueueBank::QueueFor (TnClass c) const
{
  auto it = m_slots.find (c);
  if (it == m_slots.end ())
    {
      return nullptr;
    }
  return it->second.priority ? &m_prio[it->second.index] : &m_drr.Queue (it->second.index);
}

std::vector<QueueStat>
QueueBank::Stats () const
{
  std::vector<QueueStat> out;
  for (std::size_t i = 0; i < m_prio.size (); ++i)
    {
      out.push_back ({m_node + "." + m_prioLabels[i], m_prio[i].Size (), m_prio[i].Drops ()});
    }
  for (std::size_t i = 0; i < m_drrClasses.size (); ++i)
    {
      const auto &q = m_drr.Queue (static_cast<int> (i));
      out.push_back ({m_node + "." + std::string (1, ToChar (m_drrClasses[i])), q.Size (), q.Drops ()});
    }
  if (m_unmapped > 0)
    {
      out.push_back ({m_node + ".unmapped", 0, m_unmapped});
    }
  return out;
}

HierDrrBank::HierDrrBank (const HierBankSpec &spec, const std::vector<ClassKey> &classes,
                          Classifier classify, std::string node)
  : m_node (std::move (node)), m_classify (std::move (classify))
{
  for (const auto &k : classes)
    {
      int si = -1;
      for (std::size_t i = 0; i < m_slices.size (); ++i)
        {
          if (m_slices[i].name == k.slice)
            {
              si = static_cast<int> (i);
            }
        }
      if (si < 0)
        {
          SliceState s;
          s.name = k.slice;
          auto it = spec.sliceQuantum.find (k.slice);
          s.quantum = it != spec.sliceQuantum.end () ? it->second : spec.defaultQuantum;
          m_slices.push_back (std::move (s));
          si = static_cast<int> (m_slices.size ()) - 1;
        }
      auto it = spec.classQuantum.find (k);
      Bytes q = it != spec.classQuantum.end () ? it->second : spec.defaultQuantum;
      int ci = m_slices[si].inner.Add (q, spec.queueCap);
      m_slices[si].classNames.push_back (k.cls);
      m_where[k] = {si, ci};
    }
}

bool
HierDrrBank::Enqueue (Packet pkt)
{
  auto it = m_where.find (m_classify (pkt));
  if (it == m_where.end ())
    {
      throw Error (ErrorCode::RuntimeError, "egress bank " + m_node + " has no queue for packet");
    }
  auto [si, ci] = it->second;
  SliceState &s = m_slices[si];
  bool wasEmpty = s.inner.Empty ();
  if (!s.inner.Push (ci, std::move (pkt)))
    {
      return false;
    }
  if (wasEmpty)
    {
      s.deficit = 0;
      s.credited = false;
      m_active.push_back (si);
    }
  m_size++;
  return true;
}

std::optional<Packet>
HierDrrBank::Dequeue ()
{
  while (!m_active.empty ())
    {
      SliceState &s = m_slices[m_active.front ()];
      if (!s.credited)
        {
          s.deficit += s.quantum.v;
          s.credited = true;
        }
      std::optional<Bytes> next = s.inner.Select ();
      if (next && s.deficit >= next->v)
        {
          Packet p = s.inner.Pop ();
          s.deficit -= p.size.v;
          if (s.inner.Empty ())
            {
              s.deficit = 0;
              s.credited = false;
              m_active.pop_front ();
            }
          m_size--;
          return p;
        }
      s.credited = false;
      m_active.push_back (m_active.front ());
      m_active.pop_front ();
    }
  return std::nullopt;
}

std::vector<QueueStat>
HierDrrBank::Stats () const
{
  std::vector<QueueStat> out;
  for (const auto &s : m_slices)
    {
      for (std::size_t i = 0; i < s.classNames.size (); ++i)
        {
          const auto &q = s.inner.Queue (static_cast<int> (i));
          out.push_back ({m_node + "." + s.name + "/" + s.classNames[i], q.Size (), q.Drops ()});
        }
    }
  return out;
}

} // namespace tnslice
