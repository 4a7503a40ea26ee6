#include "tnslice/policer_htb.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace tnslice {

namespace {

Time
Later (Time a, Time b)
{
  return a < b ? b : a;
}

Time
Earlier (Time a, Time b)
{
  return a < b ? a : b;
}

void
CheckNode (const PolicerNodeSpec &s)
{
  if (s.cir.v < 0 || s.pir.v < 0)
    {
      throw Error (ErrorCode::ValidationError, "negative rate at node " + s.name);
    }
  if (s.pir < s.cir)
    {
      throw Error (ErrorCode::ValidationError, "PIR below CIR at node " + s.name);
    }
  if (s.cbs.v <= 0 || s.pbs.v <= 0)
    {
      throw Error (ErrorCode::ValidationError, "CBS/PBS must be positive at node " + s.name);
    }
  if (s.quantum && s.quantum->v <= 0)
    {
      throw Error (ErrorCode::ValidationError, "quantum must be positive at node " + s.name);
    }
  if (s.queueCap <= 0)
    {
      throw Error (ErrorCode::ValidationError, "queue_cap must be positive at node " + s.name);
    }
  Rate sum;
  std::set<std::string> names;
  for (const auto &c : s.children)
    {
      sum += c.cir;
      if (!names.insert (c.name).second)
        {
          throw Error (ErrorCode::ValidationError, "duplicate child " + c.name + " under " + s.name);
        }
    }
  if (sum > s.cir)
    {
      throw Error (ErrorCode::CirSumExceeded,
                   "children of " + s.name + " commit " + std::to_string (sum.v)
                     + " bps, more than its CIR " + std::to_string (s.cir.v) + " bps");
    }
}

} // namespace

PolicerTree
PolicerTree::Build (const PolicerSpec &spec)
{
  if (!spec.global)
    {
      throw Error (ErrorCode::MissingGlobal, "policer has no global node");
    }
  PolicerNodeSpec root = *spec.global;
  if (root.pir.v == 0)
    {
      root.pir = root.cir;
    }
  if (root.pir != root.cir)
    {
      throw Error (ErrorCode::ValidationError, "global CIR and PIR must be equal");
    }
  if (root.cir.v <= 0)
    {
      throw Error (ErrorCode::ValidationError, "global CIR must be positive");
    }
  if (root.children.empty ())
    {
      throw Error (ErrorCode::ValidationError, "global policer has no slices");
    }
  CheckNode (root);

  PolicerTree tree;
  tree.AddNode (root, Level::Global, -1);
  for (const auto &slice : root.children)
    {
      CheckNode (slice);
      int si = tree.AddNode (slice, Level::Slice, 0);
      // A class-less slice's quantum is just its own leaf weight.
      if (slice.quantum && !slice.children.empty ())
        {
          tree.m_hierWeights = true;
        }
      for (const auto &cls : slice.children)
        {
          if (!cls.children.empty ())
            {
              throw Error (ErrorCode::ValidationError, "class " + cls.name + " cannot have children");
            }
          CheckNode (cls);
          tree.AddNode (cls, Level::Class, si);
        }
    }
  for (int i = 0; i < tree.Size (); ++i)
    {
      Node &n = tree.m_nodes[i];
      if (i == 0 || !n.IsLeaf ())
        {
          continue;
        }
      if (n.pir.FillRate ().v == 0)
        {
          throw Error (ErrorCode::ValidationError, "leaf " + n.name + " has zero PIR");
        }
      if (n.level == Level::Class)
        {
          n.key = {tree.m_nodes[n.parent].name, n.name};
        }
      else
        {
          n.key = {n.name, ""};
        }
      tree.m_leaves.push_back (i);
      tree.m_index[n.key] = i;
    }
  return tree;
}

int
PolicerTree::AddNode (const PolicerNodeSpec &spec, Level level, int parent)
{
  Node n;
  n.name = spec.name;
  n.level = level;
  n.parent = parent;
  n.cir = Bucket (spec.cbs, spec.cir);
  n.pir = Bucket (spec.pbs, spec.pir);
  n.quantum = spec.quantum.value_or (kDefaultFrame);
  n.quantumSet = spec.quantum.has_value ();
  n.priority = spec.priority.value_or (0);
  n.queueCap = spec.queueCap;
  int idx = static_cast<int> (m_nodes.size ());
  m_nodes.push_back (std::move (n));
  if (parent >= 0)
    {
      m_nodes[parent].children.push_back (idx);
    }
  return idx;
}

int
PolicerTree::LeafIndex (const ClassKey &key) const
{
  auto it = m_index.find (key);
  if (it != m_index.end ())
    {
      return it->second;
    }
  it = m_index.find ({key.slice, ""});
  if (it != m_index.end ())
    {
      return it->second;
    }
  throw Error (ErrorCode::UnknownLeaf, "no policer leaf for " + key.Str ());
}

std::size_t
PolicerTree::Backlog () const
{
  std::size_t n = 0;
  for (int l : m_leaves)
    {
      n += m_nodes[l].queue.size ();
    }
  return n;
}

void
PolicerTree::RefillAll (Time now)
{
  for (auto &n : m_nodes)
    {
      n.cir.Refill (now);
      n.pir.Refill (now);
    }
}

Admission
PolicerTree::Offer (const ClassKey &key, const Packet &pkt, Time now, std::vector<Released> &out)
{
  return Offer (LeafIndex (key), pkt, now, out);
}

Admission
PolicerTree::Offer (int leaf, const Packet &pkt, Time now, std::vector<Released> &out)
{
  if (leaf < 0 || leaf >= Size () || !m_nodes[leaf].IsLeaf () || leaf == 0)
    {
      throw Error (ErrorCode::UnknownLeaf, "offer to a non-leaf node");
    }
  Node &n = m_nodes[leaf];
  n.stats.offered++;
  if (static_cast<int> (n.queue.size ()) >= n.queueCap)
    {
      n.stats.dropped++;
      return {Admission::Dropped, now};
    }
  n.queue.push_back (pkt);
  std::size_t before = out.size ();
  Drain (now, out);
  for (std::size_t i = before; i < out.size (); ++i)
    {
      if (out[i].pkt.id == pkt.id && out[i].leaf == leaf)
        {
          return {Admission::Admitted, now};
        }
    }
  return {Admission::Queued, now};
}

bool
PolicerTree::OwnAdmissible (const Node &n, Bytes size) const
{
  return n.pir.Holds (size) && n.cir.Holds (size);
}

int
PolicerTree::FindLender (int leaf, Bytes size) const
{
  for (int a = m_nodes[leaf].parent; a >= 0; a = m_nodes[a].parent)
    {
      const Node &n = m_nodes[a];
      if (!n.pir.Holds (size))
        {
          return -1;
        }
      if (n.cir.Holds (size))
        {
          return a;
        }
    }
  return -1;
}

bool
PolicerTree::TryBorrow (int node, Bytes bytes, Time now)
{
  RefillAll (now);
  for (int a = node; a >= 0; a = m_nodes[a].parent)
    {
      const Node &n = m_nodes[a];
      if (!n.pir.Holds (bytes))
        {
          return false;
        }
      if (n.cir.Holds (bytes))
        {
          for (int b = node; b != a; b = m_nodes[b].parent)
            {
              m_nodes[b].pir.Consume (bytes);
            }
          for (int b = a; b >= 0; b = m_nodes[b].parent)
            {
              m_nodes[b].cir.Consume (bytes);
              m_nodes[b].pir.Consume (bytes);
            }
          return true;
        }
    }
  return false;
}

void
PolicerTree::AdmitOwn (int leaf, Time now, std::vector<Released> &out)
{
  Node &n = m_nodes[leaf];
  Packet pkt = std::move (n.queue.front ());
  n.queue.pop_front ();
  for (int a = leaf; a >= 0; a = m_nodes[a].parent)
    {
      m_nodes[a].cir.Consume (pkt.size);
      m_nodes[a].pir.Consume (pkt.size);
    }
  n.stats.admitted++;
  n.stats.admittedBytes += pkt.size.v;
  out.push_back ({std::move (pkt), now, leaf});
}

void
PolicerTree::AdmitBorrowed (int leaf, int lender, Time now, std::vector<Released> &out)
{
  Node &n = m_nodes[leaf];
  Packet pkt = std::move (n.queue.front ());
  n.queue.pop_front ();
  for (int a = leaf; a != lender; a = m_nodes[a].parent)
    {
      m_nodes[a].pir.Consume (pkt.size);
    }
  for (int a = lender; a >= 0; a = m_nodes[a].parent)
    {
      m_nodes[a].cir.Consume (pkt.size);
      m_nodes[a].pir.Consume (pkt.size);
    }
  n.share = ShareAt (leaf, now) + static_cast<double> (pkt.size.v) / EffectiveQuantum (leaf);
  n.shareAt = now;
  n.stats.admitted++;
  n.stats.admittedBytes += pkt.size.v;
  n.stats.borrowedBytes += pkt.size.v;
  out.push_back ({std::move (pkt), now, leaf});
}

std::pair<int, int>
PolicerTree::PriorityKey (int leaf) const
{
  const Node &n = m_nodes[leaf];
  if (n.level == Level::Class)
    {
      return {m_nodes[n.parent].priority, n.priority};
    }
  return {0, n.priority};
}

std::int64_t
PolicerTree::EffectiveQuantum (int leaf) const
{
  const Node &n = m_nodes[leaf];
  if (!m_hierWeights || n.level == Level::Slice)
    {
      return n.quantum.v;
    }
  const Node &slice = m_nodes[n.parent];
  auto key = PriorityKey (leaf);
  std::int64_t sum = 0;
  for (int c : slice.children)
    {
      if (c == leaf || (!m_nodes[c].queue.empty () && PriorityKey (c) == key))
        {
          sum += m_nodes[c].quantum.v;
        }
    }
  std::int64_t q = static_cast<std::int64_t> (
    static_cast<__int128> (slice.quantum.v) * n.quantum.v / std::max<std::int64_t> (sum, 1));
  return std::max<std::int64_t> (q, 1);
}

double
PolicerTree::ShareAt (int leaf, Time now) const
{
  const Node &n = m_nodes[leaf];
  if (n.share == 0)
    {
      return 0;
    }
  return n.share * std::exp (-static_cast<double> ((now - n.shareAt).v) / kShareMemory.v);
}

int
PolicerTree::Arbitrate (const std::vector<int> &candidates, Time now)
{
  auto key = PriorityKey (candidates.front ());
  for (int c : candidates)
    {
      key = std::min (key, PriorityKey (c));
    }
  std::vector<int> group;
  for (int c : candidates)
    {
      if (PriorityKey (c) == key)
        {
          group.push_back (c);
        }
    }
  // Lowest recent borrowed rate per quantum first; the least recently served
  // leaf, then creation order, breaks ties.
  int pick = group.front ();
  double best = ShareAt (pick, now);
  for (int c : group)
    {
      double v = ShareAt (c, now);
      if (v < best || (v == best && m_nodes[c].lastServed < m_nodes[pick].lastServed))
        {
          pick = c;
          best = v;
        }
    }
  m_nodes[pick].lastServed = ++m_turns;
  return pick;
}

void
PolicerTree::Drain (Time now, std::vector<Released> &out)
{
  RefillAll (now);
  for (int l : m_leaves)
    {
      Node &n = m_nodes[l];
      while (!n.queue.empty () && OwnAdmissible (n, n.queue.front ().size))
        {
          AdmitOwn (l, now, out);
        }
    }
  std::vector<int> candidates;
  std::vector<int> lenders (m_nodes.size (), -1);
  for (;;)
    {
      candidates.clear ();
      for (int l : m_leaves)
        {
          const Node &n = m_nodes[l];
          if (n.queue.empty () || !n.pir.Holds (n.queue.front ().size))
            {
              continue;
            }
          int lender = FindLender (l, n.queue.front ().size);
          if (lender >= 0)
            {
              lenders[l] = lender;
              candidates.push_back (l);
            }
        }
      if (candidates.empty ())
        {
          break;
        }
      int pick = Arbitrate (candidates, now);
      AdmitBorrowed (pick, lenders[pick], now, out);
      Node &n = m_nodes[pick];
      while (!n.queue.empty () && OwnAdmissible (n, n.queue.front ().size))
        {
          AdmitOwn (pick, now, out);
        }
    }
  ComputeNextWake ();
}

Time
PolicerTree::LeafWake (int leaf) const
{
  const Node &n = m_nodes[leaf];
  std::int64_t s = n.queue.front ().size.v;
  Time pirReady = n.pir.TimeUntil (s);
  Time best = Later (pirReady, n.cir.TimeUntil (s));
  // Every node below the lender needs enough PIR to pass the request up.
  Time path = pirReady;
  for (int a = n.parent; a >= 0; a = m_nodes[a].parent)
    {
      const Node &p = m_nodes[a];
      Time pirOk = p.pir.TimeUntil (s);
      best = Earlier (best, Later (path, Later (pirOk, p.cir.TimeUntil (s))));
      path = Later (path, pirOk);
      if (path == kNever)
        {
          break;
        }
    }
  return best;
}

void
PolicerTree::ComputeNextWake ()
{
  m_nextWake = kNever;
  for (int l : m_leaves)
    {
      if (!m_nodes[l].queue.empty ())
        {
          m_nextWake = Earlier (m_nextWake, LeafWake (l));
        }
    }
}

} // namespace tnslice
