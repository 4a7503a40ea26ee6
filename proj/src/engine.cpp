#include "tnslice/engine.hpp"

#include <algorithm>
#include <memory>
#include <queue>
#include <random>

namespace tnslice {

namespace {

class Generator
{
public:
  static Generator Cbr (int flow, const FlowSpec &f, Time start, Time stop, std::uint64_t seed)
  {
    Generator g;
    g.m_flow = flow;
    g.m_frame = f.frame;
    g.m_rate = f.cbr;
    g.m_start = start;
    g.m_stop = stop;
    g.m_jitter = f.jitter;
    g.m_rng.seed (seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t> (flow) + 1))
                  ^ static_cast<std::uint64_t> (start.v));
    g.Draw ();
    return g;
  }

  static Generator Burst (int flow, const FlowSpec &f)
  {
    Generator g;
    g.m_flow = flow;
    g.m_frame = f.frame;
    g.m_burst = true;
    g.m_start = f.burst->firstAt;
    g.m_stop = f.burst->until;
    g.m_period = f.burst->period;
    g.m_rate = f.burst->pace;
    g.m_frames = (f.burst->size.v + f.frame.v - 1) / f.frame.v;
    return g;
  }

  int Flow () const { return m_flow; }

  Time Next () const
  {
    if (!m_burst)
      {
        Time t = m_start + GridOffset (m_k, m_frame, m_rate);
        return t < m_stop ? t + m_offset : kNever;
      }
    Time base = m_start + m_period * m_k;
    if (!(base < m_stop))
      {
        return kNever;
      }
    return m_rate.v > 0 ? base + GridOffset (m_i, m_frame, m_rate) : base;
  }

  // Number of frames stamped at Next(); advances past them.
  std::int64_t Take ()
  {
    if (!m_burst)
      {
        ++m_k;
        Draw ();
        return 1;
      }
    if (m_rate.v == 0)
      {
        ++m_k;
        return m_frames;
      }
    if (++m_i == m_frames)
      {
        m_i = 0;
        ++m_k;
      }
    return 1;
  }

private:
  void Draw ()
  {
    m_offset = Time (m_jitter.v > 0 ? static_cast<std::int64_t> (m_rng () % static_cast<std::uint64_t> (m_jitter.v)) : 0);
  }

  int m_flow = 0;
  bool m_burst = false;
  Bytes m_frame;
  Rate m_rate;
  Time m_start;
  Time m_stop;
  Time m_period;
  std::int64_t m_frames = 0;
  std::int64_t m_k = 0;
  std::int64_t m_i = 0;
  Time m_jitter;
  Time m_offset;
  std::mt19937_64 m_rng;
};

std::vector<Generator>
GeneratorsFor (int idx, const FlowSpec &f, std::uint64_t seed)
{
  std::vector<Generator> out;
  for (auto [a, b] : f.cbr.v > 0 ? f.schedule : std::vector<std::pair<Time, Time>>{})
    {
      out.push_back (Generator::Cbr (idx, f, a, b, seed));
    }
  if (f.burst)
    {
      out.push_back (Generator::Burst (idx, f));
    }
  return out;
}

enum class EventKind { GenTick, Arrival, LinkFree, PolicerWake, SampleTick };

struct Event
{
  Time t;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::GenTick;
  std::int64_t a = 0;
  Packet pkt;
};

struct EventAfter
{
  bool operator() (const Event &x, const Event &y) const
  {
    return x.t != y.t ? x.t > y.t : x.seq > y.seq;
  }
};

struct Port
{
  std::unique_ptr<EgressScheduler> q;
  LinkSpec link;
  bool busy = false;
  Packet cur;
  std::uint64_t propagating = 0;
};

// Node indices: 0 gNB, 1 PE1, 2 P, 3 PE2, 4 UPF. Port i leaves node i.
constexpr int kNodes = 5;
constexpr int kPorts = 4;
const char *const kNodeNames[kNodes] = {"gNB", "PE1", "P", "PE2", "UPF"};

class Simulator
{
public:
  explicit Simulator (const Scenario &s);
  RunResult Run ();

private:
  void Push (Time t, EventKind kind, std::int64_t a, Packet pkt = {});
  void OnGenTick (std::size_t gen, Time now);
  void OnLinkFree (int port, Time now);
  void Arrive (int node, Packet pkt, Time now);
  void IngressPe1 (Packet pkt, Time now);
  void Enqueue (int port, Packet pkt, Time now);
  void TryStart (int port, Time now);
  void ForwardReleased (Time now);
  void RescheduleWake (Time now);
  void Sample (int window);
  std::vector<QueueStat> QueueStats () const;

  const Scenario &m_s;
  std::priority_queue<Event, std::vector<Event>, EventAfter> m_events;
  std::uint64_t m_seq = 0;
  std::uint64_t m_nextPacket = 0;
  std::vector<Generator> m_gens;
  Port m_ports[kPorts];
  std::uint64_t m_in[kNodes] = {};
  std::uint64_t m_out[kNodes] = {};
  std::uint64_t m_dropped[kNodes] = {};

  std::vector<ClassKey> m_flowKey;
  std::vector<TnClass> m_flowTn;
  std::vector<VlanId> m_flowVlan;
  std::vector<Dscp> m_flowDscp;
  std::vector<int> m_flowPolicerQueue;
  std::vector<std::string> m_policerQueue;
  std::vector<std::uint64_t> m_policerDrops;

  PolicerTree m_tree;
  std::vector<int> m_flowLeaf;
  std::vector<Released> m_released;
  Time m_wakeAt = kNever;
  std::int64_t m_wakeGen = 0;

  std::vector<TrTcm> m_sliceMarkers;
  std::vector<int> m_flowSliceMarker;
  std::vector<std::unique_ptr<TwoColor>> m_classLimiters;
  std::vector<TwoColor *> m_flowClassLimiter;

  std::vector<std::unique_ptr<TrTcm>> m_linMarkers;
  std::vector<TrTcm *> m_flowLinMarker;

  MetricsStore m_metrics;
  std::size_t m_pe1Peak = 0;
  std::uint64_t m_eventCount = 0;
};

Simulator::Simulator (const Scenario &s) : m_s (s)
{
  int windows = static_cast<int> ((s.duration.v + s.sampleInterval.v - 1) / s.sampleInterval.v);
  m_metrics = MetricsStore (s.name, s.sampleInterval, windows, s.rawLatency);

  BankSpec gnb;
  gnb.priority = {{TnClass::A, "tx"}};
  gnb.fallback = TnClass::A;
  gnb.queueCap = s.topology.gnbQueueCap;
  m_ports[0].q = std::make_unique<QueueBank> (gnb, "gNB");
  m_ports[0].link = s.topology.gnbPe1;
  m_ports[1].q = std::make_unique<QueueBank> (s.banks.pe1, "PE1");
  m_ports[1].link = s.topology.pe1P;
  m_ports[2].q = std::make_unique<QueueBank> (s.banks.p, "P");
  m_ports[2].link = s.topology.pPe2;
  std::vector<ClassKey> classes;
  for (const auto &e : s.mapping.Entries ())
    {
      classes.push_back ({e.slice, e.cls});
    }
  const QosMap *map = &s.mapping;
  m_ports[3].q = std::make_unique<HierDrrBank> (
    s.banks.pe2, classes, [map] (const Packet &p) { return map->Classify (p); }, "PE2");
  m_ports[3].link = s.topology.pe2Upf;

  // One policer accounting queue per mapping row.
  std::map<ClassKey, int> queueOf;
  for (const auto &k : classes)
    {
      queueOf[k] = static_cast<int> (m_policerQueue.size ());
      m_policerQueue.push_back ("PE1.policer." + k.Str ());
    }
  m_policerDrops.assign (m_policerQueue.size (), 0);

  if (s.model == Model::Hctns)
    {
      m_tree = PolicerTree::Build (s.hctns);
    }
  else if (s.model == Model::Ietf)
    {
      for (const auto &sp : s.ietf)
        {
          m_sliceMarkers.emplace_back (sp.trtcm);
        }
    }

  for (std::size_t i = 0; i < s.flows.size (); ++i)
    {
      const FlowSpec &f = s.flows[i];
      VlanId vlan = s.mapping.VlanOf (f.slice);
      Dscp dscp = 0;
      for (const auto &e : s.mapping.Entries ())
        {
          if (e.slice == f.slice && e.cls == f.cls)
            {
              dscp = e.dscpIn;
            }
        }
      ClassKey key = s.mapping.Classify (vlan, dscp);
      m_flowKey.push_back (key);
      m_flowVlan.push_back (vlan);
      m_flowDscp.push_back (dscp);
      m_flowPolicerQueue.push_back (queueOf.at (key));
      m_flowTn.push_back (s.mapping.MapToTnClass (key));
      m_metrics.AddFlow (f.name);
      for (auto &g : GeneratorsFor (static_cast<int> (i), f, m_s.seed))
        {
          m_gens.push_back (g);
        }
      switch (s.model)
        {
        case Model::Hctns:
          m_flowLeaf.push_back (m_tree.LeafIndex (key));
          break;
        case Model::Ietf:
          {
            int si = -1;
            TwoColor *limiter = nullptr;
            for (std::size_t k = 0; k < s.ietf.size (); ++k)
              {
                if (s.ietf[k].slice != key.slice)
                  {
                    continue;
                  }
                si = static_cast<int> (k);
                for (const auto &c : s.ietf[k].classes)
                  {
                    if (c.cls == key.cls)
                      {
                        m_classLimiters.push_back (std::make_unique<TwoColor> (c.cir, c.cbs));
                        limiter = m_classLimiters.back ().get ();
                      }
                  }
              }
            m_flowSliceMarker.push_back (si);
            m_flowClassLimiter.push_back (limiter);
            break;
          }
        case Model::Lin:
          {
            TrTcm *marker = nullptr;
            for (const auto &lp : s.lin)
              {
                if (lp.slice == key.slice && lp.cls == key.cls && lp.trtcm)
                  {
                    m_linMarkers.push_back (std::make_unique<TrTcm> (*lp.trtcm));
                    marker = m_linMarkers.back ().get ();
                  }
              }
            m_flowLinMarker.push_back (marker);
            break;
          }
        }
    }
  // Flows sharing a class share its limiter: rebind to the first instance.
  if (s.model == Model::Ietf || s.model == Model::Lin)
    {
      for (std::size_t i = 0; i < s.flows.size (); ++i)
        {
          for (std::size_t j = 0; j < i; ++j)
            {
              if (m_flowKey[j] == m_flowKey[i])
                {
                  if (s.model == Model::Ietf)
                    {
                      m_flowClassLimiter[i] = m_flowClassLimiter[j];
                    }
                  else
                    {
                      m_flowLinMarker[i] = m_flowLinMarker[j];
                    }
                  break;
                }
            }
        }
    }
  if (s.model == Model::Hctns)
    {
      m_policerQueue.clear ();
      for (int l : m_tree.Leaves ())
        {
          m_policerQueue.push_back ("PE1.policer." + m_tree.At (l).key.Str ());
        }
    }
  for (const auto &q : QueueStats ())
    {
      m_metrics.AddQueue (q.id);
    }
}

void
Simulator::Push (Time t, EventKind kind, std::int64_t a, Packet pkt)
{
  m_events.push ({t, m_seq++, kind, a, std::move (pkt)});
}

std::vector<QueueStat>
Simulator::QueueStats () const
{
  std::vector<QueueStat> out;
  for (const auto &p : m_ports)
    {
      auto st = p.q->Stats ();
      out.insert (out.end (), st.begin (), st.end ());
    }
  if (m_s.model == Model::Hctns)
    {
      for (std::size_t i = 0; i < m_tree.Leaves ().size (); ++i)
        {
          const auto &n = m_tree.At (m_tree.Leaves ()[i]);
          out.push_back ({m_policerQueue[i], n.queue.size (), n.stats.dropped});
        }
    }
  else
    {
      for (std::size_t i = 0; i < m_policerQueue.size (); ++i)
        {
          out.push_back ({m_policerQueue[i], 0, m_policerDrops[i]});
        }
    }
  return out;
}

void
Simulator::Sample (int window)
{
  for (const auto &q : QueueStats ())
    {
      m_metrics.RecordQueueSample (q.id, window, q.drops, q.occupancy);
    }
}

void
Simulator::OnGenTick (std::size_t gen, Time now)
{
  Generator &g = m_gens[gen];
  std::int64_t n = g.Take ();
  const FlowSpec &f = m_s.flows[g.Flow ()];
  for (std::int64_t i = 0; i < n; ++i)
    {
      Packet p;
      p.id = m_nextPacket++;
      p.flow = FlowId{static_cast<std::uint32_t> (g.Flow ())};
      p.size = f.frame;
      p.vlan = m_flowVlan[g.Flow ()];
      p.dscp = m_flowDscp[g.Flow ()];
      p.createdAt = now;
      m_in[0]++;
      Enqueue (0, std::move (p), now);
    }
  Time next = g.Next ();
  if (next < m_s.duration)
    {
      Push (next, EventKind::GenTick, static_cast<std::int64_t> (gen));
    }
}

void
Simulator::Enqueue (int port, Packet pkt, Time now)
{
  if (!m_ports[port].q->Enqueue (std::move (pkt)))
    {
      m_dropped[port]++;
    }
  if (port == 1)
    {
      m_pe1Peak = std::max (m_pe1Peak, m_ports[1].q->Size ());
    }
  TryStart (port, now);
}

void
Simulator::TryStart (int port, Time now)
{
  Port &p = m_ports[port];
  if (p.busy)
    {
      return;
    }
  std::optional<Packet> pkt = p.q->Dequeue ();
  if (!pkt)
    {
      return;
    }
  p.busy = true;
  Time done = now + TxTime (pkt->size, p.link.rate);
  p.cur = std::move (*pkt);
  Push (done, EventKind::LinkFree, port);
}

void
Simulator::OnLinkFree (int port, Time now)
{
  Port &p = m_ports[port];
  p.busy = false;
  Packet pkt = std::move (p.cur);
  if (p.link.propagation.v == 0)
    {
      Arrive (port + 1, std::move (pkt), now);
    }
  else
    {
      p.propagating++;
      Push (now + p.link.propagation, EventKind::Arrival, port + 1, std::move (pkt));
    }
  TryStart (port, now);
}

void
Simulator::Arrive (int node, Packet pkt, Time now)
{
  m_out[node - 1]++;
  m_in[node]++;
  switch (node)
    {
    case 1:
      IngressPe1 (std::move (pkt), now);
      break;
    case 2:
    case 3:
      Enqueue (node, std::move (pkt), now);
      break;
    default:
      pkt.deliveredAt = now;
      m_metrics.RecordDelivery (m_s.flows[pkt.flow.v].name, pkt, now);
      // Marker models also report each color of a flow on its own.
      if (m_s.model != Model::Hctns && pkt.color)
        {
          m_metrics.RecordDelivery (m_s.flows[pkt.flow.v].name + "." + ToString (*pkt.color), pkt, now, false);
        }
      break;
    }
}

void
Simulator::IngressPe1 (Packet pkt, Time now)
{
  std::size_t f = pkt.flow.v;
  TnClass tn = m_flowTn[f];
  switch (m_s.model)
    {
    case Model::Hctns:
      {
        pkt.tnClass = tn;
        pkt.color = Color::Green;
        m_released.clear ();
        Admission a = m_tree.Offer (m_flowLeaf[f], pkt, now, m_released);
        if (a.kind == Admission::Dropped)
          {
            m_dropped[1]++;
          }
        ForwardReleased (now);
        RescheduleWake (now);
        return;
      }
    case Model::Ietf:
      {
        int si = m_flowSliceMarker[f];
        IetfDisposition d = IetfIngress (m_sliceMarkers[si], m_flowClassLimiter[f], tn, pkt.size, now);
        if (d.kind == IetfDisposition::Drop)
          {
            break;
          }
        pkt.tnClass = d.tnClass;
        pkt.color = d.color;
        Enqueue (1, std::move (pkt), now);
        return;
      }
    case Model::Lin:
      {
        LinDisposition d = LinIngress (m_flowLinMarker[f], pkt.size, now);
        if (d == LinDisposition::Drop)
          {
            break;
          }
        bool high = d == LinDisposition::HighQueue;
        pkt.tnClass = high ? TnClass::A : TnClass::B;
        pkt.color = high ? Color::Green : (m_flowLinMarker[f] != nullptr ? Color::Yellow : Color::Green);
        Enqueue (1, std::move (pkt), now);
        return;
      }
    }
  // Marker drop: account it against the class's policer queue.
  m_policerDrops[m_flowPolicerQueue[f]]++;
  m_dropped[1]++;
}

void
Simulator::ForwardReleased (Time now)
{
  for (auto &r : m_released)
    {
      Enqueue (1, std::move (r.pkt), now);
    }
  m_released.clear ();
}

void
Simulator::RescheduleWake (Time now)
{
  Time w = m_tree.NextWake ();
  if (w == m_wakeAt)
    {
      return;
    }
  ++m_wakeGen;
  m_wakeAt = w;
  if (w == kNever || !(w < m_s.duration))
    {
      return;
    }
  if (w <= now)
    {
      throw Error (ErrorCode::RuntimeError, "policer wake-up not in the future");
    }
  Push (w, EventKind::PolicerWake, m_wakeGen);
}

RunResult
Simulator::Run ()
{
  for (std::size_t g = 0; g < m_gens.size (); ++g)
    {
      Time t = m_gens[g].Next ();
      if (t < m_s.duration)
        {
          Push (t, EventKind::GenTick, static_cast<std::int64_t> (g));
        }
    }
  int windows = m_metrics.Windows ();
  for (int k = 1; k < windows; ++k)
    {
      Push (m_s.sampleInterval * k, EventKind::SampleTick, k - 1);
    }
  while (!m_events.empty () && m_events.top ().t < m_s.duration)
    {
      Event e = m_events.top ();
      m_events.pop ();
      ++m_eventCount;
      switch (e.kind)
        {
        case EventKind::GenTick:
          OnGenTick (static_cast<std::size_t> (e.a), e.t);
          break;
        case EventKind::LinkFree:
          OnLinkFree (static_cast<int> (e.a), e.t);
          break;
        case EventKind::Arrival:
          m_ports[e.a - 1].propagating--;
          Arrive (static_cast<int> (e.a), std::move (e.pkt), e.t);
          break;
        case EventKind::PolicerWake:
          if (e.a == m_wakeGen)
            {
              m_wakeAt = kNever;
              m_released.clear ();
              m_tree.Drain (e.t, m_released);
              ForwardReleased (e.t);
              RescheduleWake (e.t);
            }
          break;
        case EventKind::SampleTick:
          Sample (static_cast<int> (e.a));
          break;
        }
    }
  if (windows > 0)
    {
      Sample (windows - 1);
    }

  RunResult r;
  for (int n = 0; n < kNodes; ++n)
    {
      NodeCount c;
      c.node = kNodeNames[n];
      c.in = m_in[n];
      c.out = n < kPorts ? m_out[n] : m_in[n];
      c.dropped = m_dropped[n];
      if (n < kPorts)
        {
          const Port &p = m_ports[n];
          c.resident = p.q->Size () + (p.busy ? 1 : 0) + p.propagating;
        }
      if (n == 1 && m_s.model == Model::Hctns)
        {
          c.resident += m_tree.Backlog ();
        }
      r.nodes.push_back (c);
    }
  r.generated = m_in[0];
  r.events = m_eventCount;
  r.pe1PeakOccupancy = m_pe1Peak;
  r.metrics = std::move (m_metrics);
  return r;
}

} // namespace

std::vector<Time>
EmissionTimes (const FlowSpec &flow, Time from, Time upto, std::uint64_t seed)
{
  std::vector<Time> out;
  for (auto g : GeneratorsFor (0, flow, seed))
    {
      for (Time t = g.Next (); t < upto; t = g.Next ())
        {
          std::int64_t n = g.Take ();
          if (t >= from)
            {
              out.insert (out.end (), static_cast<std::size_t> (n), t);
            }
        }
    }
  std::sort (out.begin (), out.end ());
  return out;
}

RunResult
Simulate (const Scenario &scenario)
{
  scenario.Validate ();
  Simulator sim (scenario);
  return sim.Run ();
}

MetricsStore
Run (const Scenario &scenario)
{
  return Simulate (scenario).metrics;
}

} // namespace tnslice
