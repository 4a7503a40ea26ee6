#include "tnslice/scenario.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tnslice {

using nlohmann::json;

const char *
ToString (Model m)
{
  switch (m)
    {
    case Model::Hctns: return "hctns";
    case Model::Ietf: return "ietf";
    case Model::Lin: return "lin";
    }
  return "?";
}

Model
ModelFromString (const std::string &s)
{
  if (s == "hctns")
    {
      return Model::Hctns;
    }
  if (s == "ietf")
    {
      return Model::Ietf;
    }
  if (s == "lin")
    {
      return Model::Lin;
    }
  throw Error (ErrorCode::ParseError, "model: unknown value '" + s + "' (expected hctns, ietf or lin)");
}

Bytes
Scenario::MaxFrame () const
{
  Bytes m (1);
  for (const auto &f : flows)
    {
      m = std::max (m, f.frame);
    }
  return m;
}

namespace {

void
Invalid (const std::string &what)
{
  throw Error (ErrorCode::ValidationError, what);
}

void
CheckLink (const LinkSpec &l, const char *name)
{
  if (l.rate.v <= 0)
    {
      Invalid (std::string ("topology.") + name + ": rate must be positive");
    }
  if (l.propagation.v < 0)
    {
      Invalid (std::string ("topology.") + name + ": negative propagation");
    }
}

void
CheckBank (const BankSpec &b, const Scenario &s, const char *name)
{
  QueueBank probe (b, name);
  if (b.queueCap <= 0)
    {
      Invalid (std::string ("banks.") + name + ": queue_cap must be positive");
    }
  std::set<TnClass> needed;
  if (s.model == Model::Lin)
    {
      needed = {TnClass::A, TnClass::B};
    }
  else
    {
      for (const auto &e : s.mapping.Entries ())
        {
          needed.insert (e.tnClass);
        }
      if (s.model == Model::Ietf)
        {
          needed.insert (TnClass::D);
        }
    }
  for (TnClass c : needed)
    {
      if (probe.QueueFor (c) == nullptr)
        {
          Invalid (std::string ("banks.") + name + ": no queue for TN class " + ToChar (c));
        }
    }
}

void
CheckLeafBursts (const PolicerTree &tree, Bytes frame)
{
  for (int l : tree.Leaves ())
    {
      const auto &n = tree.At (l);
      if (n.cir.Capacity () < frame || n.pir.Capacity () < frame)
        {
          Invalid ("policer leaf " + n.name + ": CBS and PBS must hold at least one frame");
        }
    }
}

} // namespace

void
Scenario::Validate () const
{
  if (duration.v <= 0)
    {
      Invalid ("duration must be positive");
    }
  if (sampleInterval.v <= 0)
    {
      Invalid ("sample interval must be positive");
    }
  CheckLink (topology.gnbPe1, "gnb_pe1");
  CheckLink (topology.pe1P, "pe1_p");
  CheckLink (topology.pPe2, "p_pe2");
  CheckLink (topology.pe2Upf, "pe2_upf");
  if (topology.gnbQueueCap <= 0)
    {
      Invalid ("topology.gnb_queue_cap must be positive");
    }
  mapping.Validate ();

  std::set<std::string> names;
  for (const auto &f : flows)
    {
      if (f.name.empty () || !names.insert (f.name).second)
        {
          Invalid ("flows: empty or duplicate flow name '" + f.name + "'");
        }
      mapping.MapToTnClass ({f.slice, f.cls});
      if (f.frame.v <= 0)
        {
          Invalid ("flow " + f.name + ": frame size must be positive");
        }
      if (f.cbr.v < 0)
        {
          Invalid ("flow " + f.name + ": negative rate");
        }
      for (auto [a, b] : f.schedule)
        {
          if (a.v < 0 || b <= a)
            {
              Invalid ("schedule of " + f.name + ": periods need 0 <= start < stop");
            }
        }
      if (!f.schedule.empty () && f.cbr.v == 0)
        {
          Invalid ("flow " + f.name + ": scheduled with zero rate");
        }
      if (f.jitter.v < 0 || (f.jitter.v > 0 && f.cbr.v > 0 && !(f.jitter < TxTime (f.frame, f.cbr))))
        {
          Invalid ("flow " + f.name + ": jitter must be non-negative and below the emission interval");
        }
      if (f.burst)
        {
          const auto &b = *f.burst;
          if (b.size.v <= 0 || b.period.v <= 0 || b.firstAt.v < 0 || b.until < b.firstAt || b.pace.v < 0)
            {
              Invalid ("flow " + f.name + ": burst needs positive size and period, first_at <= until");
            }
          std::int64_t frames = (b.size.v + f.frame.v - 1) / f.frame.v;
          if (b.pace.v > 0 && !(GridOffset (frames, f.frame, b.pace) < b.period))
            {
              Invalid ("flow " + f.name + ": paced burst lasts longer than its period");
            }
        }
    }

  switch (model)
    {
    case Model::Hctns:
      {
        PolicerTree tree = PolicerTree::Build (hctns);
        for (const auto &e : mapping.Entries ())
          {
            tree.LeafIndex ({e.slice, e.cls});
          }
        CheckLeafBursts (tree, MaxFrame ());
        break;
      }
    case Model::Ietf:
      {
        std::set<std::string> seen;
        for (const auto &sp : ietf)
          {
            if (!seen.insert (sp.slice).second)
              {
                Invalid ("policer: slice " + sp.slice + " configured twice");
              }
            mapping.VlanOf (sp.slice);
            if (sp.trtcm.pir < sp.trtcm.cir || sp.trtcm.cbs.v <= 0 || sp.trtcm.pbs.v <= 0)
              {
                Invalid ("policer slice " + sp.slice + ": need PIR >= CIR and positive CBS/PBS");
              }
            for (const auto &c : sp.classes)
              {
                mapping.MapToTnClass ({sp.slice, c.cls});
                if (c.cbs.v <= 0)
                  {
                    Invalid ("policer class " + sp.slice + "/" + c.cls + ": CBS must be positive");
                  }
              }
          }
        for (const auto &sv : mapping.Slices ())
          {
            if (!seen.count (sv.slice))
              {
                Invalid ("policer: slice " + sv.slice + " has no slice policer");
              }
          }
        break;
      }
    case Model::Lin:
      {
        std::set<ClassKey> seen;
        for (const auto &lp : lin)
          {
            mapping.MapToTnClass ({lp.slice, lp.cls});
            if (!seen.insert ({lp.slice, lp.cls}).second)
              {
                Invalid ("policer: flow policer " + lp.slice + "/" + lp.cls + " configured twice");
              }
            if (lp.trtcm && (lp.trtcm->pir < lp.trtcm->cir || lp.trtcm->cbs.v <= 0 || lp.trtcm->pbs.v <= 0))
              {
                Invalid ("policer " + lp.slice + "/" + lp.cls + ": need PIR >= CIR and positive CBS/PBS");
              }
          }
        for (const auto &e : mapping.Entries ())
          {
            if (!seen.count ({e.slice, e.cls}))
              {
                Invalid ("policer: class " + e.slice + "/" + e.cls + " has no flow policer");
              }
          }
        break;
      }
    }
  CheckBank (banks.pe1, *this, "pe1");
  CheckBank (banks.p, *this, "p");
  if (banks.pe2.queueCap <= 0 || banks.pe2.defaultQuantum.v <= 0)
    {
      Invalid ("banks.pe2: queue_cap and default_quantum must be positive");
    }
}

// ---------------------------------------------------------------------------
// JSON reading

namespace {

[[noreturn]] void
Bad (const std::string &path, const std::string &what)
{
  throw Error (ErrorCode::ParseError, path + ": " + what);
}

const json &
Req (const json &obj, const char *key, const std::string &path)
{
  if (!obj.is_object ())
    {
      Bad (path, "expected an object");
    }
  auto it = obj.find (key);
  if (it == obj.end ())
    {
      Bad (path.empty () ? key : path + "." + key, "missing field");
    }
  return *it;
}

double
Num (const json &v, const std::string &path)
{
  if (!v.is_number ())
    {
      Bad (path, "expected a number");
    }
  return v.get<double> ();
}

std::int64_t
Int (const json &v, const std::string &path)
{
  if (!v.is_number_integer () && !v.is_number_unsigned ())
    {
      if (v.is_number_float () && std::floor (v.get<double> ()) == v.get<double> ())
        {
          return static_cast<std::int64_t> (v.get<double> ());
        }
      Bad (path, "expected an integer");
    }
  return v.get<std::int64_t> ();
}

std::string
Str (const json &v, const std::string &path)
{
  if (!v.is_string ())
    {
      Bad (path, "expected a string");
    }
  return v.get<std::string> ();
}

std::string
Sub (const std::string &path, const char *key)
{
  return path.empty () ? key : path + "." + key;
}

std::string
Idx (const std::string &path, std::size_t i)
{
  return path + "[" + std::to_string (i) + "]";
}

double
OptNum (const json &obj, const char *key, const std::string &path, double dflt)
{
  auto it = obj.find (key);
  return it == obj.end () ? dflt : Num (*it, Sub (path, key));
}

std::int64_t
OptInt (const json &obj, const char *key, const std::string &path, std::int64_t dflt)
{
  auto it = obj.find (key);
  return it == obj.end () ? dflt : Int (*it, Sub (path, key));
}

const json &
Arr (const json &v, const std::string &path)
{
  if (!v.is_array ())
    {
      Bad (path, "expected an array");
    }
  return v;
}

LinkSpec
ReadLink (const json &t, const char *key, const std::string &path, LinkSpec dflt)
{
  auto it = t.find (key);
  if (it == t.end ())
    {
      return dflt;
    }
  std::string p = Sub (path, key);
  LinkSpec l;
  l.rate = Mbps (Num (Req (*it, "rate_mbps", p), Sub (p, "rate_mbps")));
  l.propagation = Time (std::llround (OptNum (*it, "propagation_us", p, 0) * 1000));
  return l;
}

PolicerNodeSpec
ReadNode (const json &j, const std::string &path)
{
  PolicerNodeSpec n;
  n.name = Str (Req (j, "name", path), Sub (path, "name"));
  n.cir = Mbps (Num (Req (j, "cir_mbps", path), Sub (path, "cir_mbps")));
  n.pir = Mbps (OptNum (j, "pir_mbps", path, ToMbps (n.cir)));
  n.cbs = Bytes (OptInt (j, "cbs_bytes", path, kDefaultFrame.v));
  n.pbs = Bytes (OptInt (j, "pbs_bytes", path, kDefaultFrame.v));
  if (j.contains ("quantum_bytes"))
    {
      n.quantum = Bytes (Int (j["quantum_bytes"], Sub (path, "quantum_bytes")));
    }
  if (j.contains ("priority"))
    {
      n.priority = static_cast<int> (Int (j["priority"], Sub (path, "priority")));
    }
  n.queueCap = static_cast<int> (OptInt (j, "queue_cap", path, kDefaultQueueCap));
  if (j.contains ("children"))
    {
      std::string cp = Sub (path, "children");
      const json &cs = Arr (j["children"], cp);
      for (std::size_t i = 0; i < cs.size (); ++i)
        {
          n.children.push_back (ReadNode (cs[i], Idx (cp, i)));
        }
    }
  return n;
}

TrTcmConfig
ReadTrTcm (const json &j, const std::string &path)
{
  TrTcmConfig c;
  c.cir = Mbps (Num (Req (j, "cir_mbps", path), Sub (path, "cir_mbps")));
  c.pir = Mbps (OptNum (j, "pir_mbps", path, ToMbps (c.cir)));
  c.cbs = Bytes (OptInt (j, "cbs_bytes", path, kDefaultFrame.v));
  c.pbs = Bytes (OptInt (j, "pbs_bytes", path, kDefaultFrame.v));
  return c;
}

TnClass
ReadTn (const json &v, const std::string &path)
{
  try
    {
      return TnClassFromString (Str (v, path));
    }
  catch (const Error &)
    {
      Bad (path, "expected one of A, B, C, D");
    }
}

BankSpec
ReadBank (const json &j, const std::string &path)
{
  BankSpec b;
  b.priority.clear ();
  b.drr.clear ();
  if (j.contains ("priority"))
    {
      std::string p = Sub (path, "priority");
      const json &a = Arr (j["priority"], p);
      for (std::size_t i = 0; i < a.size (); ++i)
        {
          std::string ip = Idx (p, i);
          PriorityLevel lvl;
          lvl.cls = ReadTn (Req (a[i], "class", ip), Sub (ip, "class"));
          lvl.label = a[i].contains ("label") ? Str (a[i]["label"], Sub (ip, "label")) : "";
          b.priority.push_back (lvl);
        }
    }
  if (j.contains ("drr"))
    {
      std::string p = Sub (path, "drr");
      const json &a = Arr (j["drr"], p);
      for (std::size_t i = 0; i < a.size (); ++i)
        {
          std::string ip = Idx (p, i);
          b.drr.emplace_back (ReadTn (Req (a[i], "class", ip), Sub (ip, "class")),
                              Bytes (Int (Req (a[i], "quantum_bytes", ip), Sub (ip, "quantum_bytes"))));
        }
    }
  b.queueCap = static_cast<int> (OptInt (j, "queue_cap", path, kDefaultQueueCap));
  if (j.contains ("fallback"))
    {
      b.fallback = ReadTn (j["fallback"], Sub (path, "fallback"));
    }
  return b;
}

HierBankSpec
ReadHier (const json &j, const std::string &path)
{
  HierBankSpec h;
  h.defaultQuantum = Bytes (OptInt (j, "default_quantum_bytes", path, kDefaultFrame.v));
  h.queueCap = static_cast<int> (OptInt (j, "queue_cap", path, kDefaultQueueCap));
  if (j.contains ("slices"))
    {
      std::string p = Sub (path, "slices");
      const json &a = Arr (j["slices"], p);
      for (std::size_t i = 0; i < a.size (); ++i)
        {
          std::string ip = Idx (p, i);
          h.sliceQuantum[Str (Req (a[i], "slice", ip), Sub (ip, "slice"))]
            = Bytes (Int (Req (a[i], "quantum_bytes", ip), Sub (ip, "quantum_bytes")));
        }
    }
  if (j.contains ("classes"))
    {
      std::string p = Sub (path, "classes");
      const json &a = Arr (j["classes"], p);
      for (std::size_t i = 0; i < a.size (); ++i)
        {
          std::string ip = Idx (p, i);
          ClassKey k{Str (Req (a[i], "slice", ip), Sub (ip, "slice")),
                     Str (Req (a[i], "class", ip), Sub (ip, "class"))};
          h.classQuantum[k] = Bytes (Int (Req (a[i], "quantum_bytes", ip), Sub (ip, "quantum_bytes")));
        }
    }
  return h;
}

Time
Secs (const json &v, const std::string &path)
{
  return Seconds (Num (v, path));
}

Scenario
FromJson (const json &root)
{
  Scenario s;
  if (!root.is_object ())
    {
      Bad ("<root>", "expected an object");
    }
  s.name = root.contains ("name") ? Str (root["name"], "name") : "scenario";
  s.model = ModelFromString (Str (Req (root, "model", ""), "model"));
  s.duration = Secs (Req (root, "duration_s", ""), "duration_s");
  s.sampleInterval = root.contains ("sample_interval_s") ? Secs (root["sample_interval_s"], "sample_interval_s")
                                                         : Seconds (1);
  if (root.contains ("raw_latency"))
    {
      if (!root["raw_latency"].is_boolean ())
        {
          Bad ("raw_latency", "expected true or false");
        }
      s.rawLatency = root["raw_latency"].get<bool> ();
    }
  s.seed = static_cast<std::uint64_t> (OptInt (root, "seed", "", 1));

  if (root.contains ("topology"))
    {
      const json &t = root["topology"];
      TopologySpec d;
      s.topology.gnbPe1 = ReadLink (t, "gnb_pe1", "topology", d.gnbPe1);
      s.topology.pe1P = ReadLink (t, "pe1_p", "topology", d.pe1P);
      s.topology.pPe2 = ReadLink (t, "p_pe2", "topology", d.pPe2);
      s.topology.pe2Upf = ReadLink (t, "pe2_upf", "topology", d.pe2Upf);
      s.topology.gnbQueueCap = static_cast<int> (OptInt (t, "gnb_queue_cap", "topology", d.gnbQueueCap));
    }

  {
    const json &m = Req (root, "mapping", "");
    std::vector<SliceVlan> slices;
    const json &sa = Arr (Req (m, "slices", "mapping"), "mapping.slices");
    for (std::size_t i = 0; i < sa.size (); ++i)
      {
        std::string ip = Idx ("mapping.slices", i);
        slices.push_back ({Str (Req (sa[i], "slice", ip), Sub (ip, "slice")),
                           static_cast<VlanId> (Int (Req (sa[i], "vlan", ip), Sub (ip, "vlan")))});
      }
    std::vector<QosMapEntry> entries;
    const json &ca = Arr (Req (m, "classes", "mapping"), "mapping.classes");
    for (std::size_t i = 0; i < ca.size (); ++i)
      {
        std::string ip = Idx ("mapping.classes", i);
        QosMapEntry e;
        e.slice = Str (Req (ca[i], "slice", ip), Sub (ip, "slice"));
        e.cls = Str (Req (ca[i], "class", ip), Sub (ip, "class"));
        e.fiveQi = static_cast<int> (OptInt (ca[i], "five_qi", ip, 0));
        std::int64_t dscp = Int (Req (ca[i], "dscp", ip), Sub (ip, "dscp"));
        if (dscp < 0 || dscp > 63)
          {
            Bad (Sub (ip, "dscp"), "must be within 0..63");
          }
        e.dscpIn = static_cast<Dscp> (dscp);
        e.tnClass = ReadTn (Req (ca[i], "tn_class", ip), Sub (ip, "tn_class"));
        if (ca[i].contains ("default"))
          {
            e.isDefault = ca[i]["default"].get<bool> ();
          }
        entries.push_back (e);
      }
    s.mapping = QosMap (std::move (slices), std::move (entries));
  }

  {
    const json &p = Req (root, "policer", "");
    switch (s.model)
      {
      case Model::Hctns:
        // An absent root is left for validation to report as MissingGlobal.
        if (p.contains ("global") && !p.at ("global").is_null ())
          {
            s.hctns.global = ReadNode (p.at ("global"), "policer.global");
          }
        break;
      case Model::Ietf:
        {
          const json &a = Arr (Req (p, "slices", "policer"), "policer.slices");
          for (std::size_t i = 0; i < a.size (); ++i)
            {
              std::string ip = Idx ("policer.slices", i);
              IetfSlicePolicer sp;
              sp.slice = Str (Req (a[i], "slice", ip), Sub (ip, "slice"));
              sp.trtcm = ReadTrTcm (a[i], ip);
              if (a[i].contains ("classes"))
                {
                  std::string cp = Sub (ip, "classes");
                  const json &ca = Arr (a[i]["classes"], cp);
                  for (std::size_t k = 0; k < ca.size (); ++k)
                    {
                      std::string kp = Idx (cp, k);
                      IetfClassPolicer c;
                      c.cls = Str (Req (ca[k], "class", kp), Sub (kp, "class"));
                      c.cir = Mbps (Num (Req (ca[k], "cir_mbps", kp), Sub (kp, "cir_mbps")));
                      c.cbs = Bytes (OptInt (ca[k], "cbs_bytes", kp, kDefaultFrame.v));
                      sp.classes.push_back (c);
                    }
                }
              s.ietf.push_back (sp);
            }
          break;
        }
      case Model::Lin:
        {
          const json &a = Arr (Req (p, "flows", "policer"), "policer.flows");
          for (std::size_t i = 0; i < a.size (); ++i)
            {
              std::string ip = Idx ("policer.flows", i);
              LinFlowPolicer lp;
              lp.slice = Str (Req (a[i], "slice", ip), Sub (ip, "slice"));
              lp.cls = Str (Req (a[i], "class", ip), Sub (ip, "class"));
              bool be = a[i].contains ("best_effort") && a[i]["best_effort"].get<bool> ();
              if (!be)
                {
                  lp.trtcm = ReadTrTcm (a[i], ip);
                }
              s.lin.push_back (lp);
            }
          break;
        }
      }
  }

  if (root.contains ("banks"))
    {
      const json &b = root["banks"];
      if (b.contains ("pe1"))
        {
          s.banks.pe1 = ReadBank (b["pe1"], "banks.pe1");
        }
      if (b.contains ("p"))
        {
          s.banks.p = ReadBank (b["p"], "banks.p");
        }
      if (b.contains ("pe2"))
        {
          s.banks.pe2 = ReadHier (b["pe2"], "banks.pe2");
        }
    }

  const json &fa = Arr (Req (root, "flows", ""), "flows");
  for (std::size_t i = 0; i < fa.size (); ++i)
    {
      std::string ip = Idx ("flows", i);
      FlowSpec f;
      f.name = Str (Req (fa[i], "name", ip), Sub (ip, "name"));
      f.slice = Str (Req (fa[i], "slice", ip), Sub (ip, "slice"));
      f.cls = Str (Req (fa[i], "class", ip), Sub (ip, "class"));
      f.cbr = Mbps (OptNum (fa[i], "cbr_mbps", ip, 0));
      f.frame = Bytes (OptInt (fa[i], "frame_bytes", ip, kDefaultFrame.v));
      f.jitter = Time (std::llround (OptNum (fa[i], "jitter_us", ip, 0) * 1000));
      if (fa[i].contains ("burst"))
        {
          std::string bp = Sub (ip, "burst");
          const json &b = fa[i]["burst"];
          BurstSpec bs;
          bs.size = Bytes (Int (Req (b, "size_bytes", bp), Sub (bp, "size_bytes")));
          bs.period = Secs (Req (b, "period_s", bp), Sub (bp, "period_s"));
          bs.firstAt = Secs (Req (b, "first_at_s", bp), Sub (bp, "first_at_s"));
          bs.until = Secs (Req (b, "until_s", bp), Sub (bp, "until_s"));
          bs.pace = Mbps (OptNum (b, "pace_mbps", bp, 0));
          f.burst = bs;
        }
      s.flows.push_back (f);
    }

  if (root.contains ("schedule"))
    {
      const json &sc = root["schedule"];
      if (!sc.is_object ())
        {
          Bad ("schedule", "expected an object keyed by flow name");
        }
      for (auto it = sc.begin (); it != sc.end (); ++it)
        {
          std::string p = "schedule." + it.key ();
          FlowSpec *flow = nullptr;
          for (auto &f : s.flows)
            {
              if (f.name == it.key ())
                {
                  flow = &f;
                }
            }
          if (flow == nullptr)
            {
              Bad (p, "no flow with this name");
            }
          const json &periods = Arr (it.value (), p);
          for (std::size_t i = 0; i < periods.size (); ++i)
            {
              std::string ip = Idx (p, i);
              const json &pr = Arr (periods[i], ip);
              if (pr.size () != 2)
                {
                  Bad (ip, "expected [start_s, stop_s]");
                }
              flow->schedule.emplace_back (Secs (pr[0], ip), Secs (pr[1], ip));
            }
        }
    }
  return s;
}

// ---------------------------------------------------------------------------
// JSON writing

json
NodeJson (const PolicerNodeSpec &n)
{
  json j = {{"name", n.name},
            {"cir_mbps", ToMbps (n.cir)},
            {"pir_mbps", ToMbps (n.pir)},
            {"cbs_bytes", n.cbs.v},
            {"pbs_bytes", n.pbs.v}};
  if (n.quantum)
    {
      j["quantum_bytes"] = n.quantum->v;
    }
  if (n.priority)
    {
      j["priority"] = *n.priority;
    }
  if (n.queueCap != kDefaultQueueCap)
    {
      j["queue_cap"] = n.queueCap;
    }
  if (!n.children.empty ())
    {
      j["children"] = json::array ();
      for (const auto &c : n.children)
        {
          j["children"].push_back (NodeJson (c));
        }
    }
  return j;
}

json
TrTcmJson (const TrTcmConfig &c)
{
  return {{"cir_mbps", ToMbps (c.cir)},
          {"pir_mbps", ToMbps (c.pir)},
          {"cbs_bytes", c.cbs.v},
          {"pbs_bytes", c.pbs.v}};
}

json
BankJson (const BankSpec &b)
{
  json j = {{"priority", json::array ()}, {"drr", json::array ()}, {"queue_cap", b.queueCap}};
  for (const auto &p : b.priority)
    {
      json e = {{"class", std::string (1, ToChar (p.cls))}};
      if (!p.label.empty ())
        {
          e["label"] = p.label;
        }
      j["priority"].push_back (e);
    }
  for (const auto &[c, q] : b.drr)
    {
      j["drr"].push_back ({{"class", std::string (1, ToChar (c))}, {"quantum_bytes", q.v}});
    }
  if (b.fallback)
    {
      j["fallback"] = std::string (1, ToChar (*b.fallback));
    }
  return j;
}

json
LinkJson (const LinkSpec &l)
{
  return {{"rate_mbps", ToMbps (l.rate)}, {"propagation_us", l.propagation.v / 1000.0}};
}

} // namespace

Scenario
ParseScenario (const std::string &text, const std::string &origin)
{
  json root;
  try
    {
      root = json::parse (text);
    }
  catch (const json::parse_error &e)
    {
      // Report the failing line rather than the byte offset.
      std::size_t line = 1;
      for (std::size_t i = 0; i < e.byte && i < text.size (); ++i)
        {
          line += text[i] == '\n';
        }
      throw Error (ErrorCode::ParseError, origin + ":" + std::to_string (line) + ": " + e.what ());
    }
  Scenario s;
  try
    {
      s = FromJson (root);
    }
  catch (const json::exception &e)
    {
      throw Error (ErrorCode::ParseError, origin + ": " + e.what ());
    }
  catch (const Error &e)
    {
      if (e.Code () == ErrorCode::ParseError)
        {
          throw Error (ErrorCode::ParseError, origin + ": " + e.what ());
        }
      throw;
    }
  s.Validate ();
  return s;
}

Scenario
LoadScenario (const std::string &path)
{
  std::ifstream in (path);
  if (!in)
    {
      throw Error (ErrorCode::IoError, "cannot read " + path);
    }
  std::stringstream ss;
  ss << in.rdbuf ();
  return ParseScenario (ss.str (), path);
}

std::string
DumpScenario (const Scenario &s)
{
  json j;
  j["name"] = s.name;
  j["model"] = ToString (s.model);
  j["duration_s"] = ToSeconds (s.duration);
  j["sample_interval_s"] = ToSeconds (s.sampleInterval);
  j["raw_latency"] = s.rawLatency;
  j["seed"] = s.seed;
  j["topology"] = {{"gnb_pe1", LinkJson (s.topology.gnbPe1)},
                   {"pe1_p", LinkJson (s.topology.pe1P)},
                   {"p_pe2", LinkJson (s.topology.pPe2)},
                   {"pe2_upf", LinkJson (s.topology.pe2Upf)},
                   {"gnb_queue_cap", s.topology.gnbQueueCap}};

  json slices = json::array ();
  for (const auto &sv : s.mapping.Slices ())
    {
      slices.push_back ({{"slice", sv.slice}, {"vlan", sv.vlan}});
    }
  json classes = json::array ();
  for (const auto &e : s.mapping.Entries ())
    {
      json c = {{"slice", e.slice},
                {"class", e.cls},
                {"five_qi", e.fiveQi},
                {"dscp", e.dscpIn},
                {"tn_class", std::string (1, ToChar (e.tnClass))}};
      if (e.isDefault)
        {
          c["default"] = true;
        }
      classes.push_back (c);
    }
  j["mapping"] = {{"slices", slices}, {"classes", classes}};

  switch (s.model)
    {
    case Model::Hctns:
      j["policer"] = {{"global", s.hctns.global ? NodeJson (*s.hctns.global) : json ()}};
      break;
    case Model::Ietf:
      {
        json a = json::array ();
        for (const auto &sp : s.ietf)
          {
            json e = TrTcmJson (sp.trtcm);
            e["slice"] = sp.slice;
            if (!sp.classes.empty ())
              {
                e["classes"] = json::array ();
                for (const auto &c : sp.classes)
                  {
                    e["classes"].push_back ({{"class", c.cls}, {"cir_mbps", ToMbps (c.cir)}, {"cbs_bytes", c.cbs.v}});
                  }
              }
            a.push_back (e);
          }
        j["policer"] = {{"slices", a}};
        break;
      }
    case Model::Lin:
      {
        json a = json::array ();
        for (const auto &lp : s.lin)
          {
            json e = lp.trtcm ? TrTcmJson (*lp.trtcm) : json ({{"best_effort", true}});
            e["slice"] = lp.slice;
            e["class"] = lp.cls;
            a.push_back (e);
          }
        j["policer"] = {{"flows", a}};
        break;
      }
    }

  json pe2 = {{"default_quantum_bytes", s.banks.pe2.defaultQuantum.v},
              {"queue_cap", s.banks.pe2.queueCap},
              {"slices", json::array ()},
              {"classes", json::array ()}};
  for (const auto &[slice, q] : s.banks.pe2.sliceQuantum)
    {
      pe2["slices"].push_back ({{"slice", slice}, {"quantum_bytes", q.v}});
    }
  for (const auto &[k, q] : s.banks.pe2.classQuantum)
    {
      pe2["classes"].push_back ({{"slice", k.slice}, {"class", k.cls}, {"quantum_bytes", q.v}});
    }
  j["banks"] = {{"pe1", BankJson (s.banks.pe1)}, {"p", BankJson (s.banks.p)}, {"pe2", pe2}};

  json flows = json::array ();
  json schedule = json::object ();
  for (const auto &f : s.flows)
    {
      json e = {{"name", f.name},
                {"slice", f.slice},
                {"class", f.cls},
                {"cbr_mbps", ToMbps (f.cbr)},
                {"frame_bytes", f.frame.v}};
      if (f.jitter.v > 0)
        {
          e["jitter_us"] = static_cast<double> (f.jitter.v) / 1000.0;
        }
      if (f.burst)
        {
          e["burst"] = {{"size_bytes", f.burst->size.v},
                        {"period_s", ToSeconds (f.burst->period)},
                        {"first_at_s", ToSeconds (f.burst->firstAt)},
                        {"until_s", ToSeconds (f.burst->until)},
                        {"pace_mbps", ToMbps (f.burst->pace)}};
        }
      flows.push_back (e);
      json periods = json::array ();
      for (auto [a, b] : f.schedule)
        {
          periods.push_back ({ToSeconds (a), ToSeconds (b)});
        }
      schedule[f.name] = periods;
    }
  j["flows"] = flows;
  j["schedule"] = schedule;
  return j.dump (2) + "\n";
}

} // namespace tnslice
