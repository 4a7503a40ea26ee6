#include "tnslice/presets.hpp"

namespace tnslice {

namespace {

constexpr Bytes kFrame (1538);
// Marker bucket depth where the scenario tables leave CBS/PBS open.
constexpr Bytes kMarkerBurst (15380);
constexpr Bytes kBurstBucket (50000);

PolicerNodeSpec
Node (const std::string &name, double cir, double pir, Bytes cbs = kFrame, Bytes pbs = kFrame)
{
  PolicerNodeSpec n;
  n.name = name;
  n.cir = Mbps (cir);
  n.pir = Mbps (pir);
  n.cbs = cbs;
  n.pbs = pbs;
  return n;
}

PolicerNodeSpec
Leaf (const std::string &name, double cir, double pir, Bytes bucket = kFrame)
{
  return Node (name, cir, pir, bucket, bucket);
}

PolicerSpec
HctnsTree (Bytes leafBucket)
{
  PolicerNodeSpec global = Node ("global", 100, 100);
  PolicerNodeSpec urllc = Leaf ("URLLC", 1.2, 100, leafBucket);
  PolicerNodeSpec tod = Node ("ToD", 36, 100);
  tod.children = {Leaf ("Video", 32, 100, leafBucket), Leaf ("Telemetry", 4, 100, leafBucket)};
  PolicerNodeSpec embb = Node ("eMBB", 52.8, 100);
  embb.children = {Leaf ("VC", 52.8, 100, leafBucket), Leaf ("BE", 0, 100)};
  global.children = {urllc, tod, embb};
  PolicerSpec spec;
  spec.global = global;
  return spec;
}

void
SetSharing (PolicerSpec &spec, const std::string &leaf, int priority, std::int64_t quantum)
{
  auto apply = [&] (PolicerNodeSpec &n) {
    if (n.name == leaf && n.children.empty ())
      {
        n.priority = priority;
        n.quantum = Bytes (quantum);
      }
  };
  for (auto &slice : spec.global->children)
    {
      apply (slice);
      for (auto &cls : slice.children)
        {
          apply (cls);
        }
    }
}

std::vector<IetfSlicePolicer>
IetfPolicers ()
{
  auto trtcm = [] (double cir, double pir) {
    return TrTcmConfig{Mbps (cir), Mbps (pir), kMarkerBurst, kMarkerBurst};
  };
  IetfSlicePolicer urllc{"URLLC", trtcm (1.2, 100), {}};
  // No best-effort class in this slice, so no peak above the committed rate.
  IetfSlicePolicer tod{"ToD", trtcm (36, 36),
                       {{"Video", Mbps (32), kMarkerBurst}, {"Telemetry", Mbps (4), kMarkerBurst}}};
  IetfSlicePolicer embb{"eMBB", trtcm (52.8, 100), {{"VC", Mbps (52.8), kMarkerBurst}}};
  return {urllc, tod, embb};
}

std::vector<LinFlowPolicer>
LinPolicers (Bytes cbs, Bytes pbs)
{
  auto trtcm = [&] (double cir) { return TrTcmConfig{Mbps (cir), Mbps (100), cbs, pbs}; };
  return {{"URLLC", "URLLC", trtcm (1.2)},
          {"ToD", "Video", trtcm (32)},
          {"ToD", "Telemetry", trtcm (4)},
          {"eMBB", "VC", trtcm (52.8)},
          {"eMBB", "BE", std::nullopt}};
}

FlowSpec
Flow (const std::string &name, const std::string &slice, const std::string &cls, double mbps,
      std::vector<std::pair<double, double>> periods)
{
  FlowSpec f;
  f.name = name;
  f.slice = slice;
  f.cls = cls;
  f.cbr = Mbps (mbps);
  f.frame = kFrame;
  for (auto [a, b] : periods)
    {
      f.schedule.emplace_back (Seconds (a), Seconds (b));
    }
  return f;
}

// Six intervals: [0,20) BE; [20,40) +video, telemetry; [40,60) all;
// [60,70) all but video; [70,80) BE, telemetry, URLLC; [80,100) BE.
// Emissions carry up to 100 us of jitter so that equal-rate sources do not
// lock into a fixed arrival order at a saturated queue.
std::vector<FlowSpec>
SixIntervalFlows ()
{
  std::vector<FlowSpec> flows = {Flow ("URLLC", "URLLC", "URLLC", 100, {{40, 80}}),
                                 Flow ("Video", "ToD", "Video", 100, {{20, 60}}),
                                 Flow ("Telemetry", "ToD", "Telemetry", 100, {{20, 80}}),
                                 Flow ("VC", "eMBB", "VC", 100, {{40, 70}}),
                                 Flow ("BE", "eMBB", "BE", 100, {{0, 100}})};
  for (auto &f : flows)
    {
      f.jitter = Micros (100);
    }
  return flows;
}

BurstSpec
Burst (double period, double first, double until)
{
  return {Bytes (100000), Seconds (period), Seconds (first), Seconds (until), Mbps (100)};
}

// Background traffic well below each committed rate, periodic 100 KB bursts
// from t = 10 s, URLLC bursts ending at t = 45 s.
std::vector<FlowSpec>
BurstFlows ()
{
  FlowSpec urllc = Flow ("URLLC", "URLLC", "URLLC", 0.2, {{0, 60}});
  urllc.burst = Burst (1, 10, 45);
  FlowSpec video = Flow ("Video", "ToD", "Video", 8, {{0, 60}});
  video.burst = Burst (2, 10, 60);
  FlowSpec tele = Flow ("Telemetry", "ToD", "Telemetry", 1, {{0, 60}});
  tele.burst = Burst (5, 10, 60);
  FlowSpec vc = Flow ("VC", "eMBB", "VC", 13.2, {{0, 60}});
  vc.burst = Burst (5, 10, 60);
  FlowSpec be = Flow ("BE", "eMBB", "BE", 100, {{0, 60}});
  return {urllc, video, tele, vc, be};
}

Scenario
Base (const std::string &name, Model model, double duration)
{
  Scenario s;
  s.name = name;
  s.model = model;
  s.duration = Seconds (duration);
  s.mapping = StandardQosMap ();
  return s;
}

void
SetCoarse (Scenario &s, std::int64_t qb, std::int64_t qc, std::int64_t qd)
{
  s.banks.pe1 = CoarseBank (Bytes (qb), Bytes (qc), Bytes (qd));
  s.banks.p = s.banks.pe1;
}

void
SetLinBanks (Scenario &s)
{
  s.banks.pe1 = TwoPriorityBank ();
  s.banks.p = s.banks.pe1;
}

struct ExpBConf
{
  std::int64_t b, c, d;
};

const ExpBConf kExpB[4] = {{1538, 1538, 15380}, {1538, 15380, 1538}, {15380, 1538, 1538}, {15380, 10766, 1538}};

} // namespace

std::vector<std::string>
PresetNames ()
{
  std::vector<std::string> names = {"exp_a_hctns", "exp_a_ietf", "exp_a_lin", "exp_a_hctns_prio"};
  for (int c = 1; c <= 4; ++c)
    {
      names.push_back ("exp_b_conf" + std::to_string (c) + "_hctns");
      names.push_back ("exp_b_conf" + std::to_string (c) + "_ietf");
    }
  names.push_back ("exp_c_hctns_conf1");
  names.push_back ("exp_c_hctns_conf2");
  names.push_back ("exp_c_lin");
  return names;
}

Scenario
MakePreset (const std::string &name)
{
  if (name == "exp_a_hctns" || name == "exp_a_hctns_prio")
    {
      Scenario s = Base (name, Model::Hctns, 100);
      s.hctns = HctnsTree (kFrame);
      if (name == "exp_a_hctns_prio")
        {
          SetSharing (s.hctns, "URLLC", 0, 18456);
          SetSharing (s.hctns, "Video", 0, 15380);
          SetSharing (s.hctns, "Telemetry", 0, 3076);
          SetSharing (s.hctns, "VC", 7, 12304);
          SetSharing (s.hctns, "BE", 7, 6152);
        }
      SetCoarse (s, 1538, 1538, 1538);
      s.flows = SixIntervalFlows ();
      return s;
    }
  if (name == "exp_a_ietf")
    {
      Scenario s = Base (name, Model::Ietf, 100);
      s.ietf = IetfPolicers ();
      SetCoarse (s, 1538, 1538, 1538);
      s.flows = SixIntervalFlows ();
      return s;
    }
  if (name == "exp_a_lin")
    {
      Scenario s = Base (name, Model::Lin, 100);
      s.lin = LinPolicers (kMarkerBurst, kMarkerBurst);
      SetLinBanks (s);
      s.flows = SixIntervalFlows ();
      return s;
    }
  for (int c = 1; c <= 4; ++c)
    {
      std::string stem = "exp_b_conf" + std::to_string (c) + "_";
      if (name != stem + "hctns" && name != stem + "ietf")
        {
          continue;
        }
      bool hctns = name == stem + "hctns";
      Scenario s = Base (name, hctns ? Model::Hctns : Model::Ietf, 100);
      if (hctns)
        {
          s.hctns = HctnsTree (kFrame);
        }
      else
        {
          s.ietf = IetfPolicers ();
        }
      const ExpBConf &q = kExpB[c - 1];
      SetCoarse (s, q.b, q.c, q.d);
      s.flows = SixIntervalFlows ();
      return s;
    }
  if (name == "exp_c_hctns_conf1" || name == "exp_c_hctns_conf2")
    {
      Scenario s = Base (name, Model::Hctns, 60);
      s.hctns = HctnsTree (kBurstBucket);
      if (name == "exp_c_hctns_conf1")
        {
          SetCoarse (s, 1538, 1538, 1538);
        }
      else
        {
          SetCoarse (s, 15380, 10766, 1538);
        }
      s.flows = BurstFlows ();
      return s;
    }
  if (name == "exp_c_lin")
    {
      Scenario s = Base (name, Model::Lin, 60);
      s.lin = LinPolicers (kBurstBucket, kFrame);
      SetLinBanks (s);
      s.flows = BurstFlows ();
      return s;
    }
  throw Error (ErrorCode::ValidationError, "unknown preset '" + name + "'");
}

} // namespace tnslice
