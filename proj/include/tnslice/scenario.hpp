#ifndef TNSLICE_SCENARIO_HPP
#define TNSLICE_SCENARIO_HPP

#include "tnslice/markers.hpp"
#include "tnslice/model.hpp"
#include "tnslice/policer_htb.hpp"
#include "tnslice/sched.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tnslice {

enum class Model { Hctns, Ietf, Lin };

const char *ToString (Model m);
Model ModelFromString (const std::string &s);

struct LinkSpec
{
  Rate rate;
  Time propagation;
};

struct TopologySpec
{
  LinkSpec gnbPe1{Mbps (1000), Time (0)};
  LinkSpec pe1P{Mbps (100), Time (0)};
  LinkSpec pPe2{Mbps (1000), Time (0)};
  LinkSpec pe2Upf{Mbps (1000), Time (0)};
  int gnbQueueCap = 100000;
};

struct IetfClassPolicer
{
  std::string cls;
  Rate cir;
  Bytes cbs = kDefaultFrame;
};

struct IetfSlicePolicer
{
  std::string slice;
  TrTcmConfig trtcm;
  // Classes without an entry (best effort) are not rate limited per class.
  std::vector<IetfClassPolicer> classes;
};

struct LinFlowPolicer
{
  std::string slice;
  std::string cls;
  // Unset for best effort: always sent to the low-priority queue.
  std::optional<TrTcmConfig> trtcm;
};

struct BanksSpec
{
  BankSpec pe1 = CoarseBank (kDefaultFrame, kDefaultFrame, kDefaultFrame);
  BankSpec p = CoarseBank (kDefaultFrame, kDefaultFrame, kDefaultFrame);
  HierBankSpec pe2;
};

struct BurstSpec
{
  Bytes size;
  Time period;
  Time firstAt;
  Time until;
  // Source spacing of the frames inside one burst; zero stamps them together.
  Rate pace;
};

struct FlowSpec
{
  std::string name;
  std::string slice;
  std::string cls;
  Rate cbr;
  Bytes frame = kDefaultFrame;
  std::optional<BurstSpec> burst;
  // Each constant-rate emission is delayed by a pseudo-random amount in
  // [0, jitter) drawn from the scenario seed; offsets do not accumulate.
  Time jitter;
  // Active [start, stop) periods for the constant-rate part.
  std::vector<std::pair<Time, Time>> schedule;
};

struct Scenario
{
  std::string name = "scenario";
  Model model = Model::Hctns;
  TopologySpec topology;
  PolicerSpec hctns;
  std::vector<IetfSlicePolicer> ietf;
  std::vector<LinFlowPolicer> lin;
  BanksSpec banks;
  std::vector<FlowSpec> flows;
  QosMap mapping;
  Time duration = Seconds (100);
  Time sampleInterval = Seconds (1);
  bool rawLatency = false;
  std::uint64_t seed = 1;

  // Throws Error(ValidationError / CirSumExceeded / MissingGlobal ...).
  void Validate () const;
  Bytes MaxFrame () const;
};

// JSON scenario files; see docs/scenario-format.md.
Scenario LoadScenario (const std::string &path);
Scenario ParseScenario (const std::string &text, const std::string &origin = "<string>");
std::string DumpScenario (const Scenario &s);

} // namespace tnslice

#endif
