#ifndef TNSLICE_ENGINE_HPP
#define TNSLICE_ENGINE_HPP

#include "tnslice/metrics.hpp"
#include "tnslice/scenario.hpp"

#include <string>
#include <vector>

namespace tnslice {

struct NodeCount
{
  std::string node;
  std::uint64_t in = 0;
  std::uint64_t out = 0;
  std::uint64_t dropped = 0;
  std::uint64_t resident = 0;

  bool Balanced () const { return in == out + dropped + resident; }
};

struct RunResult
{
  MetricsStore metrics;
  std::vector<NodeCount> nodes;
  std::uint64_t events = 0;
  std::uint64_t generated = 0;
  // Largest number of packets held by the PE1 egress bank at any instant.
  std::size_t pe1PeakOccupancy = 0;
};

// Emission instants of one flow's generator within [from, upto), in order.
std::vector<Time> EmissionTimes (const FlowSpec &flow, Time from, Time upto, std::uint64_t seed = 1);

// Validates the scenario, then runs it to scenario.duration.
RunResult Simulate (const Scenario &scenario);
MetricsStore Run (const Scenario &scenario);

} // namespace tnslice

#endif
