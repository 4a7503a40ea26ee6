#ifndef TNSLICE_METRICS_HPP
#define TNSLICE_METRICS_HPP

#include "tnslice/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace tnslice {

enum class ExportFormat { Csv, Json };

struct LatencySample
{
  Time at;
  std::string flow;
  double ms = 0;
};

// Per-window observables. Windows are [k*w, (k+1)*w) for k in [0, windows).
class MetricsStore
{
public:
  using SeriesMap = std::map<std::string, std::vector<double>>;

  MetricsStore () = default;
  MetricsStore (std::string scenario, Time window, int windows, bool keepRaw = false);

  void AddFlow (const std::string &flow);
  void AddQueue (const std::string &queue);

  // Sub-series of a flow (per color) pass primary = false so that totals and
  // raw samples count each packet once.
  void RecordDelivery (const std::string &flow, const Packet &pkt, Time now, bool primary = true);
  void RecordQueueSample (const std::string &queue, int window, std::uint64_t cumulativeDrops,
                          std::size_t occupancy);

  const std::string &Scenario () const { return m_scenario; }
  Time Window () const { return m_window; }
  int Windows () const { return m_windows; }
  double WindowStart (int k) const { return ToSeconds (m_window) * k; }

  // Mbps per window.
  const SeriesMap &Throughput () const { return m_throughput; }
  // Milliseconds per window; zero where nothing was delivered.
  const SeriesMap &LatencyMax () const { return m_latMax; }
  const SeriesMap &LatencyMean () const { return m_latMean; }
  // Cumulative drops at the end of each window.
  const SeriesMap &Loss () const { return m_loss; }
  // Packets resident at the end of each window.
  const SeriesMap &Occupancy () const { return m_occupancy; }
  const std::vector<LatencySample> &Raw () const { return m_raw; }

  std::int64_t DeliveredBytes (const std::string &flow) const;
  std::int64_t TotalDeliveredBytes () const { return m_totalBytes; }

  // Values over windows whose start lies in [from, to) seconds.
  std::vector<double> Slice (const SeriesMap &m, const std::string &id, double from, double to) const;

  static MetricsStore FromSeries (std::string scenario, Time window, int windows, SeriesMap thr,
                                  SeriesMap latMax, SeriesMap latMean, SeriesMap loss, SeriesMap occ);

private:
  int WindowOf (Time t) const;

  std::string m_scenario;
  Time m_window = Seconds (1);
  int m_windows = 0;
  bool m_keepRaw = false;
  SeriesMap m_throughput;
  SeriesMap m_latMax;
  SeriesMap m_latMean;
  SeriesMap m_loss;
  SeriesMap m_occupancy;
  std::map<std::string, std::vector<std::int64_t>> m_bytes;
  std::map<std::string, std::vector<std::int64_t>> m_count;
  std::map<std::string, std::vector<double>> m_latSum;
  std::vector<LatencySample> m_raw;
  std::int64_t m_totalBytes = 0;
};

extern const char *const kObservables[4];

std::string FormatFixed3 (double v);

// Writes `<scenario>_<observable>.<ext>` files (or one JSON document) into
// `dir`; returns the paths written. Throws Error(IoError).
std::vector<std::string> Export (const MetricsStore &store, ExportFormat format, const std::string &dir);

// Reads back what Export wrote.
MetricsStore ImportCsv (const std::string &dir, const std::string &scenario);
MetricsStore ImportJson (const std::string &path);

} // namespace tnslice

#endif
