#include "tnslice/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace tnslice {

namespace fs = std::filesystem;
using nlohmann::json;

const char *const kObservables[4] = {"throughput", "latency", "loss", "occupancy"};

MetricsStore::MetricsStore (std::string scenario, Time window, int windows, bool keepRaw)
  : m_scenario (std::move (scenario)), m_window (window), m_windows (windows), m_keepRaw (keepRaw)
{
}

void
MetricsStore::AddFlow (const std::string &flow)
{
  std::size_t n = static_cast<std::size_t> (m_windows);
  m_throughput.try_emplace (flow, n, 0.0);
  m_latMax.try_emplace (flow, n, 0.0);
  m_latMean.try_emplace (flow, n, 0.0);
  m_bytes.try_emplace (flow, n, 0);
  m_count.try_emplace (flow, n, 0);
  m_latSum.try_emplace (flow, n, 0.0);
}

void
MetricsStore::AddQueue (const std::string &queue)
{
  std::size_t n = static_cast<std::size_t> (m_windows);
  m_loss.try_emplace (queue, n, 0.0);
  m_occupancy.try_emplace (queue, n, 0.0);
}

int
MetricsStore::WindowOf (Time t) const
{
  return static_cast<int> (t.v / m_window.v);
}

void
MetricsStore::RecordDelivery (const std::string &flow, const Packet &pkt, Time now, bool primary)
{
  int w = WindowOf (now);
  if (w < 0 || w >= m_windows)
    {
      return;
    }
  AddFlow (flow);
  if (primary)
    {
      m_totalBytes += pkt.size.v;
    }
  std::int64_t &bytes = m_bytes[flow][w];
  bytes += pkt.size.v;
  m_throughput[flow][w] = bytes * 8.0 / (ToSeconds (m_window) * 1e6);

  double ms = ToMillis (now - pkt.createdAt);
  std::int64_t &count = m_count[flow][w];
  double &sum = m_latSum[flow][w];
  count++;
  sum += ms;
  m_latMean[flow][w] = sum / count;
  double &mx = m_latMax[flow][w];
  mx = std::max (mx, ms);
  if (m_keepRaw && primary)
    {
      m_raw.push_back ({now, flow, ms});
    }
}

void
MetricsStore::RecordQueueSample (const std::string &queue, int window, std::uint64_t cumulativeDrops,
                                 std::size_t occupancy)
{
  if (window < 0 || window >= m_windows)
    {
      return;
    }
  AddQueue (queue);
  m_loss[queue][window] = static_cast<double> (cumulativeDrops);
  m_occupancy[queue][window] = static_cast<double> (occupancy);
}

std::int64_t
MetricsStore::DeliveredBytes (const std::string &flow) const
{
  auto it = m_bytes.find (flow);
  if (it == m_bytes.end ())
    {
      return 0;
    }
  std::int64_t sum = 0;
  for (auto b : it->second)
    {
      sum += b;
    }
  return sum;
}

std::vector<double>
MetricsStore::Slice (const SeriesMap &m, const std::string &id, double from, double to) const
{
  std::vector<double> out;
  auto it = m.find (id);
  if (it == m.end ())
    {
      return out;
    }
  for (int k = 0; k < m_windows; ++k)
    {
      double t = WindowStart (k);
      if (t >= from - 1e-9 && t < to - 1e-9)
        {
          out.push_back (it->second[k]);
        }
    }
  return out;
}

MetricsStore
MetricsStore::FromSeries (std::string scenario, Time window, int windows, SeriesMap thr, SeriesMap latMax,
                          SeriesMap latMean, SeriesMap loss, SeriesMap occ)
{
  MetricsStore s (std::move (scenario), window, windows);
  s.m_throughput = std::move (thr);
  s.m_latMax = std::move (latMax);
  s.m_latMean = std::move (latMean);
  s.m_loss = std::move (loss);
  s.m_occupancy = std::move (occ);
  return s;
}

std::string
FormatFixed3 (double v)
{
  char buf[64];
  double r = std::round (v * 1000.0) / 1000.0;
  if (r == 0.0)
    {
      r = 0.0;
    }
  std::snprintf (buf, sizeof buf, "%.3f", r);
  return buf;
}

namespace {

double
Round3 (double v)
{
  double r = std::round (v * 1000.0) / 1000.0;
  return r == 0.0 ? 0.0 : r;
}

std::ofstream
OpenOut (const fs::path &p)
{
  std::ofstream out (p, std::ios::binary | std::ios::trunc);
  if (!out)
    {
      throw Error (ErrorCode::IoError, "cannot write " + p.string ());
    }
  return out;
}

void
WriteSeries (std::ostream &out, const MetricsStore &s, const MetricsStore::SeriesMap &m,
             const MetricsStore::SeriesMap *extra)
{
  for (int k = 0; k < s.Windows (); ++k)
    {
      std::string t = FormatFixed3 (s.WindowStart (k));
      for (const auto &[id, values] : m)
        {
          out << t << ',' << id << ',' << FormatFixed3 (values[k]);
          if (extra != nullptr)
            {
              out << ',' << FormatFixed3 (extra->at (id)[k]);
            }
          out << '\n';
        }
    }
}

json
SeriesJson (const MetricsStore &s, const MetricsStore::SeriesMap &m, const MetricsStore::SeriesMap *extra)
{
  json j = json::object ();
  for (const auto &[id, values] : m)
    {
      json rows = json::array ();
      for (int k = 0; k < s.Windows (); ++k)
        {
          json row = {Round3 (s.WindowStart (k)), Round3 (values[k])};
          if (extra != nullptr)
            {
              row.push_back (Round3 (extra->at (id)[k]));
            }
          rows.push_back (row);
        }
      j[id] = rows;
    }
  return j;
}

} // namespace

std::vector<std::string>
Export (const MetricsStore &store, ExportFormat format, const std::string &dir)
{
  std::error_code ec;
  fs::create_directories (dir, ec);
  if (ec)
    {
      throw Error (ErrorCode::IoError, "cannot create " + dir + ": " + ec.message ());
    }
  std::vector<std::string> written;
  const std::string base = store.Scenario ();
  if (format == ExportFormat::Json)
    {
      json doc;
      doc["scenario"] = base;
      doc["window_s"] = ToSeconds (store.Window ());
      doc["windows"] = store.Windows ();
      doc["throughput"] = SeriesJson (store, store.Throughput (), nullptr);
      doc["latency"] = SeriesJson (store, store.LatencyMax (), &store.LatencyMean ());
      doc["loss"] = SeriesJson (store, store.Loss (), nullptr);
      doc["occupancy"] = SeriesJson (store, store.Occupancy (), nullptr);
      if (!store.Raw ().empty ())
        {
          json raw = json::array ();
          for (const auto &r : store.Raw ())
            {
              raw.push_back ({r.at.v, r.flow, Round3 (r.ms)});
            }
          doc["latency_raw"] = raw;
        }
      fs::path p = fs::path (dir) / (base + ".json");
      auto out = OpenOut (p);
      out << doc.dump (1) << '\n';
      written.push_back (p.string ());
      return written;
    }

  auto emit = [&] (const char *obs, const char *header, const MetricsStore::SeriesMap &m,
                   const MetricsStore::SeriesMap *extra) {
    fs::path p = fs::path (dir) / (base + "_" + obs + ".csv");
    auto out = OpenOut (p);
    out << header << '\n';
    WriteSeries (out, store, m, extra);
    if (!out)
      {
        throw Error (ErrorCode::IoError, "write failed for " + p.string ());
      }
    written.push_back (p.string ());
  };
  emit ("throughput", "t_start,flow_or_queue,value", store.Throughput (), nullptr);
  emit ("latency", "t_start,flow_or_queue,value,mean", store.LatencyMax (), &store.LatencyMean ());
  emit ("loss", "t_start,flow_or_queue,value", store.Loss (), nullptr);
  emit ("occupancy", "t_start,flow_or_queue,value", store.Occupancy (), nullptr);
  if (!store.Raw ().empty ())
    {
      fs::path p = fs::path (dir) / (base + "_latency_raw.csv");
      auto out = OpenOut (p);
      out << "t_delivered,flow,latency_ms\n";
      for (const auto &r : store.Raw ())
        {
          char buf[32];
          std::snprintf (buf, sizeof buf, "%.9f", ToSeconds (r.at));
          out << buf << ',' << r.flow << ',' << FormatFixed3 (r.ms) << '\n';
        }
      written.push_back (p.string ());
    }
  return written;
}

namespace {

struct CsvTable
{
  std::vector<double> starts;
  std::map<std::string, std::vector<std::pair<double, std::vector<double>>>> rows;
};

CsvTable
ReadCsv (const fs::path &p)
{
  std::ifstream in (p);
  if (!in)
    {
      throw Error (ErrorCode::IoError, "cannot read " + p.string ());
    }
  CsvTable t;
  std::string line;
  std::getline (in, line);
  std::set<double> starts;
  int lineNo = 1;
  while (std::getline (in, line))
    {
      ++lineNo;
      if (line.empty ())
        {
          continue;
        }
      std::vector<std::string> cells;
      std::stringstream ss (line);
      std::string cell;
      while (std::getline (ss, cell, ','))
        {
          cells.push_back (cell);
        }
      if (cells.size () < 3)
        {
          throw Error (ErrorCode::ParseError, p.string () + ":" + std::to_string (lineNo) + ": too few columns");
        }
      try
        {
          double start = std::stod (cells[0]);
          std::vector<double> vals;
          for (std::size_t i = 2; i < cells.size (); ++i)
            {
              vals.push_back (std::stod (cells[i]));
            }
          t.rows[cells[1]].emplace_back (start, vals);
          starts.insert (start);
        }
      catch (const std::exception &)
        {
          throw Error (ErrorCode::ParseError, p.string () + ":" + std::to_string (lineNo) + ": bad number");
        }
    }
  t.starts.assign (starts.begin (), starts.end ());
  return t;
}

MetricsStore::SeriesMap
Column (const CsvTable &t, std::size_t col, int windows)
{
  MetricsStore::SeriesMap m;
  for (const auto &[id, rows] : t.rows)
    {
      std::vector<double> v (static_cast<std::size_t> (windows), 0.0);
      for (std::size_t k = 0; k < rows.size () && k < v.size (); ++k)
        {
          v[k] = col < rows[k].second.size () ? rows[k].second[col] : 0.0;
        }
      m[id] = v;
    }
  return m;
}

} // namespace

MetricsStore
ImportCsv (const std::string &dir, const std::string &scenario)
{
  auto path = [&] (const char *obs) { return fs::path (dir) / (scenario + "_" + obs + ".csv"); };
  CsvTable thr = ReadCsv (path ("throughput"));
  CsvTable lat = ReadCsv (path ("latency"));
  CsvTable loss = ReadCsv (path ("loss"));
  CsvTable occ = ReadCsv (path ("occupancy"));
  std::size_t windows = std::max ({thr.starts.size (), lat.starts.size (), loss.starts.size (), occ.starts.size ()});
  double w = 1.0;
  for (const auto *t : {&thr, &lat, &loss, &occ})
    {
      if (t->starts.size () >= 2)
        {
          w = t->starts[1] - t->starts[0];
          break;
        }
    }
  int n = static_cast<int> (windows);
  return MetricsStore::FromSeries (scenario, Seconds (w), n, Column (thr, 0, n), Column (lat, 0, n),
                                   Column (lat, 1, n), Column (loss, 0, n), Column (occ, 0, n));
}

MetricsStore
ImportJson (const std::string &path)
{
  std::ifstream in (path);
  if (!in)
    {
      throw Error (ErrorCode::IoError, "cannot read " + path);
    }
  json doc;
  try
    {
      doc = json::parse (in);
      int n = doc.at ("windows").get<int> ();
      auto col = [&] (const char *obs, std::size_t c) {
        MetricsStore::SeriesMap m;
        for (const auto &[id, rows] : doc.at (obs).items ())
          {
            std::vector<double> v (static_cast<std::size_t> (n), 0.0);
            for (std::size_t k = 0; k < rows.size () && k < v.size (); ++k)
              {
                v[k] = rows[k].at (c).get<double> ();
              }
            m[id] = v;
          }
        return m;
      };
      return MetricsStore::FromSeries (doc.at ("scenario").get<std::string> (),
                                       Seconds (doc.at ("window_s").get<double> ()), n, col ("throughput", 1),
                                       col ("latency", 1), col ("latency", 2), col ("loss", 1),
                                       col ("occupancy", 1));
    }
  catch (const json::exception &e)
    {
      throw Error (ErrorCode::ParseError, path + ": " + e.what ());
    }
}

} // namespace tnslice
