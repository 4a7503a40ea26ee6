#include "tnslice/compare.hpp"

#include "tnslice/types.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace tnslice {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// (series id, window start) -> values of that row.
using Rows = std::map<std::pair<std::string, std::string>, std::vector<double>>;

Rows
ReadCsvRows (const fs::path &p)
{
  std::ifstream in (p);
  if (!in)
    {
      throw Error (ErrorCode::IoError, "cannot read " + p.string ());
    }
  Rows rows;
  std::string line;
  std::getline (in, line);
  while (std::getline (in, line))
    {
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
          throw Error (ErrorCode::ParseError, p.string () + ": malformed row '" + line + "'");
        }
      std::vector<double> vals;
      for (std::size_t i = 2; i < cells.size (); ++i)
        {
          vals.push_back (std::strtod (cells[i].c_str (), nullptr));
        }
      rows[{cells[1], cells[0]}] = vals;
    }
  return rows;
}

Rows
ReadJsonRows (const fs::path &p)
{
  std::ifstream in (p);
  if (!in)
    {
      throw Error (ErrorCode::IoError, "cannot read " + p.string ());
    }
  Rows rows;
  try
    {
      json doc = json::parse (in);
      for (const char *obs : {"throughput", "latency", "loss", "occupancy"})
        {
          if (!doc.contains (obs))
            {
              continue;
            }
          for (const auto &[id, series] : doc[obs].items ())
            {
              for (const auto &row : series)
                {
                  std::vector<double> vals;
                  for (std::size_t i = 1; i < row.size (); ++i)
                    {
                      vals.push_back (row[i].get<double> ());
                    }
                  char t[32];
                  std::snprintf (t, sizeof t, "%.3f", row[0].get<double> ());
                  rows[{std::string (obs) + ":" + id, t}] = vals;
                }
            }
        }
    }
  catch (const json::exception &e)
    {
      throw Error (ErrorCode::ParseError, p.string () + ": " + e.what ());
    }
  return rows;
}

Rows
ReadRows (const fs::path &p)
{
  return p.extension () == ".json" ? ReadJsonRows (p) : ReadCsvRows (p);
}

} // namespace

CompareReport
CompareDirs (const std::string &out, const std::string &golden, double tolerancePct)
{
  CompareReport rep;
  if (!fs::is_directory (golden))
    {
      throw Error (ErrorCode::IoError, "golden directory " + golden + " not found");
    }
  std::vector<fs::path> files;
  for (const auto &entry : fs::directory_iterator (golden))
    {
      auto ext = entry.path ().extension ();
      if (entry.is_regular_file () && (ext == ".csv" || ext == ".json"))
        {
          files.push_back (entry.path ());
        }
    }
  std::sort (files.begin (), files.end ());
  for (const auto &g : files)
    {
      fs::path o = fs::path (out) / g.filename ();
      if (!fs::exists (o))
        {
          rep.problems.push_back (g.filename ().string () + ": missing from " + out);
          continue;
        }
      Rows gr = ReadRows (g);
      Rows orows = ReadRows (o);
      rep.filesCompared++;
      for (const auto &[key, gv] : gr)
        {
          auto it = orows.find (key);
          if (it == orows.end ())
            {
              auto lb = orows.lower_bound ({key.first, ""});
              if (lb == orows.end () || lb->first.first != key.first)
                {
                  rep.problems.push_back (g.filename ().string () + ": series " + key.first + " missing");
                }
              continue;
            }
          for (std::size_t i = 0; i < gv.size () && i < it->second.size (); ++i)
            {
              rep.valuesCompared++;
              double diff = std::fabs (it->second[i] - gv[i]);
              double allowed = std::max (std::fabs (gv[i]) * tolerancePct / 100.0, 0.0015);
              if (diff > allowed)
                {
                  std::ostringstream msg;
                  msg << g.filename ().string () << ": " << key.first << " at t=" << key.second << " is "
                      << it->second[i] << ", golden " << gv[i];
                  rep.problems.push_back (msg.str ());
                }
            }
        }
    }
  if (files.empty ())
    {
      rep.problems.push_back ("no exported files in " + golden);
    }
  return rep;
}

} // namespace tnslice
