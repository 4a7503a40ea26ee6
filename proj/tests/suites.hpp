#ifndef TNSLICE_TEST_SUITES_HPP
#define TNSLICE_TEST_SUITES_HPP

// Randomized checks shared by the doctest suites and the acceptance binary.
// Each returns an empty string on success, otherwise what went wrong.

#include "oracles.hpp"

#include "tnslice/engine.hpp"
#include "tnslice/metrics.hpp"
#include "tnslice/presets.hpp"
#include "tnslice/sched.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace suites {

using namespace tnslice;

inline double
Uniform (std::mt19937_64 &rng, double lo, double hi)
{
  return std::uniform_real_distribution<double> (lo, hi) (rng);
}

inline int
Pick (std::mt19937_64 &rng, int lo, int hi)
{
  return std::uniform_int_distribution<int> (lo, hi) (rng);
}

// Rounds to 0.1 Mbps so that trees stay readable in failure messages.
inline double
Tenth (double mbps)
{
  return std::floor (mbps * 10) / 10;
}

// A random global/slice/class tree with burst control disabled, plus its
// fluid description. Leaves appear in the same order as PolicerTree::Leaves.
struct RandomTree
{
  PolicerSpec spec;
  oracle::FluidInstance fluid;
  std::vector<std::string> names;
};

inline RandomTree
MakeRandomTree (std::uint64_t seed)
{
  std::mt19937_64 rng (seed);
  RandomTree t;
  const double g = 100;
  PolicerNodeSpec root;
  root.name = "global";
  root.cir = root.pir = Mbps (g);
  t.fluid.global = g;
  bool prio = Uniform (rng, 0, 1) < 0.3;
  const std::int64_t quanta[] = {1538, 3076, 7690, 15380};

  int slices = Pick (rng, 1, 3);
  std::vector<double> w (slices);
  double wsum = 0;
  for (auto &x : w)
    {
      x = Uniform (rng, 0.2, 1);
      wsum += x;
    }
  double committed = Uniform (rng, 0.5, 1.0) * g;
  for (int s = 0; s < slices; ++s)
    {
      PolicerNodeSpec sl;
      sl.name = "s" + std::to_string (s);
      double cir = Tenth (committed * w[s] / wsum);
      double pir = Tenth (Uniform (rng, std::max (cir, 5.0), g));
      sl.cir = Mbps (cir);
      sl.pir = Mbps (pir);
      int sprio = prio ? Pick (rng, 0, 1) : 0;
      sl.priority = sprio;
      bool leafSlice = Uniform (rng, 0, 1) < 0.3;
      t.fluid.slices.push_back ({cir, pir, leafSlice});
      if (leafSlice)
        {
          oracle::FluidLeaf fl;
          fl.slice = s;
          fl.cir = cir;
          fl.pir = pir;
          fl.quantum = static_cast<double> (quanta[Pick (rng, 0, 3)]);
          sl.quantum = Bytes (static_cast<std::int64_t> (fl.quantum));
          fl.prio = {0, sprio};
          sl.priority = sprio;
          t.fluid.leaves.push_back (fl);
          t.names.push_back (sl.name);
          root.children.push_back (sl);
          continue;
        }
      int classes = Pick (rng, 1, 3);
      std::vector<double> cw (classes);
      double cwsum = 0;
      for (auto &x : cw)
        {
          x = Uniform (rng, 0, 1) < 0.2 ? 0 : Uniform (rng, 0.2, 1);
          cwsum += x;
        }
      double used = Uniform (rng, 0.3, 1.0) * cir;
      for (int c = 0; c < classes; ++c)
        {
          PolicerNodeSpec cl;
          cl.name = "c" + std::to_string (c);
          double ccir = cwsum > 0 ? Tenth (used * cw[c] / cwsum) : 0;
          double cpir = Tenth (Uniform (rng, std::max (ccir, 1.0), pir));
          cpir = std::max (cpir, ccir);
          cl.cir = Mbps (ccir);
          cl.pir = Mbps (cpir);
          oracle::FluidLeaf fl;
          fl.slice = s;
          fl.cir = ccir;
          fl.pir = cpir;
          fl.quantum = static_cast<double> (quanta[Pick (rng, 0, 3)]);
          int cprio = prio ? Pick (rng, 0, 1) : 0;
          fl.prio = {sprio, cprio};
          cl.quantum = Bytes (static_cast<std::int64_t> (fl.quantum));
          cl.priority = cprio;
          t.fluid.leaves.push_back (fl);
          t.names.push_back (sl.name + "/" + cl.name);
          sl.children.push_back (cl);
        }
      root.children.push_back (sl);
    }
  t.spec.global = root;
  return t;
}

// Offered load for one leaf: saturating, below CIR, or between CIR and PIR.
inline double
RandomLoad (std::mt19937_64 &rng, const oracle::FluidLeaf &l)
{
  double u = Uniform (rng, 0, 1);
  if (u < 0.55 || l.pir - l.cir < 1)
    {
      return 100;
    }
  if (u < 0.8 && l.cir >= 1)
    {
      return Tenth (Uniform (rng, 0.2, 0.9) * l.cir);
    }
  return Tenth (Uniform (rng, l.cir + 0.5, l.pir));
}

struct FluidOutcome
{
  double worst = 0;
  std::string detail;
};

// Two constant-load phases of `phase` each; the first `settle` of every phase
// is not measured. Deviation is relative to the fluid rate, with one frame per
// measured window allowed for packet quantization.
inline FluidOutcome
FluidCase (std::uint64_t seed, Time phase = Seconds (4), Time settle = Seconds (1))
{
  RandomTree t = MakeRandomTree (seed);
  std::mt19937_64 rng (seed * 7919 + 17);
  PolicerTree tree = PolicerTree::Build (t.spec);
  const auto &leaves = tree.Leaves ();
  FluidOutcome out;
  std::ostringstream why;
  std::vector<oracle::Source> sources;
  std::vector<std::vector<double>> expected;
  for (int ph = 0; ph < 2; ++ph)
    {
      oracle::FluidInstance in = t.fluid;
      for (std::size_t i = 0; i < in.leaves.size (); ++i)
        {
          in.leaves[i].offered = RandomLoad (rng, in.leaves[i]);
          oracle::Source s;
          s.leaf = leaves[i];
          s.rate = Mbps (in.leaves[i].offered);
          s.start = phase * ph + Micros (static_cast<std::int64_t> (i) * 7);
          s.stop = phase * (ph + 1);
          sources.push_back (s);
        }
      expected.push_back (oracle::FluidShares (in));
    }
  for (int ph = 0; ph < 2; ++ph)
    {
      // Measure each phase on a fresh replay up to its end, windowed.
      PolicerTree fresh = PolicerTree::Build (t.spec);
      Time from = phase * ph + settle;
      Time to = phase * (ph + 1);
      oracle::Drive d = oracle::DriveTree (fresh, sources, to, from);
      double secs = ToSeconds (to - from);
      for (std::size_t i = 0; i < leaves.size (); ++i)
        {
          double got = d.bytes[leaves[i]] * 8 / secs / 1e6;
          double want = expected[ph][i];
          double slack = kDefaultFrame.v * 8 / secs / 1e6;
          double dev = std::max (0.0, std::fabs (got - want) - slack) / std::max (want, 1e-9);
          if (want < 1e-9)
            {
              dev = got > slack ? 1 : 0;
            }
          if (dev > out.worst)
            {
              out.worst = dev;
              why.str ("");
              why << "seed " << seed << " phase " << ph << " leaf " << t.names[i] << " got " << got
                  << " fluid " << want;
            }
        }
    }
  out.detail = why.str ();
  return out;
}

// Random traffic against a random tree: saturating and on/off sources with
// random frame sizes.
inline std::vector<oracle::Source>
RandomSources (std::mt19937_64 &rng, const PolicerTree &tree, Time horizon)
{
  std::vector<oracle::Source> v;
  for (int l : tree.Leaves ())
    {
      int pieces = Pick (rng, 1, 3);
      for (int p = 0; p < pieces; ++p)
        {
          oracle::Source s;
          s.leaf = l;
          s.size = Bytes (Pick (rng, 64, 1538));
          s.rate = Mbps (Uniform (rng, 0, 1) < 0.5 ? 100 : Uniform (rng, 0.5, 60));
          s.start = Time (static_cast<std::int64_t> (Uniform (rng, 0, 0.5) * horizon.v));
          s.stop = Time (s.start.v + static_cast<std::int64_t> (Uniform (rng, 0.2, 1) * horizon.v));
          v.push_back (s);
        }
    }
  return v;
}

inline std::string
CheckTokenBounds (std::uint64_t seed)
{
  std::mt19937_64 rng (seed);
  PolicerTree tree = PolicerTree::Build (MakeRandomTree (seed).spec);
  Time horizon = Seconds (1);
  std::string bad;
  oracle::DriveTree (tree, RandomSources (rng, tree, horizon), horizon, Time (0),
                     [&] (Time now, const std::vector<Released> &) {
                       if (!bad.empty ())
                         {
                           return;
                         }
                       for (int i = 0; i < tree.Size (); ++i)
                         {
                           auto &n = tree.At (i);
                           for (const Bucket *b : {&n.cir, &n.pir})
                             {
                               if (b->Tokens () > b->Capacity ().v)
                                 {
                                   bad = "bucket above capacity at " + n.name;
                                 }
                               if (n.IsLeaf () && i != 0 && b->Tokens () < 0)
                                 {
                                   bad = "negative leaf bucket at " + n.name + " t="
                                         + std::to_string (now.v);
                                 }
                             }
                         }
                     });
  for (int l : tree.Leaves ())
    {
      const auto &n = tree.At (l);
      if (n.stats.offered != n.stats.admitted + n.stats.dropped + n.queue.size ())
        {
          return "leaf accounting broken at " + n.name;
        }
    }
  return bad;
}

// Sliding windows of length w over a release log (sorted by time).
inline std::int64_t
MaxWindowBytes (const std::vector<std::pair<Time, std::int64_t>> &log, Time w)
{
  std::int64_t best = 0, cur = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < log.size (); ++hi)
    {
      cur += log[hi].second;
      while (log[hi].first - log[lo].first >= w)
        {
          cur -= log[lo++].second;
        }
      best = std::max (best, cur);
    }
  return best;
}

inline std::string
CheckGlobalWindow (std::uint64_t seed)
{
  RandomTree t = MakeRandomTree (seed);
  PolicerTree tree = PolicerTree::Build (t.spec);
  std::vector<oracle::Source> src;
  for (int l : tree.Leaves ())
    {
      src.push_back ({l, Mbps (100), kDefaultFrame, Time (0), kNever});
    }
  Time horizon = Seconds (12);
  oracle::Drive d = oracle::DriveTree (tree, src, horizon, Time (0), {}, true);
  std::vector<std::pair<Time, std::int64_t>> log;
  std::map<std::string, std::vector<std::pair<Time, std::int64_t>>> perSlice;
  for (const auto &r : d.log)
    {
      log.push_back ({r.at, r.pkt.size.v});
      const auto &n = tree.At (r.leaf);
      perSlice[n.level == Level::Class ? tree.At (n.parent).name : n.name].push_back ({r.at, r.pkt.size.v});
    }
  // Own-CIR and slice-lent admissions charge the global node without asking
  // it, so its balance can sit below zero by up to the descendants' buckets.
  std::int64_t slack = 0;
  for (int i = 1; i < tree.Size (); ++i)
    {
      slack += tree.At (i).cir.Capacity ().v;
    }
  const auto &root = tree.At (0);
  for (Time w : {Seconds (5), Seconds (10)})
    {
      std::int64_t bound = static_cast<std::int64_t> (root.cir.FillRate ().v / 8.0 * ToSeconds (w))
                           + root.cir.Capacity ().v + slack;
      std::int64_t got = MaxWindowBytes (log, w);
      if (got > bound)
        {
          return "global window " + std::to_string (got) + " > " + std::to_string (bound);
        }
      for (int s : root.children)
        {
          const auto &sl = tree.At (s);
          std::int64_t sb = static_cast<std::int64_t> (sl.pir.FillRate ().v / 8.0 * ToSeconds (w))
                            + sl.pir.Capacity ().v;
          for (int c : sl.children)
            {
              sb += tree.At (c).pir.Capacity ().v;
            }
          std::int64_t sg = MaxWindowBytes (perSlice[sl.name], w);
          if (sg > sb)
            {
              return "slice " + sl.name + " window " + std::to_string (sg) + " > " + std::to_string (sb);
            }
        }
    }
  return "";
}

// One saturated leaf with a CIR, everybody else adversarial.
inline std::string
CheckCirGuarantee (std::uint64_t seed)
{
  std::mt19937_64 rng (seed ^ 0x5bd1e995);
  RandomTree t = MakeRandomTree (seed);
  PolicerTree tree = PolicerTree::Build (t.spec);
  std::vector<int> withCir;
  for (int l : tree.Leaves ())
    {
      if (tree.At (l).cir.FillRate ().v > 0)
        {
          withCir.push_back (l);
        }
    }
  if (withCir.empty ())
    {
      return "";
    }
  int target = withCir[Pick (rng, 0, static_cast<int> (withCir.size ()) - 1)];
  Time horizon = Seconds (3);
  std::vector<oracle::Source> src = RandomSources (rng, tree, horizon);
  std::erase_if (src, [&] (const oracle::Source &s) { return s.leaf == target; });
  src.push_back ({target, Mbps (100), kDefaultFrame, Time (0), kNever});
  oracle::Drive d = oracle::DriveTree (tree, src, horizon, Time (0), {}, true);
  std::vector<Time> at;
  for (const auto &r : d.log)
    {
      if (r.leaf == target)
        {
          at.push_back (r.at);
        }
    }
  double c = tree.At (target).cir.FillRate ().v / 8.0;
  for (Time w : {Millis (100), Millis (500), Seconds (1)})
    {
      for (Time t0 (0); t0 + w <= horizon; t0 += Millis (10))
        {
          auto lo = std::lower_bound (at.begin (), at.end (), t0);
          auto hi = std::lower_bound (at.begin (), at.end (), t0 + w);
          double got = static_cast<double> (hi - lo) * kDefaultFrame.v;
          double need = c * ToSeconds (w) - 2.0 * kDefaultFrame.v;
          if (got < need)
            {
              std::ostringstream o;
              o << "leaf " << tree.At (target).name << " got " << got << " B in [" << ToSeconds (t0) << ", +"
                << ToSeconds (w) << ") but CIR needs " << need;
              return o.str ();
            }
        }
    }
  return "";
}

// Equal-size and mixed-size packets, all queues backlogged throughout.
inline std::string
CheckDrrShares (std::uint64_t seed)
{
  std::mt19937_64 rng (seed);
  const std::int64_t choices[] = {1538, 3076, 4614, 7690, 15380};
  int nq = Pick (rng, 2, 4);
  DrrSet drr;
  std::vector<std::int64_t> quanta;
  for (int q = 0; q < nq; ++q)
    {
      quanta.push_back (choices[Pick (rng, 0, 4)]);
      drr.Add (Bytes (quanta.back ()), 1 << 20);
    }
  std::uint64_t id = 0;
  auto refill = [&] (int q) {
    while (drr.Queue (q).Size () < 64)
      {
        Packet p;
        p.id = ++id;
        p.flow = FlowId{static_cast<std::uint32_t> (q)};
        p.size = Bytes (Pick (rng, 64, 1538));
        drr.Push (q, p);
      }
  };
  std::vector<double> served (nq, 0);
  const int packets = 100000;
  for (int i = 0; i < packets; ++i)
    {
      for (int q = 0; q < nq; ++q)
        {
          refill (q);
        }
      drr.Select ();
      Packet p = drr.Pop ();
      served[p.flow.v] += p.size.v;
    }
  double qsum = 0, ssum = 0;
  for (int q = 0; q < nq; ++q)
    {
      qsum += quanta[q];
      ssum += served[q];
    }
  for (int q = 0; q < nq; ++q)
    {
      double want = quanta[q] / qsum;
      double got = served[q] / ssum;
      if (std::fabs (got - want) > 0.01 * want)
        {
          std::ostringstream o;
          o << "queue " << q << " share " << got << " vs quantum share " << want;
          return o.str ();
        }
    }
  return "";
}

inline std::string
CheckBurstAdmission (std::uint64_t seed)
{
  std::mt19937_64 rng (seed);
  std::int64_t b = Pick (rng, 10000, 100000);
  PolicerNodeSpec leaf;
  leaf.name = "burst";
  leaf.cir = Mbps (Uniform (rng, 1, 20));
  leaf.pir = Mbps (Uniform (rng, 20, 50));
  leaf.cbs = leaf.pbs = Bytes (b);
  PolicerNodeSpec other;
  other.name = "other";
  other.cir = Mbps (10);
  other.pir = Mbps (100);
  PolicerNodeSpec slice;
  slice.name = "slice";
  slice.cir = Mbps (30);
  slice.pir = Mbps (100);
  slice.children = {leaf, other};
  PolicerNodeSpec root;
  root.name = "global";
  root.cir = root.pir = Mbps (100);
  root.children = {slice};
  PolicerTree tree = PolicerTree::Build ({root});
  // Drain parents first so that only leaf tokens can fund the burst.
  tree.At (1).cir.SetTokens (-Pick (rng, 0, 50000));
  tree.At (0).cir.SetTokens (-Pick (rng, 0, 50000));
  std::vector<Released> out;
  Time now = Seconds (Uniform (rng, 0, 0.001));
  std::int64_t left = b;
  std::uint64_t id = 0;
  while (left > 0)
    {
      Packet p;
      p.id = ++id;
      p.size = Bytes (std::min<std::int64_t> (left, Pick (rng, 64, 1538)));
      left -= p.size.v;
      Admission a = tree.Offer (tree.LeafIndex ({"slice", "burst"}), p, now, out);
      if (a.kind != Admission::Admitted || a.at != now)
        {
          return "burst frame " + std::to_string (id) + " was not admitted on arrival";
        }
      // Back-to-back at 1 Gb/s.
      now += TxTime (p.size, Mbps (1000));
    }
  return "";
}

// Global-lent admissions never leave the global node below zero.
inline std::string
CheckRepayment (std::uint64_t seed)
{
  std::mt19937_64 rng (seed);
  PolicerNodeSpec x;
  x.name = "x";
  x.cir = Mbps (Uniform (rng, 10, 60));
  x.pir = Mbps (100);
  x.cbs = x.pbs = Bytes (Pick (rng, 20000, 200000));
  PolicerNodeSpec y;
  y.name = "y";
  y.cir = Rate (0);
  y.pir = Mbps (100);
  PolicerNodeSpec root;
  root.name = "global";
  root.cir = root.pir = Mbps (100);
  root.children = {x, y};
  PolicerTree tree = PolicerTree::Build ({root});
  int xi = tree.LeafIndex ({"x", ""});
  int yi = tree.LeafIndex ({"y", ""});
  std::vector<oracle::Source> src;
  src.push_back ({yi, Mbps (100), kDefaultFrame, Time (0), kNever});
  for (int k = 0; k < 5; ++k)
    {
      Time at = Millis (Pick (rng, 0, 900));
      src.push_back ({xi, Mbps (1000), kDefaultFrame, at, at + TxTime (x.cbs, Mbps (1000))});
    }
  std::string bad;
  std::int64_t deepest = 0;
  oracle::DriveTree (tree, src, Seconds (1), Time (0), [&] (Time now, const std::vector<Released> &rel) {
    std::int64_t g = tree.At (0).cir.Tokens ();
    deepest = std::min (deepest, g);
    for (const auto &r : rel)
      {
        if (r.leaf == yi && g < 0 && bad.empty ())
          {
            bad = "borrowed admission left global at " + std::to_string (g) + " t=" + std::to_string (now.v);
          }
      }
  });
  if (bad.empty () && deepest >= 0)
    {
      return "bursts never drove the global node negative";
    }
  return bad;
}

// Short randomized variants of the presets, run end to end.
inline Scenario
RandomScenario (std::uint64_t seed)
{
  std::mt19937_64 rng (seed);
  auto names = PresetNames ();
  Scenario s = MakePreset (names[Pick (rng, 0, static_cast<int> (names.size ()) - 1)]);
  s.duration = Seconds (Uniform (rng, 1, 3));
  s.seed = seed;
  for (auto &f : s.flows)
    {
      if (f.cbr.v > 0)
        {
          f.cbr = Mbps (Tenth (Uniform (rng, 0.5, 100)));
          f.jitter = Time (0);
        }
      for (auto &[a, b] : f.schedule)
        {
          a = Time (static_cast<std::int64_t> (Uniform (rng, 0, 0.5) * s.duration.v));
          b = Time (a.v + static_cast<std::int64_t> (Uniform (rng, 0.3, 1) * s.duration.v));
        }
      if (f.burst)
        {
          f.burst->firstAt = Millis (Pick (rng, 0, 500));
          f.burst->until = s.duration;
        }
    }
  return s;
}

inline std::string
CheckConservation (std::uint64_t seed)
{
  Scenario s = RandomScenario (seed);
  RunResult r = Simulate (s);
  for (const auto &n : r.nodes)
    {
      if (!n.Balanced ())
        {
          return s.name + ": node " + n.node + " in=" + std::to_string (n.in) + " out=" + std::to_string (n.out)
                 + " dropped=" + std::to_string (n.dropped) + " resident=" + std::to_string (n.resident);
        }
    }
  return "";
}

inline std::string
ReadAll (const std::string &path)
{
  std::ifstream in (path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf ();
  return ss.str ();
}

inline std::string
CheckDeterminism (std::uint64_t seed, const std::filesystem::path &work)
{
  Scenario s = RandomScenario (seed);
  std::vector<std::string> a, b;
  for (int run = 0; run < 2; ++run)
    {
      auto dir = work / ("det_" + std::to_string (seed) + "_" + std::to_string (run));
      std::filesystem::create_directories (dir);
      (run ? b : a) = Export (Simulate (s).metrics, ExportFormat::Csv, dir.string ());
    }
  if (a.size () != b.size () || a.empty ())
    {
      return "different file sets";
    }
  for (std::size_t i = 0; i < a.size (); ++i)
    {
      if (ReadAll (a[i]) != ReadAll (b[i]))
        {
          return "exports differ: " + a[i];
        }
    }
  return "";
}

} // namespace suites

#endif
