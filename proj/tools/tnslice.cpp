#include "tnslice/compare.hpp"
#include "tnslice/engine.hpp"
#include "tnslice/presets.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>

using namespace tnslice;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitCompare = 3;

int
ExitFor (ErrorCode c)
{
  switch (c)
    {
    case ErrorCode::IoError:
    case ErrorCode::RuntimeError:
      return kExitRuntime;
    default:
      return kExitValidation;
    }
}

int
Fail (const std::string &code, int exit, const std::string &message)
{
  nlohmann::json line = {{"error", code}, {"exit", exit}, {"message", message}};
  std::cerr << line.dump () << std::endl;
  return exit;
}

} // namespace

int
main (int argc, char **argv)
{
  CLI::App app{"Transport-network slicing simulator"};
  app.require_subcommand (1);

  std::string preset;
  std::string config;
  std::string outDir = ".";
  std::string format = "csv";
  double duration = 0;
  bool rawLatency = false;
  CLI::App *run = app.add_subcommand ("run", "Run a preset or scenario file and export metrics");
  auto *presetOpt = run->add_option ("--preset", preset, "Built-in preset name");
  auto *configOpt = run->add_option ("--config", config, "Scenario file (JSON)");
  presetOpt->excludes (configOpt);
  run->add_option ("--out", outDir, "Output directory");
  run->add_option ("--format", format, "csv or json")->check (CLI::IsMember ({"csv", "json"}));
  run->add_option ("--duration", duration, "Override simulated duration in seconds")
    ->check (CLI::PositiveNumber);
  run->add_flag ("--raw-latency", rawLatency, "Also export per-packet latency samples");

  CLI::App *list = app.add_subcommand ("list-presets", "Print built-in preset names");

  std::string showName;
  CLI::App *show = app.add_subcommand ("show-preset", "Print a preset as a scenario file");
  show->add_option ("name", showName, "Preset name")->required ();

  std::string cmpOut;
  std::string cmpGolden;
  double tolerance = 0;
  CLI::App *cmp = app.add_subcommand ("compare", "Compare exported metrics against golden files");
  cmp->add_option ("--out", cmpOut, "Directory with fresh exports")->required ();
  cmp->add_option ("--golden", cmpGolden, "Directory with golden exports")->required ();
  cmp->add_option ("--tolerance", tolerance, "Allowed relative deviation in percent")
    ->check (CLI::NonNegativeNumber);

  try
    {
      app.parse (argc, argv);
    }
  catch (const CLI::CallForHelp &e)
    {
      return app.exit (e);
    }
  catch (const CLI::ParseError &e)
    {
      return Fail ("UsageError", kExitValidation, e.what ());
    }

  try
    {
      if (*list)
        {
          for (const auto &n : PresetNames ())
            {
              std::cout << n << '\n';
            }
          return kExitOk;
        }
      if (*show)
        {
          std::cout << DumpScenario (MakePreset (showName));
          return kExitOk;
        }
      if (*run)
        {
          if (preset.empty () == config.empty ())
            {
              return Fail ("UsageError", kExitValidation, "run needs exactly one of --preset or --config");
            }
          Scenario s = preset.empty () ? LoadScenario (config) : MakePreset (preset);
          if (duration > 0)
            {
              s.duration = Seconds (duration);
            }
          s.rawLatency = s.rawLatency || rawLatency;
          RunResult r = Simulate (s);
          for (const auto &n : r.nodes)
            {
              if (!n.Balanced ())
                {
                  return Fail ("RuntimeError", kExitRuntime, "packet conservation violated at " + n.node);
                }
            }
          auto files = Export (r.metrics, format == "json" ? ExportFormat::Json : ExportFormat::Csv, outDir);
          std::cout << "ok scenario=" << s.name << " packets=" << r.generated << " files=" << files.size ()
                    << '\n';
          for (const auto &f : files)
            {
              std::cout << f << '\n';
            }
          return kExitOk;
        }
      if (*cmp)
        {
          CompareReport rep = CompareDirs (cmpOut, cmpGolden, tolerance);
          for (const auto &p : rep.problems)
            {
              std::cout << "deviation " << p << '\n';
            }
          std::cout << (rep.Ok () ? "match" : "mismatch") << " files=" << rep.filesCompared
                    << " values=" << rep.valuesCompared << " deviations=" << rep.problems.size () << '\n';
          return rep.Ok () ? kExitOk : kExitCompare;
        }
    }
  catch (const Error &e)
    {
      return Fail (ToString (e.Code ()), ExitFor (e.Code ()), e.what ());
    }
  catch (const std::exception &e)
    {
      return Fail ("RuntimeError", kExitRuntime, e.what ());
    }
  return kExitOk;
}
