#include <doctest.h>
#include <json.hpp>

#include "tnslice/presets.hpp"
#include "tnslice/scenario.hpp"

#include <filesystem>

using namespace tnslice;
using json = nlohmann::json;

namespace {

ErrorCode
CodeOf (const std::string &text)
{
  try
    {
      ParseScenario (text);
    }
  catch (const Error &e)
    {
      return e.Code ();
    }
  FAIL ("scenario was accepted");
  return ErrorCode::RuntimeError;
}

json
PresetJson (const std::string &name)
{
  return json::parse (DumpScenario (MakePreset (name)));
}

} // namespace

TEST_CASE ("the HCTNS preset tree")
{
  Scenario s = MakePreset ("exp_a_hctns");
  REQUIRE (s.hctns.global);
  CHECK (s.hctns.global->cir == Mbps (100));
  CHECK (s.hctns.global->children.size () == 3);
  CHECK (s.model == Model::Hctns);
  CHECK (s.duration == Seconds (100));
}

TEST_CASE ("every preset validates and survives a dump and parse")
{
  for (const auto &name : PresetNames ())
    {
      CAPTURE (name);
      Scenario s = MakePreset (name);
      CHECK_NOTHROW (s.Validate ());
      std::string text = DumpScenario (s);
      Scenario back = ParseScenario (text);
      CHECK (DumpScenario (back) == text);
      CHECK (back.name == name);
    }
  CHECK_THROWS_AS (MakePreset ("no_such_preset"), Error);
}

TEST_CASE ("slice CIRs above the global CIR are refused")
{
  json j = PresetJson ("exp_a_hctns");
  j["policer"]["global"]["children"][0]["cir_mbps"] = 20.0;
  CHECK (CodeOf (j.dump ()) == ErrorCode::CirSumExceeded);
}

TEST_CASE ("a missing model is a parse error")
{
  json j = PresetJson ("exp_a_hctns");
  j.erase ("model");
  CHECK (CodeOf (j.dump ()) == ErrorCode::ParseError);
  j["model"] = "wfq";
  CHECK (CodeOf (j.dump ()) == ErrorCode::ParseError);
}

TEST_CASE ("a tree without a global node is refused")
{
  json j = PresetJson ("exp_a_hctns");
  j["policer"].erase ("global");
  CHECK (CodeOf (j.dump ()) == ErrorCode::MissingGlobal);
}

TEST_CASE ("malformed JSON reports its line")
{
  try
    {
      ParseScenario ("{\n  \"model\": \"hctns\",\n  oops\n}", "bad.json");
      FAIL ("accepted");
    }
  catch (const Error &e)
    {
      CHECK (e.Code () == ErrorCode::ParseError);
      CHECK (std::string (e.what ()).find ("bad.json:3") == 0);
    }
}

TEST_CASE ("flows must name a mapped slice and class")
{
  json j = PresetJson ("exp_a_hctns");
  j["flows"][0]["class"] = "Gaming";
  CHECK (CodeOf (j.dump ()) == ErrorCode::UnknownPair);
}

TEST_CASE ("jitter must stay below the emission interval")
{
  Scenario s = MakePreset ("exp_a_hctns");
  s.flows[0].jitter = Micros (200);
  CHECK_THROWS_AS (s.Validate (), Error);
}

TEST_CASE ("shipped scenario files load")
{
  int n = 0;
  for (const auto &e : std::filesystem::directory_iterator (SCENARIO_DIR))
    {
      if (e.path ().extension () != ".json")
        {
          continue;
        }
      CAPTURE (e.path ().string ());
      Scenario s = LoadScenario (e.path ().string ());
      CHECK (DumpScenario (s) == DumpScenario (MakePreset (s.name)));
      ++n;
    }
  CHECK (n == static_cast<int> (PresetNames ().size ()));
}

TEST_CASE ("a missing file is an I/O error")
{
  try
    {
      LoadScenario ("/nonexistent/scenario.json");
      FAIL ("loaded");
    }
  catch (const Error &e)
    {
      CHECK (e.Code () == ErrorCode::IoError);
    }
}
