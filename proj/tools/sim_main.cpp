#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cits/error.hpp"
#include "cits/scenario.hpp"
#include "cits/simulation.hpp"

namespace {

cits::OutputFormats parse_formats(const std::string& text) {
  cits::OutputFormats f{false, false};
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const auto item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (item == "csv") f.csv = true;
    else if (item == "json") f.json = true;
    else throw CLI::ValidationError("--format", "unknown format '" + item + "' (expected csv, json)");
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return f;
}

std::optional<std::uint64_t> env_seed() {
  const char* s = std::getenv("SIM_SEED");
  if (!s || !*s) return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 10);
    if (used != std::string(s).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw cits::ConfigError("SIM_SEED", "not an unsigned 64-bit integer");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-RAT fog-orchestrated C-ITS simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one scenario");
  std::string scenario_file;
  std::optional<std::uint64_t> seed;
  std::optional<double> duration;
  std::string out_dir;
  std::string format = "csv,json";
  std::optional<std::string> assist;
  run->add_option("--scenario", scenario_file, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Seed (overrides SIM_SEED and the config)");
  run->add_option("--duration", duration, "Simulated seconds");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--format", format, "Comma-separated output formats: csv,json");
  run->add_option("--assist", assist, "Beamforming assist")->check(CLI::IsMember({"on", "off"}));

  auto* rep = app.add_subcommand("report", "Compare run directories");
  std::vector<std::string> in_dirs;
  std::string report_file;
  bool svg = false;
  rep->add_option("--in", in_dirs, "Run directories; the first is the baseline")->required()->check(CLI::ExistingDirectory);
  rep->add_option("--out", report_file, "Report JSON file")->required();
  rep->add_flag("--svg", svg, "Also write pdr.svg and goodput.svg");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      const auto formats = parse_formats(format);
      auto scenario = cits::load_config(scenario_file);
      if (seed) scenario.seed = *seed;
      else if (const auto s = env_seed()) scenario.seed = *s;
      if (duration) {
        if (!(*duration > 0.0)) throw cits::ConfigError("duration_s", "must be > 0");
        scenario.duration_s = *duration;
      }
      if (assist) scenario.policy.assist = *assist == "on";
      cits::validate(scenario);
      const auto res = cits::run_scenario(scenario, out_dir, formats);
      std::cerr << "run complete: " << res.records.size() << " messages, " << res.events << " events\n";
    } else if (*rep) {
      std::vector<std::filesystem::path> dirs(in_dirs.begin(), in_dirs.end());
      cits::report(dirs, report_file, svg);
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const cits::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
