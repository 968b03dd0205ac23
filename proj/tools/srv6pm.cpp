// srv6pm: runs packet-loss monitoring scenarios on the built-in network
// simulator and summarizes the measurement records they produce.
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "srv6pm/collect.hpp"
#include "srv6pm/controller.hpp"
#include "srv6pm/report.hpp"
#include "srv6pm/scenario.hpp"
#include "srv6pm/sim.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw srv6pm::IoError("cannot open " + path);
  std::ostringstream text;
  text << in.rdbuf();
  if (in.bad()) throw srv6pm::IoError("cannot read " + path);
  return text.str();
}

// A scenario reference is a preset name or a path to a scenario JSON file.
srv6pm::ScenarioConfig load_config(const std::string& ref) {
  if (auto preset = srv6pm::preset_scenario(ref)) return *preset;
  return srv6pm::parse_scenario(read_file(ref));
}

// Ground-truth drop totals per monitored flow, bucketed like loss_histogram.
std::map<std::int64_t, std::size_t> oracle_loss_histogram(
    const srv6pm::Simulation& sim) {
  std::map<std::int64_t, std::size_t> hist;
  const srv6pm::DropOracle& oracle = sim.oracle();
  for (const auto& session : sim.config().sessions) {
    for (const std::string& text : {session.sdlist, session.sdlistreverse}) {
      auto sids = srv6pm::SidList::parse(text);
      if (!sids) continue;  // validated earlier; defensive
      srv6pm::FlowKey key{srv6pm::FlowDirection::Ingress, *sids};
      std::uint64_t total = 0;
      for (std::uint64_t epoch : oracle.epochs(key))
        total += oracle.dropped(key, epoch);
      hist[static_cast<std::int64_t>(total)]++;
    }
  }
  return hist;
}

struct RunArgs {
  std::string scenario;
  std::optional<std::uint64_t> seed;
  std::optional<double> until;
  std::string out = ".";
  std::string format = "jsonl";
};

int do_run(const RunArgs& args) {
  srv6pm::ScenarioConfig cfg = load_config(args.scenario);
  if (args.seed) cfg.seed = *args.seed;
  srv6pm::validate_scenario(cfg);
  srv6pm::RecordFormat format = *srv6pm::parse_record_format(args.format);

  srv6pm::Simulation sim(cfg);
  srv6pm::TimeSeriesStore store;
  srv6pm::Controller controller(sim);
  controller.add_sink(store);
  controller.apply_scenario();
  sim.run_until(args.until ? *args.until : srv6pm::default_run_until(cfg));
  controller.stop_all();
  std::size_t published = controller.collect();

  std::error_code ec;
  std::filesystem::create_directories(args.out, ec);
  if (ec)
    throw srv6pm::IoError("cannot create " + args.out + ": " + ec.message());
  auto records = store.all_records();
  std::string records_path = std::string(args.out) + "/records." +
                             srv6pm::record_format_name(format);
  srv6pm::export_records(records, records_path, format);
  std::string topology_path = std::string(args.out) + "/topology.json";
  srv6pm::export_topology(srv6pm::topology_from_config(cfg), topology_path);

  std::cout << srv6pm::render_summary_table(srv6pm::summarize_records(records))
            << "\nanomalies:\n"
            << srv6pm::render_anomalies(records)
            << "\nflows per total-loss bucket:\n"
            << srv6pm::render_loss_histogram(srv6pm::loss_histogram(records),
                                             oracle_loss_histogram(sim),
                                             "measured", "oracle")
            << "\n"
            << published << " records -> " << records_path << "\n"
            << "topology -> " << topology_path << "\n";
  return kExitOk;
}

int do_report(const std::string& path) {
  auto records = srv6pm::import_records(path);
  std::cout << srv6pm::render_summary_table(srv6pm::summarize_records(records))
            << "\n"
            << srv6pm::render_block_table(records) << "\nanomalies:\n"
            << srv6pm::render_anomalies(records);
  return kExitOk;
}

int do_scenarios_list() {
  for (const auto& name : srv6pm::preset_names()) std::cout << name << "\n";
  return kExitOk;
}

int do_scenarios_show(const std::string& name) {
  auto preset = srv6pm::preset_scenario(name);
  if (!preset) {
    std::cerr << "unknown preset: " << name << "\n";
    return kExitConfig;
  }
  std::cout << srv6pm::scenario_to_json(*preset);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"per-flow SRv6 packet-loss monitoring on a simulated network"};
  app.require_subcommand(1);

  RunArgs run_args;
  std::uint64_t seed = 0;
  double until = 0.0;
  auto* run = app.add_subcommand(
      "run", "run a scenario and export its measurement records");
  run->add_option("--scenario", run_args.scenario,
                  "scenario JSON file, or a preset name from `scenarios list`")
      ->required();
  auto* seed_opt =
      run->add_option("--seed", seed, "override the scenario's RNG seed");
  auto* until_opt = run->add_option(
      "--until", until,
      "simulated seconds to run (default: past the last monitored block)");
  run->add_option("--out", run_args.out, "output directory")
      ->capture_default_str();
  run->add_option("--format", run_args.format, "record file format")
      ->check(CLI::IsMember({"jsonl", "csv"}))
      ->capture_default_str();

  std::string report_path;
  auto* report = app.add_subcommand("report", "summarize a records file");
  report->add_option("--in", report_path, "records file (jsonl or csv)")
      ->required();

  auto* scenarios =
      app.add_subcommand("scenarios", "bundled scenario presets");
  scenarios->require_subcommand(1);
  auto* list = scenarios->add_subcommand("list", "list preset names");
  std::string preset_name;
  auto* show =
      scenarios->add_subcommand("show", "print a preset as scenario JSON");
  show->add_option("name", preset_name, "preset name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (run->parsed()) {
      if (seed_opt->count() > 0) run_args.seed = seed;
      if (until_opt->count() > 0) run_args.until = until;
      return do_run(run_args);
    }
    if (report->parsed()) return do_report(report_path);
    if (list->parsed()) return do_scenarios_list();
    if (show->parsed()) return do_scenarios_show(preset_name);
  } catch (const srv6pm::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const srv6pm::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const srv6pm::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const srv6pm::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const srv6pm::ControllerError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
