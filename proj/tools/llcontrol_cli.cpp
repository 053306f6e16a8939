// llcontrol: run Landau-Lifshitz control scenarios from config files.
//
// Exit status: 0 success, 1 invalid input or configuration, 2 numerical failure.

#include <cstdio>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "llcontrol/config.hpp"
#include "llcontrol/plot.hpp"
#include "llcontrol/scenario.hpp"

namespace {

struct RunArgs {
  std::string config;
  std::string out;
  std::vector<std::string> overrides;
  bool allow_large_dt = false;
};

int report(const llc::ScenarioResult& r, const llc::ScenarioConfig& c) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << '\n';
  for (const auto& [k, v] : r.summary) std::printf("%s = %.10g\n", k.c_str(), v);
  if (r.status != llc::RunStatus::Ok) std::cerr << "error: " << r.message << '\n';
  std::printf("outputs in %s (%.3f s)\n", c.output_dir.string().c_str(), r.wall_time_s);
  return static_cast<int>(r.status);
}

int run(const std::string& subcommand, const std::set<llc::ScenarioKind>& accepted,
        llc::ScenarioKind default_kind, const RunArgs& args) {
  llc::KeyValueConfig kv = args.config.empty()
                               ? llc::KeyValueConfig::parse("", "<defaults>")
                               : llc::KeyValueConfig::load(args.config);
  for (const auto& o : args.overrides) kv.apply_override(o);
  if (!args.out.empty()) kv.set("output.dir", args.out);
  if (args.allow_large_dt) kv.set("integrator.allow_large_dt", "true");
  if (!kv.find("kind")) kv.set("kind", llc::to_string(default_kind));

  const llc::ScenarioConfig c = llc::build_scenario(kv);
  if (!accepted.count(c.kind))
    throw llc::ConfigError("config kind '" + llc::to_string(c.kind) + "' cannot run under '" +
                           subcommand + "'");
  return report(llc::run_scenario(c), c);
}

void add_run_options(CLI::App* sub, RunArgs& args) {
  sub->add_option("--config", args.config, "scenario config file")->check(CLI::ExistingFile);
  sub->add_option("--out", args.out, "output directory (overrides output.dir)");
  sub->add_option("--override", args.overrides, "key=value, repeatable")->take_all();
  sub->add_flag("--allow-large-dt", args.allow_large_dt, "skip the time-step stability check");
}

}  // namespace

int main(int argc, char** argv) {
  using llc::ScenarioKind;
  CLI::App app{"Landau-Lifshitz control toolkit"};
  app.set_version_flag("--version", llc::toolkit_version());
  app.require_subcommand(1);

  RunArgs args;
  struct Mode {
    const char* name;
    const char* help;
    std::set<ScenarioKind> accepted;
    ScenarioKind fallback;
  };
  const std::vector<Mode> modes = {
      {"simulate", "free or controlled evolution", {ScenarioKind::Simulate}, ScenarioKind::Simulate},
      {"steer", "steer to a target, or a sequence of targets",
       {ScenarioKind::Steer, ScenarioKind::SteerSequence}, ScenarioKind::Steer},
      {"hysteresis", "periodic-forcing frequency sweep", {ScenarioKind::HysteresisSweep},
       ScenarioKind::HysteresisSweep},
      {"spectrum", "analytic vs discrete linearized spectrum", {ScenarioKind::Spectrum},
       ScenarioKind::Spectrum},
      {"verify", "property checks and convergence orders", {ScenarioKind::Verify},
       ScenarioKind::Verify},
  };
  std::vector<CLI::App*> subs;
  for (const auto& m : modes) {
    subs.push_back(app.add_subcommand(m.name, m.help));
    add_run_options(subs.back(), args);
  }

  std::string manifest, replay_out;
  auto* replay = app.add_subcommand("replay-manifest", "repeat a run from its manifest.json");
  replay->add_option("manifest", manifest, "manifest.json")->required()->check(CLI::ExistingFile);
  replay->add_option("--out", replay_out, "output directory (default: the recorded one)");

  std::string plot_dir;
  auto* plot = app.add_subcommand("plot", "render SVG plots from a results directory");
  plot->add_option("dir", plot_dir, "results directory")->required()->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    for (std::size_t i = 0; i < modes.size(); ++i)
      if (subs[i]->parsed()) return run(modes[i].name, modes[i].accepted, modes[i].fallback, args);
    if (replay->parsed()) {
      const auto kv = llc::manifest_config(manifest);
      llc::KeyValueConfig copy = kv;
      if (!replay_out.empty()) copy.set("output.dir", replay_out);
      const llc::ScenarioConfig c = llc::build_scenario(copy);
      return report(llc::run_scenario(c), c);
    }
    if (plot->parsed()) {
      for (const auto& p : llc::plot_results(plot_dir)) std::printf("wrote %s\n", p.string().c_str());
      return 0;
    }
  } catch (const llc::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const llc::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
