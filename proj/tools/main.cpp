#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "vcz/baseline.hpp"
#include "vcz/scenario_io.hpp"

namespace {

bool verbose() {
  const char* v = std::getenv("VCZ_LOG");
  return v != nullptr && *v != '\0';
}

void log(const std::string& msg) {
  if (verbose()) std::cerr << "[vcz] " << msg << "\n";
}

struct SynthesisArtifacts {
  vcz::SymbolicModel model;
  vcz::SymbolicController ctrl;
};

SynthesisArtifacts synthesize_from(const vcz::Scenario& sc,
                                   const std::string& cache_path) {
  SynthesisArtifacts art;
  const vcz::GridSpec grid(sc.domain, sc.eta);
  bool cached = false;
  if (!cache_path.empty() && vcz::load_cached_model(cache_path, art.model)) {
    cached = true;
    log("loaded cached model from " + cache_path);
  }
  if (!cached) {
    const vcz::InputGrid inputs(
        sc.u_bar, std::vector<int>(static_cast<std::size_t>(sc.u_bar.size()),
                                   sc.input_samples));
    art.model = vcz::build_model(grid, inputs, sc.h);
    log("built model: " + std::to_string(art.model.num_transitions()) +
        " transitions");
    if (!cache_path.empty()) vcz::save_model(cache_path, art.model);
  }
  const vcz::Vec delta = vcz::compute_delta(sc.u_bar, sc.h, sc.eta).delta;
  const vcz::TightenedSequence tight =
      vcz::tighten(sc.sequence, sc.lambda, delta);
  const auto sets = vcz::abstract_sets(tight, art.model.grid);
  art.ctrl = vcz::synthesize_sequence(art.model, sets, tight);
  return art;
}

int cmd_feasibility(const std::string& scenario_path,
                    const std::string& out_path) {
  const vcz::Scenario sc = vcz::load_scenario(scenario_path);
  const std::string report = vcz::feasibility_report_json(sc);
  std::cout << report;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    out << report;
  }
  const bool pass = report.find("\"pass\": true") != std::string::npos;
  return pass ? 0 : 2;
}

int cmd_synthesize(const std::string& scenario_path,
                   const std::string& out_path,
                   const std::string& cache_path) {
  const vcz::Scenario sc = vcz::load_scenario(scenario_path);
  const SynthesisArtifacts art = synthesize_from(sc, cache_path);
  if (!out_path.empty()) vcz::save_controller(out_path, art.model, art.ctrl);

  const auto& first = art.ctrl.tasks.front();
  bool start_covered;
  if (sc.xi0.size() > 0) {
    start_covered = vcz::ConcretePolicy(art.model, first).in_domain(sc.xi0);
  } else {
    start_covered = first.domain_size() > 0;
  }
  std::cout << "{\n  \"cells\": " << art.model.grid.num_cells()
            << ",\n  \"transitions\": " << art.model.num_transitions()
            << ",\n  \"tasks\": " << art.ctrl.tasks.size()
            << ",\n  \"domain\": " << first.domain_size()
            << ",\n  \"start_covered\": " << (start_covered ? "true" : "false")
            << "\n}\n";
  if (!start_covered)
    throw vcz::InfeasibleTask("synthesize: initial zone center not in the winning domain");
  return 0;
}

int cmd_simulate(const std::string& scenario_path,
                 const std::string& controller_path,
                 const std::string& out_dir, const std::string& cache_path,
                 long long seed_override, double dt_override) {
  vcz::Scenario sc = vcz::load_scenario(scenario_path);
  if (seed_override >= 0) {
    sc.seed = static_cast<std::uint64_t>(seed_override);
    sc.disturbance.seed = sc.seed;
  }
  if (dt_override > 0.0) sc.dt = dt_override;

  SynthesisArtifacts art;
  if (!controller_path.empty()) {
    vcz::load_controller(controller_path, art.model, art.ctrl);
    log("loaded controller from " + controller_path);
  } else {
    art = synthesize_from(sc, cache_path);
  }

  const vcz::Plant plant = sc.make_plant_instance();
  const vcz::SimResult res =
      vcz::run_closed_loop(plant, art.model, art.ctrl, sc.sequence,
                           sc.sim_config());

  std::filesystem::create_directories(out_dir);
  const std::string stem = out_dir + "/" + sc.name;
  vcz::write_trajectory_csv(stem + "_trajectory.csv", res.trace);
  vcz::write_sim_report_json(stem + "_report.json", res.report);
  vcz::write_plot_data(stem, res.trace);
  std::cout << (res.report.completed ? "completed" : "breach: " +
                res.report.breach_monitor)
            << ", tasks " << res.report.tasks_completed << "/"
            << sc.sequence.tasks.size() << ", steps " << res.report.steps
            << "\n";
  return res.report.completed ? 0 : 3;
}

int cmd_benchmark(const std::string& out_dir) {
  vcz::PendulumBenchConfig cfg;
  vcz::Vec lo(1), hi(1);
  lo << -0.2;
  hi << 0.2;
  cfg.angle_domain = vcz::IntervalBox(lo, hi);
  lo << -0.1;
  hi << 0.1;
  cfg.velocity_domain = vcz::IntervalBox(lo, hi);
  lo << 0.05;
  hi << 0.2;
  cfg.goal = vcz::IntervalBox(lo, hi);
  cfg.eta_angle = 0.004;
  cfg.eta_velocity = 0.004;
  cfg.h = 0.1;
  cfg.u_bar = 0.07;
  cfg.tau_bar = 0.6;  // sampling range around the gravity-compensation torque
  cfg.torque_samples = 11;

  vcz::BenchmarkTable table = vcz::run_pendulum_comparison(cfg);
  vcz::append_arm_rows(table, 0.01, 0.1, 0.12);
  const std::string md = vcz::to_markdown(table);
  std::cout << md;
  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    std::ofstream(out_dir + "/benchmark.md", std::ios::binary) << md;
    std::ofstream(out_dir + "/benchmark.csv", std::ios::binary)
        << vcz::to_csv(table);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"zone-based controller synthesis toolkit"};
  app.require_subcommand(1);

  std::string scenario_path, out_path, controller_path, cache_path;
  long long seed_override = -1;
  double dt_override = 0.0;

  auto* feas = app.add_subcommand("feasibility", "check the parameter inequalities");
  feas->add_option("--scenario", scenario_path)->required();
  feas->add_option("--out", out_path);

  auto* synth = app.add_subcommand("synthesize", "build the symbolic controller");
  synth->add_option("--scenario", scenario_path)->required();
  synth->add_option("--out", out_path);
  synth->add_option("--cache-model", cache_path);

  auto* simu = app.add_subcommand("simulate", "run the closed loop");
  simu->add_option("--scenario", scenario_path)->required();
  simu->add_option("--controller", controller_path);
  simu->add_option("--out", out_path)->required();
  simu->add_option("--cache-model", cache_path);
  simu->add_option("--seed-override", seed_override);
  simu->add_option("--dt", dt_override);

  auto* bench = app.add_subcommand("benchmark", "compare against the full-state comparator");
  bench->add_option("--out", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (feas->parsed()) return cmd_feasibility(scenario_path, out_path);
    if (synth->parsed())
      return cmd_synthesize(scenario_path, out_path, cache_path);
    if (simu->parsed())
      return cmd_simulate(scenario_path, controller_path, out_path, cache_path,
                          seed_override, dt_override);
    if (bench->parsed()) return cmd_benchmark(out_path);
  } catch (const vcz::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 4;
  } catch (const vcz::ContractViolation& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return 4;
  } catch (const std::runtime_error& e) {
    // infeasibility family: tightening, empty goals, empty games, composition
    std::cerr << "infeasible: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
