#include "vcz/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "vcz/confinement.hpp"

namespace vcz {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) fail(where, "unknown key '" + key + "'");
}

double get_num(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number())
    fail(where, std::string("missing or non-numeric '") + key + "'");
  return obj[key].get<double>();
}

/// Scalar broadcasts to every axis; arrays must match the dimension.
Vec get_vec(const json& obj, const std::string& where, const char* key,
            int dim) {
  if (!obj.contains(key))
    fail(where, std::string("missing '") + key + "'");
  const json& v = obj[key];
  if (v.is_number()) return Vec::Constant(dim, v.get<double>());
  if (v.is_array()) {
    if (static_cast<int>(v.size()) != dim)
      fail(where, std::string("'") + key + "' must have " +
                      std::to_string(dim) + " entries");
    Vec out(dim);
    for (int i = 0; i < dim; ++i) {
      if (!v[i].is_number()) fail(where, std::string("'") + key + "' entry not numeric");
      out[i] = v[i].get<double>();
    }
    return out;
  }
  fail(where, std::string("'") + key + "' must be a number or array");
}

IntervalBox get_box(const json& obj, const std::string& where, int dim) {
  check_keys(obj, where, {"lo", "hi"});
  return IntervalBox(get_vec(obj, where, "lo", dim),
                     get_vec(obj, where, "hi", dim));
}

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

Vec json_to_vec(const json& a) {
  Vec v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i].get<double>();
  return v;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open for writing: " + path);
  out << content;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

}  // namespace

Plant Scenario::make_plant_instance() const {
  Plant p = make_plant(plant_type, mass, length, gravity, agents);
  p.bounds = bounds;
  return p;
}

SimConfig Scenario::sim_config() const {
  SimConfig cfg;
  cfg.dt = dt;
  cfg.t_end = t_end;
  cfg.x0 = x0;
  cfg.v0 = v0;
  cfg.xi0 = xi0;
  cfg.disturbance = disturbance;
  cfg.psi = psi;
  cfg.funnel = funnel;
  cfg.lambda = lambda;
  cfg.tau_bar = bounds.tau_bar;
  return cfg;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }

  check_keys(doc, path,
             {"schema", "name", "plant", "bounds", "vcz", "grid", "inputs",
              "horizon", "funnel", "psi", "disturbance", "seed", "initial",
              "tasks", "separation"});
  if (!doc.contains("schema") || doc["schema"] != 1)
    fail(path, "missing or unsupported 'schema' (expected 1)");

  Scenario sc;
  if (!doc.contains("name") || !doc["name"].is_string())
    fail(path, "missing 'name'");
  sc.name = doc["name"].get<std::string>();

  const json& plant = doc.at("plant");
  check_keys(plant, "plant", {"type", "mass", "length", "gravity", "agents"});
  if (!plant.contains("type") || !plant["type"].is_string())
    fail("plant", "missing 'type'");
  sc.plant_type = plant["type"].get<std::string>();
  if (plant.contains("mass")) sc.mass = get_num(plant, "plant", "mass");
  if (plant.contains("length")) sc.length = get_num(plant, "plant", "length");
  if (plant.contains("gravity")) sc.gravity = get_num(plant, "plant", "gravity");
  if (plant.contains("agents")) sc.agents = plant["agents"].get<int>();

  Plant defaults;
  try {
    defaults = make_plant(sc.plant_type, sc.mass, sc.length, sc.gravity,
                          sc.agents);
  } catch (const ContractViolation& e) {
    fail("plant", e.what());
  }
  const int dof = defaults.dof;
  sc.bounds = defaults.bounds;

  if (doc.contains("bounds")) {
    const json& b = doc["bounds"];
    check_keys(b, "bounds",
               {"m_lower", "m_i_lower", "v_m_max", "d_bar", "v_bar", "tau_bar"});
    if (b.contains("m_lower")) sc.bounds.m_lower = get_num(b, "bounds", "m_lower");
    if (b.contains("m_i_lower"))
      sc.bounds.m_i_lower = get_num(b, "bounds", "m_i_lower");
    if (b.contains("v_m_max")) sc.bounds.v_m_max = get_vec(b, "bounds", "v_m_max", dof);
    if (b.contains("d_bar")) sc.bounds.d_bar = get_vec(b, "bounds", "d_bar", dof);
    if (b.contains("v_bar")) sc.bounds.v_bar = get_vec(b, "bounds", "v_bar", dof);
    if (b.contains("tau_bar")) sc.bounds.tau_bar = get_vec(b, "bounds", "tau_bar", dof);
  }

  const json& funnel = doc.at("funnel");
  check_keys(funnel, "funnel", {"p", "q", "mu"});
  sc.funnel.p_v = get_vec(funnel, "funnel", "p", dof);
  sc.funnel.q_v = get_vec(funnel, "funnel", "q", dof);
  sc.funnel.mu_v = get_vec(funnel, "funnel", "mu", dof);
  try {
    sc.funnel.validate();
  } catch (const ContractViolation& e) {
    fail("funnel", e.what());
  }

  if (doc.contains("psi")) {
    const json& psi = doc["psi"];
    check_keys(psi, "psi", {"variant", "sharpness"});
    if (psi.contains("variant")) {
      const auto v = psi["variant"].get<std::string>();
      if (v == "smooth")
        sc.psi.variant = PsiConfig::Variant::Smooth;
      else if (v == "exact")
        sc.psi.variant = PsiConfig::Variant::Exact;
      else
        fail("psi", "variant must be 'smooth' or 'exact'");
    }
    if (psi.contains("sharpness"))
      sc.psi.sharpness = get_num(psi, "psi", "sharpness");
  }

  const json& vcz = doc.at("vcz");
  check_keys(vcz, "vcz", {"lambda", "u_bar", "auto"});
  if (vcz.contains("auto")) {
    const auto mode = vcz["auto"].get<std::string>();
    if (mode == "most-efficient") {
      const ParamChoice choice = solve_most_efficient(sc.bounds, sc.funnel);
      sc.lambda = vcz.contains("lambda") ? get_num(vcz, "vcz", "lambda")
                                         : choice.lambda;
      sc.u_bar = choice.u_bar;
      sc.vcz_mode = "most-efficient";
    } else if (mode == "least-conservative") {
      const LeastConservative lc =
          solve_least_conservative(sc.bounds, sc.funnel);
      sc.lambda = vcz.contains("lambda") ? get_num(vcz, "vcz", "lambda")
                                         : lc.lambda_min;
      sc.u_bar = lc.u_bar_max(sc.lambda);
      sc.vcz_mode = "least-conservative";
    } else {
      fail("vcz", "auto must be 'most-efficient' or 'least-conservative'");
    }
    if (vcz.contains("u_bar")) sc.u_bar = get_vec(vcz, "vcz", "u_bar", dof);
  } else {
    sc.lambda = get_num(vcz, "vcz", "lambda");
    sc.u_bar = get_vec(vcz, "vcz", "u_bar", dof);
    sc.vcz_mode = "explicit";
  }
  if (sc.lambda <= 0.0) fail("vcz", "lambda must be positive");
  if ((sc.u_bar.array() <= 0.0).any()) fail("vcz", "u_bar must be positive");

  const json& grid = doc.at("grid");
  check_keys(grid, "grid", {"domain", "eta"});
  if (!grid.contains("domain")) fail("grid", "missing 'domain'");
  sc.domain = get_box(grid["domain"], "grid.domain", dof);
  sc.eta = get_vec(grid, "grid", "eta", dof);

  if (doc.contains("inputs")) {
    const json& inputs = doc["inputs"];
    check_keys(inputs, "inputs", {"samples"});
    if (inputs.contains("samples")) sc.input_samples = inputs["samples"].get<int>();
  }

  const json& horizon = doc.at("horizon");
  check_keys(horizon, "horizon", {"h", "dt", "t_end"});
  sc.h = get_num(horizon, "horizon", "h");
  sc.dt = get_num(horizon, "horizon", "dt");
  sc.t_end = get_num(horizon, "horizon", "t_end");

  if (doc.contains("seed")) sc.seed = doc["seed"].get<std::uint64_t>();
  sc.disturbance.kind = DisturbanceKind::Zero;
  sc.disturbance.amplitude = Vec::Zero(dof);
  sc.disturbance.seed = sc.seed;
  if (doc.contains("disturbance")) {
    const json& d = doc["disturbance"];
    check_keys(d, "disturbance", {"kind", "amplitude", "frequency", "phase"});
    const auto kind = d.at("kind").get<std::string>();
    if (kind == "zero") {
      sc.disturbance.kind = DisturbanceKind::Zero;
    } else if (kind == "sinusoidal") {
      sc.disturbance.kind = DisturbanceKind::Sinusoidal;
      sc.disturbance.amplitude = get_vec(d, "disturbance", "amplitude", dof);
      sc.disturbance.frequency = get_vec(d, "disturbance", "frequency", dof);
      sc.disturbance.phase = d.contains("phase")
                                 ? get_vec(d, "disturbance", "phase", dof)
                                 : Vec::Zero(dof);
    } else if (kind == "uniform") {
      sc.disturbance.kind = DisturbanceKind::Uniform;
      sc.disturbance.amplitude = get_vec(d, "disturbance", "amplitude", dof);
    } else {
      fail("disturbance", "kind must be 'zero', 'sinusoidal', or 'uniform'");
    }
  }

  const json& initial = doc.at("initial");
  check_keys(initial, "initial", {"x", "v", "xi"});
  sc.x0 = get_vec(initial, "initial", "x", dof);
  sc.v0 = initial.contains("v") ? get_vec(initial, "initial", "v", dof)
                                : Vec::Zero(dof);
  if (initial.contains("xi") && !initial["xi"].is_string())
    sc.xi0 = get_vec(initial, "initial", "xi", dof);
  else if (initial.contains("xi") && initial["xi"] != "auto")
    fail("initial", "'xi' must be an array or \"auto\"");

  const json& tasks = doc.at("tasks");
  if (!tasks.is_array() || tasks.empty())
    fail("tasks", "expected a non-empty array");
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string where = "tasks[" + std::to_string(i) + "]";
    const json& t = tasks[i];
    check_keys(t, where, {"goals", "obstacles", "stay", "invariant"});
    RasTask task;
    if (t.contains("goals"))
      for (const auto& g : t["goals"])
        task.goals.push_back(get_box(g, where + ".goals", dof));
    if (t.contains("obstacles"))
      for (const auto& o : t["obstacles"])
        task.obstacles.push_back(get_box(o, where + ".obstacles", dof));
    if (!t.contains("stay")) fail(where, "missing 'stay'");
    task.stay = get_box(t["stay"], where + ".stay", dof);
    task.invariant_only = t.value("invariant", false);
    if (task.invariant_only && task.goals.empty()) task.goals = {task.stay};
    if (task.goals.empty()) fail(where, "missing 'goals'");
    sc.sequence.tasks.push_back(std::move(task));
  }
  try {
    sc.sequence.validate();
  } catch (const ContractViolation& e) {
    fail("tasks", e.what());
  }

  if (doc.contains("separation"))
    sc.separation = get_num(doc, path, "separation");
  return sc;
}

namespace {

json model_to_json(const SymbolicModel& model) {
  json j;
  j["grid"]["lo"] = vec_to_json(model.grid.domain().lo());
  j["grid"]["hi"] = vec_to_json(model.grid.domain().hi());
  j["grid"]["eta"] = vec_to_json(model.grid.eta());
  j["h"] = model.h;
  json inputs = json::array();
  for (const auto& u : model.inputs) inputs.push_back(vec_to_json(u));
  j["inputs"] = inputs;
  j["offsets"] = model.offsets;
  j["succ"] = model.succ;
  return j;
}

SymbolicModel model_from_json(const json& j) {
  SymbolicModel m;
  m.grid = GridSpec(IntervalBox(json_to_vec(j.at("grid").at("lo")),
                                json_to_vec(j.at("grid").at("hi"))),
                    json_to_vec(j.at("grid").at("eta")));
  m.h = j.at("h").get<double>();
  for (const auto& u : j.at("inputs")) m.inputs.push_back(json_to_vec(u));
  m.offsets = j.at("offsets").get<std::vector<std::uint64_t>>();
  m.succ = j.at("succ").get<std::vector<std::uint32_t>>();
  return m;
}

}  // namespace

void save_controller(const std::string& path, const SymbolicModel& model,
                     const SymbolicController& ctrl) {
  json j;
  j["model"] = model_to_json(model);
  json tasks = json::array();
  for (const auto& tc : ctrl.tasks) {
    json t;
    t["value"] = tc.value;
    t["policy"] = tc.policy;
    t["goal_cells"] = tc.goal_cells;
    tasks.push_back(t);
  }
  j["tasks"] = tasks;
  write_file(path, j.dump());
}

void load_controller(const std::string& path, SymbolicModel& model,
                     SymbolicController& ctrl) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open controller file: " + path);
  json j;
  try {
    in >> j;
    model = model_from_json(j.at("model"));
    ctrl.tasks.clear();
    for (const auto& t : j.at("tasks")) {
      TaskController tc;
      tc.value = t.at("value").get<std::vector<std::int32_t>>();
      tc.policy = t.at("policy").get<std::vector<std::vector<std::uint16_t>>>();
      tc.goal_cells = t.at("goal_cells").get<std::vector<std::uint32_t>>();
      tc.winning.assign(tc.value.size(), 0);
      for (std::size_t c = 0; c < tc.value.size(); ++c)
        tc.winning[c] = tc.value[c] >= 0 ? 1 : 0;
      ctrl.tasks.push_back(std::move(tc));
    }
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void save_model(const std::string& path, const SymbolicModel& model) {
  write_file(path, model_to_json(model).dump());
}

bool load_cached_model(const std::string& path, SymbolicModel& model) {
  std::ifstream in(path);
  if (!in) return false;
  json j;
  try {
    in >> j;
    model = model_from_json(j);
  } catch (const json::exception&) {
    return false;
  }
  return true;
}

void write_trajectory_csv(const std::string& path,
                          const std::vector<SimRecord>& trace) {
  std::ostringstream os;
  const int n = trace.empty() ? 0 : static_cast<int>(trace.front().x.size());
  os << "t";
  for (int i = 1; i <= n; ++i) os << ",x" << i;
  for (int i = 1; i <= n; ++i) os << ",v" << i;
  for (int i = 1; i <= n; ++i) os << ",xi" << i;
  for (int i = 1; i <= n; ++i) os << ",u" << i;
  for (int i = 1; i <= n; ++i) os << ",tau" << i;
  os << ",task,conf,funnel,torque,vczspec\n";
  for (const auto& r : trace) {
    os << fmt(r.t);
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.x[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.v[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.xi[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.u[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.tau[i]);
    os << ',' << r.task << ',' << int(r.conf) << ',' << int(r.funnel_ok)
       << ',' << int(r.torque_ok) << ',' << int(r.spec_ok) << "\n";
  }
  write_file(path, os.str());
}

void write_sim_report_json(const std::string& path, const SimReport& report) {
  json j;
  j["completed"] = report.completed;
  j["breach_monitor"] = report.breach_monitor;
  j["breach_time"] = report.breach_time;
  j["tasks_completed"] = report.tasks_completed;
  j["steps"] = report.steps;
  j["satisfied"] = report.satisfaction.satisfied;
  json per = json::array();
  for (const auto& v : report.satisfaction.per_task) {
    json t;
    t["reached"] = v.reached_index.has_value();
    if (v.reached_index) t["reached_step"] = *v.reached_index;
    t["avoided"] = v.avoided;
    t["stayed"] = v.stayed;
    per.push_back(t);
  }
  j["tasks"] = per;
  write_file(path, j.dump(2) + "\n");
}

void write_plot_data(const std::string& stem,
                     const std::vector<SimRecord>& trace) {
  const int n = trace.empty() ? 0 : static_cast<int>(trace.front().x.size());
  auto emit = [&](const std::string& suffix,
                  const std::vector<std::string>& heads,
                  auto&& columns) {
    std::ostringstream os;
    os << "t";
    for (const auto& head : heads)
      for (int i = 1; i <= n; ++i) os << ',' << head << i;
    os << "\n";
    for (const auto& r : trace) {
      os << fmt(r.t);
      columns(os, r);
      os << "\n";
    }
    write_file(stem + suffix, os.str());
  };
  emit("_position.csv", {"x", "xi"}, [&](std::ostringstream& os, const SimRecord& r) {
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.x[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.xi[i]);
  });
  emit("_velocity.csv", {"v", "u"}, [&](std::ostringstream& os, const SimRecord& r) {
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.v[i]);
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.u[i]);
  });
  emit("_torque.csv", {"tau"}, [&](std::ostringstream& os, const SimRecord& r) {
    for (int i = 0; i < n; ++i) os << ',' << fmt(r.tau[i]);
  });
}

std::string feasibility_report_json(const Scenario& sc) {
  const VczParams params{sc.lambda, sc.u_bar, sc.h, sc.eta};
  const FeasibilityReport rep = check_feasibility(sc.bounds, sc.funnel, params);
  json j;
  j["pass"] = rep.pass;
  j["lambda"] = sc.lambda;
  j["u_bar"] = vec_to_json(sc.u_bar);
  j["mode"] = sc.vcz_mode;
  j["a_r"] = rep.a_r;
  j["rhs"] = vec_to_json(rep.torque_rhs);
  j["tau_bar"] = vec_to_json(sc.bounds.tau_bar);
  j["velocity_slack"] = vec_to_json(rep.velocity_slack);
  j["torque_slack"] = vec_to_json(rep.torque_slack);
  try {
    const ParamChoice me = solve_most_efficient(sc.bounds, sc.funnel);
    j["lambda_me"] = me.lambda;
    j["u_bar_me"] = vec_to_json(me.u_bar);
  } catch (const InfeasibleTask& e) {
    j["lambda_me"] = nullptr;
  }
  try {
    const LeastConservative lc = solve_least_conservative(sc.bounds, sc.funnel);
    j["lambda_lc"] = lc.lambda_min;
    j["u_bar_lc_at_lambda"] = vec_to_json(lc.u_bar_max(sc.lambda));
  } catch (const InfeasibleTask& e) {
    j["lambda_lc"] = nullptr;
  }
  return j.dump(2) + "\n";
}

}  // namespace vcz
