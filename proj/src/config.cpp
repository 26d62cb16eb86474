#include "rfoc/config.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rfoc {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw std::invalid_argument(field + ": " + what);
}

double number(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) fail(field, "expected a number");
  try {
    return n.as<double>();
  } catch (const YAML::Exception&) {
    fail(field, "expected a number");
  }
}

int integer(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) fail(field, "expected an integer");
  try {
    return n.as<int>();
  } catch (const YAML::Exception&) {
    fail(field, "expected an integer");
  }
}

std::string text(const YAML::Node& n, const std::string& field) {
  if (!n.IsScalar()) fail(field, "expected a string");
  return n.as<std::string>();
}

std::vector<double> numbers(const YAML::Node& n, const std::string& field) {
  if (!n.IsSequence()) fail(field, "expected a list of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < n.size(); ++i) out.push_back(number(n[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

// Rejects keys outside `known` so typos surface as errors.
void only(const YAML::Node& n, const std::string& field, const std::set<std::string>& known) {
  if (!n.IsMap()) fail(field, "expected a mapping");
  for (const auto& kv : n) {
    const std::string key = kv.first.as<std::string>();
    if (!known.count(key)) fail(field.empty() ? key : field + "." + key, "unknown key");
  }
}

double gain(const YAML::Node& sec, const std::string& field, const std::string& key) {
  const bool has_db = static_cast<bool>(sec[key + "_db"]);
  const bool has_abs = static_cast<bool>(sec[key]);
  if (has_db == has_abs) fail(field + "." + key, "give exactly one of " + key + " or " + key + "_db");
  const double v = has_db ? db_to_gain(number(sec[key + "_db"], field + "." + key + "_db"))
                          : number(sec[key], field + "." + key);
  if (!(v > 0.0)) fail(field + "." + key, "must be positive");
  return v;
}

FrequencyBand band(const YAML::Node& n, const std::string& field) {
  if (!n) fail(field, "missing");
  only(n, field, {"kind", "low", "high"});
  if (!n["kind"]) fail(field + ".kind", "missing");
  BandKind kind;
  try {
    kind = band_kind_from_string(text(n["kind"], field + ".kind"));
  } catch (const std::invalid_argument& e) {
    fail(field + ".kind", e.what());
  }
  const double lo = n["low"] ? number(n["low"], field + ".low") : 0.0;
  const double hi = n["high"] ? number(n["high"], field + ".high") : 0.0;
  if ((kind == BandKind::Low || kind == BandKind::Mid) && !n["low"]) fail(field + ".low", "missing");
  if ((kind == BandKind::High || kind == BandKind::Mid) && !n["high"]) fail(field + ".high", "missing");
  try {
    return freq_band(kind, lo, hi);
  } catch (const std::invalid_argument& e) {
    fail(field, e.what());
  }
}

Pin pin(const std::string& key, const YAML::Node& v, const std::string& field) {
  const std::string f = field + "." + key;
  if (key.size() < 2 || (key[0] != 'x' && key[0] != 'y')) fail(f, "pin names look like x2 or y0");
  int index = 0;
  try {
    std::size_t used = 0;
    index = std::stoi(key.substr(1), &used);
    if (used != key.size() - 1) throw std::invalid_argument("");
  } catch (const std::exception&) {
    fail(f, "pin names look like x2 or y0");
  }
  return {key[0] == 'x' ? Coefficient::X : Coefficient::Y, index, number(v, f)};
}

RunConfig from_yaml(const YAML::Node& root) {
  RunConfig c;
  if (!root.IsMap()) fail("config", "expected a mapping at the top level");
  only(root, "", {"plant", "controller", "spec", "solver", "verify", "simulate"});

  // plant
  const YAML::Node pl = root["plant"];
  if (!pl) fail("plant", "missing");
  only(pl, "plant", {"a", "b", "deviation_percent", "a_dev", "b_dev", "perturbed"});
  if (!pl["a"]) fail("plant.a", "missing");
  if (!pl["b"]) fail("plant.b", "missing");
  const auto a = numbers(pl["a"], "plant.a");
  const auto b = numbers(pl["b"], "plant.b");
  if (a.empty()) fail("plant.a", "needs at least one coefficient");
  if (b.size() != a.size()) fail("plant.b", "must have as many entries as plant.a");
  const bool pct = static_cast<bool>(pl["deviation_percent"]);
  const bool abs_dev = pl["a_dev"] || pl["b_dev"];
  if (pct && abs_dev) fail("plant.deviation_percent", "conflicts with plant.a_dev / plant.b_dev");
  try {
    if (pct) {
      const double f = number(pl["deviation_percent"], "plant.deviation_percent");
      if (!(f >= 0.0)) fail("plant.deviation_percent", "must be >= 0");
      c.plant = UncertainPlant::from_relative(a, b, f / 100.0);
    } else {
      std::vector<double> ad(a.size(), 0.0), bd(b.size(), 0.0);
      if (pl["a_dev"]) ad = numbers(pl["a_dev"], "plant.a_dev");
      if (pl["b_dev"]) bd = numbers(pl["b_dev"], "plant.b_dev");
      std::vector<double> ac{1.0}, bc{0.0};
      ac.insert(ac.end(), a.begin(), a.end());
      bc.insert(bc.end(), b.begin(), b.end());
      c.plant.emplace(Poly(ac), Poly(bc), ad, bd);
    }
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    if (msg.rfind("plant", 0) == 0) throw;
    fail("plant", msg);
  }
  if (pl["perturbed"]) {
    const YAML::Node pp = pl["perturbed"];
    only(pp, "plant.perturbed", {"a", "b"});
    if (!pp["a"] || !pp["b"]) fail("plant.perturbed", "needs both a and b");
    const auto pa = numbers(pp["a"], "plant.perturbed.a");
    const auto pb = numbers(pp["b"], "plant.perturbed.b");
    if (pa.size() != a.size()) fail("plant.perturbed.a", "must have as many entries as plant.a");
    if (pb.size() != b.size()) fail("plant.perturbed.b", "must have as many entries as plant.b");
    std::vector<double> ac{1.0}, bc{0.0};
    ac.insert(ac.end(), pa.begin(), pa.end());
    bc.insert(bc.end(), pb.begin(), pb.end());
    c.perturbed = PlantInstance{Poly(ac), Poly(bc)};
  }

  // controller
  const YAML::Node ko = root["controller"];
  if (!ko) fail("controller", "missing");
  only(ko, "controller", {"order", "pins", "x", "y"});
  if (!ko["order"]) fail("controller.order", "missing");
  c.m = integer(ko["order"], "controller.order");
  if (c.m < 0) fail("controller.order", "must be >= 0");
  if (ko["pins"]) {
    if (!ko["pins"].IsMap()) fail("controller.pins", "expected a mapping such as {x2: 0}");
    for (const auto& kv : ko["pins"]) c.pins.push_back(pin(kv.first.as<std::string>(), kv.second, "controller.pins"));
    for (const Pin& p : c.pins) {
      if (p.index > c.m || (p.which == Coefficient::X && p.index < 1) || p.index < 0) {
        fail("controller.pins", "index out of range for order " + std::to_string(c.m));
      }
    }
  }
  if (ko["x"] || ko["y"]) {
    if (!ko["x"] || !ko["y"]) fail("controller", "give both x (x1..xm) and y (y0..ym)");
    const auto x = numbers(ko["x"], "controller.x");
    const auto y = numbers(ko["y"], "controller.y");
    if (static_cast<int>(x.size()) != c.m) fail("controller.x", "expected " + std::to_string(c.m) + " entries (x1..xm)");
    if (static_cast<int>(y.size()) != c.m + 1) fail("controller.y", "expected " + std::to_string(c.m + 1) + " entries");
    try {
      c.controller = controller_from_coeffs(x, y, c.pins);
    } catch (const std::invalid_argument& e) {
      fail("controller", e.what());
    }
  }

  // spec
  const YAML::Node sp = root["spec"];
  if (!sp) fail("spec", "missing");
  only(sp, "spec", {"rho_s", "rho_s_db", "rho_t", "rho_t_db", "band_s", "band_t", "delta_s", "delta_t",
                    "central_polynomial"});
  c.spec.rho_s = gain(sp, "spec", "rho_s");
  c.spec.rho_t = gain(sp, "spec", "rho_t");
  c.spec.band_s = band(sp["band_s"], "spec.band_s");
  c.spec.band_t = band(sp["band_t"], "spec.band_t");
  if (sp["delta_s"]) c.spec.delta_s = number(sp["delta_s"], "spec.delta_s");
  if (sp["delta_t"]) c.spec.delta_t = number(sp["delta_t"], "spec.delta_t");
  if (!sp["central_polynomial"]) fail("spec.central_polynomial", "missing");
  c.spec.d_c = Poly(numbers(sp["central_polynomial"], "spec.central_polynomial"));
  c.spec.m = c.m;
  c.spec.validate();
  if (c.spec.d_c.degree() != c.m + c.plant->order()) {
    fail("spec.central_polynomial", "degree must equal plant order + controller order (" +
                                        std::to_string(c.m + c.plant->order()) + ")");
  }

  // solver
  if (const YAML::Node so = root["solver"]) {
    only(so, "solver", {"adapter", "margin", "max_iter", "time_limit", "tol_gap_abs", "tol_gap_rel", "tol_feas",
                        "verbose"});
    if (so["adapter"]) c.adapter = text(so["adapter"], "solver.adapter");
    if (so["margin"]) c.margin = number(so["margin"], "solver.margin");
    if (!(c.margin >= 0.0)) fail("solver.margin", "must be >= 0");
    if (so["max_iter"]) c.solver.max_iter = integer(so["max_iter"], "solver.max_iter");
    if (so["time_limit"]) c.solver.time_limit = number(so["time_limit"], "solver.time_limit");
    if (so["tol_gap_abs"]) c.solver.tol_gap_abs = number(so["tol_gap_abs"], "solver.tol_gap_abs");
    if (so["tol_gap_rel"]) c.solver.tol_gap_rel = number(so["tol_gap_rel"], "solver.tol_gap_rel");
    if (so["tol_feas"]) c.solver.tol_feas = number(so["tol_feas"], "solver.tol_feas");
    if (so["verbose"]) c.solver.verbose = so["verbose"].as<bool>();
    if (c.solver.max_iter < 1) fail("solver.max_iter", "must be >= 1");
  }

  // verify
  if (const YAML::Node ve = root["verify"]) {
    only(ve, "verify", {"samples", "seed", "grid_points", "slack"});
    if (ve["samples"]) c.samples = integer(ve["samples"], "verify.samples");
    if (ve["seed"]) c.seed = static_cast<std::uint64_t>(integer(ve["seed"], "verify.seed"));
    if (ve["grid_points"]) c.verify.grid_points = integer(ve["grid_points"], "verify.grid_points");
    if (ve["slack"]) c.verify.slack = number(ve["slack"], "verify.slack");
    if (c.samples < 0) fail("verify.samples", "must be >= 0");
    if (c.verify.grid_points < 2) fail("verify.grid_points", "must be >= 2");
    if (!(c.verify.slack >= 0.0)) fail("verify.slack", "must be >= 0");
  }

  // simulate
  if (const YAML::Node si = root["simulate"]) {
    only(si, "simulate", {"reference", "amplitude", "omega", "duration", "periods", "dt", "settle_fraction"});
    if (si["reference"]) c.reference.kind = reference_kind_from_string(text(si["reference"], "simulate.reference"));
    if (si["amplitude"]) c.reference.amplitude = number(si["amplitude"], "simulate.amplitude");
    if (si["omega"]) c.reference.omega = number(si["omega"], "simulate.omega");
    if (si["duration"]) c.duration = number(si["duration"], "simulate.duration");
    if (si["periods"]) c.periods = number(si["periods"], "simulate.periods");
    if (si["dt"]) c.dt = number(si["dt"], "simulate.dt");
    if (si["settle_fraction"]) c.settle_fraction = number(si["settle_fraction"], "simulate.settle_fraction");
    if (c.reference.kind == Reference::Kind::Sine && !(c.reference.omega > 0.0)) fail("simulate.omega", "must be > 0");
    if (!(c.dt > 0.0)) fail("simulate.dt", "must be > 0");
    if (!(c.duration >= 0.0)) fail("simulate.duration", "must be >= 0");
    if (!(c.periods > 0.0)) fail("simulate.periods", "must be > 0");
    if (!(c.settle_fraction >= 0.0 && c.settle_fraction < 1.0)) fail("simulate.settle_fraction", "must lie in [0, 1)");
  }
  return c;
}

}  // namespace

const UncertainPlant& RunConfig::uncertain_plant() const {
  if (!plant) throw std::invalid_argument("plant: missing");
  return *plant;
}

PlantInstance RunConfig::simulation_plant() const {
  if (perturbed) return *perturbed;
  return {uncertain_plant().a_center(), uncertain_plant().b_center()};
}

double RunConfig::sim_duration() const {
  if (duration > 0.0) return duration;
  if (reference.kind == Reference::Kind::Sine) return periods * reference.period();
  return 100.0;
}

RunConfig parse_config(const std::string& text_in) {
  YAML::Node root;
  try {
    root = YAML::Load(text_in);
  } catch (const YAML::Exception& e) {
    fail("config", std::string("YAML parse error: ") + e.what());
  }
  return from_yaml(root);
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("config", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

ControllerParams controller_from_coeffs(const std::vector<double>& x_tail, const std::vector<double>& y,
                                        const std::vector<Pin>& pins) {
  std::vector<double> x{1.0};
  x.insert(x.end(), x_tail.begin(), x_tail.end());
  return ControllerParams(Poly(x), Poly(y), pins);
}

}  // namespace rfoc
