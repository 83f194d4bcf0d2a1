#include "cli.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinphoton/dynamics.hpp"
#include "spinphoton/emission.hpp"
#include "spinphoton/errors.hpp"
#include "spinphoton/excitation.hpp"
#include "spinphoton/multiphoton.hpp"
#include "spinphoton/sweep.hpp"
#include "spinphoton/transmission.hpp"

namespace spinphoton::cli {

namespace {

enum class Kind { Real, Int, Seed, Bool, Text };

struct Key {
  const char* name;
  Kind kind;
  const char* help;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      {"omega-c", Kind::Real, "central cavity frequency"},
      {"delta", Kind::Real, "half splitting of the H/V modes"},
      {"omega-0", Kind::Real, "trion resonance frequency"},
      {"g", Kind::Real, "light-matter coupling"},
      {"kappa", Kind::Real, "cavity amplitude decay rate"},
      {"eps-plus-re", Kind::Real, "sigma+ pump amplitude, real part"},
      {"eps-plus-im", Kind::Real, "sigma+ pump amplitude, imaginary part"},
      {"eps-minus-re", Kind::Real, "sigma- pump amplitude, real part"},
      {"eps-minus-im", Kind::Real, "sigma- pump amplitude, imaginary part"},
      {"pi-pulse", Kind::Bool, "use the pi-pulse pump amplitudes with phases (|e+|, -i|e-|)"},
      {"cutoff", Kind::Int, "photon cutoff per circular mode"},
      {"fast-cavity-threshold", Kind::Real, "largest g/kappa treated as fast cavity"},
      {"t-end", Kind::Real, "end of the time window"},
      {"dt-max", Kind::Real, "largest integrator step"},
      {"n-times", Kind::Int, "number of output samples"},
      {"seed", Kind::Seed, "global random seed"},
      {"n-traj", Kind::Int, "number of quantum trajectories"},
      {"method", Kind::Text, "lindblad or trajectories"},
      {"analytic", Kind::Bool, "closed-form excitation instead of ODE integration"},
      {"pulse-duration", Kind::Real, "square pump pulse length; 0 selects the instantaneous kick"},
      {"initial", Kind::Text, "electron, trion-up, trion-down or trion-x"},
      {"kick-tolerance", Kind::Real, "largest norm loss tolerated when truncating the kicked state"},
      {"omega-min", Kind::Real, "lowest probe frequency"},
      {"omega-max", Kind::Real, "highest probe frequency"},
      {"n-omega", Kind::Int, "number of probe frequencies"},
      {"spin", Kind::Text, "prepared electron spin, up or down"},
      {"det-min", Kind::Real, "lowest omega_0 - omega_c of the map"},
      {"det-max", Kind::Real, "highest omega_0 - omega_c of the map"},
      {"det-count", Kind::Int, "map columns"},
      {"delta-min", Kind::Real, "lowest splitting of the map"},
      {"delta-max", Kind::Real, "highest splitting of the map"},
      {"delta-count", Kind::Int, "map rows"},
      {"quantity", Kind::Text, "comma-separated subset of N_tr_max, Fc, concurrence, tau"},
      {"contour-level", Kind::Real, "iso-level for contour extraction"},
      {"amplitude-points", Kind::Int, "optimizer grid points per pump amplitude"},
      {"phase-points", Kind::Int, "optimizer grid points of the relative phase"},
      {"format", Kind::Text, "csv or json"},
  };
  return k;
}

const Key* find_key(const std::string& name) {
  for (const auto& k : keys()) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

const std::array<std::string, 5> kCommands = {"excite", "emit", "dynamics", "transmission", "sweep"};

std::string shortest(double x) {
  if (std::isnan(x)) return "nan";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

nlohmann::json parse_flag(const Key& key, const std::string& text) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto fail = [&]() -> nlohmann::json {
    throw InvalidParams("invalid value '" + text + "' for --" + key.name);
  };
  switch (key.kind) {
    case Kind::Real: {
      double v = 0.0;
      const auto r = std::from_chars(first, last, v);
      if (r.ec != std::errc() || r.ptr != last) return fail();
      return v;
    }
    case Kind::Int: {
      long long v = 0;
      const auto r = std::from_chars(first, last, v);
      if (r.ec != std::errc() || r.ptr != last) return fail();
      return v;
    }
    case Kind::Seed: {
      std::uint64_t v = 0;
      const auto r = std::from_chars(first, last, v);
      if (r.ec != std::errc() || r.ptr != last) return fail();
      return v;
    }
    case Kind::Bool:
      if (text == "true" || text == "1") return true;
      if (text == "false" || text == "0") return false;
      return fail();
    case Kind::Text: return text;
  }
  return fail();
}

nlohmann::json coerce(const Key& key, const nlohmann::json& v) {
  const auto fail = [&]() -> nlohmann::json {
    throw InvalidParams(std::string("config key '") + key.name + "' has the wrong type");
  };
  switch (key.kind) {
    case Kind::Real:
      if (v.is_null()) return v;
      if (!v.is_number()) return fail();
      return v.get<double>();
    case Kind::Int:
      if (!v.is_number_integer()) return fail();
      return v.get<long long>();
    case Kind::Seed:
      if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) return fail();
      return v.get<std::uint64_t>();
    case Kind::Bool:
      if (!v.is_boolean()) return fail();
      return v;
    case Kind::Text:
      if (!v.is_string()) return fail();
      return v;
  }
  return fail();
}

void merge(RunConfig& config, const nlohmann::json& source) {
  if (!source.is_object()) throw InvalidParams("config file must hold a flat JSON object");
  for (const auto& [name, value] : source.items()) {
    if (name == "command") {
      if (value != config["command"]) {
        throw InvalidParams("config file is for command '" + value.dump() + "', not '" +
                            config["command"].get<std::string>() + "'");
      }
      continue;
    }
    const Key* key = find_key(name);
    if (!key) throw InvalidParams("unknown config key '" + name + "'");
    config[name] = coerce(*key, value);
  }
}

double real(const RunConfig& c, const char* k) { return c.at(k).get<double>(); }
int integer(const RunConfig& c, const char* k) { return static_cast<int>(c.at(k).get<long long>()); }
bool flag(const RunConfig& c, const char* k) { return c.at(k).get<bool>(); }
std::string text(const RunConfig& c, const char* k) { return c.at(k).get<std::string>(); }

SystemParams system_params(const RunConfig& c) {
  SystemParams p;
  p.omega_c = real(c, "omega-c");
  p.delta = real(c, "delta");
  p.omega_0 = real(c, "omega-0");
  p.g = real(c, "g");
  p.kappa = real(c, "kappa");
  p.eps_plus = cplx(real(c, "eps-plus-re"), real(c, "eps-plus-im"));
  p.eps_minus = cplx(real(c, "eps-minus-re"), real(c, "eps-minus-im"));
  p.photon_cutoff = integer(c, "cutoff");
  p.fast_cavity_threshold = real(c, "fast-cavity-threshold");
  p.validate();
  if (flag(c, "pi-pulse")) {
    const auto [ep, em] = pi_pulse_amplitudes(p).with_sweet_spot_phases();
    p.eps_plus = ep;
    p.eps_minus = em;
  }
  return p;
}

void resolve(RunConfig& c) {
  if (c["omega-min"].is_null() || c["omega-max"].is_null()) {
    const double half = std::max(5.0 * real(c, "kappa"), std::abs(real(c, "delta")) + 5.0 * real(c, "kappa"));
    if (c["omega-min"].is_null()) c["omega-min"] = real(c, "omega-c") - half;
    if (c["omega-max"].is_null()) c["omega-max"] = real(c, "omega-c") + half;
  }
  const std::string format = text(c, "format");
  if (format != "csv" && format != "json") throw InvalidParams("--format must be csv or json");
}

std::string version() { return SPINPHOTON_VERSION; }

struct Output {
  std::string main;
  std::vector<std::pair<std::string, std::string>> extra;  ///< (path, bytes)
};

std::string csv_header(const RunConfig& config, const nlohmann::json& result = nullptr) {
  std::string h = "# spinphoton " + version() + "\n# config " + canonical(config) + "\n";
  if (!result.is_null()) h += "# result " + result.dump() + "\n";
  return h;
}

nlohmann::json envelope(const RunConfig& config) {
  nlohmann::json j;
  j["metadata"] = {{"version", version()}, {"config", config}};
  return j;
}

using Columns = std::vector<std::pair<std::string, std::vector<double>>>;

std::string columns_output(const RunConfig& config, const Columns& cols, const nlohmann::json& result) {
  if (text(config, "format") == "json") {
    auto j = envelope(config);
    if (!result.is_null()) j["result"] = result;
    nlohmann::json data = nlohmann::json::object();
    for (const auto& [name, values] : cols) data[name] = values;
    j["data"] = data;
    return j.dump(1) + "\n";
  }
  std::ostringstream s;
  s << csv_header(config, result);
  for (std::size_t i = 0; i < cols.size(); ++i) s << (i ? "," : "") << cols[i].first;
  s << '\n';
  const std::size_t rows = cols.empty() ? 0 : cols.front().second.size();
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < cols.size(); ++i) s << (i ? "," : "") << shortest(cols[i].second[r]);
    s << '\n';
  }
  return s.str();
}

Output cmd_excite(const RunConfig& c) {
  const SystemParams p = system_params(c);
  const auto times = uniform_times(real(c, "t-end"), integer(c, "n-times"));
  const QDAmplitudes initial = QDAmplitudes::electron_in_plane();
  std::vector<QDAmplitudes> trace;
  if (flag(c, "analytic")) {
    require_fast_cavity(p, "analytic excitation");
    for (double t : times) trace.push_back(analytic_sweet_spot_amplitude(p, initial, t));
  } else {
    trace = integrate_excitation_trace(p, initial, times);
  }
  Columns cols{{"t", times}, {"N_tr", {}}, {"abs_psi_t_up2", {}}, {"abs_psi_t_down2", {}}, {"n_plus", {}},
               {"n_minus", {}}};
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto [cp, cm] = circular_cavity_field(p, times[i]);
    cols[1].second.push_back(trace[i].trion_population());
    cols[2].second.push_back(std::norm(trace[i].t_up));
    cols[3].second.push_back(std::norm(trace[i].t_down));
    cols[4].second.push_back(std::norm(cp));
    cols[5].second.push_back(std::norm(cm));
  }
  const nlohmann::json result = {{"N_tr_final", trace.back().trion_population()},
                                 {"pump", "delta pulse at t = 0"},
                                 {"eps_plus", {p.eps_plus.real(), p.eps_plus.imag()}},
                                 {"eps_minus", {p.eps_minus.real(), p.eps_minus.imag()}},
                                 {"mode", flag(c, "analytic") ? "analytic" : "numeric"}};
  return {columns_output(c, cols, result), {}};
}

std::pair<cplx, cplx> trion_amplitudes(const RunConfig& c) {
  const std::string init = text(c, "initial");
  const double r = 1.0 / std::sqrt(2.0);
  if (init == "trion-up") return {1.0, 0.0};
  if (init == "trion-down") return {0.0, 1.0};
  if (init == "trion-x" || init == "electron") return {r, r};
  throw InvalidParams("--initial must be electron, trion-up, trion-down or trion-x");
}

Output cmd_emit(const RunConfig& c, int workers) {
  const SystemParams p = system_params(c);
  const auto [tu, td] = trion_amplitudes(c);
  const PhotonQubit q = photon_state_angles(p);
  const auto amps = emission_amplitudes(p, tu, td);
  const auto [np, nm] = photon_numbers(amps);
  const auto psi = spin_photon_state(tu, td, q);
  const auto cluster = build_cluster_state(2, q);
  const auto basis = closest_orthogonal_basis(q);
  Columns rows;
  nlohmann::json record;
  const auto add = [&](const std::string& name, double v) {
    rows.push_back({name, {v}});
    record[name] = v;
  };
  add("gamma", decay_rate(p));
  add("alpha", q.alpha);
  add("beta", q.beta);
  add("theta", q.theta);
  add("vartheta", poincare_rotation_angle(q));
  add("Fc", q.fc);
  add("overlap", q.overlap());
  add("concurrence", concurrence_analytic(TrionSpin::from_amplitudes(tu, td), q));
  add("concurrence_wootters", wootters_concurrence(psi * psi.adjoint()));
  add("tau", three_tangle(cluster));
  add("localizable_entanglement", localizable_entanglement_two_photons(cluster, {}, workers).value);
  add("n_plus", np);
  add("n_minus", nm);
  add("closest_plus_plus_re", basis.plus(0).real());
  add("closest_plus_plus_im", basis.plus(0).imag());
  add("closest_plus_minus_re", basis.plus(1).real());
  add("closest_plus_minus_im", basis.plus(1).imag());
  for (int n = 1; n <= kMaxClusterPhotons; ++n) {
    const auto f = cluster_fidelity(n, q);
    add("fidelity_" + std::to_string(n), f.closed_form);
    add("fidelity_explicit_" + std::to_string(n), f.explicit_overlap);
  }
  if (text(c, "format") == "json") {
    auto j = envelope(c);
    j["result"] = record;
    return {j.dump(1) + "\n", {}};
  }
  std::ostringstream s;
  s << csv_header(c) << "quantity,value\n";
  for (const auto& [name, v] : rows) s << name << ',' << shortest(v.front()) << '\n';
  return {s.str(), {}};
}

PureState initial_state(const RunConfig& c, const CompositeBasis& basis) {
  const std::string init = text(c, "initial");
  if (init == "electron") return PureState::electron_in_plane(basis);
  const auto [tu, td] = trion_amplitudes(c);
  return PureState::matter_state(basis, {0.0, 0.0, tu, td});
}

Output cmd_dynamics(const RunConfig& c, int workers) {
  const SystemParams p = system_params(c);
  const CompositeBasis basis(p.photon_cutoff);
  DynamicsOptions o;
  o.t_end = real(c, "t-end");
  o.n_times = integer(c, "n-times");
  o.dt_max = real(c, "dt-max");
  o.pulse_duration = real(c, "pulse-duration");
  PureState psi = initial_state(c, basis);
  if (o.pulse_duration == 0.0) psi = apply_coherent_kick(psi, p.eps_plus, p.eps_minus, real(c, "kick-tolerance"));
  const std::string method = text(c, "method");
  TimeSeries s;
  if (method == "lindblad") {
    s = evolve_lindblad(DensityOperator::from_pure(psi), p, o).series;
  } else if (method == "trajectories") {
    s = average_trajectories(psi, p, o, integer(c, "n-traj"), c.at("seed").get<std::uint64_t>(), workers);
  } else {
    throw InvalidParams("--method must be lindblad or trajectories");
  }
  Columns cols{{"t", s.t}, {"n_plus", s.n_plus}, {"n_minus", s.n_minus}, {"N_tr", s.n_tr},
               {"concurrence", s.concurrence}};
  if (s.has_errors()) {
    cols.push_back({"stderr_n_plus", s.stderr_n_plus});
    cols.push_back({"stderr_n_minus", s.stderr_n_minus});
    cols.push_back({"stderr_N_tr", s.stderr_n_tr});
    cols.push_back({"stderr_concurrence", s.stderr_concurrence});
  }
  return {columns_output(c, cols, nullptr), {}};
}

Output cmd_transmission(const RunConfig& c) {
  const SystemParams p = system_params(c);
  const int n = integer(c, "n-omega");
  if (n < 2) throw InvalidParams("--n-omega must be >= 2");
  const double lo = real(c, "omega-min");
  const double hi = real(c, "omega-max");
  if (!(hi > lo)) throw InvalidParams("--omega-max must exceed --omega-min");
  const std::string spin_name = text(c, "spin");
  if (spin_name != "up" && spin_name != "down") throw InvalidParams("--spin must be up or down");
  const ElectronSpin spin = spin_name == "up" ? ElectronSpin::Up : ElectronSpin::Down;
  Columns cols{{"omega", {}}, {"T", {}}, {"abs_tpp2", {}}, {"abs_tmm2", {}}, {"abs_tpm2", {}}, {"abs_tmp2", {}}};
  for (int i = 0; i < n; ++i) {
    const double w = i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1);
    const auto t = transmission_matrix(p, w, spin);
    cols[0].second.push_back(w);
    cols[1].second.push_back(unpolarized_transmission(t));
    cols[2].second.push_back(std::norm(t.t_pp));
    cols[3].second.push_back(std::norm(t.t_mm));
    cols[4].second.push_back(std::norm(t.t_pm));
    cols[5].second.push_back(std::norm(t.t_mp));
  }
  return {columns_output(c, cols, nullptr), {}};
}

std::vector<Quantity> quantities(const RunConfig& c) {
  std::vector<Quantity> out;
  std::stringstream ss(text(c, "quantity"));
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto q = parse_quantity(item);
    if (!q) throw InvalidParams("unknown quantity '" + item + "'");
    out.push_back(*q);
  }
  if (out.empty()) throw InvalidParams("--quantity is empty");
  return out;
}

nlohmann::json contour_json(const std::vector<Polyline>& lines) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& l : lines) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& [x, y] : l.points) pts.push_back({x, y});
    arr.push_back({{"closed", l.closed}, {"points", pts}});
  }
  return arr;
}

Output cmd_sweep(const RunConfig& c, int workers, const std::string& binary_out, const std::string& contour_out,
                 std::ostream& err) {
  const SystemParams p = system_params(c);
  SweepSpec spec;
  spec.detuning = {real(c, "det-min"), real(c, "det-max"), integer(c, "det-count")};
  spec.delta = {real(c, "delta-min"), real(c, "delta-max"), integer(c, "delta-count")};
  spec.quantities = quantities(c);
  spec.optimizer.amplitude_points = integer(c, "amplitude-points");
  spec.optimizer.phase_points = integer(c, "phase-points");
  const SweepGrid grid = run_map(p, spec, workers);
  if (grid.optimizer_warnings > 0) {
    err << "warning: optimizer did not converge in " << grid.optimizer_warnings
        << " cells; best-found values reported\n";
  }
  const Quantity contour_q = grid.has(Quantity::NtrMax) ? Quantity::NtrMax : grid.quantities.front();
  const auto lines = extract_contour(grid, contour_q, real(c, "contour-level"));

  Output result;
  if (text(c, "format") == "json") {
    auto j = envelope(c);
    j["axes"] = {{"omega0", {grid.detuning.min, grid.detuning.max, grid.detuning.count}},
                 {"delta", {grid.delta.min, grid.delta.max, grid.delta.count}}};
    nlohmann::json values = nlohmann::json::object();
    for (Quantity q : grid.quantities) {
      std::vector<double> v;
      for (const auto& cell : grid.cells) v.push_back(cell.get(q));
      values[quantity_name(q)] = v;
    }
    j["values"] = values;
    j["optimizer_warnings"] = grid.optimizer_warnings;
    j["contours"] = {{"quantity", quantity_name(contour_q)}, {"lines", contour_json(lines)}};
    result.main = j.dump(1) + "\n";
  } else {
    std::ostringstream s;
    s << csv_header(c);
    write_long_csv(s, grid);
    result.main = s.str();
  }
  if (!binary_out.empty()) {
    std::ostringstream b;
    write_binary(b, grid, grid.quantities.front());
    result.extra.push_back({binary_out, b.str()});
  }
  if (!contour_out.empty()) {
    std::ostringstream s;
    s << csv_header(c) << "line,closed,omega0,delta\n";
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (const auto& [x, y] : lines[i].points) {
        s << i << ',' << (lines[i].closed ? 1 : 0) << ',' << shortest(x) << ',' << shortest(y) << '\n';
      }
    }
    result.extra.push_back({contour_out, s.str()});
  }
  return result;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidParams("cannot open '" + path + "' for writing");
  f << bytes;
  if (!f) throw InvalidParams("failed writing '" + path + "'");
}

}  // namespace

RunConfig default_config(const std::string& command) {
  RunConfig c = nlohmann::json::object();
  c["command"] = command;
  c["omega-c"] = 0.0;
  c["delta"] = 1.0;
  c["omega-0"] = 0.0;
  c["g"] = 0.15;
  c["kappa"] = 1.0;
  c["eps-plus-re"] = command == "dynamics" ? 0.5 : std::numbers::pi / 0.15;
  c["eps-plus-im"] = 0.0;
  c["eps-minus-re"] = 0.0;
  c["eps-minus-im"] = 0.0;
  c["pi-pulse"] = false;
  c["cutoff"] = command == "dynamics" ? 5 : 2;
  c["fast-cavity-threshold"] = 0.25;
  c["t-end"] = command == "excite" ? kExcitationHorizon : 10.0;
  c["dt-max"] = 0.05;
  c["n-times"] = 201;
  c["seed"] = std::uint64_t{0};
  c["n-traj"] = 300;
  c["method"] = "lindblad";
  c["analytic"] = false;
  c["pulse-duration"] = 0.0;
  c["initial"] = command == "dynamics" ? "electron" : "trion-x";
  c["kick-tolerance"] = 1e-6;
  c["omega-min"] = nullptr;
  c["omega-max"] = nullptr;
  c["n-omega"] = 2001;
  c["spin"] = "up";
  c["det-min"] = -4.0;
  c["det-max"] = 4.0;
  c["det-count"] = 81;
  c["delta-min"] = -4.0;
  c["delta-max"] = 4.0;
  c["delta-count"] = 81;
  c["quantity"] = "N_tr_max,Fc,tau";
  c["contour-level"] = 0.9;
  c["amplitude-points"] = 17;
  c["phase-points"] = 8;
  c["format"] = "csv";
  return c;
}

std::string canonical(const RunConfig& config) { return config.dump(); }

RunConfig load_config_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw InvalidParams("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << f.rdbuf();
  const std::string content = buf.str();
  try {
    if (content.rfind("#", 0) == 0) {
      std::istringstream lines(content);
      std::string line;
      const std::string tag = "# config ";
      while (std::getline(lines, line) && line.rfind("#", 0) == 0) {
        if (line.rfind(tag, 0) == 0) return nlohmann::json::parse(line.substr(tag.size()));
      }
      throw InvalidParams("no config line in the header of '" + path + "'");
    }
    auto j = nlohmann::json::parse(content);
    if (j.is_object() && j.contains("metadata") && j["metadata"].contains("config")) return j["metadata"]["config"];
    return j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParams("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"spinphoton: spin-photon interface in a birefringent micropillar cavity"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  std::map<std::string, std::string> values;
  std::map<std::string, bool> switches;
  std::string config_path;
  std::string output = "-";
  std::string binary_out;
  std::string contour_out;
  int workers = 1;
  struct Bound {
    CLI::App* app;
    std::map<std::string, CLI::Option*> options;
  };
  std::vector<Bound> subs;
  const std::map<std::string, std::string> descriptions = {
      {"excite", "semiclassical trion excitation by the pump pulse"},
      {"emit", "emission, entanglement and cluster-state scalars"},
      {"dynamics", "master equation or quantum trajectories"},
      {"transmission", "linear transmission spectra"},
      {"sweep", "parameter maps over (omega_0 - omega_c, delta)"}};
  for (const auto& name : kCommands) {
    Bound b{app.add_subcommand(name, descriptions.at(name)), {}};
    b.app->add_option("--config", config_path, "flat JSON config, or a file written by this tool");
    b.app->add_option("--output,-o", output, "output file, - for stdout");
    b.app->add_option("--workers", workers, "parallel workers (results do not depend on it)");
    if (name == "sweep") {
      b.app->add_option("--binary-out", binary_out, "binary grid dump of the first quantity");
      b.app->add_option("--contour-out", contour_out, "contour polylines as CSV");
    }
    for (const auto& k : keys()) {
      const std::string flag_name = std::string("--") + k.name;
      if (k.kind == Kind::Bool) {
        b.options[k.name] = b.app->add_flag(flag_name, switches[k.name], k.help);
      } else {
        b.options[k.name] = b.app->add_option(flag_name, values[k.name], k.help);
      }
    }
    subs.push_back(b);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidConfig;
  }

  try {
    const Bound* active = nullptr;
    for (const auto& b : subs) {
      if (b.app->parsed()) active = &b;
    }
    const std::string command = active->app->get_name();
    RunConfig config = default_config(command);
    if (!config_path.empty()) merge(config, load_config_file(config_path));
    for (const auto& k : keys()) {
      if (active->options.at(k.name)->count() == 0) continue;
      config[k.name] = k.kind == Kind::Bool ? nlohmann::json(switches[k.name]) : parse_flag(k, values[k.name]);
    }
    resolve(config);

    Output result;
    if (command == "excite") {
      result = cmd_excite(config);
    } else if (command == "emit") {
      result = cmd_emit(config, workers);
    } else if (command == "dynamics") {
      result = cmd_dynamics(config, workers);
    } else if (command == "transmission") {
      result = cmd_transmission(config);
    } else {
      result = cmd_sweep(config, workers, binary_out, contour_out, err);
    }
    if (output == "-" || output.empty()) {
      out << result.main;
    } else {
      write_file(output, result.main);
    }
    for (const auto& [path, bytes] : result.extra) write_file(path, bytes);
    return kExitOk;
  } catch (const InvalidParams& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const RegimeError& e) {
    err << "error: invalid configuration: " << e.what() << '\n';
    return kExitInvalidConfig;
  } catch (const NumericalError& e) {
    err << "error: numerical failure: " << e.what() << '\n';
    return kExitNumericalFailure;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumericalFailure;
  }
}

}  // namespace spinphoton::cli
