#include <doctest.h>

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"

using namespace spinphoton;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "spinphoton");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream s(line);
  std::string cell;
  while (std::getline(s, cell, ',')) cells.push_back(cell);
  return cells;
}

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::vector<double> column(const std::string& name) const {
    std::size_t k = 0;
    while (k < header.size() && header[k] != name) ++k;
    REQUIRE(k < header.size());
    std::vector<double> v;
    for (const auto& r : rows) v.push_back(std::stod(r[k]));
    return v;
  }
};

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (t.header.empty()) {
      t.header = split(line);
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

std::map<std::string, double> scalars(const std::string& text) {
  std::map<std::string, double> m;
  for (const auto& r : parse_csv(text).rows) m[r[0]] = std::stod(r[1]);
  return m;
}

}  // namespace

TEST_CASE("emit at the sweet spot") {
  const auto r = run({"emit", "--delta", "2", "--omega-0", "0"});
  REQUIRE(r.code == 0);
  const auto s = scalars(r.out);
  CHECK(s.at("Fc") == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.at("tau") == doctest::Approx(1.0).epsilon(1e-12));
  for (int n = 1; n <= 8; ++n) {
    CHECK(s.at("fidelity_" + std::to_string(n)) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.at("fidelity_explicit_" + std::to_string(n)) == doctest::Approx(1.0).epsilon(1e-10));
  }
}

TEST_CASE("emit at the detuned spot") {
  const auto r = run({"emit", "--delta", "1", "--omega-0", "1"});
  REQUIRE(r.code == 0);
  const auto s = scalars(r.out);
  CHECK(s.at("Fc") == doctest::Approx(0.7454).epsilon(1e-4));
  CHECK(s.at("tau") == doctest::Approx(0.3086).epsilon(1e-4));
  CHECK(std::abs(s.at("concurrence_wootters") - s.at("Fc")) < 1e-8);
}

TEST_CASE("emit without splitting") {
  const auto r = run({"emit", "--delta", "0", "--omega-0", "0.7"});
  REQUIRE(r.code == 0);
  const auto s = scalars(r.out);
  CHECK(s.at("theta") == 0.0);
  CHECK(s.at("closest_plus_plus_re") == doctest::Approx(1.0));
  CHECK(s.at("closest_plus_minus_re") == 0.0);
  CHECK(s.at("closest_plus_minus_im") == 0.0);
}

TEST_CASE("excite defaults reach a full trion") {
  const auto r = run({"excite"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("delta pulse at t = 0") != std::string::npos);
  const auto n = parse_csv(r.out).column("N_tr");
  CHECK(n.back() >= 0.999);
}

TEST_CASE("excite without coupling") {
  const auto r = run({"excite", "--g", "0", "--n-times", "11"});
  REQUIRE(r.code == 0);
  for (double v : parse_csv(r.out).column("N_tr")) CHECK(v == 0.0);
}

TEST_CASE("excite analytic matches numeric") {
  const auto numeric = parse_csv(run({"excite", "--n-times", "41"}).out);
  const auto analytic = parse_csv(run({"excite", "--n-times", "41", "--analytic"}).out);
  const auto a = numeric.column("N_tr");
  const auto b = analytic.column("N_tr");
  REQUIRE(a.size() == 41);
  REQUIRE(b.size() == 41);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  CHECK(worst < 1e-6);
}

TEST_CASE("transmission spectrum") {
  const auto r = run({"transmission", "--delta", "3", "--omega-0", "-1", "--g", "0.15"});
  REQUIRE(r.code == 0);
  const auto t = parse_csv(r.out);
  REQUIRE(t.header == std::vector<std::string>{"omega", "T", "abs_tpp2", "abs_tmm2", "abs_tpm2", "abs_tmp2"});
  const auto w = t.column("omega");
  const auto v = t.column("T");
  REQUIRE(w.size() == 2001);
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < v.size(); ++i) {
    if (v[i] > v[i - 1] && v[i] >= v[i + 1] && std::abs(w[i] + 1.0) > 0.2) peaks.push_back(w[i]);
  }
  REQUIRE(peaks.size() == 2);
  CHECK(std::abs(peaks[0] + 3.0) < 0.1);
  CHECK(std::abs(peaks[1] - 3.0) < 0.1);
}

TEST_CASE("sweep tau follows Fc") {
  const auto r = run({"sweep", "--quantity", "tau,Fc", "--det-count", "7", "--delta-count", "5"});
  REQUIRE(r.code == 0);
  const auto t = parse_csv(r.out);
  REQUIRE(t.header == std::vector<std::string>{"omega0", "delta", "quantity", "value"});
  REQUIRE(t.rows.size() == 70);
  for (std::size_t i = 0; i < t.rows.size(); i += 2) {
    REQUIRE(t.rows[i][2] == "tau");
    REQUIRE(t.rows[i + 1][2] == "Fc");
    REQUIRE(t.rows[i][0] == t.rows[i + 1][0]);
    REQUIRE(t.rows[i][1] == t.rows[i + 1][1]);
    CHECK(std::abs(std::stod(t.rows[i][3]) - std::pow(std::stod(t.rows[i + 1][3]), 4)) < 1e-10);
  }
}

TEST_CASE("trajectories are reproducible") {
  const std::vector<std::string> args{"dynamics", "--method", "trajectories", "--n-traj", "300", "--seed", "7"};
  const auto a = run(args);
  const auto b = run(args);
  auto with_workers = args;
  with_workers.insert(with_workers.end(), {"--workers", "2"});
  const auto c = run(with_workers);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out == c.out);
  auto other = args;
  other.back() = "8";
  CHECK(run(other).out != a.out);
}

TEST_CASE("seed defaults to zero") {
  const auto implicit = run({"dynamics", "--method", "trajectories", "--n-traj", "20", "--n-times", "11"});
  const auto explicit_zero =
      run({"dynamics", "--method", "trajectories", "--n-traj", "20", "--n-times", "11", "--seed", "0"});
  REQUIRE(implicit.code == 0);
  CHECK(implicit.out == explicit_zero.out);
  CHECK(cli::default_config("dynamics").at("seed") == 0);
}

TEST_CASE("config precedence") {
  {
    std::ofstream f("cli_precedence.json");
    f << R"({"g": 0.1, "delta": 2.0, "omega-0": 0.5})";
  }
  const auto r = run({"emit", "--config", "cli_precedence.json", "--delta", "3", "--output", "cli_precedence.csv"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  const auto c = cli::load_config_file("cli_precedence.csv");
  CHECK(c.at("g") == 0.1);
  CHECK(c.at("delta") == 3.0);
  CHECK(c.at("omega-0") == 0.5);
  CHECK(c.at("kappa") == 1.0);
  CHECK(c.at("command") == "emit");
}

TEST_CASE("canonical config round trip") {
  for (const char* cmd : {"excite", "emit", "dynamics", "transmission", "sweep"}) {
    const auto c = cli::default_config(cmd);
    const auto text = cli::canonical(c);
    CHECK(cli::canonical(nlohmann::json::parse(text)) == text);
    CHECK(c.at("command") == cmd);
  }
}

TEST_CASE("rerun from an embedded header reproduces the file") {
  REQUIRE(run({"excite", "--n-times", "21", "--g", "0.12", "-o", "cli_excite_a.csv"}).code == 0);
  REQUIRE(run({"excite", "--config", "cli_excite_a.csv", "-o", "cli_excite_b.csv"}).code == 0);
  CHECK(slurp("cli_excite_a.csv") == slurp("cli_excite_b.csv"));

  REQUIRE(run({"transmission", "--format", "json", "--n-omega", "101", "-o", "cli_tr_a.json"}).code == 0);
  REQUIRE(run({"transmission", "--config", "cli_tr_a.json", "-o", "cli_tr_b.json"}).code == 0);
  CHECK(slurp("cli_tr_a.json") == slurp("cli_tr_b.json"));

  REQUIRE(run({"dynamics", "--method", "trajectories", "--n-traj", "30", "--seed", "11", "--n-times", "21", "-o",
               "cli_dyn_a.csv"})
              .code == 0);
  REQUIRE(run({"dynamics", "--config", "cli_dyn_a.csv", "--workers", "2", "-o", "cli_dyn_b.csv"}).code == 0);
  CHECK(slurp("cli_dyn_a.csv") == slurp("cli_dyn_b.csv"));
}

TEST_CASE("json envelope") {
  const auto r = run({"excite", "--format", "json", "--n-times", "5"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("metadata").at("config").at("command") == "excite");
  CHECK(j.at("metadata").contains("version"));
  CHECK(j.at("data").at("N_tr").size() == 5);
  CHECK(j.at("result").contains("N_tr_final"));
}

TEST_CASE("exit codes") {
  CHECK(run({"emit", "--kappa", "-1"}).code == cli::kExitInvalidConfig);
  CHECK(run({"emit", "--bogus", "1"}).code == cli::kExitInvalidConfig);
  CHECK(run({"frobnicate"}).code == cli::kExitInvalidConfig);
  CHECK(run({"dynamics", "--method", "sideways"}).code == cli::kExitInvalidConfig);
  CHECK(run({"emit", "--config", "does_not_exist.json"}).code == cli::kExitInvalidConfig);
  const auto overflow = run({"dynamics", "--cutoff", "1", "--eps-plus-re", "2"});
  CHECK(overflow.code == cli::kExitNumericalFailure);
  CHECK(overflow.err.find("cutoff") != std::string::npos);
  CHECK(run({"--help"}).code == cli::kExitOk);
}
