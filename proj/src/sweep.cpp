#include "spinphoton/sweep.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <string>

#include "spinphoton/emission.hpp"
#include "spinphoton/errors.hpp"
#include "spinphoton/multiphoton.hpp"
#include "spinphoton/parallel.hpp"

namespace spinphoton {

double AxisSpec::value(int i) const {
  if (count == 1) return min;
  return i == count - 1 ? max : min + (max - min) * i / (count - 1);
}

void AxisSpec::validate(std::string_view name) const {
  if (count < 1) throw InvalidParams(std::string(name) + " axis needs at least one point");
  if (!std::isfinite(min) || !std::isfinite(max) || max < min) {
    throw InvalidParams(std::string(name) + " axis needs finite min <= max");
  }
  if (count > 1 && max == min) throw InvalidParams(std::string(name) + " axis has zero width");
}

std::string quantity_name(Quantity q) {
  switch (q) {
    case Quantity::NtrMax: return "N_tr_max";
    case Quantity::Fc: return "Fc";
    case Quantity::Concurrence: return "concurrence";
    case Quantity::Tau: return "tau";
  }
  throw InvalidParams("unknown quantity");
}

std::optional<Quantity> parse_quantity(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "n_tr_max" || lower == "ntr_max" || lower == "ntrmax") return Quantity::NtrMax;
  if (lower == "fc" || lower == "f_c") return Quantity::Fc;
  if (lower == "concurrence") return Quantity::Concurrence;
  if (lower == "tau") return Quantity::Tau;
  return std::nullopt;
}

double SweepCell::get(Quantity q) const {
  switch (q) {
    case Quantity::NtrMax: return n_tr_max;
    case Quantity::Fc: return fc;
    case Quantity::Concurrence: return concurrence;
    case Quantity::Tau: return tau;
  }
  throw InvalidParams("unknown quantity");
}

bool SweepGrid::has(Quantity q) const {
  return std::find(quantities.begin(), quantities.end(), q) != quantities.end();
}

const SweepCell& SweepGrid::cell(int i_detuning, int i_delta) const {
  if (i_detuning < 0 || i_detuning >= detuning.count || i_delta < 0 || i_delta >= delta.count) {
    throw InvalidParams("cell index out of range");
  }
  return cells[static_cast<std::size_t>(i_delta) * detuning.count + i_detuning];
}

SweepGrid run_map(const SystemParams& base, const SweepSpec& spec, int workers) {
  base.validate();
  spec.detuning.validate("detuning");
  spec.delta.validate("delta");
  SweepGrid grid;
  grid.detuning = spec.detuning;
  grid.delta = spec.delta;
  for (Quantity q : spec.quantities) {
    if (!grid.has(q)) grid.quantities.push_back(q);
  }
  if (grid.quantities.empty()) throw InvalidParams("no quantities requested");
  const bool want_ntr = grid.has(Quantity::NtrMax);
  const bool want_fc = grid.has(Quantity::Fc) || grid.has(Quantity::Concurrence);
  const bool want_tau = grid.has(Quantity::Tau);
  if (want_ntr) require_fast_cavity(base, "run_map");

  const std::size_t n = static_cast<std::size_t>(spec.detuning.count) * spec.delta.count;
  grid.cells.resize(n);
  parallel_for(n, workers, [&](std::size_t idx) {
    const int i = static_cast<int>(idx % spec.detuning.count);
    const int j = static_cast<int>(idx / spec.detuning.count);
    SystemParams p = base;
    p.omega_0 = base.omega_c + spec.detuning.value(i);
    p.delta = spec.delta.value(j);
    SweepCell cell;
    double j_perp = 0.5;
    if (want_ntr) {
      const auto r = max_trion_population(p, spec.optimizer, 1);
      cell.n_tr_max = r.n_tr_max;
      cell.optimizer_converged = r.converged;
      const double pop = r.final_state.trion_population();
      j_perp = pop > 0.0 ? TrionSpin::from_amplitudes(r.final_state.t_up, r.final_state.t_down).in_plane() / pop
                         : 0.0;
    }
    const PhotonQubit photon = photon_state_angles(p);
    if (want_fc) {
      cell.fc = photon.fc;
      cell.concurrence = 2.0 * j_perp * photon.fc;
    }
    if (want_tau) cell.tau = three_tangle(build_cluster_state(2, photon));
    if (!grid.has(Quantity::Fc)) cell.fc = std::numeric_limits<double>::quiet_NaN();
    if (!grid.has(Quantity::Concurrence)) cell.concurrence = std::numeric_limits<double>::quiet_NaN();
    grid.cells[idx] = cell;
  });
  for (const auto& c : grid.cells) grid.optimizer_warnings += c.optimizer_converged ? 0 : 1;
  return grid;
}

namespace {

// Edge ids: 2 * vertex + 0 for the edge to the right (+detuning), + 1 for the edge upward (+delta).
struct ContourSegment {
  std::array<std::size_t, 2> edges;
};

}  // namespace

std::vector<Polyline> extract_contour(const SweepGrid& grid, Quantity q, double level) {
  if (!grid.has(q)) throw InvalidParams("quantity " + quantity_name(q) + " is not on the grid");
  const int nx = grid.detuning.count;
  const int ny = grid.delta.count;
  const auto v = [&](int i, int j) { return grid.value(q, i, j); };
  const auto vid = [&](int i, int j) { return static_cast<std::size_t>(j) * nx + i; };

  std::map<std::size_t, std::pair<double, double>> points;
  const auto crossing = [&](int i0, int j0, int i1, int j1) {
    const std::size_t id = 2 * vid(i0, j0) + (j1 > j0 ? 1 : 0);
    if (!points.count(id)) {
      const double a = v(i0, j0);
      const double b = v(i1, j1);
      const double t = (level - a) / (b - a);
      const double x0 = grid.detuning.value(i0);
      const double y0 = grid.delta.value(j0);
      points[id] = {x0 + t * (grid.detuning.value(i1) - x0), y0 + t * (grid.delta.value(j1) - y0)};
    }
    return id;
  };

  std::vector<ContourSegment> segments;
  for (int j = 0; j + 1 < ny; ++j) {
    for (int i = 0; i + 1 < nx; ++i) {
      const double c00 = v(i, j), c10 = v(i + 1, j), c11 = v(i + 1, j + 1), c01 = v(i, j + 1);
      if (std::isnan(c00) || std::isnan(c10) || std::isnan(c11) || std::isnan(c01)) continue;
      const int code = (c00 > level ? 1 : 0) | (c10 > level ? 2 : 0) | (c11 > level ? 4 : 0) |
                       (c01 > level ? 8 : 0);
      if (code == 0 || code == 15) continue;
      const auto bottom = [&] { return crossing(i, j, i + 1, j); };
      const auto right = [&] { return crossing(i + 1, j, i + 1, j + 1); };
      const auto top = [&] { return crossing(i, j + 1, i + 1, j + 1); };
      const auto left = [&] { return crossing(i, j, i, j + 1); };
      const bool center_in = 0.25 * (c00 + c10 + c11 + c01) > level;
      switch (code) {
        case 1: case 14: segments.push_back({{bottom(), left()}}); break;
        case 2: case 13: segments.push_back({{bottom(), right()}}); break;
        case 3: case 12: segments.push_back({{left(), right()}}); break;
        case 4: case 11: segments.push_back({{right(), top()}}); break;
        case 6: case 9: segments.push_back({{bottom(), top()}}); break;
        case 7: case 8: segments.push_back({{left(), top()}}); break;
        case 5:
          if (center_in) {
            segments.push_back({{bottom(), right()}});
            segments.push_back({{left(), top()}});
          } else {
            segments.push_back({{bottom(), left()}});
            segments.push_back({{right(), top()}});
          }
          break;
        case 10:
          if (center_in) {
            segments.push_back({{bottom(), left()}});
            segments.push_back({{right(), top()}});
          } else {
            segments.push_back({{bottom(), right()}});
            segments.push_back({{left(), top()}});
          }
          break;
        default: break;
      }
    }
  }

  std::map<std::size_t, std::vector<std::size_t>> incident;
  for (std::size_t s = 0; s < segments.size(); ++s) {
    for (auto e : segments[s].edges) incident[e].push_back(s);
  }
  std::vector<bool> used(segments.size(), false);
  std::vector<Polyline> lines;
  const auto walk = [&](std::size_t start_edge, std::size_t seg) {
    Polyline line;
    line.points.push_back(points.at(start_edge));
    std::size_t edge = start_edge;
    while (true) {
      used[seg] = true;
      const auto& es = segments[seg].edges;
      edge = es[0] == edge ? es[1] : es[0];
      if (edge == start_edge) {
        line.closed = true;
        break;
      }
      line.points.push_back(points.at(edge));
      std::optional<std::size_t> next;
      for (auto s : incident[edge]) {
        if (!used[s]) next = s;
      }
      if (!next) break;
      seg = *next;
    }
    lines.push_back(std::move(line));
  };
  for (const auto& [edge, segs] : incident) {
    if (segs.size() == 1 && !used[segs[0]]) walk(edge, segs[0]);
  }
  for (std::size_t s = 0; s < segments.size(); ++s) {
    if (!used[s]) walk(segments[s].edges[0], s);
  }
  return lines;
}

std::vector<int> superlevel_components(const SweepGrid& grid, Quantity q, double level) {
  if (!grid.has(q)) throw InvalidParams("quantity " + quantity_name(q) + " is not on the grid");
  const int nx = grid.detuning.count;
  const int ny = grid.delta.count;
  std::vector<int> label(grid.cells.size(), -1);
  int next = 0;
  std::vector<std::size_t> stack;
  for (std::size_t start = 0; start < label.size(); ++start) {
    if (label[start] >= 0 || !(grid.cells[start].get(q) >= level)) continue;
    label[start] = next;
    stack.push_back(start);
    while (!stack.empty()) {
      const std::size_t c = stack.back();
      stack.pop_back();
      const int i = static_cast<int>(c % nx);
      const int j = static_cast<int>(c / nx);
      const std::array<std::pair<int, int>, 4> nbrs{{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}};
      for (auto [a, b] : nbrs) {
        if (a < 0 || b < 0 || a >= nx || b >= ny) continue;
        const std::size_t k = static_cast<std::size_t>(b) * nx + a;
        if (label[k] < 0 && grid.cells[k].get(q) >= level) {
          label[k] = next;
          stack.push_back(k);
        }
      }
    }
    ++next;
  }
  return label;
}

namespace {

std::string shortest(double x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

template <class T>
void put(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "binary grid format is little-endian");
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.write(bytes, sizeof(T));
}

template <class T>
T get(std::istream& in) {
  char bytes[sizeof(T)];
  if (!in.read(bytes, sizeof(T))) throw InvalidParams("truncated binary grid");
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

constexpr char kMagic[4] = {'S', 'P', 'G', 'D'};

}  // namespace

void write_long_csv(std::ostream& out, const SweepGrid& grid) {
  out << "omega0,delta,quantity,value\n";
  for (int j = 0; j < grid.delta.count; ++j) {
    for (int i = 0; i < grid.detuning.count; ++i) {
      for (Quantity q : grid.quantities) {
        out << shortest(grid.detuning.value(i)) << ',' << shortest(grid.delta.value(j)) << ','
            << quantity_name(q) << ',' << shortest(grid.value(q, i, j)) << '\n';
      }
    }
  }
}

void write_binary(std::ostream& out, const SweepGrid& grid, Quantity q) {
  if (!grid.has(q)) throw InvalidParams("quantity " + quantity_name(q) + " is not on the grid");
  out.write(kMagic, 4);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.detuning.count));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.delta.count));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(q));
  put<double>(out, grid.detuning.min);
  put<double>(out, grid.detuning.max);
  put<double>(out, grid.delta.min);
  put<double>(out, grid.delta.max);
  for (const auto& c : grid.cells) put<double>(out, c.get(q));
}

BinaryGrid read_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw InvalidParams("not a binary sweep grid");
  BinaryGrid g;
  g.detuning.count = static_cast<int>(get<std::uint32_t>(in));
  g.delta.count = static_cast<int>(get<std::uint32_t>(in));
  const auto id = get<std::uint32_t>(in);
  if (id < 1 || id > 4) throw InvalidParams("unknown quantity id in binary grid");
  g.quantity = static_cast<Quantity>(id);
  g.detuning.min = get<double>(in);
  g.detuning.max = get<double>(in);
  g.delta.min = get<double>(in);
  g.delta.max = get<double>(in);
  g.values.resize(static_cast<std::size_t>(g.detuning.count) * g.delta.count);
  for (auto& x : g.values) x = get<double>(in);
  return g;
}

}  // namespace spinphoton
