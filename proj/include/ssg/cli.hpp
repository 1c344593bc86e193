#ifndef SSG_CLI_HPP
#define SSG_CLI_HPP

// Command-line front end. Each command writes one artifact (CSV, JSON or SVG) to
// --out or stdout. Exit codes: 0 ok, 1 usage or validation error, 2 a checked
// invariant failed.
//
// Config files hold `key = value` lines; '#' starts a comment. Keys are the long
// flag names, or their dotted forms:
//   eps.prefix = [0.9, 0.8]   eps.tail.c = 0.1   eps.tail.r = 0.5   eps.const = 0.5
//   constants.a = 0.333       quad.order = 8     depth = 4          depths = 3,4,5
// Flags given on the command line override the file.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "energy.hpp"
#include "geometry.hpp"
#include "harmonicity.hpp"
#include "kusuoka.hpp"
#include "laplacian.hpp"
#include "params.hpp"
#include "parser.hpp"
#include "poly.hpp"

namespace ssg::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kAssertion = 2 };

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Flat key=value file. Later lines win.
inline std::map<std::string, std::string> read_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
    kv[key] = value;
  }
  return kv;
}

inline const std::map<std::string, std::string> &config_aliases() {
  static const std::map<std::string, std::string> m{
      {"eps.prefix", "eps-prefix"}, {"eps.tail.c", "tail-c"}, {"eps.tail.r", "tail-r"},
      {"eps.const", "eps-const"},   {"constants.a", "a"},     {"quad.order", "quad-order"},
  };
  return m;
}

inline std::vector<double> parse_list(std::string text, const std::string &what) {
  std::erase_if(text, [](char c) { return c == '[' || c == ']' || c == ' '; });
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception &) {
      throw UsageError("bad number '" + item + "' in " + what);
    }
  }
  return out;
}

inline double parse_number(const std::string &text, const std::string &what) {
  const auto v = parse_list(text, what);
  if (v.size() != 1) throw UsageError(what + " expects one number");
  return v[0];
}

inline int parse_int(const std::string &text, const std::string &what) {
  const double v = parse_number(text, what);
  if (v != static_cast<int>(v)) throw UsageError(what + " expects an integer");
  return static_cast<int>(v);
}

inline bool parse_bool(const std::string &text, const std::string &what) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw UsageError(what + " expects true or false");
}

/// Raw option strings, filled from flags and then from the config file.
struct RawOptions {
  std::map<std::string, std::string> values;
  std::map<std::string, bool> flags;
  std::string config;
};

struct RunConfig {
  std::vector<double> prefix;
  double tail_c = 0.1;
  double tail_r = 0.5;
  std::optional<double> eps_const;
  double a = 1.0 / 3.0;
  double anisotropy = 3.0;
  int depth = 3;
  std::vector<int> depths;
  int quad_order = QuadratureRule::kDefaultOrder;
  double eps = 1.0;
  std::string u = "x", v, phi = "x^2";
  bool v_vanishing = false;
  bool require_vanishing = false;
  bool json = false;
  bool shade = false;
  std::string out;

  ParamSeq params() const {
    if (eps_const) return ParamSeq::constant(*eps_const, prefix);
    return ParamSeq::with_tail(prefix, tail_c, tail_r);
  }
  Gasket gasket() const { return Gasket(params(), FormConstants::harmonic(a), anisotropy); }
};

inline RunConfig resolve(const RawOptions &raw) {
  RunConfig c;
  const auto &v = raw.values;
  auto get = [&](const std::string &k) -> const std::string * {
    auto it = v.find(k);
    return it == v.end() ? nullptr : &it->second;
  };
  if (auto *s = get("eps-prefix")) c.prefix = parse_list(*s, "--eps-prefix");
  if (auto *s = get("tail-c")) c.tail_c = parse_number(*s, "--tail-c");
  if (auto *s = get("tail-r")) c.tail_r = parse_number(*s, "--tail-r");
  if (auto *s = get("eps-const")) c.eps_const = parse_number(*s, "--eps-const");
  if (auto *s = get("a")) c.a = parse_number(*s, "--a");
  if (auto *s = get("anisotropy")) c.anisotropy = parse_number(*s, "--anisotropy");
  if (auto *s = get("depth")) c.depth = parse_int(*s, "--depth");
  if (auto *s = get("depths")) {
    for (double d : parse_list(*s, "--depths")) {
      if (d != static_cast<int>(d)) throw UsageError("--depths expects integers");
      c.depths.push_back(static_cast<int>(d));
    }
  }
  if (auto *s = get("quad-order")) c.quad_order = parse_int(*s, "--quad-order");
  if (auto *s = get("eps")) c.eps = parse_number(*s, "--eps");
  if (auto *s = get("u")) c.u = *s;
  if (auto *s = get("v")) c.v = *s;
  if (auto *s = get("phi")) c.phi = *s;
  if (auto *s = get("out")) c.out = *s;
  auto flag = [&](const std::string &k) {
    auto it = raw.flags.find(k);
    return it != raw.flags.end() && it->second;
  };
  c.v_vanishing = flag("v-vanishing");
  c.require_vanishing = flag("require-vanishing");
  c.json = flag("json");
  c.shade = flag("shade");
  return c;
}

/// Result of one command: the artifact text and the exit code.
struct Outcome {
  std::string text;
  int code = kOk;
  std::string message; // diagnostic for stderr
};

inline Poly2 parse_field(const std::string &text, const std::string &what) {
  try {
    return parse(text);
  } catch (const ParseError &e) {
    throw UsageError(what + ": " + e.what());
  }
}

inline Poly2 resolve_v(const RunConfig &c) {
  Poly2 v = c.v.empty() ? (c.v_vanishing ? Poly2::constant(1.0) : parse_field(c.u, "--u"))
                        : parse_field(c.v, "--v");
  if (c.v_vanishing) v = vanishing_at_ABC(v);
  return v;
}

inline std::string dump(const nlohmann::ordered_json &j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- geometry

inline Outcome cmd_geometry(const RunConfig &c) {
  const Gasket g = c.gasket();
  g.check_depth(c.depth);
  const auto edges = g.prefractal_edges(c.depth);
  Outcome o;
  if (c.json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &e : edges) {
      const Segment img = e.image();
      nlohmann::ordered_json j;
      if (const auto *t = std::get_if<TriangleEdge>(&e.id.kind)) {
        j["kind"] = "tri";
        j["word"] = t->word.symbols();
        j["side"] = side_name(t->side);
      } else {
        const auto &cb = std::get<CableEdge>(e.id.kind);
        j["kind"] = "cable";
        j["word"] = cb.prefix.symbols();
        j["slot"] = cb.slot;
        j["generation"] = cb.generation;
      }
      j["prefactor"] = e.id.prefactor;
      j["p"] = {img.p.x, img.p.y};
      j["q"] = {img.q.x, img.q.y};
      arr.push_back(std::move(j));
    }
    nlohmann::ordered_json doc;
    doc["depth"] = c.depth;
    doc["eps_spec"] = g.params().describe();
    doc["edges"] = std::move(arr);
    o.text = dump(doc);
    return o;
  }

  constexpr double scale = 1000.0;
  const double w = kSqrt3 / 2.0, h = 1.0, margin = 0.05 * std::max(w, h);
  char buf[256];
  std::string svg;
  std::snprintf(buf, sizeof buf,
                "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
                "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"%.6f %.6f %.6f %.6f\">\n",
                -margin * scale, -(0.5 + margin) * scale, (w + 2 * margin) * scale, (h + 2 * margin) * scale);
  svg += buf;
  const double stroke = 4.0 / (1.0 + c.depth);
  auto px = [&](const Vec2 &p) { return std::pair{p.x * scale + 0.0, -p.y * scale + 0.0}; };
  if (c.shade) {
    double kmax = 0.0;
    const auto masses = kusuoka_masses(g, c.depth);
    for (const auto &m : masses) kmax = std::max(kmax, m.kappa);
    for (const auto &m : masses) {
      const auto tri = image_triangle(g.compose(m.word));
      const auto [x0, y0] = px(tri[0]);
      const auto [x1, y1] = px(tri[1]);
      const auto [x2, y2] = px(tri[2]);
      std::snprintf(buf, sizeof buf,
                    "<polygon points=\"%.6f,%.6f %.6f,%.6f %.6f,%.6f\" fill=\"#1f4e79\" fill-opacity=\"%.6f\"/>\n",
                    x0, y0, x1, y1, x2, y2, m.kappa / kmax);
      svg += buf;
    }
  }
  for (const auto &e : edges) {
    const auto [x0, y0] = px(e.image().p);
    const auto [x1, y1] = px(e.image().q);
    std::snprintf(buf, sizeof buf,
                  "<line x1=\"%.6f\" y1=\"%.6f\" x2=\"%.6f\" y2=\"%.6f\" stroke=\"black\" stroke-width=\"%.4f\"%s/>\n",
                  x0, y0, x1, y1, stroke, e.id.is_cable() ? " stroke-dasharray=\"4,3\"" : "");
    svg += buf;
  }
  svg += "</svg>\n";
  o.text = std::move(svg);
  return o;
}

// ---------------------------------------------------------------- energy

inline Outcome cmd_energy(const RunConfig &c) {
  const Gasket g = c.gasket();
  const Poly2 u = parse_field(c.u, "--u");
  const Poly2 v = resolve_v(c);
  if (c.require_vanishing && !vanishes_at_corners(v)) {
    throw UsageError("--v does not vanish at A, B and C (required by --require-vanishing)");
  }
  const QuadratureRule quad(c.quad_order);
  const EnergyReport r = energy_total(g, c.depth, u, v, quad);
  nlohmann::ordered_json j;
  j["e1"] = r.e1;
  j["e2"] = r.e2;
  j["total"] = r.total;
  j["depth"] = c.depth;
  j["eps_spec"] = g.params().describe();
  j["u"] = to_string(u);
  j["v"] = to_string(v);
  return {dump(j), kOk, {}};
}

// ---------------------------------------------------------------- harmonicity

inline Outcome cmd_harmonicity(const RunConfig &c) {
  const Gasket g = c.gasket();
  const HarmonicReport r = harmonic_report(g, c.depth);
  const double gamma = nd_gamma(g.params().eps(1));
  const bool ok = r.residual <= kHarmonicTolerance * g.constants().a;
  nlohmann::ordered_json j;
  j["depth"] = r.depth;
  j["residual"] = r.residual;
  j["worst_vertex_word"] = r.worst_vertex.word.str();
  j["worst_vertex_corner"] = std::string(1, "ABC"[static_cast<int>(r.worst_vertex.corner)]);
  j["interior_vertices"] = r.interior_vertices;
  nlohmann::ordered_json corners;
  for (int k = 0; k < 3; ++k) {
    const Vec2 &bv = r.corner_vectors[static_cast<std::size_t>(k)];
    corners[std::string(1, "ABC"[k])] = {bv.x, bv.y};
  }
  j["corner_vectors"] = corners;
  j["nd_gamma"] = gamma;
  j["eps_spec"] = g.params().describe();
  j["pass"] = ok;
  Outcome o{dump(j), ok ? kOk : kAssertion, {}};
  if (!ok) {
    o.message = "boundary residual " + fmt(r.residual) + " exceeds 1e-10*a at vertex " + r.worst_vertex.word.str() +
                "/" + "ABC"[static_cast<int>(r.worst_vertex.corner)];
  }
  return o;
}

// ---------------------------------------------------------------- ruelle

inline Outcome cmd_ruelle(const RunConfig &c) {
  const PerronPair p = perron(c.eps, c.anisotropy);
  const bool ok = p.residual <= 1e-12 * std::max(1.0, p.lambda);
  Outcome o;
  o.code = ok ? kOk : kAssertion;
  if (!ok) o.message = "Perron eigen-residual " + fmt(p.residual) + " exceeds 1e-12";
  if (c.json) {
    nlohmann::ordered_json j;
    j["eps"] = c.eps;
    j["lambda"] = p.lambda;
    j["Q"] = {{p.q.a, p.q.b}, {p.q.c, p.q.d}};
    j["residual"] = p.residual;
    j["iterations"] = p.iterations;
    o.text = dump(j);
  } else {
    o.text = "eps,lambda,q11,q12,q22,residual,iterations\n" + fmt(c.eps) + "," + fmt(p.lambda) + "," + fmt(p.q.a) +
             "," + fmt(p.q.b) + "," + fmt(p.q.d) + "," + fmt(p.residual) + "," + std::to_string(p.iterations) + "\n";
  }
  return o;
}

// ---------------------------------------------------------------- kusuoka

inline Outcome cmd_kusuoka(const RunConfig &c) {
  const Gasket g = c.gasket();
  const auto masses = kusuoka_masses(g, c.depth);
  CompensatedSum total;
  double min_eig = 0.0, max_kappa = -1.0;
  std::string max_word;
  bool first = true;
  std::string csv = "word,kappa,tau11,tau12,tau22\n";
  for (const auto &m : masses) {
    total += m.kappa;
    const double e = sym_eigenvalues(m.tau).first;
    if (first || e < min_eig) min_eig = e;
    if (m.kappa > max_kappa) {
      max_kappa = m.kappa;
      max_word = m.word.str();
    }
    first = false;
    csv += (m.word.empty() ? std::string("-") : m.word.str()) + "," + fmt(m.kappa) + "," + fmt(m.tau.a) + "," +
           fmt(m.tau.b) + "," + fmt(m.tau.d) + "\n";
  }
  const bool ok = std::abs(total.value() - 1.0) <= 1e-12 && min_eig >= -1e-13;
  Outcome o;
  o.code = ok ? kOk : kAssertion;
  if (!ok) o.message = "Kusuoka masses: sum " + fmt(total.value()) + ", min eigenvalue " + fmt(min_eig);
  if (c.json) {
    nlohmann::ordered_json j;
    j["depth"] = c.depth;
    j["sum_kappa"] = total.value();
    j["min_eig"] = min_eig;
    j["max_kappa_word"] = max_word;
    j["max_kappa"] = max_kappa;
    j["eps_spec"] = g.params().describe();
    o.text = dump(j);
  } else {
    o.text = std::move(csv);
  }
  return o;
}

// ---------------------------------------------------------------- ibp

inline Outcome cmd_ibp(const RunConfig &c) {
  const Gasket g = c.gasket();
  const Poly2 phi = parse_field(c.phi, "--phi");
  const Poly2 v = c.v.empty() && !c.v_vanishing ? barycentric_cubic() : resolve_v(c);
  if (!vanishes_at_corners(v)) throw UsageError("--v must vanish at A, B and C");
  std::vector<int> depths = c.depths;
  if (depths.empty()) depths = {3, 4, 5, 6, 7, 8};
  const QuadratureRule quad(c.quad_order);
  const auto rows = ibp_series(g, phi, v, depths, quad);
  Outcome o;
  if (c.json) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto &r : rows) {
      arr.push_back({{"depth", r.depth},
                     {"energy_lhs", r.energy_lhs},
                     {"integral_rhs", r.integral_rhs},
                     {"residual", r.residual}});
    }
    nlohmann::ordered_json j;
    j["phi"] = to_string(phi);
    j["v"] = to_string(v);
    j["eps_spec"] = g.params().describe();
    j["rows"] = std::move(arr);
    o.text = dump(j);
  } else {
    o.text = "depth,energy_lhs,integral_rhs,residual\n";
    for (const auto &r : rows) {
      o.text += std::to_string(r.depth) + "," + fmt(r.energy_lhs) + "," + fmt(r.integral_rhs) + "," +
                fmt(r.residual) + "\n";
    }
  }
  return o;
}

// ---------------------------------------------------------------- convergence

inline Outcome cmd_convergence(const RunConfig &c) {
  const Gasket g = c.gasket();
  const Poly2 u = parse_field(c.u, "--u");
  const Poly2 v = resolve_v(c);
  std::vector<int> depths = c.depths;
  if (depths.empty()) depths = {0, 1, 2, 3, 4, 5, 6, 7, 8};
  const QuadratureRule quad(c.quad_order);
  std::string csv = "l,energy,delta\n";
  std::optional<double> prev;
  for (int l : depths) {
    const double e = energy_total(g, l, u, v, quad).total;
    csv += std::to_string(l) + "," + fmt(e) + "," + (prev ? fmt(e - *prev) : std::string()) + "\n";
    prev = e;
  }
  return {csv, kOk, {}};
}

// ---------------------------------------------------------------- selfsim

inline Outcome cmd_selfsim(const RunConfig &c) {
  const Gasket g = c.gasket();
  const Poly2 u = parse_field(c.u, "--u");
  const Poly2 v = resolve_v(c);
  const QuadratureRule quad(c.quad_order);
  const IdentityCheck r = selfsimilar_residual(g, u, v, c.depth, quad);
  const double slack = 1e-10 * std::max(1.0, std::abs(r.lhs));
  const bool ok = r.residual <= slack;
  nlohmann::ordered_json j;
  j["depth"] = c.depth;
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["residual"] = r.residual;
  j["tail_bound"] = r.bound;
  j["eps_spec"] = g.params().describe();
  j["pass"] = ok;
  Outcome o{dump(j), ok ? kOk : kAssertion, {}};
  if (!ok) o.message = "self-similarity residual " + fmt(r.residual) + " exceeds " + fmt(slack);
  return o;
}

// ---------------------------------------------------------------- laplacian

inline Outcome cmd_laplacian(const RunConfig &c) {
  const Gasket g = c.gasket();
  const Poly2 phi = parse_field(c.phi, "--phi");
  std::string csv = "carrier,x,y,t11,t12,t22,value\n";
  for (const auto &s : laplacian_samples(g, phi, c.depth)) {
    std::string name;
    if (const auto *w = std::get_if<Word>(&s.carrier)) {
      name = "w:" + w->str();
    } else {
      const auto &cb = std::get<CableEdge>(s.carrier);
      name = "c" + std::to_string(cb.generation) + ":" + cb.prefix.str() + ":" + std::to_string(cb.slot);
    }
    csv += name + "," + fmt(s.location.x) + "," + fmt(s.location.y) + "," + fmt(s.t_tilde.a) + "," +
           fmt(s.t_tilde.b) + "," + fmt(s.t_tilde.d) + "," + fmt(s.value) + "\n";
  }
  return {csv, kOk, {}};
}

// ---------------------------------------------------------------- driver

inline int run(int argc, const char *const *argv, std::ostream &out = std::cout, std::ostream &err = std::cerr) {
  CLI::App app{"Stretched Sierpinski gasket: harmonic embedding, energy forms, measures and Laplacian"};
  app.require_subcommand(1);
  RawOptions raw;

  struct CommandDef {
    const char *name;
    const char *help;
    std::vector<std::string> options;
    std::vector<std::string> flags;
  };
  const std::vector<std::string> seq_opts{"eps-prefix", "tail-c", "tail-r", "eps-const", "a", "anisotropy"};
  auto with_seq = [&](std::vector<std::string> extra) {
    extra.insert(extra.begin(), seq_opts.begin(), seq_opts.end());
    return extra;
  };
  const std::vector<CommandDef> specs{
      {"geometry", "edges of the pre-fractal as SVG (or JSON)", with_seq({"depth", "out"}), {"json", "shade"}},
      {"energy", "pre-fractal energy E_l(u, v)", with_seq({"depth", "u", "v", "quad-order", "out"}),
       {"v-vanishing", "require-vanishing", "json"}},
      {"harmonicity", "boundary residual of the pre-fractal and the (ND) constant", with_seq({"depth", "out"}),
       {"json"}},
      {"ruelle", "Perron eigenpair of the transfer operator", {"eps", "anisotropy", "out"}, {"json"}},
      {"kusuoka", "cylinder masses kappa and tau", with_seq({"depth", "out"}), {"json"}},
      {"ibp", "integration-by-parts residual for the Laplacian",
       with_seq({"phi", "v", "depths", "quad-order", "out"}), {"v-vanishing", "json"}},
      {"convergence", "E_l(u, v) over a range of depths", with_seq({"u", "v", "depths", "quad-order", "out"}),
       {"v-vanishing"}},
      {"selfsim", "self-similarity identity of the limit form",
       with_seq({"depth", "u", "v", "quad-order", "out"}), {"v-vanishing", "json"}},
      {"laplacian", "Laplacian samples on cylinders and cables", with_seq({"phi", "depth", "out"}), {}},
  };
  const std::map<std::string, std::string> help{
      {"eps-prefix", "explicit eps_1..eps_K, comma separated"},
      {"tail-c", "tail eps_i = exp(-c r^i): c"},
      {"tail-r", "tail eps_i = exp(-c r^i): r"},
      {"eps-const", "constant tail value (finite-depth quantities only)"},
      {"a", "energy constant a (b = a)"},
      {"anisotropy", "alpha/beta of the map triple (3 is harmonic)"},
      {"depth", "pre-fractal depth"},
      {"depths", "comma-separated depths"},
      {"u", "polynomial u(x, y)"},
      {"v", "polynomial v(x, y)"},
      {"phi", "polynomial phi(x, y)"},
      {"quad-order", "Gauss-Legendre points per edge"},
      {"eps", "single stretching factor in (0, 1]"},
      {"out", "output file (default stdout)"},
      {"json", "JSON output"},
      {"shade", "shade cells by Kusuoka mass"},
      {"v-vanishing", "multiply v by the cubic vanishing at A, B, C"},
      {"require-vanishing", "reject v unless it vanishes at A, B, C"},
  };

  std::map<std::string, CLI::App *> subs;
  std::map<std::string, std::map<std::string, CLI::Option *>> handles;
  for (const auto &s : specs) {
    CLI::App *sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--config", raw.config, "key = value config file");
    for (const auto &name : s.options) {
      handles[s.name][name] = sub->add_option("--" + name, raw.values[name], help.at(name));
    }
    for (const auto &name : s.flags) {
      handles[s.name][name] = sub->add_flag("--" + name, raw.flags[name], help.at(name));
    }
    subs[s.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError &e) {
    app.exit(e, out, err);
    return kUsage;
  }

  std::string command;
  for (const auto &[name, sub] : subs)
    if (sub->parsed()) command = name;

  // Options not given on the command line are dropped, then filled from the file.
  const auto &mine = handles[command];
  for (auto it = raw.values.begin(); it != raw.values.end();) {
    auto h = mine.find(it->first);
    it = (h == mine.end() || h->second->count() == 0) ? raw.values.erase(it) : std::next(it);
  }
  for (auto it = raw.flags.begin(); it != raw.flags.end();) {
    auto h = mine.find(it->first);
    it = (h == mine.end() || h->second->count() == 0) ? raw.flags.erase(it) : std::next(it);
  }

  try {
    if (!raw.config.empty()) {
      for (const auto &[key, value] : read_config(raw.config)) {
        auto alias = config_aliases().find(key);
        const std::string name = alias == config_aliases().end() ? key : alias->second;
        auto h = mine.find(name);
        if (h == mine.end()) throw UsageError("config key '" + key + "' does not apply to " + command);
        if (h->second->get_expected_min() == 0) {
          if (!raw.flags.count(name)) raw.flags[name] = parse_bool(value, key);
        } else if (!raw.values.count(name)) {
          raw.values[name] = value;
        }
      }
    }
    const RunConfig cfg = resolve(raw);
    Outcome o;
    if (command == "geometry") o = cmd_geometry(cfg);
    else if (command == "energy") o = cmd_energy(cfg);
    else if (command == "harmonicity") o = cmd_harmonicity(cfg);
    else if (command == "ruelle") o = cmd_ruelle(cfg);
    else if (command == "kusuoka") o = cmd_kusuoka(cfg);
    else if (command == "ibp") o = cmd_ibp(cfg);
    else if (command == "convergence") o = cmd_convergence(cfg);
    else if (command == "selfsim") o = cmd_selfsim(cfg);
    else o = cmd_laplacian(cfg);

    if (cfg.out.empty()) {
      out << o.text;
    } else {
      std::ofstream f(cfg.out, std::ios::binary);
      if (!f) throw UsageError("cannot write " + cfg.out);
      f << o.text;
      if (!f) throw UsageError("write failed for " + cfg.out);
    }
    if (!o.message.empty()) err << command << ": " << o.message << "\n";
    return o.code;
  } catch (const ConvergenceError &e) {
    err << command << ": " << e.what() << "\n";
    return kAssertion;
  } catch (const std::exception &e) {
    err << command << ": error: " << e.what() << "\n";
    return kUsage;
  }
}

} // namespace ssg::cli

#endif // SSG_CLI_HPP
