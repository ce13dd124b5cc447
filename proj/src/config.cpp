#include "nlqw/config.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <initializer_list>
#include <set>

#include "nlqw/errors.hpp"
#include "nlqw/format.hpp"

namespace nlqw {

namespace {

using nlohmann::json;

// Structural reader: pulls typed fields out of JSON objects and records a
// violation for every missing, mistyped or unknown key instead of stopping
// at the first one.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& violations) : violations_(violations) {}

  bool object(const json& node, const std::string& path, std::initializer_list<std::string_view> allowed) {
    if (!node.is_object()) {
      fail((path.empty() ? std::string("config") : path) + " must be an object");
      return false;
    }
    for (const auto& [key, value] : node.items()) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail("unknown key '" + join(path, key) + "'");
      }
    }
    return true;
  }

  bool number(const json& obj, std::string_view key, const std::string& path, double& out, bool required = false) {
    const auto it = obj.find(key);
    if (it == obj.end()) return missing(required, path, key);
    if (!it->is_number()) return fail(join(path, key) + " must be a number");
    out = it->get<double>();
    return true;
  }

  bool integer(const json& obj, std::string_view key, const std::string& path, int& out, bool required = false) {
    const auto it = obj.find(key);
    if (it == obj.end()) return missing(required, path, key);
    if (!it->is_number_integer()) return fail(join(path, key) + " must be an integer");
    out = it->get<int>();
    return true;
  }

  bool integer64(const json& obj, std::string_view key, const std::string& path, Site& out, bool required = false) {
    const auto it = obj.find(key);
    if (it == obj.end()) return missing(required, path, key);
    if (!it->is_number_integer()) return fail(join(path, key) + " must be an integer");
    out = it->get<Site>();
    return true;
  }

  bool string(const json& obj, std::string_view key, const std::string& path, std::string& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return true;
    if (!it->is_string()) return fail(join(path, key) + " must be a string");
    out = it->get<std::string>();
    return true;
  }

  bool boolean(const json& obj, std::string_view key, const std::string& path, bool& out) {
    const auto it = obj.find(key);
    if (it == obj.end()) return true;
    if (!it->is_boolean()) return fail(join(path, key) + " must be a boolean");
    out = it->get<bool>();
    return true;
  }

  template <typename T, typename Check>
  bool array(const json& obj, std::string_view key, const std::string& path, std::vector<T>& out, Check&& is_item,
             std::string_view item_kind) {
    const auto it = obj.find(key);
    if (it == obj.end()) return true;
    if (!it->is_array()) return fail(join(path, key) + " must be an array");
    std::vector<T> items;
    bool ok = true;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const json& item = (*it)[i];
      if (!is_item(item)) {
        ok = fail(join(path, key) + "[" + std::to_string(i) + "] must be " + std::string(item_kind));
        continue;
      }
      items.push_back(item.get<T>());
    }
    if (ok) out = std::move(items);
    return ok;
  }

  bool fail(std::string message) {
    violations_.push_back(std::move(message));
    return false;
  }

  static std::string join(const std::string& path, std::string_view key) {
    return path.empty() ? std::string(key) : path + "." + std::string(key);
  }

 private:
  bool missing(bool required, const std::string& path, std::string_view key) {
    if (required) return fail("missing required key '" + join(path, key) + "'");
    return true;
  }

  std::vector<std::string>& violations_;
};

bool read_coin(Reader& r, const json& node, CoinSpec& coin) {
  if (!r.object(node, "coin", {"a_re", "a_im", "b_re", "b_im", "family", "m", "kappa", "g"})) return false;
  bool ok = true;
  ok &= r.number(node, "a_re", "coin", coin.a_re, true);
  ok &= r.number(node, "a_im", "coin", coin.a_im, true);
  ok &= r.number(node, "b_re", "coin", coin.b_re, true);
  ok &= r.number(node, "b_im", "coin", coin.b_im, true);
  std::string family(to_string(coin.family));
  if (r.string(node, "family", "coin", family)) {
    try {
      coin.family = parse_family(family);
    } catch (const ParseError& e) {
      ok = r.fail(std::string("coin.family: ") + e.what());
    }
  } else {
    ok = false;
  }
  ok &= r.integer(node, "m", "coin", coin.m);
  ok &= r.number(node, "kappa", "coin", coin.kappa);
  ok &= r.number(node, "g", "coin", coin.g);
  return ok;
}

void read_initial(Reader& r, const json& node, std::vector<InitialSite>& initial) {
  if (!node.is_array()) {
    r.fail("initial must be an array of sites");
    return;
  }
  for (std::size_t i = 0; i < node.size(); ++i) {
    const std::string path = "initial[" + std::to_string(i) + "]";
    const json& item = node[i];
    if (!r.object(item, path, {"x", "up_re", "up_im", "down_re", "down_im"})) continue;
    InitialSite site;
    double up_re = 0.0, up_im = 0.0, down_re = 0.0, down_im = 0.0;
    bool ok = r.integer64(item, "x", path, site.x, true);
    ok &= r.number(item, "up_re", path, up_re);
    ok &= r.number(item, "up_im", path, up_im);
    ok &= r.number(item, "down_re", path, down_re);
    ok &= r.number(item, "down_im", path, down_im);
    if (!ok) continue;
    site.up = {up_re, up_im};
    site.down = {down_re, down_im};
    initial.push_back(site);
  }
}

std::vector<std::string> semantic_violations(const RunConfig& c, bool coin_readable) {
  std::vector<std::string> out;
  if (coin_readable) {
    try {
      (void)BaseCoin::make({c.coin.a_re, c.coin.a_im}, {c.coin.b_re, c.coin.b_im});
    } catch (const Error& e) {
      out.emplace_back(e.what());
    }
  }
  if (c.coin.m < 1) out.emplace_back("coin.m must be >= 1");
  if (!(c.coin.kappa >= 0.0) || !std::isfinite(c.coin.kappa)) out.emplace_back("coin.kappa must be finite and >= 0");
  if (!(c.coin.g >= 0.0) || !std::isfinite(c.coin.g)) out.emplace_back("coin.g must be finite and >= 0");

  if (c.initial.empty()) out.emplace_back("initial must list at least one site");
  std::set<Site> seen;
  double mass = 0.0;
  bool finite = true;
  for (const auto& s : c.initial) {
    if (!seen.insert(s.x).second) out.emplace_back("initial lists site " + std::to_string(s.x) + " twice");
    const Spinor spinor{s.up, s.down};
    finite &= spinor.is_finite();
    mass += spinor.norm_sq();
  }
  if (!finite) out.emplace_back("initial state has non-finite amplitudes");
  if (!c.initial.empty() && finite && !(std::abs(std::sqrt(mass) - 1.0) <= 1e-9)) {
    out.emplace_back("NotNormalized: initial state norm is " + format_number(std::sqrt(mass)) + ", expected 1");
  }

  if (c.horizon < 0) out.emplace_back("horizon must be >= 0");
  if (c.checkpoints.empty()) out.emplace_back("checkpoints must not be empty");
  for (std::size_t i = 0; i < c.checkpoints.size(); ++i) {
    if (c.checkpoints[i] <= 0 || (i > 0 && c.checkpoints[i] <= c.checkpoints[i - 1])) {
      out.emplace_back("checkpoints must be positive and strictly increasing");
      break;
    }
  }
  if (c.xi_grid.empty()) out.emplace_back("xi_grid must not be empty");
  if (!std::all_of(c.xi_grid.begin(), c.xi_grid.end(), [](double xi) { return std::isfinite(xi); })) {
    out.emplace_back("xi_grid must be finite");
  }
  if (!(c.scatter_tol > 0.0)) out.emplace_back("tolerances.scatter_tol must be > 0");
  if (c.t_max < 32 || !std::has_single_bit(static_cast<unsigned>(c.t_max))) {
    out.emplace_back("tolerances.t_max must be a power of two >= 32");
  }
  if (c.n_nodes < 64) out.emplace_back("density.n_nodes must be >= 64");
  if (c.output.dir.empty()) out.emplace_back("output.dir must not be empty");
  if (c.sweep) {
    for (const double g : c.sweep->g) {
      if (!(g >= 0.0) || !std::isfinite(g)) out.emplace_back("sweep.g entries must be finite and >= 0");
    }
    for (const int m : c.sweep->m) {
      if (m < 1) out.emplace_back("sweep.m entries must be >= 1");
    }
  }
  return out;
}

}  // namespace

NonlinearCoinModel RunConfig::model() const {
  return {BaseCoin::make({coin.a_re, coin.a_im}, {coin.b_re, coin.b_im}), coin.family, coin.m, coin.kappa, coin.g};
}

LatticeState RunConfig::initial_state() const {
  if (initial.empty()) return {};
  Site lo = initial.front().x, hi = initial.front().x;
  for (const auto& s : initial) {
    lo = std::min(lo, s.x);
    hi = std::max(hi, s.x);
  }
  LatticeState u = LatticeState::zeros(lo, hi);
  for (const auto& s : initial) u[s.x] = {s.up, s.down};
  return u;
}

WalkConfig RunConfig::walk() const { return {model(), initial_state(), horizon}; }

VerifyOptions RunConfig::verify_options() const {
  VerifyOptions opts;
  opts.checkpoints = checkpoints;
  opts.xi_grid = xi_grid;
  opts.n_nodes = n_nodes;
  opts.scatter_tol = scatter_tol;
  opts.t_max = t_max;
  return opts;
}

RunConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what());
  }

  std::vector<std::string> violations;
  Reader r(violations);
  RunConfig c;
  bool coin_readable = false;
  if (r.object(root, "",
               {"coin", "initial", "horizon", "checkpoints", "xi_grid", "tolerances", "density", "output", "sweep"})) {
    if (const auto it = root.find("coin"); it != root.end()) {
      coin_readable = read_coin(r, *it, c.coin);
    } else {
      r.fail("missing required key 'coin'");
    }
    if (const auto it = root.find("initial"); it != root.end()) {
      read_initial(r, *it, c.initial);
    } else {
      r.fail("missing required key 'initial'");
    }
    r.integer(root, "horizon", "", c.horizon);
    r.array(root, "checkpoints", "", c.checkpoints, [](const json& j) { return j.is_number_integer(); },
            "an integer");
    r.array(root, "xi_grid", "", c.xi_grid, [](const json& j) { return j.is_number(); }, "a number");
    if (const auto it = root.find("tolerances"); it != root.end()) {
      if (r.object(*it, "tolerances", {"scatter_tol", "t_max"})) {
        r.number(*it, "scatter_tol", "tolerances", c.scatter_tol);
        r.integer(*it, "t_max", "tolerances", c.t_max);
      }
    }
    if (const auto it = root.find("density"); it != root.end()) {
      if (r.object(*it, "density", {"n_nodes"})) r.integer(*it, "n_nodes", "density", c.n_nodes);
    }
    if (const auto it = root.find("output"); it != root.end()) {
      if (r.object(*it, "output", {"dir", "per_step"})) {
        r.string(*it, "dir", "output", c.output.dir);
        r.boolean(*it, "per_step", "output", c.output.per_step);
      }
    }
    if (const auto it = root.find("sweep"); it != root.end()) {
      if (r.object(*it, "sweep", {"g", "m", "family"})) {
        SweepSpec sweep;
        r.array(*it, "g", "sweep", sweep.g, [](const json& j) { return j.is_number(); }, "a number");
        r.array(*it, "m", "sweep", sweep.m, [](const json& j) { return j.is_number_integer(); }, "an integer");
        std::vector<std::string> families;
        r.array(*it, "family", "sweep", families, [](const json& j) { return j.is_string(); }, "a string");
        for (const auto& name : families) {
          try {
            sweep.family.push_back(parse_family(name));
          } catch (const ParseError& e) {
            r.fail(std::string("sweep.family: ") + e.what());
          }
        }
        c.sweep = std::move(sweep);
      }
    }
    auto semantic = semantic_violations(c, coin_readable);
    violations.insert(violations.end(), semantic.begin(), semantic.end());
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
  return c;
}

void validate_config(const RunConfig& config) {
  auto violations = semantic_violations(config, true);
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

nlohmann::json config_to_json(const RunConfig& c) {
  json initial = json::array();
  for (const auto& s : c.initial) {
    initial.push_back({{"x", s.x},
                       {"up_re", s.up.real()},
                       {"up_im", s.up.imag()},
                       {"down_re", s.down.real()},
                       {"down_im", s.down.imag()}});
  }
  json out = {
      {"coin",
       {{"a_re", c.coin.a_re},
        {"a_im", c.coin.a_im},
        {"b_re", c.coin.b_re},
        {"b_im", c.coin.b_im},
        {"family", std::string(to_string(c.coin.family))},
        {"m", c.coin.m},
        {"kappa", c.coin.kappa},
        {"g", c.coin.g}}},
      {"initial", initial},
      {"horizon", c.horizon},
      {"checkpoints", c.checkpoints},
      {"xi_grid", c.xi_grid},
      {"tolerances", {{"scatter_tol", c.scatter_tol}, {"t_max", c.t_max}}},
      {"density", {{"n_nodes", c.n_nodes}}},
      {"output", {{"dir", c.output.dir}, {"per_step", c.output.per_step}}},
  };
  if (c.sweep) {
    json families = json::array();
    for (const auto f : c.sweep->family) families.push_back(std::string(to_string(f)));
    out["sweep"] = {{"g", c.sweep->g}, {"m", c.sweep->m}, {"family", families}};
  }
  return out;
}

std::string emit_config(const RunConfig& config) { return config_to_json(config).dump(2) + "\n"; }

}  // namespace nlqw
