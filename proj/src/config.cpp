#include "latharm/config.hpp"

#include "latharm/format.hpp"
#include "latharm/io.hpp"
#include "latharm/parallel.hpp"
#include "latharm/regularity.hpp"
#include "latharm/rng.hpp"
#include "latharm/selftest.hpp"
#include "latharm/version.hpp"
#include "latharm/wave.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <iostream>
#include <set>
#include <utility>

namespace latharm {

namespace {

// ---------------------------------------------------------------------------
// Symbol spec mini-language: name[:key=value,...], composable with
// sum(...)/product(...). Parameter lists end at the first comma that is not
// followed by another key=value pair, so combinator arguments need no escaping.
// ---------------------------------------------------------------------------

struct SpecParser {
  const std::string& text;
  int dim;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("symbol spec \"" + text + "\": " + msg + " (at offset " +
                      std::to_string(pos) + ")");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool at_end() {
    skip_ws();
    return pos >= text.size();
  }
  bool consume(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string ident() {
    skip_ws();
    const std::size_t start = pos;
    while (pos < text.size() && ident_char(text[pos])) ++pos;
    if (pos == start) fail("expected a name");
    return text.substr(start, pos - start);
  }

  // True when the input after `from` (a comma) looks like another key=value.
  bool continues_params(std::size_t from) const {
    std::size_t i = from;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    const std::size_t key_start = i;
    while (i < text.size() && ident_char(text[i])) ++i;
    if (i == key_start) return false;
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    return i < text.size() && text[i] == '=';
  }

  std::vector<std::pair<std::string, double>> params() {
    std::vector<std::pair<std::string, double>> out;
    while (true) {
      const std::string key = ident();
      if (!consume('=')) fail("expected '=' after parameter \"" + key + "\"");
      skip_ws();
      const std::size_t start = pos;
      while (pos < text.size() && text[pos] != ',' && text[pos] != ')') ++pos;
      std::string token = text.substr(start, pos - start);
      while (!token.empty() && std::isspace(static_cast<unsigned char>(token.back()))) {
        token.pop_back();
      }
      double value = 0.0;
      if (!detail::parse_double(token, value)) {
        fail("parameter \"" + key + "\" has a malformed number \"" + token + "\"");
      }
      out.emplace_back(key, value);
      const std::size_t save = pos;
      if (!consume(',')) break;
      if (!continues_params(pos)) {
        pos = save;  // the comma separates combinator arguments instead
        break;
      }
    }
    return out;
  }

  Symbol term() {
    const std::string name = ident();
    skip_ws();
    if ((name == "sum" || name == "product") && pos < text.size() && text[pos] == '(') {
      ++pos;
      std::vector<Symbol> parts;
      parts.push_back(term());
      while (consume(',')) parts.push_back(term());
      if (!consume(')')) fail("expected ')' closing " + name);
      if (parts.size() < 2) fail(name + " needs at least two arguments");
      Symbol acc = parts[0];
      for (std::size_t i = 1; i < parts.size(); ++i) {
        acc = name == "sum" ? symbols::sum(acc, parts[i]) : symbols::product(acc, parts[i]);
      }
      return acc;
    }
    std::vector<std::pair<std::string, double>> kv;
    if (consume(':')) kv = params();
    return leaf(name, kv);
  }

  double take(std::vector<std::pair<std::string, double>>& kv, const std::string& key,
              const char* owner) {
    for (auto it = kv.begin(); it != kv.end(); ++it) {
      if (it->first == key) {
        const double v = it->second;
        kv.erase(it);
        return v;
      }
    }
    fail(std::string(owner) + " needs parameter " + key + "=");
  }

  int take_int(std::vector<std::pair<std::string, double>>& kv, const std::string& key,
               const char* owner) {
    const double v = take(kv, key, owner);
    if (v != std::floor(v) || std::abs(v) > 1e6) {
      fail(std::string(owner) + " parameter " + key + " must be a small integer");
    }
    return static_cast<int>(v);
  }

  Symbol leaf(const std::string& name, std::vector<std::pair<std::string, double>> kv) {
    Symbol built = build_leaf(name, kv);
    if (!kv.empty()) fail("unknown parameter \"" + kv.front().first + "\" for " + name);
    return built;
  }

  Symbol build_leaf(const std::string& name, std::vector<std::pair<std::string, double>>& kv) {
    if (name == "constant") {
      double re = 1.0, im = 0.0;
      for (auto it = kv.begin(); it != kv.end();) {
        if (it->first == "re") {
          re = it->second;
          it = kv.erase(it);
        } else if (it->first == "im") {
          im = it->second;
          it = kv.erase(it);
        } else {
          ++it;
        }
      }
      return symbols::constant(Complex(re, im), dim);
    }
    if (name == "exp") {
      IVector k(dim);
      if (dim == 1) {
        k(0) = take_int(kv, "k", "exp");
      } else {
        for (int j = 0; j < dim; ++j) {
          k(j) = take_int(kv, "k" + std::to_string(j + 1), "exp");
        }
      }
      return symbols::exponential(k);
    }
    if (name == "riesz") return symbols::riesz(take_int(kv, "j", "riesz"), dim);
    if (name == "laplacian") return symbols::laplacian(dim);
    if (name == "imagpow") return symbols::imaginary_power(take(kv, "t", "imagpow"), dim);
    if (name == "wavecos") return symbols::wave_cos(take(kv, "t", "wavecos"), dim);
    if (name == "wavesinc") return symbols::wave_sinc(take(kv, "t", "wavesinc"), dim);
    if (name == "wavesinphi") return symbols::wave_sin_phi(take(kv, "t", "wavesinphi"), dim);
    if (name == "negpower") return symbols::negative_power(take(kv, "r", "negpower"), dim);
    if (name == "interval") {
      if (dim != 1) fail("interval is one-dimensional");
      const double a = take(kv, "a", "interval");
      return symbols::interval_indicator(a, take(kv, "b", "interval"));
    }
    if (name == "notch") {
      if (dim != 1) fail("notch is one-dimensional");
      const double a = take(kv, "a", "notch");
      return symbols::notch(a, take(kv, "eps", "notch"));
    }
    if (name == "lowpass") return symbols::low_pass(dim);
    if (name == "shell") return symbols::dyadic_shell(take_int(kv, "j", "shell"), dim);
    fail("unknown symbol \"" + name + "\"");
  }
};

// ---------------------------------------------------------------------------
// Config reading: every key a command understands is read exactly once, then
// anything left over is rejected by name.
// ---------------------------------------------------------------------------

class ConfigReader {
 public:
  explicit ConfigReader(const nlohmann::json& j) : j_(j) {}

  bool has(const std::string& key) const { return j_.contains(key); }

  std::string str(const std::string& key, const std::string& fallback) {
    if (!mark(key)) return fallback;
    if (!j_[key].is_string()) throw ConfigError("key \"" + key + "\" must be a string");
    return j_[key].get<std::string>();
  }

  std::string require_str(const std::string& key, const std::string& command) {
    if (!has(key)) missing(key, command);
    return str(key, "");
  }

  double num(const std::string& key, double fallback) {
    if (!mark(key)) return fallback;
    if (!j_[key].is_number()) throw ConfigError("key \"" + key + "\" must be a number");
    return j_[key].get<double>();
  }

  double require_num(const std::string& key, const std::string& command) {
    if (!has(key)) missing(key, command);
    return num(key, 0.0);
  }

  long integer(const std::string& key, long fallback) {
    if (!mark(key)) return fallback;
    if (!j_[key].is_number_integer() && !j_[key].is_number_unsigned()) {
      throw ConfigError("key \"" + key + "\" must be an integer");
    }
    return j_[key].get<long>();
  }

  long require_integer(const std::string& key, const std::string& command) {
    if (!has(key)) missing(key, command);
    return integer(key, 0);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!mark(key)) return fallback;
    if (!j_[key].is_boolean()) throw ConfigError("key \"" + key + "\" must be true or false");
    return j_[key].get<bool>();
  }

  std::uint64_t uint64(const std::string& key) {
    mark(key);
    const auto& v = j_[key];
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<long long>() >= 0) return v.get<std::uint64_t>();
    throw ConfigError("key \"" + key + "\" must be a non-negative integer");
  }

  std::vector<double> require_num_list(const std::string& key, const std::string& command) {
    if (!has(key)) missing(key, command);
    mark(key);
    const auto& v = j_[key];
    if (!v.is_array() || v.empty()) {
      throw ConfigError("key \"" + key + "\" must be a non-empty array of numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError("key \"" + key + "\" must contain only numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void reject_unknown(const std::string& command) const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) {
        throw ConfigError("unknown key \"" + item.key() + "\" for command " + command);
      }
    }
  }

 private:
  bool mark(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }
  [[noreturn]] static void missing(const std::string& key, const std::string& command) {
    throw ConfigError("command " + command + " requires key \"" + key + "\"");
  }

  const nlohmann::json& j_;
  std::set<std::string> seen_;
};

long default_grid(const std::string& command, int dim) {
  if (command == "verify-weak") return dim == 1 ? 4096 : dim == 2 ? 512 : 64;
  return dim == 1 ? 512 : dim == 2 ? 128 : 32;  // verify-mikhlin
}

Lp parse_lp(const std::string& text, const std::string& key) {
  if (text == "inf" || text == "infinity") return Lp::infinity();
  double v = 0.0;
  if (!detail::parse_double(text, v)) {
    throw ConfigError("key \"" + key + "\" must be an exponent like \"2\", \"1.5\", or \"inf\"");
  }
  try {
    return Lp(v);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key \"" + key + "\": " + e.what());
  }
}

bool is_random_spec(const std::string& spec) { return spec.rfind("random", 0) == 0; }

void check_data_spec(const std::string& spec, const std::string& key) {
  if (spec == "zero" || spec == "delta" || spec == "gaussian-profile") return;
  if (spec == "random") return;
  if (spec.rfind("random:", 0) == 0) {
    std::uint64_t v = 0;
    const std::string tail = spec.substr(7);
    try {
      std::size_t used = 0;
      v = std::stoull(tail, &used);
      if (used != tail.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("key \"" + key + "\": bad seed in \"" + spec + "\"");
    }
    (void)v;
    return;
  }
  if (spec.rfind("csv:", 0) == 0 && spec.size() > 4) return;
  throw ConfigError("key \"" + key + "\" must be zero, delta, gaussian-profile, " +
                    "random[:seed], or csv:<path>; got \"" + spec + "\"");
}

}  // namespace

Symbol parse_symbol_spec(const std::string& spec, int dim) {
  if (dim < 1 || dim > kMaxDim) {
    throw ConfigError("symbol dimension must be between 1 and 3");
  }
  SpecParser parser{spec, dim};
  try {
    Symbol m = parser.term();
    if (!parser.at_end()) parser.fail("unexpected trailing input");
    return m;
  } catch (const std::invalid_argument& e) {
    throw ConfigError("symbol spec \"" + spec + "\": " + e.what());
  }
}

ExperimentConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");

  ConfigReader r(j);
  ExperimentConfig c;
  c.command = r.require_str("command", "(any)");
  static const std::set<std::string> kCommands = {
      "kernel", "apply",         "verify-mikhlin", "verify-weak", "verify-hormander",
      "verify-decay", "norm",    "wave",           "strichartz",  "selftest"};
  if (!kCommands.count(c.command)) throw ConfigError("unknown command \"" + c.command + "\"");

  c.dim = static_cast<int>(r.integer("d", 1));
  if (c.dim < 1 || c.dim > kMaxDim) throw ConfigError("key \"d\" must be 1, 2, or 3");
  c.tol = r.num("tol", 1e-8);
  if (!(c.tol > 0.0) || !std::isfinite(c.tol)) throw ConfigError("key \"tol\" must be positive");
  c.out = r.str("out", ".");
  if (r.has("seed")) {
    c.seed = r.uint64("seed");
    c.has_seed = true;
  }

  const bool wants_symbol = c.command != "wave" && c.command != "strichartz" &&
                            c.command != "selftest";
  if (wants_symbol) {
    c.symbol = r.require_str("symbol", c.command);
    parse_symbol_spec(c.symbol, c.dim);  // validate now, reuse at dispatch
  }

  auto positive_radius = [&](const char* key) {
    const long v = r.require_integer(key, c.command);
    if (v < 1 || v > 100000) throw ConfigError(std::string("key \"") + key +
                                               "\" must be a radius between 1 and 100000");
    return static_cast<int>(v);
  };

  if (c.command == "kernel" || c.command == "verify-decay") {
    c.box = positive_radius("box");
    c.cap = r.integer("cap", 0);
    c.accept_at_cap = r.boolean("accept_at_cap", false);
  } else if (c.command == "apply") {
    c.input = r.require_str("input", c.command);
    c.window = positive_radius("window");
    c.cap = r.integer("cap", 0);
    c.accept_at_cap = r.boolean("accept_at_cap", false);
  } else if (c.command == "verify-mikhlin") {
    c.order = static_cast<int>(r.integer("order", 2));
    if (c.order < 0 || c.order > 4) throw ConfigError("key \"order\" must be between 0 and 4");
    c.grid = r.integer("grid", default_grid(c.command, c.dim));
    c.scheme = r.str("scheme", "analytic");
    if (c.scheme != "analytic" && c.scheme != "fd") {
      throw ConfigError("key \"scheme\" must be \"analytic\" or \"fd\"");
    }
  } else if (c.command == "verify-weak") {
    c.alpha = r.require_num("alpha", c.command);
    if (!(c.alpha > 0.0)) throw ConfigError("key \"alpha\" must be positive");
    c.grid = r.integer("grid", default_grid(c.command, c.dim));
  } else if (c.command == "verify-hormander") {
    c.box = positive_radius("box");
    c.shift_cap = static_cast<int>(r.integer("shift_cap", 2));
    if (c.shift_cap < 1) throw ConfigError("key \"shift_cap\" must be at least 1");
    c.radius = static_cast<int>(r.integer("R", c.box - c.shift_cap));
    if (c.radius < 2 * c.shift_cap) {
      throw ConfigError("key \"R\" must be at least twice shift_cap");
    }
    if (c.box < c.radius + c.shift_cap) {
      throw ConfigError("key \"box\" must be at least R + shift_cap");
    }
    c.cap = r.integer("cap", 0);
    c.accept_at_cap = r.boolean("accept_at_cap", false);
  } else if (c.command == "norm") {
    c.p = r.require_str("p", c.command);
    c.q = r.require_str("q", c.command);
    parse_lp(c.p, "p");
    parse_lp(c.q, "q");
    c.box = positive_radius("box");
    c.trials = static_cast<int>(r.integer("trials", 32));
    if (c.trials < 1) throw ConfigError("key \"trials\" must be at least 1");
    if (!c.has_seed) throw ConfigError("command norm requires key \"seed\"");
  } else if (c.command == "wave") {
    c.times = r.require_num_list("times", c.command);
    for (double t : c.times) {
      if (!(t >= 0.0) || !std::isfinite(t)) {
        throw ConfigError("key \"times\" must contain finite values >= 0");
      }
    }
    c.window = positive_radius("window");
    c.support = static_cast<int>(r.integer("support", 4));
    if (c.support < 0) throw ConfigError("key \"support\" must be >= 0");
    c.f = r.str("f", "delta");
    c.g = r.str("g", "zero");
    check_data_spec(c.f, "f");
    check_data_spec(c.g, "g");
    if ((c.f == "random" || c.g == "random") && !c.has_seed) {
      throw ConfigError("command wave with random data requires key \"seed\"");
    }
  } else if (c.command == "strichartz") {
    c.p = r.require_str("p", c.command);
    c.q = r.require_str("q", c.command);
    parse_lp(c.p, "p");
    parse_lp(c.q, "q");
    c.times = {r.require_num("t", c.command)};
    if (!(c.times[0] >= 0.0) || !std::isfinite(c.times[0])) {
      throw ConfigError("key \"t\" must be finite and >= 0");
    }
    c.support = static_cast<int>(r.integer("support", 4));
    if (c.support < 0) throw ConfigError("key \"support\" must be >= 0");
    c.trials = static_cast<int>(r.integer("trials", 24));
    if (c.trials < 1) throw ConfigError("key \"trials\" must be at least 1");
    if (!c.has_seed) throw ConfigError("command strichartz requires key \"seed\"");
  } else if (c.command == "selftest") {
    // nothing beyond the common keys
  }
  r.reject_unknown(c.command);
  return c;
}

nlohmann::json serialize_config(const ExperimentConfig& c) {
  nlohmann::json j{{"command", c.command}, {"d", c.dim}, {"tol", c.tol}, {"out", c.out}};
  if (c.has_seed) j["seed"] = c.seed;
  if (!c.symbol.empty()) j["symbol"] = c.symbol;
  if (c.command == "kernel" || c.command == "verify-decay") {
    j["box"] = c.box;
    j["cap"] = c.cap;
    j["accept_at_cap"] = c.accept_at_cap;
  } else if (c.command == "apply") {
    j["input"] = c.input;
    j["window"] = c.window;
    j["cap"] = c.cap;
    j["accept_at_cap"] = c.accept_at_cap;
  } else if (c.command == "verify-mikhlin") {
    j["order"] = c.order;
    j["grid"] = c.grid;
    j["scheme"] = c.scheme;
  } else if (c.command == "verify-weak") {
    j["alpha"] = c.alpha;
    j["grid"] = c.grid;
  } else if (c.command == "verify-hormander") {
    j["box"] = c.box;
    j["shift_cap"] = c.shift_cap;
    j["R"] = c.radius;
    j["cap"] = c.cap;
    j["accept_at_cap"] = c.accept_at_cap;
  } else if (c.command == "norm") {
    j["p"] = c.p;
    j["q"] = c.q;
    j["box"] = c.box;
    j["trials"] = c.trials;
  } else if (c.command == "wave") {
    j["times"] = c.times;
    j["window"] = c.window;
    j["support"] = c.support;
    j["f"] = c.f;
    j["g"] = c.g;
  } else if (c.command == "strichartz") {
    j["p"] = c.p;
    j["q"] = c.q;
    j["t"] = c.times.at(0);
    j["support"] = c.support;
    j["trials"] = c.trials;
  }
  return j;
}

namespace {

void emit_error(const std::string& message, int code) {
  nlohmann::json err{{"error", message}, {"exit_code", code}};
  std::cout << err.dump() << "\n";
}

GridFunction wave_data(const std::string& spec, const ExperimentConfig& cfg,
                       std::uint64_t salt) {
  const LatticeBox support = LatticeBox::centered(cfg.dim, cfg.support);
  if (spec == "zero") return GridFunction::zero(support);
  if (spec == "delta") return GridFunction::delta(cfg.dim);
  if (spec == "gaussian-profile") {
    const double sigma = std::max(1.0, static_cast<double>(cfg.support) / 2.0);
    CVector vals(support.cardinality());
    IVector n(cfg.dim);
    for (Index i = 0; i < support.cardinality(); ++i) {
      support.point_at(i, n);
      vals(i) = std::exp(-n.cast<double>().squaredNorm() / (2.0 * sigma * sigma));
    }
    return GridFunction(support, std::move(vals));
  }
  if (is_random_spec(spec)) {
    std::uint64_t seed = cfg.seed;
    if (spec.rfind("random:", 0) == 0) seed = std::stoull(spec.substr(7));
    detail::Rng rng(seed ^ salt);
    CVector vals(support.cardinality());
    for (Index i = 0; i < support.cardinality(); ++i) vals(i) = rng.complex_normal();
    return GridFunction(support, std::move(vals));
  }
  // csv:<path>, syntax validated at parse time
  GridFunction f = grid_function_from_csv(read_file(spec.substr(4)));
  if (f.dim() != cfg.dim) {
    throw ConfigError("wave data " + spec + " has dimension " + std::to_string(f.dim()) +
                      ", config says " + std::to_string(cfg.dim));
  }
  return f;
}

QuadratureOptions quadrature_options(const ExperimentConfig& cfg) {
  QuadratureOptions opts;
  opts.cap = cfg.cap;
  opts.accept_at_cap = cfg.accept_at_cap;
  return opts;
}

int dispatch(const ExperimentConfig& cfg, const std::filesystem::path& out_dir, bool quiet,
             nlohmann::json& payload, std::string& summary) {
  using nlohmann::json;
  if (cfg.command == "kernel") {
    const Symbol m = parse_symbol_spec(cfg.symbol, cfg.dim);
    const KernelTable table = synthesize_kernel(m, LatticeBox::centered(cfg.dim, cfg.box),
                                                cfg.tol, quadrature_options(cfg));
    atomic_write(out_dir / "kernel.csv", to_csv(table));
    payload = kernel_metadata(table);
    payload["csv"] = "kernel.csv";
    summary = "kernel " + table.symbol_tag + ": N=" + std::to_string(table.quadrature_size) +
              ", aliasing=" + detail::format_double(table.aliasing_estimate);
  } else if (cfg.command == "apply") {
    const Symbol m = parse_symbol_spec(cfg.symbol, cfg.dim);
    GridFunction f = grid_function_from_csv(read_file(cfg.input));
    if (f.dim() != cfg.dim) {
      throw ConfigError("input " + cfg.input + " has dimension " + std::to_string(f.dim()) +
                        ", config says " + std::to_string(cfg.dim));
    }
    const GridFunction out = apply_multiplier(m, f, LatticeBox::centered(cfg.dim, cfg.window),
                                              cfg.tol, quadrature_options(cfg));
    atomic_write(out_dir / "apply.csv", to_csv(out));
    payload = json{{"csv", "apply.csv"},
                   {"input", cfg.input},
                   {"output_sup", lp_norm(out, Lp::infinity())}};
    summary = "apply " + cfg.symbol + ": wrote apply.csv";
  } else if (cfg.command == "verify-mikhlin") {
    const Symbol m = parse_symbol_spec(cfg.symbol, cfg.dim);
    const DerivativeScheme scheme = cfg.scheme == "analytic" ? DerivativeScheme::analytic
                                                             : DerivativeScheme::finite_difference;
    const MikhlinReport rep = mikhlin_report(m, cfg.order, cfg.grid, scheme);
    payload = to_json(rep);
    summary = "mikhlin " + rep.symbol_tag + ": max constant " +
              detail::format_double(*std::max_element(rep.constants.begin(),
                                                      rep.constants.end()));
    if (!quiet) {
      for (std::size_t k = 0; k < rep.constants.size(); ++k) {
        std::cout << "  order " << k << ": " << detail::format_double(rep.constants[k])
                  << "  (refined " << detail::format_double(rep.constants_refined[k]) << ")\n";
      }
    }
  } else if (cfg.command == "verify-weak") {
    const Symbol m = parse_symbol_spec(cfg.symbol, cfg.dim);
    const WeakLorentzReport rep = weak_lorentz_report(m, cfg.alpha, cfg.grid);
    payload = to_json(rep);
    summary = "weak-lorentz " + rep.symbol_tag + ": constant " +
              detail::format_double(rep.constant) + " (refined " +
              detail::format_double(rep.constant_refined) + ")";
  } else if (cfg.command == "verify-hormander") {
    const Symbol m = parse_symbol_spec(cfg.symbol, cfg.dim);
    const KernelTable table = synthesize_kernel(m, LatticeBox::centered(cfg.dim, cfg.box),
                                                cfg.tol, quadrature_options(cfg));
    const double constant = hormander_constant(table, cfg.shift_cap, cfg.radius);
    payload = json{{"symbol", table.symbol_tag},
                   {"R", cfg.radius},
                   {"shift_cap", cfg.shift_cap},
                   {"constant", constant},
                   {"kernel_N", table.quadrature_size},
                   {"aliasing_estimate", table.aliasing_estimate}};
    summary = "hormander " + table.symbol_tag + ": constant " + detail::format_double(constant);
  } else if (cfg.command == "verify-decay") {
    const Symbol m = parse_symbol_spec(cfg.symbol, cfg.dim);
    const KernelTable table = synthesize_kernel(m, LatticeBox::centered(cfg.dim, cfg.box),
                                                cfg.tol, quadrature_options(cfg));
    const DecayConstants dc = decay_constants(table);
    payload = json{{"symbol", table.symbol_tag},
                   {"c0", dc.c0},
                   {"c1", dc.c1},
                   {"box", cfg.box},
                   {"kernel_N", table.quadrature_size},
                   {"aliasing_estimate", table.aliasing_estimate}};
    summary = "decay " + table.symbol_tag + ": c0=" + detail::format_double(dc.c0) +
              ", c1=" + detail::format_double(dc.c1);
  } else if (cfg.command == "norm") {
    const Symbol m = parse_symbol_spec(cfg.symbol, cfg.dim);
    NormSearchOptions opts;
    opts.seed = cfg.seed;
    const NormEstimate est =
        operator_norm_lower_bound(m, parse_lp(cfg.p, "p"), parse_lp(cfg.q, "q"),
                                  LatticeBox::centered(cfg.dim, cfg.box), cfg.trials, opts);
    payload = to_json(est);
    summary = "norm " + est.symbol_tag + " " + est.p + "->" + est.q + ": lower bound " +
              detail::format_double(est.lower_bound) + " via " + est.method;
  } else if (cfg.command == "wave") {
    const GridFunction f = wave_data(cfg.f, cfg, 0xf00dULL);
    const GridFunction g = wave_data(cfg.g, cfg, 0xcafeULL);
    const LatticeBox window = LatticeBox::centered(cfg.dim, cfg.window);
    json states = json::array();
    for (std::size_t i = 0; i < cfg.times.size(); ++i) {
      const WaveState state = solve_wave(f, g, cfg.times[i], window, cfg.tol);
      const std::string u_name = "wave_u_" + std::to_string(i) + ".csv";
      const std::string v_name = "wave_v_" + std::to_string(i) + ".csv";
      atomic_write(out_dir / u_name, to_csv(state.u));
      atomic_write(out_dir / v_name, to_csv(state.v));
      states.push_back(json{{"t", state.t},
                            {"energy", wave_energy(state)},
                            {"u_csv", u_name},
                            {"v_csv", v_name}});
    }
    payload = json{{"f", cfg.f}, {"g", cfg.g}, {"states", states}};
    summary = "wave: wrote " + std::to_string(cfg.times.size()) + " snapshot(s)";
  } else if (cfg.command == "strichartz") {
    const StrichartzReport rep =
        strichartz_study(cfg.dim, cfg.times.at(0), parse_lp(cfg.p, "p"), parse_lp(cfg.q, "q"),
                         cfg.support, cfg.trials, cfg.seed, cfg.tol);
    std::string csv = "trial,ratio\n";
    for (std::size_t i = 0; i < rep.ratios.size(); ++i) {
      csv += std::to_string(i) + "," + detail::format_double(rep.ratios[i]) + "\n";
    }
    atomic_write(out_dir / "strichartz_ratios.csv", csv);
    payload = to_json(rep);
    payload["ratios_csv"] = "strichartz_ratios.csv";
    summary = "strichartz: max ratio " + detail::format_double(rep.max_ratio) + " over " +
              std::to_string(rep.trials) + " trials";
  } else {  // selftest
    const std::vector<CriterionResult> results = run_selftest(quiet);
    json list = json::array();
    for (const CriterionResult& r : results) {
      list.push_back(json{{"index", r.index},
                          {"name", r.name},
                          {"passed", r.passed},
                          {"detail", r.detail},
                          {"seconds", r.seconds}});
    }
    payload = json{{"criteria", list}, {"all_passed", all_passed(results)}};
    summary = all_passed(results) ? "selftest: all criteria passed"
                                  : "selftest: FAILED criteria present";
    if (!all_passed(results)) return 1;
  }
  return 0;
}

}  // namespace

int run_experiment(const ExperimentConfig& cfg, const RunOptions& run) {
  try {
    const std::filesystem::path out_dir =
        run.out_dir.empty() ? std::filesystem::path(cfg.out) : run.out_dir;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory " + out_dir.string());

    const auto start = std::chrono::steady_clock::now();
    nlohmann::json payload;
    std::string summary;
    const int code = dispatch(cfg, out_dir, run.quiet, payload, summary);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    nlohmann::json envelope{{"config", serialize_config(cfg)},
                            {"seed", cfg.has_seed ? nlohmann::json(cfg.seed) : nlohmann::json()},
                            {"library_version", kVersion},
                            {"wall_clock_seconds", elapsed},
                            {"report", payload}};
    atomic_write(out_dir / (cfg.command + ".json"), envelope.dump(2) + "\n");
    if (!run.quiet) std::cout << summary << "\n";
    return code;
  } catch (const ConfigError& e) {
    emit_error(e.what(), 2);
    return 2;
  } catch (const ConvergenceFailure& e) {
    nlohmann::json err{{"error", e.what()},
                       {"exit_code", 3},
                       {"achieved", e.achieved},
                       {"tol", e.tol},
                       {"grid_size", e.grid_size}};
    std::cout << err.dump() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    emit_error(e.what(), 2);
    return 2;
  } catch (const std::exception& e) {
    emit_error(e.what(), 4);
    return 4;
  }
}

}  // namespace latharm
