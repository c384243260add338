#include "nng/config.hpp"

#include "nng/format.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

namespace nng {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  size_t line;
};

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string source)
      : entries_(std::move(entries)), source_(std::move(source)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  std::optional<double> real(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    double v = 0.0;
    const auto* end = e->value.data() + e->value.size();
    auto res = std::from_chars(e->value.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) fail(key, *e, "expected a real number");
    return v;
  }

  std::optional<uint64_t> integer(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    uint64_t v = 0;
    const auto* end = e->value.data() + e->value.size();
    auto res = std::from_chars(e->value.data(), end, v);
    if (res.ec != std::errc() || res.ptr != end) fail(key, *e, "expected a non-negative integer");
    return v;
  }

  std::optional<bool> boolean(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    if (e->value == "true" || e->value == "1") return true;
    if (e->value == "false" || e->value == "0") return false;
    fail(key, *e, "expected true or false");
  }

  std::optional<std::string> text(const std::string& key) const {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    return e->value;
  }

  size_t line_of(const std::string& key) const {
    const Entry* e = find(key);
    return e ? e->line : 0;
  }

 private:
  const Entry* find(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? nullptr : &it->second;
  }
  [[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& why) const {
    throw ConfigError(source_ + ":" + std::to_string(e.line) + ": key '" + key + "': " + why +
                      ", got '" + e.value + "'");
  }

  std::map<std::string, Entry> entries_;
  std::string source_;
};

const char* const kKeys[] = {"mu",     "omega",   "l_s",        "G",          "g_scale",
                             "hbar",   "state",   "t_max",      "n_steps",    "lambda",
                             "seed",   "output_dir", "literal_cross_term", "mc_samples"};

bool known_key(const std::string& key) {
  for (const char* k : kKeys)
    if (key == k) return true;
  return false;
}

}  // namespace

void RunConfig::validate() const {
  auto require = [](bool ok, const std::string& key, const std::string& why) {
    if (!ok) throw ConfigError("key '" + key + "': " + why);
  };
  require(params.mu > 0, "mu", "must be positive");
  require(params.omega > 0, "omega", "must be positive");
  require(params.hbar > 0, "hbar", "must be positive");
  require(params.l_s >= 0, "l_s", "must be non-negative");
  require(params.G >= 0, "G", "must be non-negative");
  require(t_max > 0, "t_max", "must be positive");
  require(n_steps >= 2, "n_steps", "must be at least 2");
  require(lambda > 0, "lambda", "must be positive");
  require(state_selector >= 1 && state_selector <= 16, "state", "must lie in 1..16");
  require(mc_samples >= 10'000, "mc_samples", "must be at least 10000");
  require(!output_dir.empty(), "output_dir", "must not be empty");
}

PhysicalParams RunConfig::effective_params() const {
  return lambda == 1.0 ? params : scale_params(params, lambda);
}

double RunConfig::time_at(size_t i) const {
  return t_max * static_cast<double>(i) / static_cast<double>(n_steps - 1);
}

std::string RunConfig::echo() const {
  std::ostringstream out;
  out << "mu = " << format_double(params.mu) << '\n'
      << "omega = " << format_double(params.omega) << '\n'
      << "l_s = " << format_double(params.l_s) << '\n'
      << "G = " << format_double(params.G) << '\n'
      << "hbar = " << format_double(params.hbar) << '\n'
      << "state = " << state_selector << '\n'
      << "t_max = " << format_double(t_max) << '\n'
      << "n_steps = " << n_steps << '\n'
      << "lambda = " << format_double(lambda) << '\n'
      << "seed = " << seed << '\n'
      << "mc_samples = " << mc_samples << '\n'
      << "output_dir = " << output_dir << '\n'
      << "literal_cross_term = " << (literal_cross_term ? "true" : "false") << '\n';
  return out.str();
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  std::map<std::string, Entry> entries;
  std::string raw;
  size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (!known_key(key))
      throw ConfigError(source + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    if (value.empty())
      throw ConfigError(source + ":" + std::to_string(line_no) + ": key '" + key + "' has no value");
    if (!entries.emplace(key, Entry{value, line_no}).second)
      throw ConfigError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }

  const Reader r(std::move(entries), source);
  RunConfig cfg;
  if (auto v = r.real("mu")) cfg.params.mu = *v;
  if (auto v = r.real("omega")) cfg.params.omega = *v;
  if (auto v = r.real("l_s")) cfg.params.l_s = *v;
  if (auto v = r.real("hbar")) cfg.params.hbar = *v;
  if (auto scale = r.real("g_scale")) {
    cfg.params.G = r.real("G").value_or(constants::G_newton) * *scale;
  } else if (auto v = r.real("G")) {
    cfg.params.G = *v;
  }
  if (auto v = r.integer("state")) cfg.state_selector = static_cast<size_t>(*v);
  if (auto v = r.real("t_max")) cfg.t_max = *v;
  if (auto v = r.integer("n_steps")) cfg.n_steps = static_cast<size_t>(*v);
  if (auto v = r.real("lambda")) cfg.lambda = *v;
  if (auto v = r.integer("seed")) cfg.seed = *v;
  if (auto v = r.integer("mc_samples")) cfg.mc_samples = *v;
  if (auto v = r.text("output_dir")) cfg.output_dir = *v;
  if (auto v = r.boolean("literal_cross_term")) cfg.literal_cross_term = *v;

  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    // Attach the line of the offending key when it came from the file.
    const std::string msg = e.what();
    const auto q1 = msg.find('\'');
    const auto q2 = msg.find('\'', q1 + 1);
    if (q1 != std::string::npos && q2 != std::string::npos) {
      const std::string key = msg.substr(q1 + 1, q2 - q1 - 1);
      if (r.has(key)) throw ConfigError(source + ":" + std::to_string(r.line_of(key)) + ": " + msg);
    }
    throw ConfigError(source + ": " + msg);
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

}  // namespace nng
