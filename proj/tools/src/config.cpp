#include "lpsym_cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <vector>

#include "lpsym/dynamics.hpp"

namespace lpsym::cli {

ConfigError::ConfigError(const std::string& message, std::size_t line)
    : Error(line ? "config line " + std::to_string(line) + ": " + message : message), line_(line) {}

bool RunConfig::operator==(const RunConfig& o) const {
  return version == o.version && kind == o.kind && k == o.k && interval.start == o.interval.start &&
         interval.end == o.interval.end && functions == o.functions && field == o.field && grid_x == o.grid_x &&
         grid_y == o.grid_y && grid_t == o.grid_t && grid_xb == o.grid_xb && grid_yb == o.grid_yb &&
         integrate == o.integrate && check == o.check;
}

namespace {

constexpr std::string_view kFaraday = "faraday";

struct Entry {
  std::string value;
  bool quoted = false;
  std::size_t line = 0;
};

using Section = std::map<std::string, Entry>;

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, Section> split_sections(std::string_view text) {
  static const std::set<std::string, std::less<>> known{"case", "functions", "field", "grid", "integrate", "check"};
  std::map<std::string, Section> out;
  Section* current = nullptr;
  std::size_t lineno = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", lineno);
      const std::string name(trim(line.substr(1, line.size() - 2)));
      if (!known.contains(name)) throw ConfigError("unknown section [" + name + "]", lineno);
      if (out.contains(name)) throw ConfigError("duplicate section [" + name + "]", lineno);
      current = &out[name];
      continue;
    }
    if (!current) throw ConfigError("key outside of any section", lineno);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", lineno);
    const std::string key(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", lineno);
    Entry entry;
    entry.line = lineno;
    if (!value.empty() && value.front() == '"') {
      const auto close = value.find('"', 1);
      if (close == std::string_view::npos) throw ConfigError("unterminated string for key '" + key + "'", lineno);
      const std::string_view rest = trim(value.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') throw ConfigError("trailing text after string for key '" + key + "'", lineno);
      entry.value = std::string(value.substr(1, close - 1));
      entry.quoted = true;
    } else {
      const auto hash = value.find('#');
      entry.value = std::string(trim(value.substr(0, hash)));
    }
    if (current->contains(key)) throw ConfigError("duplicate key '" + key + "'", lineno);
    (*current)[key] = std::move(entry);
  }
  return out;
}

double to_number(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* b = e.value.data();
  const char* end = b + e.value.size();
  if (b != end && *b == '+') ++b;
  const auto res = std::from_chars(b, end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw ConfigError("key '" + key + "' expects a number, got '" + e.value + "'", e.line);
  }
  return v;
}

std::size_t to_count(const std::string& key, const std::string& text, std::size_t line) {
  std::size_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || v == 0) {
    throw ConfigError("key '" + key + "' expects a positive integer, got '" + text + "'", line);
  }
  return v;
}

bool to_bool(const std::string& key, const Entry& e) {
  if (e.value == "true" || e.value == "yes" || e.value == "1") return true;
  if (e.value == "false" || e.value == "no" || e.value == "0") return false;
  throw ConfigError("key '" + key + "' expects true or false, got '" + e.value + "'", e.line);
}

AxisConfig to_axis(const std::string& key, const Entry& e) {
  std::vector<std::string> parts;
  std::string_view rest = e.value;
  while (true) {
    const auto comma = rest.find(',');
    parts.emplace_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  if (parts.size() != 3) throw ConfigError("key '" + key + "' expects 'lo, hi, count'", e.line);
  AxisConfig a;
  a.lo = to_number(key, {parts[0], false, e.line});
  a.hi = to_number(key, {parts[1], false, e.line});
  a.count = to_count(key, parts[2], e.line);
  if (a.hi < a.lo) throw ConfigError("key '" + key + "' has hi < lo", e.line);
  return a;
}

// Reads known keys from a section and rejects the rest.
class Reader {
 public:
  Reader(const std::map<std::string, Section>& all, const std::string& name) : name_(name) {
    if (auto it = all.find(name); it != all.end()) section_ = &it->second;
  }
  ~Reader() = default;

  const Entry* get(const std::string& key) {
    used_.insert(key);
    if (!section_) return nullptr;
    auto it = section_->find(key);
    return it == section_->end() ? nullptr : &it->second;
  }
  void number(const std::string& key, double& out) {
    if (const Entry* e = get(key)) out = to_number(key, *e);
  }
  void number(const std::string& key, std::optional<double>& out) {
    if (const Entry* e = get(key)) out = to_number(key, *e);
  }
  void flag(const std::string& key, bool& out) {
    if (const Entry* e = get(key)) out = to_bool(key, *e);
  }
  void axis(const std::string& key, std::optional<AxisConfig>& out) {
    if (const Entry* e = get(key)) out = to_axis(key, *e);
  }
  void finish() const {
    if (!section_) return;
    for (const auto& [key, entry] : *section_) {
      if (!used_.contains(key)) throw ConfigError("unknown key '" + key + "' in [" + name_ + "]", entry.line);
    }
  }

 private:
  std::string name_;
  const Section* section_ = nullptr;
  std::set<std::string> used_;
};

struct CaseKeys {
  std::vector<std::string> time;   // functions of t
  std::vector<std::string> plane;  // functions of (xb, yb)
  std::vector<std::string> required;
};

const CaseKeys& keys_for(SymmetryCase c) {
  static const CaseKeys a{{"rho", "omega", "alpha1", "alpha2"}, {"bbar", "e1bar", "e2bar", "vbar"}, {"rho"}};
  static const CaseKeys b{{"omega", "a1", "a2"}, {"psi", "e1bar"}, {}};
  static const CaseKeys cc{{"a1", "a2"}, {"psi", "vbar"}, {"a2"}};
  static const CaseKeys d{{"omega", "a1", "a2"}, {"bbar", "e1bar", "e2bar"}, {}};
  switch (c) {
    case SymmetryCase::A: return a;
    case SymmetryCase::B: return b;
    case SymmetryCase::C: return cc;
    case SymmetryCase::D: return d;
  }
  return a;
}

const std::vector<std::string>& field_keys() {
  static const std::vector<std::string> keys{"e1", "e2", "b", "e1_add", "e2_add", "b_add"};
  return keys;
}

std::string fmt(double v) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::string fmt_axis(const AxisConfig& a) { return fmt(a.lo) + ", " + fmt(a.hi) + ", " + std::to_string(a.count); }

std::string_view frame_text(IntegrateFrame f) {
  switch (f) {
    case IntegrateFrame::Lab: return "lab";
    case IntegrateFrame::Canonical: return "canonical";
    case IntegrateFrame::Both: return "both";
  }
  return "lab";
}

bool has(const std::map<std::string, std::string>& m, const std::string& key) { return m.contains(key); }

std::string fn_or(const RunConfig& c, const std::string& key, const std::string& fallback) {
  auto it = c.functions.find(key);
  return it == c.functions.end() ? fallback : it->second;
}

}  // namespace

RunConfig parse_config(std::string_view text) {
  const auto sections = split_sections(text);
  RunConfig c;

  Reader cs(sections, "case");
  if (const Entry* e = cs.get("version")) {
    const double v = to_number("version", *e);
    if (v != kConfigVersion) throw ConfigError("unsupported config version '" + e->value + "'", e->line);
  }
  const Entry* kind = cs.get("case");
  if (!kind) throw ConfigError("missing required key 'case' in [case]");
  const auto parsed_case = case_from_letter(kind->value);
  if (!parsed_case) throw ConfigError("key 'case' must be one of A, B, C, D", kind->line);
  c.kind = *parsed_case;
  cs.number("k", c.k);
  cs.number("t0", c.interval.start);
  cs.number("t1", c.interval.end);
  cs.finish();

  if (auto it = sections.find("functions"); it != sections.end()) {
    for (const auto& [key, entry] : it->second) c.functions[key] = entry.value;
  }
  if (auto it = sections.find("field"); it != sections.end()) {
    for (const auto& [key, entry] : it->second) {
      if (std::find(field_keys().begin(), field_keys().end(), key) == field_keys().end()) {
        throw ConfigError("unknown key '" + key + "' in [field]", entry.line);
      }
      c.field[key] = entry.value;
    }
  }

  Reader grid(sections, "grid");
  grid.axis("x", c.grid_x);
  grid.axis("y", c.grid_y);
  grid.axis("t", c.grid_t);
  grid.axis("xb", c.grid_xb);
  grid.axis("yb", c.grid_yb);
  grid.finish();

  Reader in(sections, "integrate");
  in.number("x0", c.integrate.x0);
  in.number("y0", c.integrate.y0);
  in.number("vx0", c.integrate.vx0);
  in.number("vy0", c.integrate.vy0);
  in.number("start", c.integrate.start);
  in.number("end", c.integrate.end);
  in.number("step", c.integrate.step);
  if (const Entry* e = in.get("frame")) {
    if (e->value == "lab") {
      c.integrate.frame = IntegrateFrame::Lab;
    } else if (e->value == "canonical") {
      c.integrate.frame = IntegrateFrame::Canonical;
    } else if (e->value == "both") {
      c.integrate.frame = IntegrateFrame::Both;
    } else {
      throw ConfigError("key 'frame' must be lab, canonical or both", e->line);
    }
  }
  in.finish();

  Reader ch(sections, "check");
  ch.number("tol", c.check.tol);
  ch.number("faraday_tol", c.check.faraday_tol);
  ch.flag("determining", c.check.determining);
  ch.flag("faraday", c.check.faraday);
  ch.flag("orbit", c.check.orbit);
  ch.number("epsilon", c.check.epsilon);
  ch.number("orbit_span", c.check.orbit_span);
  ch.number("orbit_step", c.check.orbit_step);
  if (const Entry* e = ch.get("orbit_states")) c.check.orbit_states = to_count("orbit_states", e->value, e->line);
  ch.finish();

  validate(c);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

void validate(const RunConfig& c) {
  if (!(c.interval.end > c.interval.start)) throw ConfigError("key 't1' must exceed 't0'");
  const CaseKeys& keys = keys_for(c.kind);
  const std::string letter(1, case_letter(c.kind));

  for (const auto& [key, text] : c.functions) {
    const bool is_time = std::find(keys.time.begin(), keys.time.end(), key) != keys.time.end();
    const bool is_plane = std::find(keys.plane.begin(), keys.plane.end(), key) != keys.plane.end();
    if (!is_time && !is_plane) throw ConfigError("key '" + key + "' is not used by case " + letter);
    if (text == kFaraday) {
      const bool allowed = (c.kind == SymmetryCase::A && key == "e2bar") || (c.kind == SymmetryCase::D && key == "bbar");
      if (!allowed) throw ConfigError("key '" + key + "' cannot be completed by the Faraday helper in case " + letter);
      continue;
    }
    try {
      if (is_time) {
        (void)parse(text, {kTimeVariable});
      } else {
        (void)parse(text, kPlaneVariables);
      }
    } catch (const Error& e) {
      throw ConfigError("key '" + key + "': " + e.what());
    }
  }
  for (const auto& key : keys.required) {
    if (!has(c.functions, key)) throw ConfigError("missing required key '" + key + "' for case " + letter);
  }

  switch (c.kind) {
    case SymmetryCase::A:
      if (has(c.functions, "vbar") && (has(c.functions, "e1bar") || has(c.functions, "e2bar"))) {
        throw ConfigError("key 'vbar' excludes 'e1bar' and 'e2bar'");
      }
      break;
    case SymmetryCase::B:
      if (c.k != 0.0) throw ConfigError("key 'k' must be 0 in case B");
      if (has(c.functions, "omega")) {
        const Expression om = parse(c.functions.at("omega"), {kTimeVariable});
        if (!om.is_constant()) throw ConfigError("key 'omega' must be constant in case B");
      }
      break;
    case SymmetryCase::C:
      if (c.k != 0.0) throw ConfigError("key 'k' must be 0 in case C");
      break;
    case SymmetryCase::D:
      if (c.k == 0.0) throw ConfigError("key 'k' must be nonzero in case D");
      break;
  }

  for (const auto& [key, text] : c.field) {
    try {
      (void)parse(text, kLabVariables);
    } catch (const Error& e) {
      throw ConfigError("key '" + key + "': " + e.what());
    }
  }
  const bool any_replace = has(c.field, "e1") || has(c.field, "e2") || has(c.field, "b");
  const bool all_replace = has(c.field, "e1") && has(c.field, "e2") && has(c.field, "b");
  const bool any_add = has(c.field, "e1_add") || has(c.field, "e2_add") || has(c.field, "b_add");
  if (any_replace && !all_replace) throw ConfigError("keys 'e1', 'e2', 'b' in [field] must be given together");
  if (any_replace && any_add) throw ConfigError("[field] cannot mix replacement and '_add' keys");

  for (const auto* axis : {&c.grid_x, &c.grid_y, &c.grid_t, &c.grid_xb, &c.grid_yb}) {
    if (*axis && axis->value().hi < axis->value().lo) throw ConfigError("grid axis has hi < lo");
  }
  if (!(c.integrate.step > 0.0)) throw ConfigError("key 'step' must be positive");
  if (!(c.check.tol > 0.0)) throw ConfigError("key 'tol' must be positive");
  if (!(c.check.faraday_tol > 0.0)) throw ConfigError("key 'faraday_tol' must be positive");
  if (!(c.check.epsilon > 0.0)) throw ConfigError("key 'epsilon' must be positive");
  if (!(c.check.orbit_span > 0.0)) throw ConfigError("key 'orbit_span' must be positive");
  if (!(c.check.orbit_step > 0.0)) throw ConfigError("key 'orbit_step' must be positive");
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  out << "[case]\n";
  out << "version = " << c.version << '\n';
  out << "case = " << case_letter(c.kind) << '\n';
  if (c.kind == SymmetryCase::A || c.kind == SymmetryCase::D) out << "k = " << fmt(c.k) << '\n';
  out << "t0 = " << fmt(c.interval.start) << '\n';
  out << "t1 = " << fmt(c.interval.end) << '\n';

  out << "\n[functions]\n";
  for (const auto& [key, text] : c.functions) out << key << " = \"" << text << "\"\n";

  if (!c.field.empty()) {
    out << "\n[field]\n";
    for (const auto& [key, text] : c.field) out << key << " = \"" << text << "\"\n";
  }

  const bool any_grid = c.grid_x || c.grid_y || c.grid_t || c.grid_xb || c.grid_yb;
  if (any_grid) {
    out << "\n[grid]\n";
    if (c.grid_x) out << "x = " << fmt_axis(*c.grid_x) << '\n';
    if (c.grid_y) out << "y = " << fmt_axis(*c.grid_y) << '\n';
    if (c.grid_t) out << "t = " << fmt_axis(*c.grid_t) << '\n';
    if (c.grid_xb) out << "xb = " << fmt_axis(*c.grid_xb) << '\n';
    if (c.grid_yb) out << "yb = " << fmt_axis(*c.grid_yb) << '\n';
  }

  const IntegrateConfig& in = c.integrate;
  out << "\n[integrate]\n";
  out << "x0 = " << fmt(in.x0) << "\ny0 = " << fmt(in.y0) << "\nvx0 = " << fmt(in.vx0) << "\nvy0 = " << fmt(in.vy0)
      << '\n';
  if (in.start) out << "start = " << fmt(*in.start) << '\n';
  if (in.end) out << "end = " << fmt(*in.end) << '\n';
  out << "step = " << fmt(in.step) << '\n';
  out << "frame = " << frame_text(in.frame) << '\n';

  const CheckConfig& ch = c.check;
  auto yn = [](bool b) { return b ? "true" : "false"; };
  out << "\n[check]\n";
  out << "tol = " << fmt(ch.tol) << "\nfaraday_tol = " << fmt(ch.faraday_tol) << '\n';
  out << "determining = " << yn(ch.determining) << "\nfaraday = " << yn(ch.faraday) << "\norbit = " << yn(ch.orbit)
      << '\n';
  out << "epsilon = " << fmt(ch.epsilon) << "\norbit_span = " << fmt(ch.orbit_span)
      << "\norbit_step = " << fmt(ch.orbit_step) << "\norbit_states = " << ch.orbit_states << '\n';
  return out.str();
}

Model build_model(const RunConfig& c) {
  validate(c);
  auto time_fn = [&](const std::string& key, const std::string& fallback) {
    return TimeFunction::parse(fn_or(c, key, fallback));
  };
  auto plane_expr = [&](const std::string& key) { return parse_plane(fn_or(c, key, "0")); };
  auto is_faraday = [&](const std::string& key) { return fn_or(c, key, "") == kFaraday; };

  std::optional<SymmetryParams> params;
  std::shared_ptr<const FieldFamily> family;
  try {
    switch (c.kind) {
      case SymmetryCase::A: {
        params = SymmetryParams::case_a(c.k, time_fn("rho", "1"), time_fn("omega", "0"), time_fn("alpha1", "0"),
                                        time_fn("alpha2", "0"), c.interval);
        const Expression bbar = plane_expr("bbar");
        Expression e1bar = plane_expr("e1bar");
        PlaneFunction e2bar;
        if (has(c.functions, "vbar")) {
          auto [f1, f2] = potential_field(plane_expr("vbar"));
          e1bar = f1;
          e2bar = f2;
        } else if (is_faraday("e2bar")) {
          e2bar = faraday_complete_case_a(c.k, bbar, e1bar);
        } else {
          e2bar = plane_expr("e2bar");
        }
        family = std::make_shared<FieldFamily>(build_case_a(*params, bbar, e1bar, std::move(e2bar)));
        break;
      }
      case SymmetryCase::B: {
        const double omega = parse(fn_or(c, "omega", "1"), {kTimeVariable}).eval(std::vector<double>{0.0});
        params = SymmetryParams::case_b(time_fn("a1", "0"), time_fn("a2", "0"), c.interval, omega);
        family = std::make_shared<FieldFamily>(build_case_b(*params, plane_expr("psi"), plane_expr("e1bar")));
        break;
      }
      case SymmetryCase::C: {
        params = SymmetryParams::case_c(time_fn("a1", "0"), time_fn("a2", "1"), c.interval);
        family = std::make_shared<FieldFamily>(build_case_c(*params, plane_expr("psi"), plane_expr("vbar")));
        break;
      }
      case SymmetryCase::D: {
        params = SymmetryParams::case_d(c.k, time_fn("omega", "0"), time_fn("a1", "0"), time_fn("a2", "0"),
                                        c.interval);
        const Expression e1bar = plane_expr("e1bar");
        const Expression e2bar = plane_expr("e2bar");
        PlaneFunction bbar = is_faraday("bbar") ? faraday_complete_case_d(*params, e1bar, e2bar)
                                                : PlaneFunction(plane_expr("bbar"));
        family = std::make_shared<FieldFamily>(build_case_d(*params, std::move(bbar), e1bar, e2bar));
        break;
      }
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid parameters: ") + e.what());
  }

  std::shared_ptr<const CanonicalMap> map = family->map_ptr();
  FieldPtr field = family;
  auto lab = [&](const std::string& key) {
    auto it = c.field.find(key);
    return parse_lab(it == c.field.end() ? "0" : it->second);
  };
  if (has(c.field, "e1")) {
    field = std::make_shared<ExpressionField>(lab("e1"), lab("e2"), lab("b"));
    family.reset();
  } else if (has(c.field, "e1_add") || has(c.field, "e2_add") || has(c.field, "b_add")) {
    field = std::make_shared<SumField>(field,
                                       std::make_shared<ExpressionField>(lab("e1_add"), lab("e2_add"), lab("b_add")));
  }
  return Model{*params, family, field, map};
}

}  // namespace lpsym::cli
