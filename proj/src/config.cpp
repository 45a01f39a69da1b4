#include "curv4/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "curv4/errors.hpp"

namespace curv4 {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Entry {
  std::string value;
  std::size_t line = 0;
  std::size_t column = 0;  // 1-based column of the value in its line
};

Expr parse_value(const std::string& key, const Entry& e) {
  try {
    return parse(e.value);
  } catch (const SyntaxError& err) {
    throw ConfigError(key, e.line,
                      "syntax error at column " + std::to_string(e.column + err.position() - 1) +
                          ": " + err.detail());
  }
}

double parse_constant(const std::string& key, const Entry& e, std::string_view text) {
  Entry sub = e;
  sub.value = std::string(trim(text));
  const Expr x = parse_value(key, sub);
  if (x.depends_on_variables()) throw ConfigError(key, e.line, "expected a constant, got '" + sub.value + "'");
  return x.eval(Point{});
}

Box parse_box(const Entry& e) {
  std::string_view v = trim(e.value);
  if (v.substr(0, 4) != "box(" || v.back() != ')') {
    throw ConfigError("domain", e.line, "expected box(lo..hi, lo..hi, lo..hi, lo..hi)");
  }
  v = v.substr(4, v.size() - 5);
  Box b;
  for (int k = 0; k < 4; ++k) {
    const auto comma = v.find(',');
    if ((k < 3) != (comma != std::string_view::npos)) {
      throw ConfigError("domain", e.line, "box needs exactly four ranges");
    }
    const std::string_view range = k < 3 ? v.substr(0, comma) : v;
    const auto dots = range.find("..");
    if (dots == std::string_view::npos) throw ConfigError("domain", e.line, "range without '..'");
    b.lo[k] = parse_constant("domain", e, range.substr(0, dots));
    b.hi[k] = parse_constant("domain", e, range.substr(dots + 2));
    if (!(b.lo[k] < b.hi[k])) throw ConfigError("domain", e.line, "empty range on axis " + std::to_string(k + 1));
    if (k < 3) v = v.substr(comma + 1);
  }
  return b;
}

// "g12" → (0, 1); returns false if `key` is not of the form <prefix><d><d>.
bool index_pair(const std::string& key, char prefix, int& i, int& j) {
  if (key.size() != 3 || key[0] != prefix) return false;
  if (key[1] < '1' || key[1] > '4' || key[2] < '1' || key[2] > '4') return false;
  i = key[1] - '1';
  j = key[2] - '1';
  return true;
}

}  // namespace

MetricConfig parse_metric_config(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    std::string_view line = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("", line_no, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view raw = line.substr(eq + 1);
    const std::string_view value = trim(raw);
    if (key.empty()) throw ConfigError("", line_no, "missing key");
    if (value.empty()) throw ConfigError(key, line_no, "missing value");
    if (entries.count(key)) throw ConfigError(key, line_no, "duplicate key");
    const std::size_t column = eq + 2 + static_cast<std::size_t>(value.data() - raw.data());
    entries[key] = Entry{std::string(value), line_no, column};
  }

  Domain domain = Box{{-1, -1, -1, -1}, {1, 1, 1, 1}};
  int orientation = +1;
  ExprMat4 g{};
  bool g_set[4][4] = {};
  ExprMat4 w{};
  for (auto& row : w) row.fill(Expr(0.0));
  bool w_set[4][4] = {};
  bool any_form = false;

  for (const auto& [key, e] : entries) {
    int i = 0, j = 0;
    if (key == "domain") {
      domain = parse_box(e);
    } else if (key == "orientation") {
      const std::string_view v = trim(e.value);
      if (v == "+1" || v == "1") {
        orientation = +1;
      } else if (v == "-1") {
        orientation = -1;
      } else {
        throw ConfigError(key, e.line, "orientation must be +1 or -1");
      }
    } else if (index_pair(key, 'g', i, j)) {
      const int a = std::min(i, j), b = std::max(i, j);
      if (g_set[a][b]) {
        throw ConfigError(key, e.line, "component given twice (g" + std::to_string(a + 1) +
                                           std::to_string(b + 1) + " and its mirror)");
      }
      g[a][b] = parse_value(key, e);
      g_set[a][b] = true;
    } else if (index_pair(key, 'w', i, j)) {
      if (i == j) throw ConfigError(key, e.line, "diagonal 2-form component");
      const int a = std::min(i, j), b = std::max(i, j);
      if (w_set[a][b]) throw ConfigError(key, e.line, "component given twice");
      const Expr x = parse_value(key, e);
      w[a][b] = i < j ? x : -x;
      w_set[a][b] = true;
      any_form = true;
    } else {
      throw ConfigError(key, e.line, "unknown key");
    }
  }
  for (int i = 0; i < 4; ++i) {
    if (!g_set[i][i]) {
      const std::string key = "g" + std::to_string(i + 1) + std::to_string(i + 1);
      throw ConfigError(key, 0, "missing diagonal component");
    }
    for (int j = i + 1; j < 4; ++j) {
      if (!g_set[i][j]) g[i][j] = Expr(0.0);
    }
  }
  MetricConfig cfg;
  cfg.metric = MetricField(g, domain, orientation);
  if (any_form) cfg.form = TwoFormField(w);
  return cfg;
}

MetricConfig load_metric_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", 0, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_metric_config(ss.str());
}

}  // namespace curv4
