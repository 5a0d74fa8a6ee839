#include "nlreg/config.hpp"

#include "nlreg/errors.hpp"

#include <boost/property_tree/ini_parser.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace nlreg {

namespace pt = boost::property_tree;

namespace {

pt::ptree::path_type make_path(const std::string& section, const std::string& key) {
  return pt::ptree::path_type(section + "/" + key, '/');
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

namespace {

void parse(const std::string& text, const std::string& origin, pt::ptree& tree) {
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(origin + "line " + std::to_string(e.line()), e.message());
  }
}

}  // namespace

Config Config::from_string(const std::string& text) {
  Config c;
  parse(text, "", c.tree_);
  return c;
}

Config Config::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path, "cannot open config file");
  std::stringstream buf;
  buf << in.rdbuf();
  Config c;
  parse(buf.str(), path + ":", c.tree_);
  return c;
}

bool Config::has_section(const std::string& section) const {
  return static_cast<bool>(tree_.get_child_optional(pt::ptree::path_type(section, '/')));
}

bool Config::has(const std::string& section, const std::string& key) const {
  return static_cast<bool>(tree_.get_optional<std::string>(make_path(section, key)));
}

std::optional<std::string> Config::get(const std::string& section, const std::string& key) const {
  auto v = tree_.get_optional<std::string>(make_path(section, key));
  if (!v) return std::nullopt;
  return trim(*v);
}

std::string Config::require(const std::string& section, const std::string& key) const {
  auto v = get(section, key);
  if (!v) throw ValidationError(section + "." + key, "missing required key");
  return *v;
}

double Config::require_double(const std::string& section, const std::string& key) const {
  return parse_double(require(section, key), section + "." + key);
}

double Config::get_double(const std::string& section, const std::string& key,
                          double fallback) const {
  auto v = get(section, key);
  return v ? parse_double(*v, section + "." + key) : fallback;
}

long Config::get_long(const std::string& section, const std::string& key, long fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  long out = 0;
  const auto* end = v->data() + v->size();
  auto [p, ec] = std::from_chars(v->data(), end, out);
  if (ec != std::errc() || p != end) throw ValidationError(section + "." + key, "not an integer");
  return out;
}

std::vector<double> Config::get_list(const std::string& section, const std::string& key) const {
  auto v = get(section, key);
  if (!v) return {};
  return parse_list(*v, section + "." + key);
}

void Config::set(const std::string& section, const std::string& key, const std::string& value) {
  tree_.put(make_path(section, key), value);
}

void Config::set(const std::string& section, const std::string& key, double value) {
  set(section, key, format_double(value));
}

std::string Config::to_string() const {
  std::ostringstream out;
  pt::write_ini(out, tree_);
  return out.str();
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, p);
}

double parse_double(const std::string& text, const std::string& field) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return INFINITY;
  if (t == "pi") return M_PI;
  try {
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw ValidationError(field, "trailing characters in number '" + t + "'");
    return v;
  } catch (const std::logic_error&) {
    throw ValidationError(field, "not a number: '" + t + "'");
  }
}

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(item, field));
  }
  return out;
}

}  // namespace nlreg
