#pragma once

#include <boost/property_tree/ptree.hpp>

#include <optional>
#include <string>
#include <vector>

namespace nlreg {

/// Flat key-value file with `[section]` headers. Section names may contain dots
/// (`[kernel.ell]`) to express nesting.
class Config {
public:
  Config() = default;

  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text);

  bool has_section(const std::string& section) const;
  bool has(const std::string& section, const std::string& key) const;
  std::optional<std::string> get(const std::string& section, const std::string& key) const;

  /// Throws ValidationError("section.key") when absent.
  std::string require(const std::string& section, const std::string& key) const;
  double require_double(const std::string& section, const std::string& key) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  long get_long(const std::string& section, const std::string& key, long fallback) const;
  std::vector<double> get_list(const std::string& section, const std::string& key) const;

  void set(const std::string& section, const std::string& key, const std::string& value);
  void set(const std::string& section, const std::string& key, double value);

  std::string to_string() const;

private:
  boost::property_tree::ptree tree_;
};

/// Shortest decimal text that reads back to the same double.
std::string format_double(double v);

/// Parses a comma separated list of reals; `field` is used in error messages.
std::vector<double> parse_list(const std::string& text, const std::string& field);
double parse_double(const std::string& text, const std::string& field);

}  // namespace nlreg
