#include "ncvr/bench/config.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "ncvr/errors.hpp"

namespace ncvr {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_count(const std::string& text, std::size_t line,
                          const std::string& key) {
  std::uint64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec == std::errc() && ptr == last) return value;
  // Accept integral values written in floating notation, e.g. 1e4.
  char* end = nullptr;
  const double d = std::strtod(text.c_str(), &end);
  if (end == text.c_str() + text.size() && !text.empty() && d >= 0.0 &&
      d < 1.8e19 && d == static_cast<double>(static_cast<std::uint64_t>(d))) {
    return static_cast<std::uint64_t>(d);
  }
  throw ParseError("'" + key + "' expects a non-negative integer, got '" + text + "'",
                   line);
}

}  // namespace

std::string ConfigSection::label() const {
  return "[" + kind_ + (name_.empty() ? "" : " " + name_) + "]";
}

void ConfigSection::add(std::string key, std::string value, std::size_t line) {
  if (find(key) != nullptr) {
    throw ParseError("duplicate key '" + key + "' in " + label(), line);
  }
  entries_.push_back(Entry{std::move(key), std::move(value), line, false});
}

bool ConfigSection::has(const std::string& key) const {
  for (const auto& e : entries_) {
    if (e.key == key) return true;
  }
  return false;
}

ConfigSection::Entry* ConfigSection::find(const std::string& key) {
  for (auto& e : entries_) {
    if (e.key == key) return &e;
  }
  return nullptr;
}

std::optional<std::string> ConfigSection::text(const std::string& key) {
  Entry* e = find(key);
  if (e == nullptr) return std::nullopt;
  e->used = true;
  return e->value;
}

std::optional<double> ConfigSection::real(const std::string& key) {
  Entry* e = find(key);
  if (e == nullptr) return std::nullopt;
  e->used = true;
  char* end = nullptr;
  const double value = std::strtod(e->value.c_str(), &end);
  if (e->value.empty() || end != e->value.c_str() + e->value.size()) {
    throw ParseError("'" + key + "' expects a number, got '" + e->value + "'", e->line);
  }
  return value;
}

std::optional<std::uint64_t> ConfigSection::count(const std::string& key) {
  Entry* e = find(key);
  if (e == nullptr) return std::nullopt;
  e->used = true;
  return parse_count(e->value, e->line, key);
}

std::optional<bool> ConfigSection::flag(const std::string& key) {
  Entry* e = find(key);
  if (e == nullptr) return std::nullopt;
  e->used = true;
  if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
  if (e->value == "false" || e->value == "no" || e->value == "0") return false;
  throw ParseError("'" + key + "' expects true or false, got '" + e->value + "'", e->line);
}

std::optional<std::vector<std::uint64_t>> ConfigSection::count_list(
    const std::string& key) {
  Entry* e = find(key);
  if (e == nullptr) return std::nullopt;
  e->used = true;
  std::vector<std::uint64_t> out;
  std::stringstream ss(e->value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const auto lo = parse_count(trim(item.substr(0, dash)), e->line, key);
      const auto hi = parse_count(trim(item.substr(dash + 1)), e->line, key);
      if (hi < lo) throw ParseError("'" + key + "' has an empty range '" + item + "'", e->line);
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(parse_count(item, e->line, key));
    }
  }
  if (out.empty()) throw ParseError("'" + key + "' is an empty list", e->line);
  return out;
}

std::vector<std::string> ConfigSection::unused() const {
  std::vector<std::string> out;
  for (const auto& e : entries_) {
    if (!e.used) {
      out.push_back("line " + std::to_string(e.line) + ": unknown key '" + e.key +
                    "' in " + label());
    }
  }
  return out;
}

ConfigSection* ConfigFile::find(const std::string& kind) {
  for (auto& s : sections) {
    if (s.kind() == kind) return &s;
  }
  return nullptr;
}

std::vector<ConfigSection*> ConfigFile::all(const std::string& kind) {
  std::vector<ConfigSection*> out;
  for (auto& s : sections) {
    if (s.kind() == kind) out.push_back(&s);
  }
  return out;
}

ConfigFile parse_config(std::istream& in) {
  ConfigFile file;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ParseError("unterminated section header", line);
      const std::string inner = trim(text.substr(1, text.size() - 2));
      if (inner.empty()) throw ParseError("empty section header", line);
      const auto space = inner.find_first_of(" \t");
      std::string kind = inner.substr(0, space);
      std::string name = space == std::string::npos ? "" : trim(inner.substr(space));
      file.sections.emplace_back(std::move(kind), std::move(name), line);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
    std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ParseError("missing key before '='", line);
    if (file.sections.empty()) throw ParseError("key '" + key + "' outside any section", line);
    file.sections.back().add(std::move(key), std::move(value), line);
  }
  return file;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ContractViolation("cannot open config file " + path.string());
  return parse_config(in);
}

}  // namespace ncvr
