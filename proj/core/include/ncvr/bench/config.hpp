#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ncvr {

/// One `[kind name]` block of a flat key = value config file.
class ConfigSection {
 public:
  struct Entry {
    std::string key;
    std::string value;
    std::size_t line = 0;
    bool used = false;
  };

  ConfigSection(std::string kind, std::string name, std::size_t line)
      : kind_(std::move(kind)), name_(std::move(name)), line_(line) {}

  const std::string& kind() const { return kind_; }
  const std::string& name() const { return name_; }
  std::size_t line() const { return line_; }
  /// "[kind name]" as written, for messages.
  std::string label() const;

  /// Throws ParseError on a repeated key.
  void add(std::string key, std::string value, std::size_t line);
  bool has(const std::string& key) const;

  // Typed lookups mark the key as used. A present but malformed value
  // throws ParseError naming the line.
  std::optional<std::string> text(const std::string& key);
  std::optional<double> real(const std::string& key);
  std::optional<std::uint64_t> count(const std::string& key);
  std::optional<bool> flag(const std::string& key);
  std::optional<std::vector<std::uint64_t>> count_list(const std::string& key);

  /// Keys never looked up, as "line N: unknown key 'k' in [..]".
  std::vector<std::string> unused() const;

  const std::vector<Entry>& entries() const { return entries_; }

 private:
  Entry* find(const std::string& key);

  std::string kind_;
  std::string name_;
  std::size_t line_;
  std::vector<Entry> entries_;
};

struct ConfigFile {
  std::vector<ConfigSection> sections;

  /// First section of the given kind, or nullptr.
  ConfigSection* find(const std::string& kind);
  std::vector<ConfigSection*> all(const std::string& kind);
};

/// Lines are `[kind]`, `[kind name]`, `key = value`, blank, or `# comment`
/// (also trailing). Keys before the first header are an error.
ConfigFile parse_config(std::istream& in);
ConfigFile load_config(const std::filesystem::path& path);

}  // namespace ncvr
