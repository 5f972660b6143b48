#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace pcfqfc {

/// Parsed contents of the key-value data files shipped in data/.
///
/// Syntax: `#` starts a comment, `key = value` sets a scalar, and a key with
/// an empty right-hand side opens a numeric table whose rows follow on
/// subsequent indented lines until the next key or blank line.
struct KeyValueFile {
  std::string path;
  std::string sha256; // hex digest of the raw file bytes
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::vector<std::vector<double>>> tables;

  const std::string& scalar(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  const std::vector<std::vector<double>>& table(const std::string& key) const;
};

KeyValueFile read_keyvalue_file(const std::filesystem::path& path);
KeyValueFile parse_keyvalue(const std::string& text, const std::string& origin);

std::string sha256_hex(const std::string& bytes);

} // namespace pcfqfc
