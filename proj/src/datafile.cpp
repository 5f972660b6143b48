#include "pcfqfc/datafile.hpp"

#include "pcfqfc/error.hpp"

#include <openssl/evp.h>

#include <charconv>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace pcfqfc {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<double> parse_numbers(const std::string& text,
                                  const std::string& where) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || ptr != end)
      throw ConfigError(where + ": not a number: '" + tok + "'");
    out.push_back(v);
  }
  return out;
}

} // namespace

const std::string& KeyValueFile::scalar(const std::string& key) const {
  auto it = scalars.find(key);
  if (it == scalars.end())
    throw ConfigError(path + ": missing key '" + key + "'");
  return it->second;
}

std::vector<double> KeyValueFile::numbers(const std::string& key) const {
  return parse_numbers(scalar(key), path + ": key '" + key + "'");
}

const std::vector<std::vector<double>>&
KeyValueFile::table(const std::string& key) const {
  auto it = tables.find(key);
  if (it == tables.end())
    throw ConfigError(path + ": missing table '" + key + "'");
  return it->second;
}

KeyValueFile parse_keyvalue(const std::string& text, const std::string& origin) {
  KeyValueFile file;
  file.path = origin;
  file.sha256 = sha256_hex(text);

  std::istringstream in(text);
  std::string raw;
  std::string open_table;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const auto hash = raw.find('#');
    const std::string line = trim(raw.substr(0, hash));
    const std::string where = origin + ":" + std::to_string(lineno);
    if (line.empty()) {
      // A blank line closes an open table; a comment-only line does not.
      if (hash == std::string::npos) open_table.clear();
      continue;
    }
    const auto eq = line.find('=');
    if (eq != std::string::npos) {
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      if (key.empty()) throw ConfigError(where + ": empty key");
      if (file.scalars.count(key) || file.tables.count(key))
        throw ConfigError(where + ": duplicate key '" + key + "'");
      if (value.empty()) {
        file.tables[key];
        open_table = key;
      } else {
        file.scalars[key] = value;
        open_table.clear();
      }
      continue;
    }
    if (open_table.empty())
      throw ConfigError(where + ": row outside of a table");
    file.tables[open_table].push_back(parse_numbers(line, where));
  }
  return file;
}

KeyValueFile read_keyvalue_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open data file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_keyvalue(buf.str(), path.string());
}

std::string sha256_hex(const std::string& bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(),
                                                            EVP_MD_CTX_free);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest, &len) != 1)
    throw IoError("sha256 digest failed");
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i)
    hex << std::hex << std::setw(2) << std::setfill('0')
        << static_cast<int>(digest[i]);
  return hex.str();
}

} // namespace pcfqfc
