#pragma once

#include <map>
#include <string>

namespace triage {

/// Parses `key = value` lines. Blank lines and lines starting with '#' are skipped.
std::map<std::string, std::string> read_key_values(const std::string& path);
std::map<std::string, std::string> parse_key_values(const std::string& text);

double to_double(const std::string& key, const std::string& value);
long long to_integer(const std::string& key, const std::string& value);
bool to_bool(const std::string& key, const std::string& value);

} // namespace triage
