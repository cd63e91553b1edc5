#include "triage/keyvalue.hpp"

#include "triage/error.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace triage {

namespace {

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

} // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text)
{
    std::map<std::string, std::string> out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#') {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
        }
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

std::map<std::string, std::string> read_key_values(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_key_values(buf.str());
}

double to_double(const std::string& key, const std::string& value)
{
    double out = 0.0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ValidationError("config key " + key + ": not a number: " + value);
    }
    return out;
}

long long to_integer(const std::string& key, const std::string& value)
{
    long long out = 0;
    const auto* end = value.data() + value.size();
    const auto res = std::from_chars(value.data(), end, out);
    if (res.ec != std::errc{} || res.ptr != end) {
        throw ValidationError("config key " + key + ": not an integer: " + value);
    }
    return out;
}

bool to_bool(const std::string& key, const std::string& value)
{
    if (value == "true" || value == "1" || value == "yes") {
        return true;
    }
    if (value == "false" || value == "0" || value == "no") {
        return false;
    }
    throw ValidationError("config key " + key + ": not a boolean: " + value);
}

} // namespace triage
