#pragma once

#include <map>
#include <set>
#include <string>

namespace chebfd {

/// Plain key=value configuration with [section] headers.  Keys are stored
/// fully qualified as "section.key" (no section prefix before the first
/// header).  Lines starting with '#' or ';' are comments.
class Config {
  public:
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text, const std::string& origin = "<string>");

    bool has(const std::string& key) const { return entries_.count(key) > 0; }
    std::string get(const std::string& key, const std::string& fallback = "") const;
    double get_double(const std::string& key, double fallback) const;
    long long get_int(const std::string& key, long long fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    /// Command-line flags override file values.
    void set(const std::string& key, const std::string& value) { entries_[key] = value; }

    /// Schema validation: every present key must appear in `allowed`.
    void require_known(const std::set<std::string>& allowed) const;

    const std::map<std::string, std::string>& entries() const { return entries_; }

  private:
    std::map<std::string, std::string> entries_;
};

}  // namespace chebfd
