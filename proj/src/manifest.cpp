#include "hygame/manifest.hpp"

#include <algorithm>
#include <cstdio>
#include <ctime>
#include <sstream>

namespace hygame {

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string RunManifest::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(
                    fnv1a64(command + "\n" + config)));
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

}  // namespace

std::string RunManifest::to_json() const {
  std::ostringstream os;
  os << "{\n"
     << "  \"tool\": \"" << json_escape(tool) << "\",\n"
     << "  \"version\": \"" << json_escape(version) << "\",\n"
     << "  \"command\": \"" << json_escape(command) << "\",\n"
     << "  \"config\": \"" << json_escape(config) << "\",\n"
     << "  \"timestamp\": \"" << json_escape(timestamp) << "\",\n"
     << "  \"hash\": \"" << hash() << "\"\n"
     << "}\n";
  return os.str();
}

std::string canonical_config(
    std::vector<std::pair<std::string, std::string>> kv) {
  std::sort(kv.begin(), kv.end());
  std::string out;
  for (std::size_t i = 0; i < kv.size(); ++i) {
    if (i) out += '\n';
    out += kv[i].first + "=" + kv[i].second;
  }
  return out;
}

std::string join_command(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

std::string utc_timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace hygame
