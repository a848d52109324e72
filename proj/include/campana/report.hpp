#pragma once

#include <charconv>
#include <cmath>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "campana/io.hpp"

namespace campana::report {

inline constexpr const char* kToolName = "campana";
inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kWorkCapEnv = "CAMPANA_WORK_CAP";

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// Shortest round-trip decimal, independent of the C locale.
inline std::string format_real(Real x) {
  const double d = static_cast<double>(x);
  if (std::isnan(d)) return "nan";
  if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

/// JSON number, or the strings "inf"/"nan" where JSON has no literal.
inline json real_json(Real x) {
  if (!std::isfinite(static_cast<double>(x))) return format_real(x);
  return static_cast<double>(x);
}

/// {"exact": "p/q", "approx": 0.333...}
inline json rational_json(const Rational& q) { return {{"exact", to_string(q)}, {"approx", real_json(to_real(q))}}; }

inline json vec_json(const Vec& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(to_string(q));
  return out;
}

/// Work cap from the environment, else the fallback.
inline std::uint64_t work_cap(std::uint64_t fallback) {
  const char* env = std::getenv(kWorkCapEnv);
  if (!env || !*env) return fallback;
  std::uint64_t v = 0;
  const std::string_view s(env);
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || v == 0)
    throw Error(ErrorKind::ConfigError, std::string(kWorkCapEnv) + " must be a positive integer, got '" + env + "'");
  return v;
}

class Envelope {
 public:
  Envelope(std::string command, std::uint64_t seed) : command_(std::move(command)), seed_(seed) {}

  /// Folds an input (argument text or file contents) into the input hash.
  void hash_input(std::string_view bytes) {
    hash_ = fnv1a(bytes, hash_);
    hash_ = fnv1a(std::string_view("\x1f", 1), hash_);
  }

  void warn(std::string w) {
    for (const auto& x : warnings_)
      if (x == w) return;
    warnings_.push_back(std::move(w));
  }
  void warn_all(const std::vector<std::string>& ws) {
    for (const auto& w : ws) warn(w);
  }

  void time(const std::string& label, double seconds) { timings_[label] = seconds; }
  void enable_timings(bool on) { timings_on_ = on; }
  bool timings_enabled() const { return timings_on_; }

  json& payload() { return payload_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  json to_json() const {
    json j;
    j["tool"] = kToolName;
    j["version"] = kVersion;
    j["command"] = command_;
    j["input_hash"] = hex64(hash_);
    j["seed"] = seed_;
    j["warnings"] = warnings_;
    if (timings_on_) j["timings"] = timings_;
    j["payload"] = payload_;
    return j;
  }

  std::string dump() const { return to_json().dump(2) + "\n"; }

 private:
  std::string command_;
  std::uint64_t seed_;
  std::uint64_t hash_ = 0xcbf29ce484222325ull;
  std::vector<std::string> warnings_;
  std::map<std::string, double> timings_;
  bool timings_on_ = false;
  json payload_ = json::object();
};

/// Wall-clock stopwatch recording into an envelope on destruction.
class ScopedTimer {
 public:
  ScopedTimer(Envelope& env, std::string label)
      : env_(env), label_(std::move(label)), start_(std::chrono::steady_clock::now()) {}
  ~ScopedTimer() {
    if (!env_.timings_enabled()) return;
    const std::chrono::duration<double> d = std::chrono::steady_clock::now() - start_;
    env_.time(label_, d.count());
  }
  ScopedTimer(const ScopedTimer&) = delete;
  ScopedTimer& operator=(const ScopedTimer&) = delete;

 private:
  Envelope& env_;
  std::string label_;
  std::chrono::steady_clock::time_point start_;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_field(cells[i]);
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) {
    if (r.size() != t.header.size()) throw Error(ErrorKind::Internal, "CSV row width differs from header");
    line(r);
  }
  return out;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path);
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path);
}

inline void write_csv(const std::string& path, const Table& t) { write_text(path, to_csv(t)); }

}  // namespace campana::report
