// Copyright 2026 The Research Space Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RSPACE_TESTS_SUPPORT_HPP
#define RSPACE_TESTS_SUPPORT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rspace/ingest.hpp"
#include "rspace/space.hpp"
#include "rspace/states.hpp"

namespace support {

inline std::string field_name(std::size_t f) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "f%02zu", f);
  return buf;
}

inline std::string entity_name(std::size_t s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "s%03zu", s);
  return buf;
}

inline rspace::FieldIndex field_index(std::size_t n) {
  std::vector<std::string> ids;
  for (std::size_t f = 0; f < n; ++f) ids.push_back(field_name(f));
  return rspace::FieldIndex(ids);
}

/// One share per nonzero cell of x, dated 2000.
inline std::vector<rspace::FieldedPublication> shares(const oracle::Dense& x) {
  std::vector<rspace::FieldedPublication> out;
  for (std::size_t s = 0; s < x.size(); ++s)
    for (std::size_t f = 0; f < x[s].size(); ++f)
      if (x[s][f] > 0.0) out.push_back({entity_name(s), field_name(f), 2000, x[s][f]});
  return out;
}

inline rspace::PresenceMatrix presence(const oracle::Dense& x,
                                       rspace::Level level = rspace::Level::Author) {
  const std::size_t nf = x.empty() ? 0 : x[0].size();
  return rspace::presence_matrix(shares(x), field_index(nf), {2000, 2001}, level);
}

inline oracle::Dense to_dense(const rspace::ProximityMatrix& phi) {
  oracle::Dense d(phi.size(), std::vector<double>(phi.size()));
  for (std::size_t f = 0; f < phi.size(); ++f)
    for (std::size_t g = 0; g < phi.size(); ++g) d[f][g] = phi.at(f, g);
  return d;
}

inline rspace::ProximityMatrix from_dense(const oracle::Dense& d,
                                          rspace::MapKind kind = rspace::MapKind::CareerPath) {
  rspace::ProximityMatrix phi(field_index(d.size()), kind);
  for (std::size_t f = 0; f < d.size(); ++f)
    for (std::size_t g = 0; g < d.size(); ++g) phi.at(f, g) = d[f][g];
  return phi;
}

/// Random symmetric weights in (0, 1] with a share of exact zeros.
inline oracle::Dense random_symmetric(std::mt19937_64& rng, std::size_t n, double zero_share) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  oracle::Dense d(n, std::vector<double>(n, 0.0));
  for (std::size_t f = 0; f < n; ++f) {
    d[f][f] = 1.0;
    for (std::size_t g = f + 1; g < n; ++g) {
      double w = u(rng) < zero_share ? 0.0 : 1.0 - u(rng);
      d[f][g] = d[g][f] = w;
    }
  }
  return d;
}

inline std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << text;
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("rspace-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace support

#endif  // RSPACE_TESTS_SUPPORT_HPP
