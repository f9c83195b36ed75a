// Copyright 2026 The wecopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wecopt/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "wecopt/error.hpp"

namespace wecopt {

namespace {

std::string Trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double Take(std::map<std::string, std::string>& kv, const std::string& key,
            const std::string& origin) {
  const auto it = kv.find(key);
  if (it == kv.end()) {
    Fail(ErrorCode::kConfig, origin + ": missing key '" + key + "'");
  }
  const double v = ParseDouble(it->second, origin + ": key '" + key + "'");
  kv.erase(it);
  return v;
}

void RejectLeftovers(const std::map<std::string, std::string>& kv,
                     const std::string& origin) {
  if (!kv.empty()) {
    Fail(ErrorCode::kConfig,
         origin + ": unknown key '" + kv.begin()->first + "'");
  }
}

}  // namespace

double ParseDouble(const std::string& text, const std::string& context) {
  const std::string t = Trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    Fail(ErrorCode::kConfig, context + ": not a number: '" + text + "'");
  }
  return v;
}

std::map<std::string, std::string> ParseKeyValues(const std::string& text,
                                                  const std::string& origin) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      Fail(ErrorCode::kConfig, origin + ":" + std::to_string(line_no) +
                                   ": expected 'key = value'");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    if (key.empty()) {
      Fail(ErrorCode::kConfig,
           origin + ":" + std::to_string(line_no) + ": empty key");
    }
    if (!out.emplace(key, value).second) {
      Fail(ErrorCode::kConfig, origin + ":" + std::to_string(line_no) +
                                   ": duplicate key '" + key + "'");
    }
  }
  return out;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIo, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail(ErrorCode::kIo, "cannot write '" + path.string() + "'");
  out << contents;
  if (!out) Fail(ErrorCode::kIo, "write failed for '" + path.string() + "'");
}

std::string FormatDouble(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) Fail(ErrorCode::kInternal, "double formatting failed");
  return std::string(buf, ptr);
}

DiscreteModel ParseModelFixture(const std::string& text,
                                const std::string& origin) {
  auto kv = ParseKeyValues(text, origin);
  DiscreteModel m;
  m.a(0, 0) = Take(kv, "a11", origin);
  m.a(0, 1) = Take(kv, "a12", origin);
  m.a(1, 0) = Take(kv, "a21", origin);
  m.a(1, 1) = Take(kv, "a22", origin);
  m.b(0) = Take(kv, "b1", origin);
  m.b(1) = Take(kv, "b2", origin);
  m.c(0) = Take(kv, "c1", origin);
  m.c(1) = Take(kv, "c2", origin);
  m.dt = Take(kv, "dt", origin);
  RejectLeftovers(kv, origin);
  m.Validate();
  return m;
}

DiscreteModel LoadModelFixture(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    Fail(ErrorCode::kConfig, "model fixture not found: '" + path.string() + "'");
  }
  return ParseModelFixture(ReadFile(path), path.string());
}

std::string FormatModelFixture(const DiscreteModel& m,
                               const std::string& comment) {
  std::ostringstream out;
  if (!comment.empty()) out << "# " << comment << "\n";
  out << "a11 = " << FormatDouble(m.a(0, 0)) << "\n"
      << "a12 = " << FormatDouble(m.a(0, 1)) << "\n"
      << "a21 = " << FormatDouble(m.a(1, 0)) << "\n"
      << "a22 = " << FormatDouble(m.a(1, 1)) << "\n"
      << "b1 = " << FormatDouble(m.b(0)) << "\n"
      << "b2 = " << FormatDouble(m.b(1)) << "\n"
      << "c1 = " << FormatDouble(m.c(0)) << "\n"
      << "c2 = " << FormatDouble(m.c(1)) << "\n"
      << "dt = " << FormatDouble(m.dt) << "\n";
  return out.str();
}

void SaveModelFixture(const std::filesystem::path& path,
                      const DiscreteModel& model, const std::string& comment) {
  WriteFile(path, FormatModelFixture(model, comment));
}

TruthModel LoadTruthModel(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    Fail(ErrorCode::kConfig, "truth model not found: '" + path.string() + "'");
  }
  const std::string origin = path.string();
  auto kv = ParseKeyValues(ReadFile(path), origin);
  TruthModel t;
  t.a_c(0, 0) = Take(kv, "ac11", origin);
  t.a_c(0, 1) = Take(kv, "ac12", origin);
  t.a_c(1, 0) = Take(kv, "ac21", origin);
  t.a_c(1, 1) = Take(kv, "ac22", origin);
  t.b_c(0) = Take(kv, "bc1", origin);
  t.b_c(1) = Take(kv, "bc2", origin);
  t.c_c(0) = Take(kv, "cc1", origin);
  t.c_c(1) = Take(kv, "cc2", origin);
  t.k_es = Take(kv, "k_es", origin);
  t.z_es = Take(kv, "z_es", origin);
  RejectLeftovers(kv, origin);
  t.Validate();
  return t;
}

std::string FormatTruthModel(const TruthModel& t) {
  std::ostringstream out;
  out << "ac11 = " << FormatDouble(t.a_c(0, 0)) << "\n"
      << "ac12 = " << FormatDouble(t.a_c(0, 1)) << "\n"
      << "ac21 = " << FormatDouble(t.a_c(1, 0)) << "\n"
      << "ac22 = " << FormatDouble(t.a_c(1, 1)) << "\n"
      << "bc1 = " << FormatDouble(t.b_c(0)) << "\n"
      << "bc2 = " << FormatDouble(t.b_c(1)) << "\n"
      << "cc1 = " << FormatDouble(t.c_c(0)) << "\n"
      << "cc2 = " << FormatDouble(t.c_c(1)) << "\n"
      << "k_es = " << FormatDouble(t.k_es) << "\n"
      << "z_es = " << FormatDouble(t.z_es) << "\n";
  return out.str();
}

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) fields.push_back(Trim(field));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string FormatTrajectoryCsv(const Trajectory& traj) {
  std::ostringstream out;
  out << "t,u,zdot,z,w\n";
  for (std::size_t k = 0; k < traj.size(); ++k) {
    out << FormatDouble(traj.t[k]) << ',' << FormatDouble(traj.u[k]) << ','
        << FormatDouble(traj.zdot[k]) << ',' << FormatDouble(traj.z[k]) << ','
        << FormatDouble(traj.w[k]) << '\n';
  }
  return out.str();
}

void SaveTrajectoryCsv(const std::filesystem::path& path,
                       const Trajectory& traj) {
  WriteFile(path, FormatTrajectoryCsv(traj));
}

Trajectory ParseTrajectoryCsv(const std::string& text,
                              const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || Trim(line) != "t,u,zdot,z,w") {
    Fail(ErrorCode::kIo, origin + ": expected header 't,u,zdot,z,w'");
  }
  Trajectory traj;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const auto f = SplitCsvLine(line);
    const std::string where = origin + ":" + std::to_string(line_no);
    if (f.size() != 5) Fail(ErrorCode::kIo, where + ": expected 5 fields");
    traj.Append(ParseDouble(f[0], where), ParseDouble(f[1], where),
                {ParseDouble(f[2], where), ParseDouble(f[3], where)},
                ParseDouble(f[4], where));
  }
  return traj;
}

Trajectory LoadTrajectoryCsv(const std::filesystem::path& path) {
  return ParseTrajectoryCsv(ReadFile(path), path.string());
}

}  // namespace wecopt
