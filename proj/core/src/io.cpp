// Copyright 2026 The gridplan Authors
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

#include "gridplan/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gridplan {

namespace {

[[noreturn]] void parse_fail(const std::filesystem::path& path, int line, const std::string& msg) {
  throw ParseError(path.string() + ":" + std::to_string(line) + ": " + msg);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw ParseError("cannot open '" + path.string() + "' for writing");
  return os;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ParseError("cannot open '" + path.string() + "' for reading");
  return is;
}

bool parse_header_field(const std::string& token, const std::string& key, std::string& value) {
  if (token.rfind(key + "=", 0) != 0) return false;
  value = token.substr(key.size() + 1);
  return true;
}

int to_int(const std::filesystem::path& path, int line, const std::string& s) {
  try {
    std::size_t pos = 0;
    const int v = std::stoi(s, &pos);
    if (pos != s.size()) parse_fail(path, line, "trailing characters in integer '" + s + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    parse_fail(path, line, "expected integer, got '" + s + "'");
  }
}

double to_double(const std::filesystem::path& path, int line, const std::string& s) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) parse_fail(path, line, "trailing characters in number '" + s + "'");
    return v;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    parse_fail(path, line, "expected number, got '" + s + "'");
  }
}

struct BlockShape {
  int count;
  int rows;
  int cols;
};

BlockShape expected_shape(const std::filesystem::path& path, const ModelFile& m) {
  if (m.kind == "transition") return {m.na, m.nt, m.nt};
  if (m.kind == "reward" || m.kind == "q") return {m.na, m.nd, m.nd};
  if (m.kind == "observation") return {1, m.nt, m.nt};
  if (m.kind == "value" || m.kind == "belief" || m.kind == "policy") return {1, m.nd, m.nd};
  parse_fail(path, 1, "unknown kind '" + m.kind + "'");
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_model_file(const std::filesystem::path& path, const ModelFile& model) {
  std::ofstream os = open_out(path);
  os << "gridplan-model v1 kind=" << model.kind << " nd=" << model.nd << " na=" << model.na
     << " nt=" << model.nt << "\n";
  for (std::size_t b = 0; b < model.blocks.size(); ++b) {
    if (b > 0) os << "\n";
    const Mat& m = model.blocks[b];
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) {
        if (j > 0) os << ' ';
        if (model.kind == "policy")
          os << static_cast<long long>(m(i, j));
        else
          os << format_double(m(i, j));
      }
      os << "\n";
    }
  }
  if (!os) throw ParseError("write failed for '" + path.string() + "'");
}

ModelFile read_model_file(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  std::string line;
  int line_no = 0;

  if (!std::getline(is, line)) parse_fail(path, 1, "empty file");
  ++line_no;
  std::istringstream header(line);
  std::string magic, version;
  header >> magic >> version;
  if (magic != "gridplan-model" || version != "v1")
    parse_fail(path, line_no, "expected header 'gridplan-model v1 ...'");

  ModelFile model;
  bool saw_kind = false, saw_nd = false, saw_na = false, saw_nt = false;
  std::string token;
  while (header >> token) {
    std::string value;
    if (parse_header_field(token, "kind", value)) {
      model.kind = value;
      saw_kind = true;
    } else if (parse_header_field(token, "nd", value)) {
      model.nd = to_int(path, line_no, value);
      saw_nd = true;
    } else if (parse_header_field(token, "na", value)) {
      model.na = to_int(path, line_no, value);
      saw_na = true;
    } else if (parse_header_field(token, "nt", value)) {
      model.nt = to_int(path, line_no, value);
      saw_nt = true;
    } else {
      parse_fail(path, line_no, "unknown header field '" + token + "'");
    }
  }
  if (!saw_kind || !saw_nd || !saw_na || !saw_nt)
    parse_fail(path, line_no, "header must define kind, nd, na and nt");
  if (model.nd <= 0 || model.na <= 0 || model.nt <= 0)
    parse_fail(path, line_no, "header dimensions must be positive");

  const BlockShape shape = expected_shape(path, model);
  Mat current(shape.rows, shape.cols, 0.0);
  int row_in_block = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::istringstream row(line);
    std::vector<std::string> cells;
    std::string cell;
    while (row >> cell) cells.push_back(cell);
    if (cells.empty()) {
      if (row_in_block != 0)
        parse_fail(path, line_no, "blank line inside a block (expected " +
                                      std::to_string(shape.rows) + " rows, got " +
                                      std::to_string(row_in_block) + ")");
      continue;
    }
    if (static_cast<int>(model.blocks.size()) == shape.count)
      parse_fail(path, line_no, "more blocks than the header declares");
    if (static_cast<int>(cells.size()) != shape.cols)
      parse_fail(path, line_no, "expected " + std::to_string(shape.cols) + " values, got " +
                                    std::to_string(cells.size()));
    for (int j = 0; j < shape.cols; ++j)
      current(row_in_block, j) = to_double(path, line_no, cells[static_cast<std::size_t>(j)]);
    if (++row_in_block == shape.rows) {
      model.blocks.push_back(current);
      current.fill(0.0);
      row_in_block = 0;
    }
  }
  if (row_in_block != 0) parse_fail(path, line_no, "file ends inside a block");
  if (static_cast<int>(model.blocks.size()) != shape.count)
    parse_fail(path, line_no, "expected " + std::to_string(shape.count) + " blocks, got " +
                                  std::to_string(model.blocks.size()));
  return model;
}

namespace {

ModelFile read_checked(const std::filesystem::path& path, const std::string& kind) {
  ModelFile m = read_model_file(path);
  if (m.kind != kind)
    throw InvariantViolation(path.string() + ": expected kind=" + kind + ", found kind=" + m.kind);
  return m;
}

}  // namespace

void save_transition(const std::filesystem::path& path, const TransitionModel& t, int nd) {
  t.validate("save_transition");
  write_model_file(path, ModelFile{"transition", nd, t.num_actions(), t.nt(), t.filters});
}

TransitionModel load_transition(const std::filesystem::path& path) {
  ModelFile m = read_checked(path, "transition");
  TransitionModel t{std::move(m.blocks)};
  t.validate(path.string());
  return t;
}

void save_reward(const std::filesystem::path& path, const RewardFunction& r) {
  r.validate("save_reward");
  write_model_file(path, ModelFile{"reward", r.nd(), r.num_actions(), 1, r.planes});
}

RewardFunction load_reward(const std::filesystem::path& path) {
  ModelFile m = read_checked(path, "reward");
  RewardFunction r{std::move(m.blocks)};
  r.validate(path.string());
  return r;
}

void save_observation(const std::filesystem::path& path, const ObservationModel& o, int nd) {
  o.validate("save_observation");
  write_model_file(path, ModelFile{"observation", nd, 1, o.no(), {o.kernel}});
}

ObservationModel load_observation(const std::filesystem::path& path) {
  ModelFile m = read_checked(path, "observation");
  ObservationModel o{std::move(m.blocks.front())};
  o.validate(path.string());
  return o;
}

void save_value(const std::filesystem::path& path, const ValueFunction& v) {
  write_model_file(path, ModelFile{"value", v.nd(), 1, 1, {v.values}});
}

ValueFunction load_value(const std::filesystem::path& path) {
  ModelFile m = read_checked(path, "value");
  ValueFunction v{std::move(m.blocks.front())};
  if (!v.values.all_finite()) throw InvariantViolation(path.string() + ": non-finite values");
  return v;
}

void save_q(const std::filesystem::path& path, const QFunction& q) {
  write_model_file(path, ModelFile{"q", q.nd(), q.num_actions(), 1, q.planes});
}

QFunction load_q(const std::filesystem::path& path) {
  ModelFile m = read_checked(path, "q");
  QFunction q{std::move(m.blocks)};
  for (const Mat& plane : q.planes)
    if (!plane.all_finite()) throw InvariantViolation(path.string() + ": non-finite values");
  return q;
}

void save_belief(const std::filesystem::path& path, const Belief& b) {
  b.validate("save_belief");
  write_model_file(path, ModelFile{"belief", b.nd(), 1, 1, {b.mass}});
}

Belief load_belief(const std::filesystem::path& path) {
  ModelFile m = read_checked(path, "belief");
  Belief b{std::move(m.blocks.front())};
  b.validate(path.string());
  return b;
}

void save_policy(const std::filesystem::path& path, const Policy& p, int na) {
  p.validate(na, "save_policy");
  Mat plane(p.nd, p.nd);
  for (int i = 0; i < p.nd; ++i)
    for (int j = 0; j < p.nd; ++j) plane(i, j) = static_cast<double>(p.at(i, j));
  write_model_file(path, ModelFile{"policy", p.nd, na, 1, {plane}});
}

Policy load_policy(const std::filesystem::path& path) {
  ModelFile m = read_checked(path, "policy");
  Policy p(m.nd);
  const Mat& plane = m.blocks.front();
  for (int i = 0; i < m.nd; ++i) {
    for (int j = 0; j < m.nd; ++j) {
      const double x = plane(i, j);
      if (x != std::floor(x))
        throw InvariantViolation(path.string() + ": policy entries must be integers");
      p.at(i, j) = static_cast<int>(x);
    }
  }
  p.validate(m.na, path.string());
  return p;
}

void save_trajectory(const std::filesystem::path& path, const Trajectory& traj) {
  std::ofstream os = open_out(path);
  const bool expert = traj.has_expert_actions();
  os << (expert ? "t,action,obs_i,obs_j,expert_action\n" : "t,action,obs_i,obs_j\n");
  for (std::size_t t = 0; t < traj.steps.size(); ++t) {
    const TrajectoryStep& st = traj.steps[t];
    os << t << ',' << st.action << ',' << st.observed.i << ',' << st.observed.j;
    if (expert) os << ',' << st.expert_action;
    os << "\n";
  }
  if (!os) throw ParseError("write failed for '" + path.string() + "'");
}

Trajectory load_trajectory(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  std::string line;
  int line_no = 0;
  if (!std::getline(is, line)) parse_fail(path, 1, "empty file");
  ++line_no;
  bool expert;
  if (line == "t,action,obs_i,obs_j,expert_action")
    expert = true;
  else if (line == "t,action,obs_i,obs_j")
    expert = false;
  else
    parse_fail(path, line_no, "unexpected trajectory header '" + line + "'");

  Trajectory traj;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::vector<std::string> cells;
    std::string cell;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    const std::size_t want = expert ? 5 : 4;
    if (cells.size() != want)
      parse_fail(path, line_no, "expected " + std::to_string(want) + " columns, got " +
                                    std::to_string(cells.size()));
    const long t = to_int(path, line_no, cells[0]);
    if (t != static_cast<long>(traj.steps.size()))
      parse_fail(path, line_no, "step indices must count up from 0");
    TrajectoryStep st;
    st.action = to_int(path, line_no, cells[1]);
    st.observed = State{to_int(path, line_no, cells[2]), to_int(path, line_no, cells[3])};
    if (expert) st.expert_action = to_int(path, line_no, cells[4]);
    traj.steps.push_back(st);
  }
  if (traj.steps.empty()) parse_fail(path, line_no, "trajectory has no steps");
  return traj;
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream os = open_out(path);
  os << header << "\n";
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c > 0) os << ',';
      os << row[c];
    }
    os << "\n";
  }
  if (!os) throw ParseError("write failed for '" + path.string() + "'");
}

}  // namespace gridplan
