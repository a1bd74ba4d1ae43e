#include "relkit/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "relkit/errors.hpp"

namespace relkit {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path.string());
  return out;
}

void finish_out(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed: " + path.string());
}

std::vector<std::string> read_lines(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream iss(line);
  while (std::getline(iss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw InvalidArgument(where + ": cannot parse number '" + s + "'");
  }
  return v;
}

int parse_int(const std::string& s, const std::string& where) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') {
    throw InvalidArgument(where + ": cannot parse integer '" + s + "'");
  }
  return static_cast<int>(v);
}

void expect_header(const std::vector<std::string>& lines,
                   const std::vector<std::string>& expected,
                   const std::filesystem::path& path) {
  if (lines.empty()) throw InvalidArgument(path.string() + ": empty file");
  const std::vector<std::string> actual = split_fields(lines.front());
  std::string missing;
  for (const std::string& col : expected) {
    if (std::find(actual.begin(), actual.end(), col) == actual.end()) {
      if (!missing.empty()) missing += ", ";
      missing += col;
    }
  }
  if (!missing.empty()) {
    throw InvalidArgument(path.string() + ": missing columns: " + missing);
  }
  if (actual != expected) {
    throw InvalidArgument(path.string() + ": unexpected column order");
  }
}

}  // namespace

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_item_bank_csv(const ItemBank& bank, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "a,b,c,dim\n";
  for (const Item& item : bank.items) {
    out << format_real(item.a) << ',' << format_real(item.b) << ',' << format_real(item.c)
        << ',' << item.dim << '\n';
  }
  finish_out(out, path);
}

ItemBank read_item_bank_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  expect_header(lines, {"a", "b", "c", "dim"}, path);
  ItemBank bank;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const std::vector<std::string> f = split_fields(lines[i]);
    if (f.size() != 4) throw InvalidArgument(where + ": expected 4 fields");
    Item item;
    item.a = parse_double(f[0], where);
    item.b = parse_double(f[1], where);
    item.c = parse_double(f[2], where);
    item.dim = parse_int(f[3], where);
    bank.items.push_back(item);
  }
  return bank;
}

void write_sample_csv(const MonteCarloSample& sample, const std::filesystem::path& path) {
  const int d = static_cast<int>(sample.eta.cols());
  const int m = static_cast<int>(sample.y.cols());
  if (sample.eta.rows() != sample.y.rows()) {
    throw InvalidArgument("write_sample_csv: eta and y row counts differ");
  }
  std::ofstream out = open_out(path);
  for (int k = 0; k < d; ++k) out << (k ? "," : "") << "eta_" << (k + 1);
  for (int j = 0; j < m; ++j) out << ",y_" << (j + 1);
  out << '\n';
  for (int i = 0; i < sample.cases(); ++i) {
    for (int k = 0; k < d; ++k) {
      if (k) out << ',';
      out << format_real(sample.eta(i, k));
    }
    for (int j = 0; j < m; ++j) out << ',' << sample.y(i, j);
    out << '\n';
  }
  finish_out(out, path);
}

MonteCarloSample read_sample_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  if (lines.empty()) throw InvalidArgument(path.string() + ": empty file");
  const std::vector<std::string> header = split_fields(lines.front());
  int d = 0;
  while (d < static_cast<int>(header.size()) &&
         header[static_cast<std::size_t>(d)] == "eta_" + std::to_string(d + 1)) {
    ++d;
  }
  if (d == 0) throw InvalidArgument(path.string() + ": missing columns: eta_1");
  const int m = static_cast<int>(header.size()) - d;
  for (int j = 0; j < m; ++j) {
    if (header[static_cast<std::size_t>(d + j)] != "y_" + std::to_string(j + 1)) {
      throw InvalidArgument(path.string() + ": unexpected column '" +
                            header[static_cast<std::size_t>(d + j)] + "'");
    }
  }
  const int n = static_cast<int>(lines.size()) - 1;
  MonteCarloSample sample;
  sample.eta.resize(n, d);
  sample.y.resize(n, m);
  for (int i = 0; i < n; ++i) {
    const std::string where = path.string() + ":" + std::to_string(i + 2);
    const std::vector<std::string> f = split_fields(lines[static_cast<std::size_t>(i) + 1]);
    if (static_cast<int>(f.size()) != d + m) {
      throw InvalidArgument(where + ": expected " + std::to_string(d + m) + " fields");
    }
    for (int k = 0; k < d; ++k) sample.eta(i, k) = parse_double(f[static_cast<std::size_t>(k)], where);
    for (int j = 0; j < m; ++j) {
      const int v = parse_int(f[static_cast<std::size_t>(d + j)], where);
      if (v != 0 && v != 1) throw InvalidArgument(where + ": response must be 0 or 1");
      sample.y(i, j) = v;
    }
  }
  return sample;
}

void write_scores_csv(const ScoreSet& scores, const std::filesystem::path& path) {
  scores.validate();
  std::ofstream out = open_out(path);
  out << "s_1,s_2,xi_1,xi_2\n";
  for (int i = 0; i < scores.cases(); ++i) {
    out << format_real(scores.observed(i, 0)) << ',' << format_real(scores.observed(i, 1))
        << ',' << format_real(scores.latent(i, 0)) << ',' << format_real(scores.latent(i, 1))
        << '\n';
  }
  finish_out(out, path);
}

ScoreSet read_scores_csv(const std::filesystem::path& path, Transform transform) {
  const std::vector<std::string> lines = read_lines(path);
  expect_header(lines, {"s_1", "s_2", "xi_1", "xi_2"}, path);
  const int n = static_cast<int>(lines.size()) - 1;
  ScoreSet scores;
  scores.transform = transform;
  scores.observed.resize(n, 2);
  scores.latent.resize(n, 2);
  for (int i = 0; i < n; ++i) {
    const std::string where = path.string() + ":" + std::to_string(i + 2);
    const std::vector<std::string> f = split_fields(lines[static_cast<std::size_t>(i) + 1]);
    if (f.size() != 4) throw InvalidArgument(where + ": expected 4 fields");
    scores.observed(i, 0) = parse_double(f[0], where);
    scores.observed(i, 1) = parse_double(f[1], where);
    scores.latent(i, 0) = parse_double(f[2], where);
    scores.latent(i, 1) = parse_double(f[3], where);
  }
  return scores;
}

void write_battery_csv(const std::vector<ReliabilityEstimate>& estimates, Transform condition,
                       const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "name,raw,clamped,direction,condition\n";
  for (const ReliabilityEstimate& e : estimates) {
    out << to_string(e.name) << ',' << format_real(e.value) << ',' << format_real(e.clamped())
        << ',' << to_string(e.direction) << ',' << to_string(condition) << '\n';
  }
  finish_out(out, path);
}

void write_aggregate_csv(const AggregateTable& table, const std::filesystem::path& path) {
  std::ofstream out = open_out(path);
  out << "m,condition,metric,mean,sd,count\n";
  for (const AggregateCell& cell : table.cells) {
    out << cell.m << ',' << to_string(cell.condition) << ',' << cell.metric << ','
        << format_real(cell.mean) << ',' << format_real(cell.sd) << ',' << cell.count << '\n';
  }
  finish_out(out, path);
}

AggregateTable read_aggregate_csv(const std::filesystem::path& path) {
  const std::vector<std::string> lines = read_lines(path);
  expect_header(lines, {"m", "condition", "metric", "mean", "sd", "count"}, path);
  AggregateTable table;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = path.string() + ":" + std::to_string(i + 1);
    const std::vector<std::string> f = split_fields(lines[i]);
    if (f.size() != 6) throw InvalidArgument(where + ": expected 6 fields");
    AggregateCell cell;
    cell.m = parse_int(f[0], where);
    cell.condition = transform_from_string(f[1]);
    cell.metric = f[2];
    cell.mean = parse_double(f[3], where);
    cell.sd = parse_double(f[4], where);
    cell.count = parse_int(f[5], where);
    table.cells.push_back(std::move(cell));
  }
  return table;
}

}  // namespace relkit
