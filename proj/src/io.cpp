#include "ccs/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <tuple>

#include "ccs/version.hpp"

namespace ccs {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError("not a number: '" + s + "'");
  return v;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string header_line(const OutputHeader& header) {
  return std::string("# ccs ") + kVersion + " seed=" + std::to_string(header.seed) +
         " config=" + header.config_hash + "\n";
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary keeps line endings stable
  if (!out) throw ValidationError("cannot open for writing: " + path);
  return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (ch != '\r') {
      cur += ch;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void write_omega_grid_csv(const std::string& path, const OutputHeader& header,
                          const PrecisionField& field) {
  std::ofstream out = open_out(path);
  out << header_line(header) << "z,u,v,value\n";
  int p = field.p();
  for (std::size_t k = 0; k < field.matrices.size(); ++k) {
    std::string z = format_double(field.grid.points[k]);
    for (int u = 0; u < p; ++u)
      for (int v = u; v < p; ++v)
        out << z << ',' << u << ',' << v << ',' << format_double(field.matrices[k](u, v))
            << '\n';
  }
}

void write_support_csv(const std::string& path, const OutputHeader& header,
                       const PrecisionField& field) {
  std::ofstream out = open_out(path);
  out << header_line(header) << "u,v,group_norm\n";
  for (const auto& e : field.support.edges)
    out << e.first << ',' << e.second << ','
        << format_double(field.group_norms(e.first, e.second)) << '\n';
}

void write_ci_csv(const std::string& path, const OutputHeader& header,
                  const ConfidenceBand& band) {
  std::ofstream out = open_out(path);
  out << header_line(header) << "z,u,v,point,lower,upper\n";
  Eigen::Index p = band.point.empty() ? 0 : band.point[0].rows();
  for (std::size_t k = 0; k < band.point.size(); ++k) {
    std::string z = format_double(band.grid.points[k]);
    for (Eigen::Index u = 0; u < p; ++u)
      for (Eigen::Index v = u; v < p; ++v)
        out << z << ',' << u << ',' << v << ',' << format_double(band.point[k](u, v)) << ','
            << format_double(band.lower[k](u, v)) << ','
            << format_double(band.upper[k](u, v)) << '\n';
  }
}

void write_pr_curve_csv(const std::string& path, const OutputHeader& header,
                        const std::vector<PrCurveRow>& rows) {
  std::ofstream out = open_out(path);
  out << header_line(header) << "lambda,precision,recall,f1,hamming\n";
  for (const PrCurveRow& r : rows)
    out << format_double(r.lambda) << ',' << format_double(r.precision) << ','
        << format_double(r.recall) << ',' << format_double(r.f1) << ','
        << format_double(r.hamming) << '\n';
}

void write_traces_csv(const std::string& path, const OutputHeader& header,
                      const std::vector<std::pair<std::string, SolveReport>>& traces) {
  std::ofstream out = open_out(path);
  out << header_line(header) << "solver,iteration,objective,seconds\n";
  for (const auto& [name, report] : traces)
    for (std::size_t i = 0; i < report.objective_trace.size(); ++i)
      out << name << ',' << i << ',' << format_double(report.objective_trace[i]) << ','
          << format_double(report.time_trace[i]) << '\n';
}

void write_dataset_csv(const std::string& path, const OutputHeader& header,
                       const IndexedSample& sample) {
  std::ofstream out = open_out(path);
  out << header_line(header) << "z";
  for (int j = 1; j <= sample.p(); ++j) out << ",x" << j;
  out << '\n';
  for (int i = 0; i < sample.n(); ++i) {
    out << format_double(sample.z[static_cast<std::size_t>(i)]);
    for (int j = 0; j < sample.p(); ++j) out << ',' << format_double(sample.x(i, j));
    out << '\n';
  }
}

PrecisionField read_omega_grid_csv(const std::string& path, double support_tol) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open: " + path);
  std::string line;
  std::vector<std::tuple<double, int, int, double>> rows;
  int max_index = -1;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // column header row
      continue;
    }
    std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 4) throw ValidationError("omega grid: expected 4 columns");
    double z = parse_double(f[0]);
    int u = static_cast<int>(parse_double(f[1]));
    int v = static_cast<int>(parse_double(f[2]));
    rows.emplace_back(z, u, v, parse_double(f[3]));
    max_index = std::max({max_index, u, v});
  }
  if (rows.empty()) throw ValidationError("omega grid: no data rows");

  int p = max_index + 1;
  PrecisionField field;
  std::map<double, Matrix> by_z;
  for (const auto& [z, u, v, value] : rows) {
    auto it = by_z.find(z);
    if (it == by_z.end()) it = by_z.emplace(z, Matrix::Zero(p, p)).first;
    it->second(u, v) = value;
    it->second(v, u) = value;
  }
  for (const auto& [z, m] : by_z) {
    field.grid.points.push_back(z);
    field.matrices.push_back(m);
  }
  field.group_norms = quad_mean(field.matrices);
  for (int u = 0; u < p; ++u)
    for (int v = u + 1; v < p; ++v)
      if (field.group_norms(u, v) > support_tol) field.support.insert(u, v);
  return field;
}

}  // namespace ccs
