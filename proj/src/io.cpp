#include "so21osc/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace so21 {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  return out;
}

double parse_number(const std::string& s, std::size_t row) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::BadInput,
                "row " + std::to_string(row) + ": cannot parse '" + s + "' as a number");
  }
}

}  // namespace

std::vector<ProfileSample> read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::BadInput, "empty profile file");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  auto head = split(line);
  if (head != std::vector<std::string>{"t", "omega", "n1", "n2", "n3"})
    throw Error(ErrorKind::BadInput, "row 0: header must be t,omega,n1,n2,n3");
  std::vector<ProfileSample> out;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (trim(line).empty()) continue;
    auto c = split(line);
    if (c.size() != 5)
      throw Error(ErrorKind::BadInput,
                  "row " + std::to_string(row) + ": expected 5 fields, got " + std::to_string(c.size()));
    out.push_back({parse_number(c[0], row), parse_number(c[1], row), parse_number(c[2], row),
                   parse_number(c[3], row), parse_number(c[4], row)});
  }
  return out;
}

std::vector<ProfileSample> read_profile_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorKind::BadInput, "cannot open profile file '" + path + "'");
  return read_profile_csv(f);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& tr) {
  out << "t,e1,e2,e3";
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) out << ",E" << i << j;
  out << ",Q11,Q12,Q21,Q22,A1,A2\n";
  for (std::size_t k = 0; k < tr.size(); ++k) {
    out << fmt(tr.t[k]);
    for (int i = 0; i < 3; ++i) out << ',' << fmt(tr.e[k][i]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) out << ',' << fmt(tr.E[k](i, j));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) out << ',' << fmt(tr.Eq[k](i, j));
    out << ',' << fmt(tr.A1[k]) << ',' << fmt(tr.A2[k]) << '\n';
  }
}

void write_orbit_csv(std::ostream& out, const std::vector<double>& t,
                     const std::vector<MomentState>& states) {
  out << "t,xbar,pbar,dx,dp,cov\n";
  for (std::size_t k = 0; k < states.size(); ++k) {
    Variances v = variances(states[k]);
    out << fmt(t[k]) << ',' << fmt(states[k].xbar) << ',' << fmt(states[k].pbar) << ','
        << fmt(v.dx) << ',' << fmt(v.dp) << ',' << fmt(v.cov) << '\n';
  }
}

}  // namespace so21
