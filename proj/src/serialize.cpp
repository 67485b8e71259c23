// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#include "csie/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace csie {

std::string format_complex(Complex z) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.17g%+.17gi)", z.real(), z.imag());
  return buf;
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(int x) { return std::to_string(x); }

void write_csv(std::ostream& os, const Table& t) {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

void write_csv_file(const std::string& path, const Table& t) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path + " for writing");
  write_csv(os, t);
  if (!os) throw std::runtime_error("write failed for " + path);
}

void write_operator(const std::string& prefix, const assembly::RadialOperator& op) {
  Table t;
  t.header = {"i", "j", "re", "im"};
  for (int j = 0; j < op.dim(); ++j)
    for (int i = 0; i < op.dim(); ++i) {
      Complex v = op.entries(i, j);
      if (v != Complex(0.0)) t.rows.push_back({fmt(i), fmt(j), fmt(v.real()), fmt(v.imag())});
    }
  write_csv_file(prefix + ".csv", t);

  nlohmann::ordered_json h;
  h["dim"] = op.dim();
  h["form"] = op.form;
  h["basis"] = assembly::to_string(op.basis);
  h["sigma"] = {op.cfg.sigma.real(), op.cfg.sigma.imag()};
  h["R"] = op.cfg.R;
  h["structure"] = {{"bandwidth", op.structure.bandwidth},
                    {"dense", op.structure.dense},
                    {"nnz_above_tol", op.structure.nnz},
                    {"tol", op.structure.tol}};
  std::ofstream os(prefix + ".json");
  if (!os) throw std::runtime_error("cannot open " + prefix + ".json for writing");
  os << h.dump(2) << '\n';
}

assembly::RadialOperator read_operator(const std::string& prefix) {
  std::ifstream hs(prefix + ".json");
  if (!hs) throw std::runtime_error("cannot open " + prefix + ".json");
  nlohmann::json h = nlohmann::json::parse(hs);
  assembly::RadialOperator op;
  const int n = h.at("dim").get<int>();
  op.form = h.at("form").get<std::string>();
  op.basis = assembly::basis_from_string(h.at("basis").get<std::string>());
  op.cfg.sigma = Complex(h.at("sigma")[0].get<double>(), h.at("sigma")[1].get<double>());
  op.cfg.R = h.at("R").get<double>();
  op.entries = Eigen::MatrixXcd::Zero(n, n);

  std::ifstream cs(prefix + ".csv");
  if (!cs) throw std::runtime_error("cannot open " + prefix + ".csv");
  std::string line;
  std::getline(cs, line);
  while (std::getline(cs, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string a, b, re, im;
    std::getline(ls, a, ',');
    std::getline(ls, b, ',');
    std::getline(ls, re, ',');
    std::getline(ls, im, ',');
    op.entries(std::stoi(a), std::stoi(b)) = Complex(std::stod(re), std::stod(im));
  }
  const auto& s = h.at("structure");
  op.structure.bandwidth = s.at("bandwidth").get<int>();
  op.structure.dense = s.at("dense").get<bool>();
  op.structure.nnz = s.at("nnz_above_tol").get<std::size_t>();
  op.structure.tol = s.at("tol").get<double>();
  return op;
}

Table resonance_table(const std::vector<eig::ResonanceSet>& sets) {
  Table t;
  t.header = {"nu", "N", "sigma_re", "sigma_im", "eps_tilde", "omega_re", "omega_im", "residual", "classification"};
  for (const auto& s : sets)
    for (const auto& p : s.pairs)
      t.rows.push_back({fmt(s.meta.nu), fmt(s.meta.N), fmt(s.meta.cfg.sigma.real()), fmt(s.meta.cfg.sigma.imag()),
                        fmt(s.meta.eps_tilde), fmt(p.omega.real()), fmt(p.omega.imag()), fmt(p.residual),
                        eig::to_string(p.classification)});
  return t;
}

}  // namespace csie
