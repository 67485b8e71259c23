// Copyright (c) 2026 The csie Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "csie/assembly.hpp"
#include "csie/eig.hpp"

namespace csie {

// 17 significant digits, so reruns produce identical files.
std::string fmt(double x);
std::string fmt(int x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const Table& t);
void write_csv_file(const std::string& path, const Table& t);

// <prefix>.csv holds (i, j, re, im) for every nonzero entry, <prefix>.json the
// header {dim, sigma, R, form, basis, structure}.
void write_operator(const std::string& prefix, const assembly::RadialOperator& op);
assembly::RadialOperator read_operator(const std::string& prefix);

// columns nu, N, sigma_re, sigma_im, eps_tilde, omega_re, omega_im, residual, classification
Table resonance_table(const std::vector<eig::ResonanceSet>& sets);

}  // namespace csie
