// Copyright 2026 The metriq Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


// Success ratio of the chained PT simulation against its analytic value over
// a time sweep, as plot-ready CSV on stdout.
//
//   pt_sweep [N] [seed]

#include <cstdint>
#include <iostream>
#include <numbers>
#include <string>

#include "metriq/io.hpp"
#include "metriq/metriq.hpp"

int main(int argc, char** argv) {
  const std::uint64_t n = argc > 1 ? std::stoull(argv[1]) : 10000;
  const std::uint64_t seed = argc > 2 ? std::stoull(argv[2]) : 1;

  const auto sys = metriq::build_pt_system({1.0, 2.0, std::numbers::pi / 6.0});
  const metriq::ComplexMatrix rho = metriq::ComplexMatrix::diagonal({1.0, 0.0});

  std::cout << "t," << metriq::io::kCsvHeader << ",trace_distance\n";
  for (int step = 0; step <= 40; ++step) {
    const double t = 0.125 * step;
    const auto rec = metriq::simulate_pt(sys, rho, t, n, metriq::RngStream{seed, static_cast<std::uint64_t>(step)});
    const auto exact = metriq::analytic_pt_evolution(sys, rho, t);
    const double td = 0.5 * metriq::trace_norm(rec.qubit_state() - exact.state);
    std::cout << metriq::io::format_double(t) << ',' << metriq::io::csv_row(rec, exact.probability) << ','
              << metriq::io::format_double(td) << '\n';
  }
}
