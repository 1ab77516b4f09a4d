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


// metriq command-line driver.
//
// Exit codes: 0 ok / accept, 1 reject, 2 domain error, 3 I/O or parse
// error, 64 usage error.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "metriq/io.hpp"
#include "metriq/metriq.hpp"

namespace {

using metriq::io::json;

constexpr int kExitOk = 0;
constexpr int kExitReject = 1;
constexpr int kExitDomain = 2;
constexpr int kExitIo = 3;
constexpr int kExitUsage = 64;
constexpr std::uint64_t kDefaultShots = 100000;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> shots;
  std::string out;
  std::string format;
};

void add_common(CLI::App* cmd, CommonOptions& o, const std::string& default_format,
                std::vector<std::string> formats) {
  cmd->add_option("--config", o.config, "JSON config file")->required();
  cmd->add_option("--seed", o.seed, "RNG seed (overrides the config)");
  cmd->add_option("--shots", o.shots, "requested successes N per run (overrides the config; default 100000)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output file (default: stdout)");
  o.format = default_format;
  cmd->add_option("--format", o.format, "output format")
      ->check(CLI::IsMember(std::move(formats)))
      ->capture_default_str();
}

unsigned threads_from_env() {
  const char* env = std::getenv("METRIQ_THREADS");
  if (env == nullptr || *env == '\0') return 1;
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing");
    return static_cast<unsigned>(v);
  } catch (const std::exception&) {
    throw UsageError(std::string("METRIQ_THREADS must be a non-negative integer, got \"") + env + "\"");
  }
}

std::uint64_t resolve_seed(const CommonOptions& o, const json& cfg) {
  if (o.seed) return *o.seed;
  if (cfg.contains("seed")) return metriq::io::detail::unsigned_integer(cfg.at("seed"), "seed");
  throw UsageError("a seed is required (--seed or \"seed\" in the config)");
}

std::uint64_t resolve_shots(const CommonOptions& o, const json& cfg) {
  std::uint64_t n = kDefaultShots;
  if (o.shots) {
    n = *o.shots;
  } else if (cfg.contains("shots")) {
    n = metriq::io::detail::unsigned_integer(cfg.at("shots"), "shots");
  }
  if (n < 1) throw UsageError("shots must be at least 1");
  return n;
}

std::uint64_t config_stream(const json& cfg) {
  return cfg.contains("stream") ? metriq::io::detail::unsigned_integer(cfg.at("stream"), "stream") : 0;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  if (!out.flush()) throw IoError("write to " + path + " failed");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string simulation_output(const metriq::SimulationRecord& rec, double analytic, const std::string& command,
                              const std::string& format) {
  if (format == "csv") {
    return std::string(metriq::io::kCsvHeader) + "\n" + metriq::io::csv_row(rec, analytic) + "\n";
  }
  json j = metriq::io::to_json(rec);
  j["command"] = command;
  j["analytic_prob"] = analytic;
  j["abs_error"] = std::abs(rec.success_ratio - analytic);
  return dump(j);
}

int cmd_metric_validate(const CommonOptions& o) {
  const json cfg = metriq::io::read_json_file(o.config);
  const json& block = cfg.contains("metric") ? cfg.at("metric") : cfg;
  const metriq::ComplexMatrix m = metriq::io::metric_matrix_from_json(block);
  json report;
  std::ostringstream text;
  int code = kExitOk;
  try {
    const auto eta = metriq::validate_metric(m);
    const auto& ev = eta.eigensystem().eigenvalues;
    report = {{"valid", true},
              {"eigenvalues", ev},
              {"norm", eta.norm()},
              {"subidentity", eta.subidentity()}};
    text << "valid, eigenvalues [";
    for (std::size_t i = 0; i < ev.size(); ++i) text << (i ? ", " : "") << metriq::io::format_shortest(ev[i]);
    text << "], norm " << metriq::io::format_shortest(eta.norm()) << ", "
         << (eta.subidentity() ? "subidentity" : "not subidentity") << "\n";
  } catch (const metriq::Error& e) {
    report = {{"valid", false}, {"error", std::string(metriq::to_string(e.code()))}, {"message", e.what()}};
    text << "invalid, " << e.what() << "\n";
    code = kExitDomain;
  }
  emit(o.out, o.format == "json" ? dump(report) : text.str());
  return code;
}

int cmd_simulate_g_eta(const CommonOptions& o) {
  const json cfg = metriq::io::read_json_file(o.config);
  const auto eta = metriq::validate_metric(metriq::io::metric_matrix_from_json(metriq::io::detail::field(cfg, "metric")));
  const auto rho = metriq::io::matrix_from_json(metriq::io::detail::field(cfg, "rho"));
  const metriq::RngStream rng{resolve_seed(o, cfg), config_stream(cfg)};
  const std::uint64_t n = resolve_shots(o, cfg);
  const auto rec = metriq::simulate_g_eta(eta, rho, n, rng);
  const metriq::ComplexMatrix sigma = rho.rows() == 2 ? metriq::embed(rho) : rho;
  const double analytic = metriq::apply(metriq::honest_channel(eta), sigma).trace().real();
  emit(o.out, simulation_output(rec, analytic, "simulate g-eta", o.format));
  return kExitOk;
}

int cmd_simulate_pt(const CommonOptions& o) {
  const json cfg = metriq::io::read_json_file(o.config);
  const auto params = metriq::io::pt_from_json(metriq::io::detail::field(cfg, "pt"));
  const auto rho = metriq::io::matrix_from_json(metriq::io::detail::field(cfg, "rho"));
  const metriq::RngStream rng{resolve_seed(o, cfg), config_stream(cfg)};
  const std::uint64_t n = resolve_shots(o, cfg);
  const auto sys = metriq::build_pt_system(params.hamiltonian);
  const auto rec = metriq::simulate_pt(sys, rho, params.t, n, rng);
  const double analytic = metriq::chained_success_probability(sys, rho, params.t);
  emit(o.out, simulation_output(rec, analytic, "simulate pt", o.format));
  return kExitOk;
}

metriq::ProverModel prover_from_json(const json& j) {
  const auto& kind = metriq::io::detail::field(j, "kind");
  if (kind == "honest") return metriq::ProverModel::honest();
  if (kind != "dishonest") throw metriq::ParseError("prover kind must be \"honest\" or \"dishonest\"");
  const auto& us = metriq::io::detail::field(j, "unitaries");
  const auto& ps = metriq::io::detail::field(j, "probabilities");
  if (!us.is_array() || !ps.is_array()) throw metriq::ParseError("unitaries and probabilities must be arrays");
  std::vector<metriq::ComplexMatrix> unitaries;
  std::vector<double> probabilities;
  for (const auto& u : us) unitaries.push_back(metriq::io::matrix_from_json(u));
  for (const auto& p : ps) probabilities.push_back(metriq::io::detail::number(p, "probability"));
  return metriq::ProverModel::dishonest(std::move(unitaries), std::move(probabilities));
}

int cmd_verify(const CommonOptions& o) {
  const json cfg = metriq::io::read_json_file(o.config);
  const auto eta = metriq::validate_metric(metriq::io::metric_matrix_from_json(metriq::io::detail::field(cfg, "metric")));
  const auto model = prover_from_json(metriq::io::detail::field(cfg, "prover"));
  const bool exact = cfg.contains("exact") && cfg.at("exact").is_boolean() && cfg.at("exact").get<bool>();
  const std::uint64_t seed = resolve_seed(o, cfg);
  const std::uint64_t n = resolve_shots(o, cfg);
  // fail fast on a degenerate metric before any prover work
  (void)metriq::threshold(eta);

  const auto design = metriq::default_design();
  metriq::ProverOptions popts;
  popts.exact = exact;
  popts.threads = threads_from_env();
  const auto responses = metriq::run_prover(model, eta, design, n, metriq::RngStream{seed, config_stream(cfg)}, popts);
  auto report = metriq::verify(eta, metriq::reconstruct(responses, design));
  report.seed = seed;
  report.shots_per_input = exact ? 0 : n;

  std::string text;
  if (o.format == "csv") {
    text = "seed,N,distance,threshold,verdict,lambda_1,lambda_2\n" + std::to_string(seed) + "," +
           std::to_string(report.shots_per_input) + "," + metriq::io::format_double(report.distance) + "," +
           metriq::io::format_double(report.threshold) + "," + std::string(metriq::to_string(report.verdict)) +
           "," + metriq::io::format_double(report.eta_eigenvalues.first) + "," +
           metriq::io::format_double(report.eta_eigenvalues.second) + "\n";
  } else {
    text = dump(metriq::io::to_json(report));
  }
  emit(o.out, text);
  return report.verdict == metriq::Verdict::kAccept ? kExitOk : kExitReject;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"metriq: metric-operator channels, PT-symmetric dilation and channel verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "metriq 0.1.0");

  CommonOptions validate_opts, geta_opts, pt_opts, verify_opts;

  auto* metric = app.add_subcommand("metric", "metric operator utilities")->require_subcommand(1);
  auto* validate = metric->add_subcommand("validate", "check that a matrix is a valid metric operator");
  validate->add_option("--config", validate_opts.config, "JSON file with {\"dim\", \"matrix\"} or {\"metric\": ...}")
      ->required();
  validate->add_option("--out", validate_opts.out, "output file (default: stdout)");
  validate_opts.format = "text";
  validate->add_option("--format", validate_opts.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "shot-level qutrit simulations")->require_subcommand(1);
  auto* geta = simulate->add_subcommand("g-eta", "dilation procedure for G_eta until N successes");
  add_common(geta, geta_opts, "csv", {"csv", "json"});
  auto* pt = simulate->add_subcommand("pt", "chained dilation for exp(-iHt) with PT-symmetric H");
  add_common(pt, pt_opts, "csv", {"csv", "json"});

  auto* verify = app.add_subcommand("verify", "tomographic verification of a G_eta prover");
  add_common(verify, verify_opts, "json", {"csv", "json"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*validate) return cmd_metric_validate(validate_opts);
    if (*geta) return cmd_simulate_g_eta(geta_opts);
    if (*pt) return cmd_simulate_pt(pt_opts);
    if (*verify) return cmd_verify(verify_opts);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const metriq::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitIo;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const metriq::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}
