// Copyright 2026 The Flotilla Authors
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

// flotilla: run, sweep, collision-map, gamma-max, certify, fit, validate.
//
// Exit codes: 0 success, 1 invalid input or runtime error, 2 certificate
// failure. Errors are printed to stderr as one JSON object.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "flotilla/artifacts.hpp"
#include "flotilla/certificate.hpp"
#include "flotilla/collision.hpp"
#include "flotilla/error.hpp"
#include "flotilla/hydro.hpp"
#include "flotilla/scenario.hpp"
#include "flotilla/sim.hpp"

namespace fs = std::filesystem;
using flotilla::ValidationError;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitCertificate = 2;

int ReportError(const std::string& kind, const std::vector<std::string>& issues) {
  json j{{"error", kind}, {"issues", issues}};
  std::cerr << j.dump() << '\n';
  return kExitInvalid;
}

void PrintJson(const json& j) { std::cout << j.dump(2) << '\n'; }

// Reads a numeric CSV with a header row; returns named columns.
std::vector<std::vector<double>> ReadCsv(const fs::path& path,
                                         const std::vector<std::string>& want) {
  std::ifstream in(path);
  if (!in) throw ValidationError({"cannot open " + path.string()});
  std::string line;
  if (!std::getline(in, line)) throw ValidationError({"empty CSV file"});
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header != want) {
    std::string expected;
    for (const auto& w : want) expected += (expected.empty() ? "" : ",") + w;
    throw ValidationError({"CSV header must be '" + expected + "'"});
  }
  std::vector<std::vector<double>> cols(want.size());
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= want.size()) break;
      try {
        std::size_t used = 0;
        cols[c].push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw ValidationError({"line " + std::to_string(line_no) +
                               ": not a number: '" + cell + "'"});
      }
      ++c;
    }
    if (c != want.size()) {
      throw ValidationError({"line " + std::to_string(line_no) + ": expected " +
                             std::to_string(want.size()) + " columns"});
    }
  }
  return cols;
}

flotilla::TailShape ShapeFrom(double r_t, double r_p, double theta_w) {
  flotilla::TailShape s{r_t, r_p, theta_w};
  s.Validate();
  return s;
}

json RunOne(const flotilla::Scenario& sc, const fs::path& out,
            std::uint64_t seed, bool* certificate_ok) {
  const auto result = flotilla::RunScenario(sc, seed);
  flotilla::WriteRunArtifacts(out, sc, result, seed);
  *certificate_ok = result.certificates.ok();
  return flotilla::MetricsJson(sc, result, seed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice swimmer configurations: simulation, control and "
               "collision certification"};
  app.require_subcommand(1);

  std::string scenario_path, out_dir = "out", input_path, kind, commands_path;
  std::uint64_t seed = 0;
  int samples_per_cycle = 720;
  double resolution = 0.02;
  double r_t = 0.0762, r_p = 0.015, theta_w = 0.62;
  double mass = 0.0;
  std::string offset_kind = "front-back";
  double gamma_cap = 10.0;

  auto* run = app.add_subcommand("run", "Simulate one scenario");
  run->add_option("--scenario", scenario_path, "Scenario JSON")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--seed", seed, "Noise seed");
  run->add_option("--samples-per-cycle", samples_per_cycle,
                  "Certificate time samples per cycle (>= 720)");

  auto* sweep = app.add_subcommand(
      "sweep", "Cartesian sweep over targets and configurations");
  sweep->add_option("--scenario", scenario_path, "Sweep JSON")->required();
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_option("--seed", seed, "Base noise seed");
  sweep->add_option("--samples-per-cycle", samples_per_cycle,
                    "Certificate time samples per cycle (>= 720)");

  auto* cmap = app.add_subcommand("collision-map",
                                  "Export the (phi1, phi2) collision space");
  cmap->add_option("--out", out_dir, "Output directory");
  cmap->add_option("--resolution", resolution, "Grid spacing, rad");
  cmap->add_option("--offset", offset_kind, "front-back or side-by-side")
      ->check(CLI::IsMember({"front-back", "side-by-side"}));
  cmap->add_option("--r-t", r_t, "Top-body radius, m");
  cmap->add_option("--r-p", r_p, "Tip protrusion, m");
  cmap->add_option("--theta-w", theta_w, "Protrusion half-width, rad");

  auto* gmax = app.add_subcommand("gamma-max",
                                  "Largest safe wake gain for vertical pairs");
  gmax->add_option("--resolution", resolution, "Segment sample spacing, rad");
  gmax->add_option("--r-t", r_t, "Top-body radius, m");
  gmax->add_option("--r-p", r_p, "Tip protrusion, m");
  gmax->add_option("--theta-w", theta_w, "Protrusion half-width, rad");
  gmax->add_option("--gamma-cap", gamma_cap, "Search limit");

  auto* cert = app.add_subcommand("certify",
                                  "Certify one cycle of waveform commands");
  cert->add_option("--commands", commands_path, "Commands JSON")->required();
  cert->add_option("--out", out_dir, "Output directory");
  cert->add_option("--samples-per-cycle", samples_per_cycle,
                   "Time samples per cycle (>= 720)");

  auto* fit = app.add_subcommand("fit", "Fit drag or thrust-loss parameters");
  fit->add_option("kind", kind, "drag-linear, drag-angular or alpha")
      ->required()
      ->check(CLI::IsMember({"drag-linear", "drag-angular", "alpha"}));
  fit->add_option("--input", input_path, "Input CSV")->required();
  fit->add_option("--mass", mass,
                  "Mass (kg) for drag-linear, inertia (kg m^2) for drag-angular");
  fit->add_option("--out", out_dir, "Output directory");

  auto* validate = app.add_subcommand("validate", "Validate a scenario file");
  validate->add_option("--scenario", scenario_path, "Scenario JSON")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      auto sc = flotilla::LoadScenario(scenario_path);
      sc.certificate.samples_per_cycle = samples_per_cycle;
      sc.certificate.Validate();
      bool ok = true;
      json metrics = RunOne(sc, out_dir, seed, &ok);
      PrintJson(metrics);
      if (!ok) {
        std::cerr << json{{"error", "certificate"},
                          {"issues", {"certificate failed; see " +
                                      (fs::path(out_dir) / "certificate.json")
                                          .string()}}}
                         .dump()
                  << '\n';
        return kExitCertificate;
      }
      return kExitOk;
    }

    if (*sweep) {
      const fs::path path(scenario_path);
      const json input = flotilla::ReadJsonFile(path);
      if (!input.is_object() || !input.contains("base") ||
          !input.at("base").is_object()) {
        throw ValidationError({"sweep file needs a base scenario object"});
      }
      const json axes = input.value("sweep", json::object());
      auto axis = [&](const char* key) {
        std::vector<json> values;
        if (axes.contains(key)) {
          if (!axes.at(key).is_array() || axes.at(key).empty()) {
            throw ValidationError(
                {std::string("sweep.") + key + " must be a non-empty array"});
          }
          for (const auto& v : axes.at(key)) values.push_back(v);
        } else {
          values.push_back(nullptr);
        }
        return values;
      };
      const auto velocities = axis("velocity");
      const auto yaws = axis("yaw");
      const auto configs = axis("configurations");
      std::vector<json> runs;
      for (const auto& cfg : configs) {
        for (const auto& v : velocities) {
          for (const auto& y : yaws) {
            json s = input.at("base");
            if (!cfg.is_null()) {
              s.erase("configuration_file");
              s["configuration"] = cfg;
            }
            if (!v.is_null()) s["targets"]["velocity"] = v;
            if (!y.is_null()) s["targets"]["yaw"] = y;
            runs.push_back(std::move(s));
          }
        }
      }
      std::vector<flotilla::Scenario> scenarios;
      for (std::size_t i = 0; i < runs.size(); ++i) {
        scenarios.push_back(flotilla::ParseScenario(runs[i], path.parent_path()));
        scenarios.back().name += "_" + std::to_string(i);
        scenarios.back().canonical["name"] = scenarios.back().name;
        scenarios.back().certificate.samples_per_cycle = samples_per_cycle;
        scenarios.back().certificate.Validate();
      }
      std::vector<json> summaries(scenarios.size());
      std::vector<int> oks(scenarios.size(), 1);
      std::vector<std::string> errors(scenarios.size());
      const int count = static_cast<int>(scenarios.size());
#pragma omp parallel for schedule(dynamic)
      for (int i = 0; i < count; ++i) {
        const auto idx = static_cast<std::size_t>(i);
        char name[32];
        std::snprintf(name, sizeof(name), "run_%04d", i);
        try {
          bool ok = true;
          summaries[idx] = RunOne(scenarios[idx], fs::path(out_dir) / name,
                                  seed + static_cast<std::uint64_t>(i), &ok);
          summaries[idx]["directory"] = name;
          oks[idx] = ok ? 1 : 0;
        } catch (const std::exception& e) {
          errors[idx] = e.what();
        }
      }
      for (const auto& e : errors) {
        if (!e.empty()) throw std::runtime_error(e);
      }
      fs::create_directories(out_dir);
      flotilla::WriteJsonFile(fs::path(out_dir) / "sweep.json",
                              json{{"runs", summaries}});
      std::cout << json{{"runs", summaries.size()},
                        {"certificate_failures",
                         std::count(oks.begin(), oks.end(), 0)}}
                       .dump(2)
                << '\n';
      return std::count(oks.begin(), oks.end(), 0) ? kExitCertificate : kExitOk;
    }

    if (*cmap) {
      const auto shape = ShapeFrom(r_t, r_p, theta_w);
      const flotilla::Vec2 offset = offset_kind == "front-back"
                                        ? flotilla::FrontBackOffset(shape)
                                        : flotilla::SideBySideOffset(shape);
      const auto space = flotilla::ComputeCollisionSpace(offset, shape, resolution);
      fs::create_directories(out_dir);
      {
        std::ofstream csv(fs::path(out_dir) / "collision_map.csv", std::ios::binary);
        space.WriteCsv(csv);
        std::ofstream pgm(fs::path(out_dir) / "collision_map.pgm", std::ios::binary);
        space.WritePgm(pgm);
      }
      json summary{{"offset", offset_kind},
                   {"offset_m", {offset.x, offset.y}},
                   {"resolution", resolution},
                   {"grid", space.size()},
                   {"colliding_cells", space.CollidingCount()},
                   {"components", space.ComponentCount()},
                   {"tail", {{"r_t", r_t}, {"r_p", r_p}, {"theta_w", theta_w}}}};
      flotilla::WriteJsonFile(fs::path(out_dir) / "collision_map.json", summary);
      PrintJson(summary);
      return kExitOk;
    }

    if (*gmax) {
      const auto shape = ShapeFrom(r_t, r_p, theta_w);
      flotilla::GammaSearchOptions opt;
      opt.resolution = resolution;
      opt.gamma_cap = gamma_cap;
      const auto r = flotilla::MaxSafeGamma(shape, opt);
      json j{{"gamma_max", r.gamma_max},
             {"constrained", r.constrained},
             {"contact_phi1", r.contact_phi1},
             {"resolution", resolution},
             {"evaluations", r.evaluations}};
      if (!r.constrained) j["note"] = "no constraint up to the search limit";
      PrintJson(j);
      return kExitOk;
    }

    if (*cert) {
      const fs::path path(commands_path);
      const json input = flotilla::ReadJsonFile(path);
      std::vector<std::string> issues;
      if (!input.is_object() || !input.contains("configuration") ||
          !input.contains("commands") || !input.at("commands").is_array()) {
        throw ValidationError(
            {"commands file needs configuration and a commands array"});
      }
      const auto config = flotilla::ParseConfiguration(input.at("configuration"));
      const double omega = input.value("omega", flotilla::kDefaultOmega);
      std::vector<flotilla::WaveformCommand> cmds;
      for (const auto& c : input.at("commands")) {
        flotilla::WaveformCommand w;
        w.omega = c.contains("omega") ? c.at("omega").get<double>() : omega;
        w.amplitude = c.at("amplitude").get<double>();
        const std::string cl = c.value("centerline", std::string("forward"));
        if (cl != "forward" && cl != "reverse") {
          issues.push_back("centerline must be forward or reverse");
        }
        w.centerline = cl == "reverse" ? flotilla::Centerline::kReverse
                                       : flotilla::Centerline::kForward;
        cmds.push_back(w);
      }
      if (!issues.empty()) throw ValidationError(issues);
      flotilla::CertificateOptions opt;
      opt.samples_per_cycle = samples_per_cycle;
      if (input.contains("gamma_limit")) {
        opt.gamma_limit = input.at("gamma_limit").get<double>();
      }
      const auto c = flotilla::CertifyNoUndock(config.configuration, cmds, opt);
      json j = flotilla::ToJson(c, config.configuration);
      j["samples_per_cycle"] = samples_per_cycle;
      fs::create_directories(out_dir);
      flotilla::WriteJsonFile(fs::path(out_dir) / "certificate.json", j);
      PrintJson(j);
      return c.ok ? kExitOk : kExitCertificate;
    }

    if (*fit) {
      json report{{"kind", kind}, {"input", input_path}};
      if (kind == "alpha") {
        const auto cols = ReadCsv(input_path, {"k", "amplitude", "force"});
        std::vector<flotilla::ThrustSample> samples;
        for (std::size_t i = 0; i < cols[0].size(); ++i) {
          samples.push_back({static_cast<int>(cols[0][i]), cols[1][i], cols[2][i]});
        }
        const auto r = flotilla::FitThrustSlopes(samples);
        report["slopes"] = r.slopes;
        report["intercept"] = r.intercept;
        report["alpha"] = r.alpha;
        report["gamma"] = r.gamma;
        report["rms_residual"] = r.rms_residual;
        report["iterations"] = r.iterations;
        report["converged"] = true;
      } else {
        if (!(mass > 0.0)) {
          throw ValidationError({"--mass must be positive for drag fits"});
        }
        const bool linear = kind == "drag-linear";
        const auto cols = ReadCsv(input_path, {"t", linear ? "v" : "omega"});
        const auto r = flotilla::FitDecay(cols[0], cols[1], mass);
        report[linear ? "c_l_kg_per_m" : "c_r_kgm2"] = r.coefficient;
        report[linear ? "mass_kg" : "inertia_kgm2"] = mass;
        report["v0"] = r.v0;
        report["rms_residual"] = r.rms_residual;
        report["iterations"] = r.iterations;
        report["converged"] = r.converged;
      }
      fs::create_directories(out_dir);
      flotilla::WriteJsonFile(fs::path(out_dir) / "fit.json", report);
      PrintJson(report);
      return kExitOk;
    }

    if (*validate) {
      const auto sc = flotilla::LoadScenario(scenario_path);
      PrintJson(json{{"valid", true},
                     {"scenario", sc.name},
                     {"scenario_hash", flotilla::ScenarioHash(sc)},
                     {"modules", sc.configuration.configuration.size()}});
      return kExitOk;
    }
  } catch (const ValidationError& e) {
    return ReportError("validation", e.issues());
  } catch (const flotilla::FitError& e) {
    return ReportError("fit", {e.what()});
  } catch (const std::invalid_argument& e) {
    return ReportError("invalid", {e.what()});
  } catch (const std::exception& e) {
    return ReportError("runtime", {e.what()});
  }
  return kExitOk;
}
