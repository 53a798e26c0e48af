// Copyright 2026 The gateforge Authors
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

// gateforge: command-line front end. Exit codes: 0 success, 2 usage error,
// 3 entry budget exceeded.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "gateforge/gateforge.hpp"

namespace gf = gateforge;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  int dim = 2;
  int length = 8;
  int step = 2;
  std::size_t targets = 100;
  std::uint64_t seed = 1;
  int jmax = 50;
  std::string format = "csv";
  std::string out;
  std::string gateset;
  std::string cache;
  std::string strategy = "mitm";
  std::string target = "t8";
  std::size_t max_entries = gf::kDefaultMaxEntries;
  double delta = 1e-3;
  std::size_t samples = 0;  // 0: per-subcommand default
  double lambda = 0.0;      // 0: default for the gate set
  int m = 0;                // 0: minimal_m
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

gf::GateSet load_gateset(const Config& c, gf::GateSet fallback) {
  if (c.gateset.empty()) return fallback;
  gf::GateSet gs = gf::parse_gateset(read_file(c.gateset));
  if (gs.dim() != c.dim)
    throw UsageError("--gateset: file has dimension " + std::to_string(gs.dim()) +
                     " but --dim is " + std::to_string(c.dim));
  return gs;
}

unsigned thread_count() {
  if (const char* env = std::getenv("GATEFORGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1)
      throw UsageError("GATEFORGE_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

gf::NetCache make_cache(const Config& c) {
  return gf::NetCache(c.cache, gf::kDefaultDedupTol, c.max_entries);
}

void emit(const Config& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(c.out, std::ios::binary | std::ios::trunc);
  if (!file) throw UsageError("--out: cannot write '" + c.out + "'");
  file << text;
}

std::string dump(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------

std::string run_gates(const Config& c) {
  const gf::GateSet gs = load_gateset(c, gf::gd_generators(c.dim));
  if (c.format == "json") return gf::serialize_gateset(gs) + "\n";
  std::ostringstream out;
  out.precision(17);
  out << "label,row,col,re,im\n";
  for (std::size_t i = 0; i < gs.size(); ++i)
    for (int r = 0; r < gs.dim(); ++r)
      for (int col = 0; col < gs.dim(); ++col)
        out << gs.labels()[i] << ',' << r + 1 << ',' << col + 1 << ',' << gs[i](r, col).real()
            << ',' << gs[i](r, col).imag() << '\n';
  return out.str();
}

std::string run_net(const Config& c) {
  const gf::GateSet gs = load_gateset(c, gf::gd_generators(c.dim));
  const gf::Net net = gf::enumerate_net(gs, c.length, gf::kDefaultDedupTol, c.max_entries);
  if (c.format == "csv") {
    std::ostringstream out;
    gf::write_net_csv(out, net);
    return out.str();
  }
  nlohmann::ordered_json doc;
  doc["gateset"] = gf::content_hash_hex(gs);
  doc["generators"] = gs.size();
  doc["length"] = c.length;
  doc["dedup_tol"] = net.dedup_tol();
  doc["entries"] = net.size();
  doc["entries_by_length"] = nlohmann::json::array();
  for (int m = 0; m <= c.length; ++m) doc["entries_by_length"].push_back(net.count_at_length(m));
  return dump(doc);
}

gf::Unitary preset_target(const Config& c) {
  if (c.target == "haar") {
    gf::Rng rng = gf::make_rng(c.seed);
    return gf::haar_sample(c.dim, rng);
  }
  if (c.target == "t8" || c.target == "h" || c.target == "x") {
    if (c.dim != 2) throw UsageError("--target: preset '" + c.target + "' needs --dim 2");
    const gf::Complex i(0.0, 1.0);
    gf::Matrix m(2, 2);
    if (c.target == "t8") {
      m << std::polar(1.0, -std::numbers::pi / 8.0), 0.0, 0.0, std::polar(1.0, std::numbers::pi / 8.0);
    } else if (c.target == "h") {
      // i H has determinant one.
      m << i, i, i, -i;
      m /= std::sqrt(2.0);
    } else {
      m << 0.0, i, i, 0.0;
    }
    return gf::Unitary::from_matrix(std::move(m));
  }
  // Otherwise a gate-set file whose first generator is the target.
  const gf::GateSet file = gf::parse_gateset(read_file(c.target));
  if (file.size() == 0) throw UsageError("--target: file holds no matrix");
  if (file.dim() != c.dim)
    throw UsageError("--target: file has dimension " + std::to_string(file.dim()) +
                     " but --dim is " + std::to_string(c.dim));
  return file[0];
}

std::string compilation_text(const Config& c, const gf::CompilationResult& r) {
  std::ostringstream out;
  if (c.format == "json") {
    gf::write_compilation_json(out, r);
  } else {
    out.precision(17);
    out << "word,distance_op,distance_frob,searched,strategy\n"
        << gf::to_string(r.word) << ',' << r.distance_op << ',' << r.distance_frob << ','
        << r.searched << ',' << gf::to_string(r.strategy) << '\n';
  }
  return out.str();
}

std::string run_compile(const Config& c) {
  const gf::GateSet gs = load_gateset(c, gf::gd_generators(c.dim));
  const gf::Unitary target = preset_target(c);
  const auto strategy = c.strategy == "exhaustive" ? gf::Strategy::exhaustive : gf::Strategy::mitm;
  gf::NetCache cache = make_cache(c);
  try {
    return compilation_text(c, gf::compile(target, gs, c.length, strategy, cache));
  } catch (const gf::CompileBudgetExceeded& e) {
    std::cerr << "partial best over the searched part:\n" << compilation_text(c, e.partial_best());
    throw;
  }
}

std::string run_cover(const Config& c) {
  const gf::GateSet gs = load_gateset(c, gf::gd_generators(c.dim));
  std::vector<int> lengths;
  for (int n = c.step; n <= c.length; n += c.step) lengths.push_back(n);
  if (lengths.empty()) throw UsageError("--length: must be at least --step");
  gf::NetCache cache = make_cache(c);
  const gf::CoverReport report =
      gf::covering_stats(gs, lengths, c.targets, c.seed, {thread_count(), &cache});
  std::optional<gf::ScalingFit> fit;
  try {
    fit = gf::scaling_fit(report);
  } catch (const std::invalid_argument&) {
  }

  if (c.format == "csv") {
    if (fit)
      std::cerr << "scaling fit: slope " << fit->slope << " intercept " << fit->intercept
                << " r_squared " << fit->r_squared << " (natural log of max eps)\n";
    std::ostringstream out;
    gf::write_cover_csv(out, report);
    return out.str();
  }
  nlohmann::ordered_json doc;
  doc["gateset"] = report.gateset_id;
  doc["seed"] = report.seed;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : report.rows)
    doc["rows"].push_back({{"n", row.n},
                           {"mean_eps", row.mean_eps},
                           {"max_eps", row.max_eps},
                           {"targets", row.targets}});
  if (fit)
    doc["fit"] = {{"slope", fit->slope},
                  {"intercept", fit->intercept},
                  {"r_squared", fit->r_squared},
                  {"log", "natural"}};
  return dump(doc);
}

std::string run_gap(const Config& c) {
  if (c.dim != 2) throw UsageError("--dim: gap needs --dim 2");
  const gf::GateSet gs = load_gateset(c, gf::lps_generators());
  const gf::GapEstimate est = gf::lambda_estimate(gs, c.jmax);
  const std::optional<double> reference =
      gf::is_lps(gs) ? std::optional<double>(gf::kLpsLambda) : std::nullopt;
  if (c.format == "csv") {
    std::ostringstream out;
    gf::write_gap_csv(out, est, reference);
    return out.str();
  }
  nlohmann::ordered_json doc;
  doc["two_j_max"] = est.two_j_max;
  doc["block_norms"] = nlohmann::json::array();
  for (std::size_t i = 0; i < est.block_norms.size(); ++i)
    doc["block_norms"].push_back({{"two_j", i + 1}, {"block_norm", est.block_norms[i]}});
  doc["lambda_hat"] = est.lambda_hat;
  if (reference) doc["reference"] = *reference;
  return dump(doc);
}

std::string run_prop4(const Config& c) {
  const double lambda = c.lambda > 0.0 ? c.lambda : gf::kLpsLambda;
  const int minimal = gf::minimal_m(c.dim, lambda);
  const int m = c.m > 0 ? c.m : minimal;
  const gf::Prop4Bound b = gf::prop4_bound(c.dim, m, lambda);
  if (c.format == "csv") {
    std::ostringstream out;
    out.precision(17);
    out << "d,lambda,m,minimal_m,word_block_bound,per_step_bound,word_gap,log_per_step_bound\n"
        << c.dim << ',' << lambda << ',' << m << ',' << minimal << ',' << b.word_block_bound << ','
        << b.per_step_bound << ',' << b.word_gap << ',' << b.log_per_step_bound << '\n';
    return out.str();
  }
  nlohmann::ordered_json doc;
  doc["d"] = c.dim;
  doc["lambda"] = lambda;
  doc["m"] = m;
  doc["minimal_m"] = minimal;
  doc["word_block_bound"] = b.word_block_bound;
  doc["per_step_bound"] = b.per_step_bound;
  doc["word_gap"] = b.word_gap;
  doc["log_per_step_bound"] = b.log_per_step_bound;
  return dump(doc);
}

std::string run_haar(const Config& c) {
  const std::size_t samples = c.samples ? c.samples : 100000;
  const gf::MomentReport ds = gf::moment_report(gf::Sampler::ds, c.dim, samples, c.seed);
  const gf::MomentReport oracle = gf::moment_report(gf::Sampler::oracle, c.dim, samples, c.seed);
  if (c.format == "csv") {
    std::ostringstream out;
    gf::write_moment_csv(out, ds, true);
    gf::write_moment_csv(out, oracle, false);
    return out.str();
  }
  nlohmann::ordered_json doc;
  doc["d"] = c.dim;
  doc["count"] = samples;
  doc["seed"] = c.seed;
  for (const gf::MomentReport* r : {&ds, &oracle}) {
    auto& block = doc[gf::to_string(r->sampler)];
    block["entries"] = nlohmann::json::array();
    for (const auto& e : r->entries) {
      nlohmann::ordered_json row;
      if (e.is_trace()) {
        row["p"] = "tr";
        row["q"] = "tr";
      } else {
        row["p"] = e.p;
        row["q"] = e.q;
      }
      row["mean"] = e.mean;
      row["stderr"] = e.standard_error;
      row["haar_prediction"] = e.haar_prediction;
      row["deviation_sigmas"] = e.deviation_sigmas();
      block["entries"].push_back(row);
    }
    block["max_abs_deviation"] = r->max_abs_deviation();
    block["flagged_3_sigma"] = r->flagged(3.0).size();
  }
  return dump(doc);
}

std::string run_bounds(const Config& c) {
  const gf::GateSet gs = load_gateset(c, gf::gd_generators(c.dim));
  double lambda = c.lambda;
  if (lambda <= 0.0) {
    if (c.dim == 2) {
      lambda = gf::kLpsLambda;
    } else {
      lambda = gf::prop4_bound(c.dim, gf::minimal_m(c.dim, gf::kLpsLambda), gf::kLpsLambda)
                   .per_step_bound;
      if (!(lambda < 1.0))
        throw UsageError("--lambda: the composition bound for --dim " + std::to_string(c.dim) +
                         " rounds to 1; pass --lambda explicitly");
    }
  }
  gf::MonteCarloOptions mc;
  mc.seed = c.seed;
  if (c.samples) mc.samples = c.samples;
  const gf::VolumeConstants vc =
      gf::volume_constants_fit(c.dim, 0.5, gf::radius_grid(0.5, c.dim == 2 ? 50 : 10), mc);

  std::ostringstream out;
  out.precision(17);
  nlohmann::ordered_json doc;
  doc["d"] = c.dim;
  doc["lambda"] = lambda;
  doc["k1"] = vc.k1;
  doc["k2"] = vc.k2;
  doc["set_size"] = gs.size();
  doc["log"] = "natural";
  doc["rows"] = nlohmann::json::array();
  out << "eps,theorem1_length,lower_bound_length,d,lambda,k1,k2,set_size\n";
  for (double eps : {1.0, 0.1, 0.01, 1e-3, 1e-4, 1e-6}) {
    const gf::BoundInputs b{c.dim, lambda, vc.k1, vc.k2, gs.size(), eps};
    const int upper = gf::theorem1_length(b);
    const int lower = gf::lower_bound_length(b);
    std::ostringstream eps_text;  // default precision: 0.1 rather than 0.10000000000000001
    eps_text << eps;
    out << eps_text.str() << ',' << upper << ',' << lower << ',' << c.dim << ',' << lambda << ',' << vc.k1
        << ',' << vc.k2 << ',' << gs.size() << '\n';
    doc["rows"].push_back({{"eps", eps}, {"theorem1_length", upper}, {"lower_bound_length", lower}});
  }
  return c.format == "csv" ? out.str() : dump(doc);
}

std::string run_perturb(const Config& c) {
  const gf::GateSet gs =
      load_gateset(c, c.dim == 2 ? gf::diagonal_gateset() : gf::gd_generators(c.dim));
  const std::size_t samples = c.samples ? c.samples : 500;
  const double worst = gf::subgroup_experiment(gs, c.delta, c.length, samples, c.seed);
  const double bound = c.length * c.delta;
  if (c.format == "csv") {
    std::ostringstream out;
    out.precision(17);
    out << "delta,n,samples,seed,max_deviation,bound\n"
        << c.delta << ',' << c.length << ',' << samples << ',' << c.seed << ',' << worst << ','
        << bound << '\n';
    return out.str();
  }
  nlohmann::ordered_json doc;
  doc["delta"] = c.delta;
  doc["n"] = c.length;
  doc["samples"] = samples;
  doc["seed"] = c.seed;
  doc["max_deviation"] = worst;
  doc["bound"] = bound;
  return dump(doc);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gateforge: epsilon-nets, gate compilation and spectral gaps on SU(d)"};
  app.require_subcommand(1, 1);
  Config c;

  app.add_option("--dim", c.dim, "Dimension d of SU(d)")->check(CLI::Range(2, 16));
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", c.out, "Output file (default: standard output)");
  // Options shared by every subcommand may also follow the subcommand name.
  auto common = [](CLI::App* sub) { sub->fallthrough(); };
  auto gateset = [&](CLI::App* sub) {
    sub->add_option("--gateset", c.gateset, "Gate-set JSON file (default: built-in set)")
        ->check(CLI::ExistingFile);
  };
  auto budget = [&](CLI::App* sub) {
    sub->add_option("--cache", c.cache, "Directory for persisted nets");
    sub->add_option("--max-entries", c.max_entries, "Entry budget per net")
        ->check(CLI::PositiveNumber);
  };

  auto* gates = app.add_subcommand("gates", "Emit a built-in or loaded gate set");
  common(gates);
  gateset(gates);

  auto* net = app.add_subcommand("net", "Enumerate a net and report its size");
  common(net);
  gateset(net);
  budget(net);
  net->add_option("--length", c.length, "Length budget")->check(CLI::Range(0, 64));

  auto* compile = app.add_subcommand("compile", "Compile one target");
  common(compile);
  gateset(compile);
  budget(compile);
  compile->add_option("--length", c.length, "Length budget")->check(CLI::Range(0, 64));
  compile->add_option("--target", c.target,
                      "Preset t8, h, x, haar, or a gate-set JSON file whose first matrix is the target");
  compile->add_option("--strategy", c.strategy, "Search strategy")
      ->check(CLI::IsMember({"exhaustive", "mitm"}));

  auto* cover = app.add_subcommand("cover", "Covering radius versus word length");
  common(cover);
  gateset(cover);
  budget(cover);
  cover->add_option("--length", c.length, "Largest length")->check(CLI::Range(0, 64));
  cover->add_option("--step", c.step, "Length step")->check(CLI::Range(1, 64));
  cover->add_option("--targets", c.targets, "Number of Haar targets")->check(CLI::PositiveNumber);

  auto* gap = app.add_subcommand("gap", "Spectral-gap estimate from irreducible blocks");
  common(gap);
  gateset(gap);
  gap->add_option("--jmax", c.jmax, "Largest two_j")->check(CLI::Range(1, gf::kMaxTwoJ));

  auto* prop4 = app.add_subcommand("prop4", "Composition bound for SU(d)");
  common(prop4);
  prop4->add_option("--lambda", c.lambda, "SU(2) gap parameter (default sqrt(5)/3)")
      ->check(CLI::Range(0.0, 1.0));
  prop4->add_option("--m", c.m, "Block word length (default: minimal)")->check(CLI::PositiveNumber);

  auto* haar = app.add_subcommand("haar", "Second moments of the product sampler and the Haar oracle");
  common(haar);
  haar->add_option("--samples", c.samples, "Samples per sampler")->check(CLI::Range(1000, 100000000));

  auto* bounds = app.add_subcommand("bounds", "Upper and lower word-length bounds");
  common(bounds);
  gateset(bounds);
  bounds->add_option("--lambda", c.lambda, "Gap parameter")->check(CLI::Range(0.0, 1.0));
  bounds->add_option("--samples", c.samples, "Monte-Carlo samples for d > 2");

  auto* perturb = app.add_subcommand("perturb", "Perturbed non-universal set experiment");
  common(perturb);
  gateset(perturb);
  perturb->add_option("--delta", c.delta, "Perturbation size")->check(CLI::NonNegativeNumber);
  perturb->add_option("--length", c.length, "Word length")->check(CLI::Range(0, 100000));
  perturb->add_option("--samples", c.samples, "Random words")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "gateforge: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    std::string text;
    if (gates->parsed()) text = run_gates(c);
    if (net->parsed()) text = run_net(c);
    if (compile->parsed()) text = run_compile(c);
    if (cover->parsed()) text = run_cover(c);
    if (gap->parsed()) text = run_gap(c);
    if (prop4->parsed()) text = run_prop4(c);
    if (haar->parsed()) text = run_haar(c);
    if (bounds->parsed()) text = run_bounds(c);
    if (perturb->parsed()) {
      if (perturb->count("--length") == 0) c.length = 20;
      text = run_perturb(c);
    }
    emit(c, text);
  } catch (const gf::BudgetExceeded& e) {
    std::cerr << "gateforge: " << e.what() << '\n';
    return kExitBudget;
  } catch (const gf::GateSetError& e) {
    std::cerr << "gateforge: gate-set file: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "gateforge: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::logic_error& e) {
    std::cerr << "gateforge: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "gateforge: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
