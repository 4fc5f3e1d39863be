// sswlab: command-line front end for the watermark laboratory.
//
// Subcommands: synth, embed, attack-mcmc, attack-vb, sweep, report.
// Every run writes a manifest.json next to its outputs with the resolved
// flags, seed, artifact list and wall-clock duration, which is enough to
// reproduce the run bit for bit.
//
// Exit codes: 0 success, 1 usage error, 2 numeric/model failure.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssw/codec.hpp"
#include "ssw/datagen.hpp"
#include "ssw/errors.hpp"
#include "ssw/gibbs.hpp"
#include "ssw/image.hpp"
#include "ssw/io.hpp"
#include "ssw/model.hpp"
#include "ssw/report.hpp"
#include "ssw/rng.hpp"
#include "ssw/vb.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "1.0.0";

class RunLogger {
 public:
  RunLogger(std::string subcommand, fs::path out_dir)
      : subcommand_(std::move(subcommand)),
        out_dir_(std::move(out_dir)),
        start_(std::chrono::steady_clock::now()) {
    fs::create_directories(out_dir_);
  }

  fs::path path(const std::string& name) {
    fs::path p = out_dir_ / name;
    artifacts_.push_back(name);
    return p;
  }

  void flag(const std::string& name, const json& value) { flags_[name] = value; }

  void finish(std::uint64_t seed) {
    const auto elapsed = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start_)
                             .count();
    json manifest;
    manifest["subcommand"] = subcommand_;
    manifest["flags"] = flags_;
    manifest["seed"] = seed;
    manifest["artifacts"] = artifacts_;
    manifest["tool_version"] = kToolVersion;
    manifest["duration_seconds"] = elapsed;
    std::ofstream out(out_dir_ / "manifest.json");
    out << manifest.dump(2) << '\n';
  }

 private:
  std::string subcommand_;
  fs::path out_dir_;
  std::chrono::steady_clock::time_point start_;
  json flags_ = json::object();
  std::vector<std::string> artifacts_;
};

bool looks_like_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  char magic[2] = {0, 0};
  in.read(magic, 2);
  return in.gcount() == 2 && magic[0] == 'P' && magic[1] == '5';
}

// Loads hosts either from the binary matrix container or by patchifying a
// PGM image; returns the layout when the source was an image.
ssw::SignalMatrix load_signal(const std::string& path,
                              std::optional<ssw::PatchLayout>* layout) {
  if (looks_like_pgm(path)) {
    auto [mat, lay] = ssw::patchify(ssw::read_pgm(path));
    if (layout) *layout = lay;
    return mat;
  }
  if (layout) layout->reset();
  return ssw::load_matrix(path);
}

std::vector<double> parse_dwr_list(const std::string& spec) {
  std::vector<double> out;
  std::string token;
  for (char c : spec + ",") {
    if (c == ',') {
      if (!token.empty()) out.push_back(std::stod(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (out.empty()) throw CLI::ValidationError("--dwr-list", "empty list");
  return out;
}

// Affine rescale to [0,255] for difference-image visualization.
ssw::GrayImage rescaled_for_display(const ssw::GrayImage& img) {
  ssw::GrayImage out = img;
  const double lo = img.pixels.minCoeff();
  const double hi = img.pixels.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  out.pixels = (img.pixels.array() - lo) / span * 255.0;
  return out;
}

struct TruthFlags {
  std::string w_path, bits_path;

  std::optional<ssw::Metrics> metrics(const ssw::PosteriorSummary& s) const {
    if (w_path.empty() || bits_path.empty()) return std::nullopt;
    return ssw::compute_metrics(ssw::load_bits(bits_path),
                                ssw::load_vector(w_path), s);
  }
};

int cmd_synth(int n, int d, double dwr, std::uint64_t seed, double p_one,
              const std::string& out_dir) {
  RunLogger log("synth", out_dir);
  log.flag("n", n);
  log.flag("d", d);
  log.flag("dwr", dwr);
  log.flag("p_one", p_one);

  ssw::SynthConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.dwr_db = dwr;
  cfg.seed = seed;
  cfg.p_one = p_one;
  const ssw::RngState master(seed);
  const ssw::SignalMatrix hosts = ssw::generate_hosts(cfg, master);
  const ssw::Vector w = ssw::generate_watermark(cfg, hosts, master);
  const ssw::BitStream bits = ssw::generate_bits(cfg, master);
  const ssw::SignalMatrix y = ssw::embed(hosts, w, bits);

  ssw::save_matrix(log.path("hosts.mat"), hosts);
  ssw::save_vector(log.path("w.mat"), w);
  ssw::save_bits(log.path("bits.mat"), bits);
  ssw::save_matrix(log.path("y.mat"), y);
  log.finish(seed);
  return 0;
}

int cmd_embed(const std::string& in, double dwr, std::uint64_t seed,
              double p_one, const std::string& out_dir) {
  RunLogger log("embed", out_dir);
  log.flag("in", in);
  log.flag("dwr", dwr);
  log.flag("p_one", p_one);

  std::optional<ssw::PatchLayout> layout;
  const ssw::SignalMatrix hosts = load_signal(in, &layout);

  ssw::SynthConfig cfg;
  cfg.n = static_cast<int>(hosts.rows());
  cfg.d = static_cast<int>(hosts.cols());
  cfg.dwr_db = dwr;
  cfg.seed = seed;
  cfg.p_one = p_one;
  const ssw::RngState master(seed);
  const ssw::Vector w = ssw::generate_watermark(cfg, hosts, master);
  const ssw::BitStream bits = ssw::generate_bits(cfg, master);
  const ssw::SignalMatrix y = ssw::embed(hosts, w, bits);

  ssw::save_matrix(log.path("y.mat"), y);
  ssw::save_vector(log.path("truth_w.mat"), w);
  ssw::save_bits(log.path("truth_bits.mat"), bits);
  if (layout) {
    ssw::write_pgm(ssw::unpatchify(y, *layout), log.path("y.pgm"));
    ssw::GrayImage diff = ssw::unpatchify(y - hosts, *layout);
    diff.pixels.array() -= layout->global_mean;  // difference has no DC term
    ssw::write_pgm(rescaled_for_display(diff), log.path("w_diff.pgm"));
  }
  log.finish(seed);
  return 0;
}

int cmd_attack_mcmc(const std::string& in, double dwr,
                    const ssw::McmcConfig& cfg, const TruthFlags& truth,
                    const std::string& out_dir) {
  RunLogger log("attack-mcmc", out_dir);
  log.flag("in", in);
  log.flag("dwr", dwr);
  log.flag("iters", cfg.total_iters);
  log.flag("burnin", cfg.burn_in);
  log.flag("thin", cfg.thinning);
  log.flag("level", cfg.credible_level);
  log.flag("threads", cfg.threads);

  const ssw::SignalMatrix y = load_signal(in, nullptr);
  const ssw::Hyperparams h = ssw::init_hyperparams(y, dwr);
  const auto [trace, summary] = ssw::run_gibbs(y, h, cfg);

  ssw::SummaryMeta meta{"mcmc", y.rows(), y.cols(), cfg.seed};
  const auto metrics = truth.metrics(summary);
  ssw::export_summary(log.path("summary.json"), summary, meta, metrics);
  ssw::export_chain_csv(log.path("chain.csv"), trace);
  ssw::export_bit_freq_csv(log.path("b_freq.csv"), trace);
  std::optional<ssw::Vector> truth_w;
  if (!truth.w_path.empty()) truth_w = ssw::load_vector(truth.w_path);
  ssw::export_wcoords_csv(log.path("wcoords.csv"), summary,
                          truth_w ? &*truth_w : nullptr);
  log.finish(cfg.seed);
  return 0;
}

int cmd_attack_vb(const std::string& in, double dwr, const ssw::VbConfig& cfg,
                  const TruthFlags& truth, const std::string& out_dir) {
  RunLogger log("attack-vb", out_dir);
  log.flag("in", in);
  log.flag("dwr", dwr);
  log.flag("max_iters", cfg.max_iters);
  log.flag("tol", cfg.elbo_rel_tol);
  log.flag("level", cfg.credible_level);
  log.flag("threads", cfg.threads);

  const ssw::SignalMatrix y = load_signal(in, nullptr);
  const ssw::Hyperparams h = ssw::init_hyperparams(y, dwr);
  const auto [trace, summary] = ssw::run_vb(y, h, cfg);

  ssw::SummaryMeta meta{"vb", y.rows(), y.cols(), cfg.seed};
  const auto metrics = truth.metrics(summary);
  ssw::export_summary(log.path("summary.json"), summary, meta, metrics);
  ssw::export_elbo_csv(log.path("elbo.csv"), trace);
  std::optional<ssw::Vector> truth_w;
  if (!truth.w_path.empty()) truth_w = ssw::load_vector(truth.w_path);
  ssw::export_wcoords_csv(log.path("wcoords.csv"), summary,
                          truth_w ? &*truth_w : nullptr);
  if (!trace.converged)
    std::cerr << "attack-vb: warning: ELBO tolerance not reached within "
              << cfg.max_iters << " sweeps\n";
  log.finish(cfg.seed);
  return 0;
}

int cmd_sweep(const std::string& in, const std::string& dwr_list_spec,
              const std::string& solver_name, std::uint64_t seed,
              const ssw::McmcConfig& mcmc, const ssw::VbConfig& vb,
              const std::string& out_dir) {
  RunLogger log("sweep", out_dir);
  log.flag("in", in);
  log.flag("dwr_list", dwr_list_spec);
  log.flag("solver", solver_name);

  const std::vector<double> dwr_list = parse_dwr_list(dwr_list_spec);
  const ssw::SignalMatrix hosts = load_signal(in, nullptr);

  // One watermark direction and one bit stream shared by every DWR point;
  // only the scaling differs per point.
  ssw::SynthConfig cfg;
  cfg.n = static_cast<int>(hosts.rows());
  cfg.d = static_cast<int>(hosts.cols());
  cfg.dwr_db = 30.0;
  cfg.seed = seed;
  const ssw::RngState master(seed);
  const ssw::Vector w_dir = ssw::generate_watermark(cfg, hosts, master);
  const ssw::BitStream bits = ssw::generate_bits(cfg, master);

  ssw::SweepOptions opts;
  opts.solver =
      solver_name == "mcmc" ? ssw::Solver::kMcmc : ssw::Solver::kVb;
  opts.mcmc = mcmc;
  opts.vb = vb;
  opts.vb.credible_level = mcmc.credible_level;  // shared --level / --threads
  opts.vb.threads = mcmc.threads;
  const auto points = ssw::dwr_sweep(hosts, w_dir, bits, dwr_list, opts);
  ssw::export_sweep_csv(log.path("sweep.csv"), points);
  log.finish(seed);
  return 0;
}

int cmd_report(const std::string& summary_path, const TruthFlags& truth,
               const std::string& out_dir) {
  RunLogger log("report", out_dir);
  log.flag("summary", summary_path);

  ssw::SummaryMeta meta;
  const ssw::PosteriorSummary summary =
      ssw::import_summary(summary_path, &meta);
  const auto metrics = truth.metrics(summary);
  if (!metrics)
    throw ssw::InvalidParameter(
        "report: both --truth-w and --truth-bits are required");
  ssw::export_summary(log.path("summary.json"), summary, meta, metrics);
  std::optional<ssw::Vector> truth_w = ssw::load_vector(truth.w_path);
  ssw::export_wcoords_csv(log.path("wcoords.csv"), summary, &*truth_w);
  log.finish(meta.seed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sswlab: spread-spectrum watermark embedding and blind "
               "Bayesian recovery"};
  app.require_subcommand(1);

  // Shared flag storage.
  int n = 4096, d = 64;
  double dwr = 30.0, p_one = 0.5;
  std::uint64_t seed = 0;
  std::string in, out_dir, summary_path;
  std::string dwr_list_spec = "20,25,30,35,40";
  std::string solver_name = "vb";
  TruthFlags truth;
  ssw::McmcConfig mcmc;
  ssw::VbConfig vb;

  const auto add_seed = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "master RNG seed")
        ->envname("SSW_SEED")
        ->default_val(0);
  };
  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out-dir", out_dir, "output directory")->required();
  };
  const auto add_truth = [&](CLI::App* cmd) {
    cmd->add_option("--truth-w", truth.w_path,
                    "ground-truth watermark (enables metrics)");
    cmd->add_option("--truth-bits", truth.bits_path,
                    "ground-truth bit stream (enables metrics)");
  };
  std::string bit_rule = "exact";
  const auto add_mcmc = [&](CLI::App* cmd) {
    cmd->add_option("--iters", mcmc.total_iters, "total Gibbs sweeps")
        ->default_val(2000);
    cmd->add_option("--burnin", mcmc.burn_in, "burn-in sweeps to discard")
        ->default_val(1000);
    cmd->add_option("--thin", mcmc.thinning, "keep every k-th sweep")
        ->default_val(1);
    cmd->add_option("--level", mcmc.credible_level, "credible level")
        ->default_val(0.95);
    cmd->add_option("--threads", mcmc.threads, "max worker threads")
        ->default_val(1);
    cmd->add_option("--bit-rule", bit_rule,
                    "bit conditional: exact (given w) or marginal "
                    "(w integrated per point; diagnostic)")
        ->check(CLI::IsMember({"exact", "marginal"}));
  };
  const auto add_vb = [&](CLI::App* cmd, bool common) {
    cmd->add_option("--max-iters", vb.max_iters, "max coordinate sweeps")
        ->default_val(100);
    cmd->add_option("--tol", vb.elbo_rel_tol, "relative ELBO tolerance")
        ->default_val(1e-8);
    if (common) {
      cmd->add_option("--level", vb.credible_level, "credible level")
          ->default_val(0.95);
      cmd->add_option("--threads", vb.threads, "max worker threads")
          ->default_val(1);
    }
  };

  auto* synth = app.add_subcommand("synth", "generate synthetic hosts, "
                                            "watermark, bits and y");
  synth->add_option("--n", n, "number of data points")->default_val(4096);
  synth->add_option("--d", d, "dimension per point")->default_val(64);
  synth->add_option("--dwr", dwr, "target DWR in dB")->default_val(30.0);
  synth->add_option("--p-one", p_one, "bit probability")->default_val(0.5);
  add_seed(synth);
  add_out(synth);

  auto* embed = app.add_subcommand(
      "embed", "embed a fresh watermark into a PGM image or matrix");
  embed->add_option("--in", in, "host image (P5 PGM) or matrix")->required();
  embed->add_option("--dwr", dwr, "target DWR in dB")->default_val(30.0);
  embed->add_option("--p-one", p_one, "bit probability")->default_val(0.5);
  add_seed(embed);
  add_out(embed);

  auto* amcmc = app.add_subcommand("attack-mcmc", "Gibbs-sampler attack");
  amcmc->add_option("--in", in, "watermarked matrix or PGM")->required();
  amcmc->add_option("--dwr", dwr, "assumed DWR in dB")->default_val(30.0);
  add_mcmc(amcmc);
  add_seed(amcmc);
  add_truth(amcmc);
  add_out(amcmc);

  auto* avb = app.add_subcommand("attack-vb", "variational attack");
  avb->add_option("--in", in, "watermarked matrix or PGM")->required();
  avb->add_option("--dwr", dwr, "assumed DWR in dB")->default_val(30.0);
  add_vb(avb, true);
  add_seed(avb);
  add_truth(avb);
  add_out(avb);

  auto* sweep = app.add_subcommand(
      "sweep", "embed + attack across a list of DWR levels");
  sweep->add_option("--in", in, "host matrix or PGM")->required();
  sweep->add_option("--dwr-list", dwr_list_spec, "comma-separated DWR levels");
  sweep->add_option("--solver", solver_name, "mcmc or vb")
      ->check(CLI::IsMember({"mcmc", "vb"}));
  add_mcmc(sweep);
  add_vb(sweep, false);
  add_seed(sweep);
  add_out(sweep);

  auto* report = app.add_subcommand(
      "report", "recompute metrics/exports from a stored summary");
  report->add_option("--summary", summary_path, "summary.json path")
      ->required();
  add_truth(report);
  add_out(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // one-line diagnostic naming the offending flag
    return 1;
  }

  try {
    mcmc.seed = seed;
    mcmc.bit_rule = bit_rule == "marginal"
                        ? ssw::BitConditional::kMarginalW
                        : ssw::BitConditional::kGivenW;
    vb.seed = seed;
    if (synth->parsed()) return cmd_synth(n, d, dwr, seed, p_one, out_dir);
    if (embed->parsed()) return cmd_embed(in, dwr, seed, p_one, out_dir);
    if (amcmc->parsed()) return cmd_attack_mcmc(in, dwr, mcmc, truth, out_dir);
    if (avb->parsed()) return cmd_attack_vb(in, dwr, vb, truth, out_dir);
    if (sweep->parsed())
      return cmd_sweep(in, dwr_list_spec, solver_name, seed, mcmc, vb,
                       out_dir);
    if (report->parsed()) return cmd_report(summary_path, truth, out_dir);
  } catch (const ssw::Error& e) {
    std::cerr << "sswlab: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sswlab: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
