// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exit code = number of failed criteria.
//
// Criterion 1 additionally prints, per seed, the per-point Bayes oracle
// error (the likelihood-ratio test with every parameter known, including
// the true watermark). No attack can median-beat that bound; it is printed
// as analysis context next to the achieved metrics.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "conjugacy_checks.hpp"
#include "oracle_utils.hpp"
#include "ssw/codec.hpp"
#include "ssw/datagen.hpp"
#include "ssw/dists.hpp"
#include "ssw/gibbs.hpp"
#include "ssw/image.hpp"
#include "ssw/io.hpp"
#include "ssw/model.hpp"
#include "ssw/report.hpp"
#include "ssw/vb.hpp"

using ssw::BitStream;
using ssw::Hyperparams;
using ssw::Matrix;
using ssw::Metrics;
using ssw::RngState;
using ssw::SignalMatrix;
using ssw::Vector;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& name,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

struct Instance {
  SignalMatrix hosts, y;
  Vector w;
  BitStream bits;
};

Instance make_instance(std::uint64_t seed, double dwr, int n = 4096,
                       int d = 64) {
  ssw::SynthConfig cfg;
  cfg.n = n;
  cfg.d = d;
  cfg.dwr_db = dwr;
  cfg.seed = seed;
  const RngState master(seed);
  Instance inst;
  inst.hosts = ssw::generate_hosts(cfg, master);
  inst.w = ssw::generate_watermark(cfg, inst.hosts, master);
  inst.bits = ssw::generate_bits(cfg, master);
  inst.y = ssw::embed(inst.hosts, inst.w, inst.bits);
  return inst;
}

// Per-point likelihood-ratio error with every parameter known (host mean and
// covariance estimated from the clean hosts, true watermark). The hard lower
// bound on any attack's P_e for this data realization.
double oracle_bit_error(const Instance& inst) {
  const Vector mu = inst.hosts.colwise().mean();
  const Matrix centered = inst.hosts.rowwise() - mu.transpose();
  const Matrix cov = ssw::symmetrized(centered.transpose() * centered /
                                      double(inst.hosts.rows()));
  const auto chol = ssw::Cholesky::compute(cov);
  const Vector t = chol.solve(inst.w);
  const double half = 0.5 * inst.w.dot(t);
  double errors = 0.0;
  for (Eigen::Index i = 0; i < inst.y.rows(); ++i) {
    const double llr = (inst.y.row(i).transpose() - mu).dot(t) - half;
    const int decided = llr > 0.0 ? 1 : 0;
    if (decided != inst.bits[static_cast<std::size_t>(i)]) errors += 1.0;
  }
  return errors / double(inst.y.rows());
}

// Deterministic structured 512x512 test scene: smooth illumination, a few
// shaded shapes, and value-noise texture. Spatially correlated and strongly
// non-Gaussian, standing in for a photographic image.
ssw::GrayImage structured_scene(int size, std::uint64_t seed) {
  ssw::GrayImage img;
  img.width = img.height = size;
  img.pixels.resize(size, size);
  RngState rng(seed);

  const int lattice = 17;
  Matrix noise(lattice, lattice);
  for (int i = 0; i < lattice; ++i)
    for (int j = 0; j < lattice; ++j) noise(i, j) = rng.next_unit();

  const double cx1 = 0.31 * size, cy1 = 0.42 * size, r1 = 0.18 * size;
  const double cx2 = 0.70 * size, cy2 = 0.64 * size, r2 = 0.12 * size;
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const double u = double(c) / size, v = double(r) / size;
      double val = 150.0 - 70.0 * v + 25.0 * u;  // illumination gradient

      // bilinear value noise
      const double gx = u * (lattice - 1), gy = v * (lattice - 1);
      const int ix = std::min(int(gx), lattice - 2);
      const int iy = std::min(int(gy), lattice - 2);
      const double fx = gx - ix, fy = gy - iy;
      const double tex = (1 - fx) * (1 - fy) * noise(iy, ix) +
                         fx * (1 - fy) * noise(iy, ix + 1) +
                         (1 - fx) * fy * noise(iy + 1, ix) +
                         fx * fy * noise(iy + 1, ix + 1);
      val += 35.0 * (tex - 0.5);

      const double d1 = std::hypot(c - cx1, r - cy1);
      if (d1 < r1) val = 60.0 + 50.0 * d1 / r1 + 20.0 * (tex - 0.5);
      const double d2 = std::hypot(c - cx2, r - cy2);
      if (d2 < r2) val = 210.0 - 35.0 * d2 / r2;
      if (r > 0.82 * size && c > 0.15 * size && c < 0.55 * size)
        val = 95.0 + 18.0 * (tex - 0.5);

      // Photographic sensor grain; without it the patch covariance is
      // unrealistically close to singular.
      val += 2.0 * (2.0 * rng.next_unit() - 1.0);
      img.pixels(r, c) = std::clamp(val, 0.0, 255.0);
    }
  }
  return img;
}

// ---------------------------------------------------------------------------

struct SolverResults {
  std::vector<double> mcmc_pe, mcmc_rw, vb_pe, vb_rw, oracle_pe;
};

SolverResults run_fig5_regime() {
  SolverResults r;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Instance inst = make_instance(seed, 30.0);
    const Hyperparams h = ssw::init_hyperparams(inst.y, 30.0);

    ssw::McmcConfig mcfg;
    mcfg.total_iters = 2000;
    mcfg.burn_in = 1000;
    mcfg.seed = seed;
    mcfg.threads = 2;
    const auto t0 = std::chrono::steady_clock::now();
    const auto [mtrace, msum] = ssw::run_gibbs(inst.y, h, mcfg);
    const double msecs = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t0)
                             .count();
    const Metrics mm = ssw::compute_metrics(inst.bits, inst.w, msum);

    ssw::VbConfig vcfg;
    vcfg.seed = seed;
    vcfg.threads = 2;
    const auto t1 = std::chrono::steady_clock::now();
    const auto [vtrace, vsum] = ssw::run_vb(inst.y, h, vcfg);
    const double vsecs = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - t1)
                             .count();
    const Metrics vm = ssw::compute_metrics(inst.bits, inst.w, vsum);

    const double ope = oracle_bit_error(inst);
    r.mcmc_pe.push_back(mm.p_e);
    r.mcmc_rw.push_back(mm.r_w);
    r.vb_pe.push_back(vm.p_e);
    r.vb_rw.push_back(vm.r_w);
    r.oracle_pe.push_back(ope);
    std::printf(
        "  seed %llu: mcmc P_e=%.4f R_w=%.3f (%.0fs) | vb P_e=%.4f R_w=%.3f "
        "(%.1fs, %d sweeps) | known-params oracle P_e=%.4f\n",
        static_cast<unsigned long long>(seed), mm.p_e, mm.r_w, msecs, vm.p_e,
        vm.r_w, vsecs, vtrace.sweeps, ope);
    std::fflush(stdout);
  }
  return r;
}

void criterion_1_and_6() {
  const SolverResults r = run_fig5_regime();
  const double m_pe = median(r.mcmc_pe), m_rw = median(r.mcmc_rw);
  const double v_pe = median(r.vb_pe), v_rw = median(r.vb_rw);
  const bool pass =
      m_pe <= 0.02 && m_rw <= 0.60 && v_pe <= 0.01 && v_rw <= 0.35;
  std::string detail = "medians: mcmc P_e=" + fmt(m_pe) + " (<=0.02), R_w=" +
                       fmt(m_rw) + " (<=0.60); vb P_e=" + fmt(v_pe) +
                       " (<=0.01), R_w=" + fmt(v_rw) + " (<=0.35)";
  if (!pass)
    detail += "; note: median known-params oracle P_e=" +
              fmt(median(r.oracle_pe)) +
              " — the generative process caps what any attack can achieve "
              "on these seeds";
  report(1, pass, "Fig.5 regime medians over 5 seeds", detail);

  std::vector<double> dpe, drw;
  for (std::size_t i = 0; i < r.vb_pe.size(); ++i) {
    dpe.push_back(std::abs(r.vb_pe[i] - r.mcmc_pe[i]));
    drw.push_back(std::abs(r.vb_rw[i] - r.mcmc_rw[i]));
  }
  const double med_dpe = median(dpe), med_drw = median(drw);
  report(6, med_dpe <= 0.01 && med_drw <= 0.25, "VB vs MCMC cross-check",
         "median |dP_e|=" + fmt(med_dpe) + " (<=0.01), median |dR_w|=" +
             fmt(med_drw) + " (<=0.25) on identical data");
}

bool elbo_trace_ok(const ssw::ElboTrace& trace, std::string* why) {
  for (std::size_t t = 1; t < trace.elbo.size(); ++t) {
    if (trace.elbo[t] <
        trace.elbo[t - 1] - 1e-8 * std::abs(trace.elbo[t - 1])) {
      *why = "ELBO decreased at sweep " + std::to_string(t);
      return false;
    }
  }
  for (std::size_t t = 1; t < trace.delta_rel.size() &&
                          t <= 20; ++t) {
    if (trace.delta_rel[t] < 1e-6) return true;
  }
  *why = "relative change never dropped below 1e-6 within 20 sweeps";
  return false;
}

void criterion_2() {
  std::string why;
  bool pass = true;
  std::string detail;

  {
    const Instance inst = make_instance(1, 30.0);
    const Hyperparams h = ssw::init_hyperparams(inst.y, 30.0);
    ssw::VbConfig cfg;
    cfg.seed = 1;
    cfg.elbo_rel_tol = 1e-10;  // keep sweeping past 1e-6 to observe the trace
    const auto [trace, sum] = ssw::run_vb(inst.y, h, cfg);
    if (!elbo_trace_ok(trace, &why)) {
      pass = false;
      detail = "synthetic: " + why;
    } else {
      detail = "synthetic ok (" + std::to_string(trace.sweeps) + " sweeps)";
    }
  }
  {
    const auto tmp = std::filesystem::temp_directory_path() / "ssw_accept";
    std::filesystem::create_directories(tmp);
    const std::string img_path = (tmp / "scene.pgm").string();
    ssw::write_pgm(structured_scene(512, 42), img_path);
    const ssw::GrayImage img = ssw::read_pgm(img_path);
    auto [hosts, layout] = ssw::patchify(img);

    ssw::SynthConfig scfg;
    scfg.n = static_cast<int>(hosts.rows());
    scfg.d = static_cast<int>(hosts.cols());
    scfg.dwr_db = 30.0;
    scfg.seed = 7;
    const RngState master(scfg.seed);
    const Vector w = ssw::generate_watermark(scfg, hosts, master);
    const BitStream bits = ssw::generate_bits(scfg, master);
    const SignalMatrix y = ssw::embed(hosts, w, bits);
    const Hyperparams h = ssw::init_hyperparams(y, 30.0);
    ssw::VbConfig cfg;
    cfg.seed = 7;
    cfg.elbo_rel_tol = 1e-10;
    const auto [trace, sum] = ssw::run_vb(y, h, cfg);
    const Metrics m = ssw::compute_metrics(bits, w, sum);
    if (!elbo_trace_ok(trace, &why)) {
      pass = false;
      detail += "; 512x512 image: " + why;
    } else {
      detail += "; 512x512 image ok (" + std::to_string(trace.sweeps) +
                " sweeps, P_e=" + fmt(m.p_e) + ", R_w=" + fmt(m.r_w) + ")";
    }
  }
  report(2, pass, "VB ELBO monotone, < 1e-6 within 20 sweeps", detail);
}

void criterion_3() {
  const double sups[5] = {conjugacy::mu_sigma_supnorm(), conjugacy::w_supnorm(),
                          conjugacy::b_supnorm(), conjugacy::pi_supnorm(),
                          conjugacy::m_v_supnorm()};
  const char* names[5] = {"(mu,Sigma)", "w", "b", "pi", "(m,V)"};
  bool pass = true;
  std::string detail = "sup-norms:";
  for (int i = 0; i < 5; ++i) {
    pass = pass && sups[i] < 1e-4;
    detail += std::string(" ") + names[i] + "=" + fmt(sups[i]);
  }
  report(3, pass, "conjugacy quadrature oracles (d=1, n<=3)", detail);
}

void criterion_4() {
  // n=6, d=1 toy: (mu, Sigma, m, V, pi) frozen at truth, (w, b) sampled.
  const double mu = 0.0, s2 = 1.0, m = 1.2, v = 0.8, pi = 0.45;
  ssw::SignalMatrix y(6, 1);
  y << 2.1, -0.3, 1.7, 0.2, -1.1, 2.4;
  const int n = 6;

  // Exact posterior over the 64 bit patterns, integrating w analytically.
  std::vector<double> log_post(64);
  for (int mask = 0; mask < 64; ++mask) {
    int k = 0;
    double sum_r = 0.0, sum_r2 = 0.0, base = 0.0;
    for (int i = 0; i < n; ++i) {
      const double r = y(i, 0) - mu;
      if (mask & (1 << i)) {
        ++k;
        sum_r += r;
        sum_r2 += r * r;
      } else {
        base += oracle::normal_logpdf(y(i, 0), mu, s2);
      }
    }
    const double prec = 1.0 / v + k / s2;
    const double lin = m / v + sum_r / s2;
    // log integral of N(w|m,v) prod_{i in S} N(r_i|w, s2) dw
    const double log_z = -0.5 * k * std::log(2.0 * M_PI * s2) -
                         0.5 * (m * m / v + sum_r2 / s2) +
                         0.5 * lin * lin / prec -
                         0.5 * std::log(prec * v);
    log_post[mask] = k * std::log(pi) + (n - k) * std::log1p(-pi) + base +
                     log_z;
  }
  const double lmax = *std::max_element(log_post.begin(), log_post.end());
  double z = 0.0;
  for (double lp : log_post) z += std::exp(lp - lmax);
  std::vector<double> exact(64);
  for (int mask = 0; mask < 64; ++mask)
    exact[mask] = std::exp(log_post[mask] - lmax) / z;

  // Gibbs over (w, b) with the rest frozen.
  ssw::ModelState state;
  state.mu = Vector::Constant(1, mu);
  state.sigma = Matrix::Constant(1, 1, s2);
  state.m = Vector::Constant(1, m);
  state.v = Matrix::Constant(1, 1, v);
  state.pi = pi;
  state.b = BitStream(n, 0);
  state.w = Vector::Zero(1);

  const int sweeps = 100000;
  RngState chain(123);
  const RngState bit_root = RngState(123).split(0xACC);
  std::vector<double> freq(64, 0.0);
  for (int t = 0; t < sweeps; ++t) {
    const ssw::GaussianCanonical g = ssw::w_conditional(y, state);
    state.w = ssw::sample_gaussian_canonical(g, chain);
    state.b = ssw::update_b(y, state, bit_root.split(t));
    int mask = 0;
    for (int i = 0; i < n; ++i)
      if (state.b[i]) mask |= 1 << i;
    freq[mask] += 1.0;
  }
  for (auto& f : freq) f /= sweeps;

  int violations = 0;
  double worst = 0.0;
  for (int mask = 0; mask < 64; ++mask) {
    const double se =
        std::sqrt(exact[mask] * (1.0 - exact[mask]) / sweeps);
    const double gap = std::abs(freq[mask] - exact[mask]);
    worst = std::max(worst, se > 0 ? gap / se : 0.0);
    if (gap > 3.0 * se) ++violations;
  }
  report(4, violations == 0, "2^6 enumeration oracle",
         "64 patterns, worst |freq-exact| = " + fmt(worst) +
             " standard errors, violations=" + std::to_string(violations));
}

void criterion_5() {
  bool pass = true;
  std::string detail;

  {  // Wishart mean (via inverted IW draws), d=3, 5% Frobenius
    RngState rng(31);
    Matrix scale(3, 3);
    scale << 2.0, 0.3, 0.1, 0.3, 1.5, -0.2, 0.1, -0.2, 1.0;
    Matrix acc = Matrix::Zero(3, 3);
    for (int i = 0; i < 100000; ++i)
      acc += ssw::Cholesky::compute(ssw::invwishart_sample(7.0, scale, rng))
                 .inverse();
    acc /= 100000.0;
    const Matrix expected = 7.0 * ssw::Cholesky::compute(scale).inverse();
    const double err = (acc - expected).norm() / expected.norm();
    pass = pass && err < 0.05;
    detail += "wishart-mean err=" + fmt(err);
  }
  {  // IW mean, d=2, dof=10, 5%
    RngState rng(37);
    Matrix scale(2, 2);
    scale << 3.0, 0.8, 0.8, 2.0;
    Matrix acc = Matrix::Zero(2, 2);
    for (int i = 0; i < 100000; ++i)
      acc += ssw::invwishart_sample(10.0, scale, rng);
    acc /= 100000.0;
    const Matrix expected = scale / 7.0;
    const double err = (acc - expected).norm() / expected.norm();
    pass = pass && err < 0.05;
    detail += ", iw-mean err=" + fmt(err);
  }
  {  // Beta mean 0.01 and KS 0.01 at 1e5
    RngState rng(51);
    std::vector<double> s(100000);
    for (auto& x : s) x = ssw::beta_sample(2.5, 4.0, rng);
    const double err = std::abs(oracle::mean(s) - 2.5 / 6.5);
    pass = pass && err < 0.01;
    detail += ", beta-mean err=" + fmt(err);
    RngState rng2(53);
    for (auto& x : s) x = ssw::beta_sample(1.0, 1.0, rng2);
    const double ks = oracle::ks_uniform(s);
    pass = pass && ks < 0.01;
    detail += ", beta(1,1) KS=" + fmt(ks);
  }
  {  // MVN sample mean within 0.02 per coordinate
    RngState rng(21);
    const Vector mean = Vector::Zero(8);
    const Matrix cov = Matrix::Identity(8, 8);
    const auto chol = ssw::Cholesky::compute(cov);
    Vector acc = Vector::Zero(8);
    for (int i = 0; i < 100000; ++i) acc += ssw::mvn_sample(mean, chol, rng);
    const double err = (acc / 100000.0).cwiseAbs().maxCoeff();
    pass = pass && err < 0.02;
    detail += ", mvn-mean err=" + fmt(err);
  }
  {  // digamma closed forms at 1e-10
    const double g = 0.57721566490153286060651209;
    const double e1 = std::abs(ssw::digamma(1.0) + g);
    const double e2 =
        std::abs(ssw::digamma(0.5) + g + 2.0 * std::log(2.0));
    const double e3 =
        std::abs(ssw::digamma(4.7) - ssw::digamma(3.7) - 1.0 / 3.7);
    pass = pass && e1 < 1e-10 && e2 < 1e-10 && e3 < 1e-10;
    detail += ", digamma errs=" + fmt(std::max({e1, e2, e3}));
  }
  report(5, pass, "distribution moment suite", detail);
}

void criterion_7() {
  const std::vector<double> dwr_list = {20.0, 25.0, 30.0, 35.0, 40.0};
  std::vector<std::vector<double>> pe_by_dwr(dwr_list.size());
  std::vector<std::vector<double>> rw_by_dwr(dwr_list.size());

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ssw::SynthConfig cfg;
    cfg.n = 4096;
    cfg.d = 64;
    cfg.dwr_db = 30.0;
    cfg.seed = seed;
    const RngState master(seed);
    const SignalMatrix hosts = ssw::generate_hosts(cfg, master);
    const Vector w_dir = ssw::generate_watermark(cfg, hosts, master);
    const BitStream bits = ssw::generate_bits(cfg, master);

    ssw::SweepOptions opts;
    opts.solver = ssw::Solver::kVb;
    opts.vb.seed = seed;
    opts.vb.threads = 2;
    const auto points = ssw::dwr_sweep(hosts, w_dir, bits, dwr_list, opts);
    for (std::size_t k = 0; k < points.size(); ++k) {
      pe_by_dwr[k].push_back(points[k].metrics.p_e);
      rw_by_dwr[k].push_back(points[k].metrics.r_w);
    }
  }

  std::string detail = "medians over 5 seeds:";
  std::vector<double> med_pe, med_rw;
  for (std::size_t k = 0; k < dwr_list.size(); ++k) {
    med_pe.push_back(median(pe_by_dwr[k]));
    med_rw.push_back(median(rw_by_dwr[k]));
    detail += " dwr" + fmt(dwr_list[k]) + ":(P_e=" + fmt(med_pe.back()) +
              ",R_w=" + fmt(med_rw.back()) + ")";
  }
  const auto inversions = [](const std::vector<double>& v) {
    int count = 0;
    for (std::size_t k = 1; k < v.size(); ++k)
      if (v[k] < v[k - 1]) ++count;
    return count;
  };
  const int ipe = inversions(med_pe), irw = inversions(med_rw);
  report(7, ipe <= 1 && irw <= 1, "DWR sweep trend (VB, 20..40 dB)",
         detail + "; adjacent inversions: P_e=" + std::to_string(ipe) +
             ", R_w=" + std::to_string(irw) + " (<=1 allowed)");
}

void criterion_8() {
  bool pass = true;
  std::string detail;

  {  // patchify / unpatchify bit-exact on an 8-bit image
    namespace fs = std::filesystem;
    const fs::path tmp = fs::temp_directory_path() / "ssw_accept_img";
    fs::create_directories(tmp);
    const std::string path = (tmp / "roundtrip.pgm").string();
    ssw::write_pgm(structured_scene(128, 5), path);
    const ssw::GrayImage img = ssw::read_pgm(path);
    const auto [mat, layout] = ssw::patchify(img);
    const ssw::GrayImage back = ssw::unpatchify(mat, layout);
    const bool ok = (back.pixels - img.pixels).cwiseAbs().maxCoeff() == 0.0;
    pass = pass && ok;
    detail += std::string("patch-roundtrip=") + (ok ? "exact" : "BROKEN");
  }
  {  // embed / update_x inversion: unmarked rows bit-exact, marked rows at
     // the analytic tolerance (one add + one subtract of doubles)
    const Instance inst = make_instance(9, 30.0, 256, 16);
    const SignalMatrix x = ssw::update_x(inst.y, inst.w, inst.bits);
    bool ok = true;
    double worst = 0.0;
    const double scale = inst.hosts.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double gap = (x.row(i) - inst.hosts.row(i)).cwiseAbs().maxCoeff();
      if (!inst.bits[static_cast<std::size_t>(i)])
        ok = ok && gap == 0.0;  // copies must be bit-identical
      else
        worst = std::max(worst, gap / scale);
    }
    ok = ok && worst < 1e-12;
    pass = pass && ok;
    detail += std::string(", embed-inverse=") +
              (ok ? "exact/" + fmt(worst) : "BROKEN");
  }
  {  // scale_to_dwr / measure_dwr fixed point
    const Instance inst = make_instance(11, 30.0, 256, 16);
    double worst = 0.0;
    for (double t : {0.0, 15.0, 30.0, 45.0, 60.0}) {
      const Vector w = ssw::scale_to_dwr(inst.hosts, inst.w, t);
      worst = std::max(worst, std::abs(ssw::measure_dwr(inst.hosts, w) - t));
    }
    pass = pass && worst < 1e-9;
    detail += ", dwr-fixed-point-err=" + fmt(worst);
  }
  {  // solver determinism
    const Instance inst = make_instance(13, 20.0, 128, 8);
    const Hyperparams h = ssw::init_hyperparams(inst.y, 20.0);
    ssw::McmcConfig mcfg;
    mcfg.total_iters = 50;
    mcfg.burn_in = 10;
    mcfg.seed = 3;
    const auto [t1, s1] = ssw::run_gibbs(inst.y, h, mcfg);
    const auto [t2, s2] = ssw::run_gibbs(inst.y, h, mcfg);
    ssw::VbConfig vcfg;
    vcfg.seed = 3;
    const auto [v1, u1] = ssw::run_vb(inst.y, h, vcfg);
    const auto [v2, u2] = ssw::run_vb(inst.y, h, vcfg);
    const bool ok = t1.w == t2.w && t1.log_joint == t2.log_joint &&
                    v1.elbo == v2.elbo && u1.w_hat == u2.w_hat;
    pass = pass && ok;
    detail += std::string(", solver-determinism=") + (ok ? "bitwise" : "BROKEN");
  }
  {  // CLI determinism: identical flags and seed give byte-identical outputs
    namespace fs = std::filesystem;
    const fs::path tmp = fs::temp_directory_path() / "ssw_accept_cli";
    fs::remove_all(tmp);
    const std::string bin = SSWLAB_BIN;
    const auto run = [&](const std::string& args) {
      const std::string cmd = bin + " " + args + " > /dev/null 2>&1";
      return std::system(cmd.c_str()) == 0;
    };
    const std::string d1 = (tmp / "a").string(), d2 = (tmp / "b").string();
    bool ok = run("synth --n 512 --d 16 --dwr 30 --seed 7 --out-dir " + d1) &&
              run("synth --n 512 --d 16 --dwr 30 --seed 7 --out-dir " + d2);
    const auto same_bytes = [](const std::string& a, const std::string& b) {
      std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
      std::ostringstream sa, sb;
      sa << fa.rdbuf();
      sb << fb.rdbuf();
      return fa && fb && sa.str() == sb.str();
    };
    ok = ok && same_bytes(d1 + "/y.mat", d2 + "/y.mat") &&
         same_bytes(d1 + "/w.mat", d2 + "/w.mat");
    const std::string a1 = (tmp / "va").string(), a2 = (tmp / "vb").string();
    ok = ok &&
         run("attack-vb --in " + d1 + "/y.mat --dwr 30 --seed 5 --truth-w " +
             d1 + "/w.mat --truth-bits " + d1 + "/bits.mat --out-dir " + a1) &&
         run("attack-vb --in " + d1 + "/y.mat --dwr 30 --seed 5 --truth-w " +
             d1 + "/w.mat --truth-bits " + d1 + "/bits.mat --out-dir " + a2) &&
         same_bytes(a1 + "/summary.json", a2 + "/summary.json") &&
         same_bytes(a1 + "/elbo.csv", a2 + "/elbo.csv") &&
         fs::exists(a1 + "/manifest.json");
    pass = pass && ok;
    detail += std::string(", cli-determinism=") + (ok ? "bitwise" : "BROKEN");
  }
  report(8, pass, "pipeline exactness and determinism", detail);
}

}  // namespace

int main() {
  std::printf("acceptance suite (sswlab)\n");
  criterion_1_and_6();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_7();
  criterion_8();
  std::printf("%d criterion(s) failed\n", g_failures);
  return g_failures;
}
