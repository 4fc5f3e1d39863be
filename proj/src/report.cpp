#include "ssw/report.hpp"

#include <fstream>

#include <json.hpp>

#include "ssw/codec.hpp"
#include "ssw/errors.hpp"
#include "ssw/io.hpp"
#include "ssw/model.hpp"

namespace ssw {

namespace {

using nlohmann::json;

double bit_error(const BitStream& truth, const BitStream& est, bool flip) {
  if (truth.size() != est.size())
    throw DimensionMismatch("metrics: bit stream length mismatch");
  double errors = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const int e = flip ? 1 - est[i] : est[i];
    if (e != truth[i]) errors += 1.0;
  }
  return errors / static_cast<double>(truth.size());
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr) {
  Vector v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = arr[i].get<double>();
  return v;
}

}  // namespace

Metrics compute_metrics(const BitStream& truth_b, const Vector& truth_w,
                        const PosteriorSummary& summary) {
  if (truth_w.size() != summary.w_hat.size())
    throw DimensionMismatch("metrics: watermark dimension mismatch");
  const double w_norm = truth_w.norm();
  if (w_norm <= 0.0) throw ZeroWatermark("metrics: zero true watermark");

  Metrics m;
  m.p_e = bit_error(truth_b, summary.b_hat, false);
  m.r_w = (truth_w - summary.w_hat).norm() / w_norm;
  const double p_e_alt = bit_error(truth_b, summary.b_hat, true);
  const double r_w_alt = (truth_w + summary.w_hat).norm() / w_norm;
  m.p_e_flip = std::min(m.p_e, p_e_alt);
  m.r_w_flip = std::min(m.r_w, r_w_alt);
  return m;
}

void export_summary(const std::string& path, const PosteriorSummary& summary,
                    const SummaryMeta& meta,
                    const std::optional<Metrics>& metrics) {
  json j;
  j["schema_version"] = 1;
  j["solver"] = meta.solver;
  j["n"] = meta.n;
  j["d"] = meta.d;
  j["seed"] = meta.seed;
  j["pi_hat"] = summary.pi_hat;
  j["w_hat"] = vector_to_json(summary.w_hat);
  j["ci_lo"] = vector_to_json(summary.ci_lo);
  j["ci_hi"] = vector_to_json(summary.ci_hi);
  json bits = json::array();
  for (auto b : summary.b_hat) bits.push_back(static_cast<int>(b));
  j["b_hat"] = std::move(bits);
  j["b_soft"] = vector_to_json(summary.b_soft);
  j["diagnostics"] = summary.diagnostics;
  if (metrics) {
    j["metrics"] = {{"p_e", metrics->p_e},
                    {"r_w", metrics->r_w},
                    {"p_e_flip", metrics->p_e_flip},
                    {"r_w_flip", metrics->r_w_flip}};
  }
  std::ofstream out(path);
  if (!out) throw IoError("summary: cannot open " + path + " for writing");
  out << j.dump(2) << '\n';
  if (!out) throw IoError("summary: short write to " + path);
}

PosteriorSummary import_summary(const std::string& path, SummaryMeta* meta,
                                std::optional<Metrics>* metrics) {
  std::ifstream in(path);
  if (!in) throw IoError("summary: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw MalformedHeader("summary: " + path + ": " + e.what());
  }
  if (!j.contains("schema_version") || j["schema_version"].get<int>() != 1)
    throw MalformedHeader("summary: unsupported schema in " + path);

  PosteriorSummary s;
  s.pi_hat = j["pi_hat"].get<double>();
  s.w_hat = vector_from_json(j["w_hat"]);
  s.ci_lo = vector_from_json(j["ci_lo"]);
  s.ci_hi = vector_from_json(j["ci_hi"]);
  for (const auto& b : j["b_hat"])
    s.b_hat.push_back(static_cast<std::uint8_t>(b.get<int>()));
  s.b_soft = vector_from_json(j["b_soft"]);
  for (auto it = j["diagnostics"].begin(); it != j["diagnostics"].end(); ++it)
    s.diagnostics[it.key()] = it.value().get<double>();
  if (meta) {
    meta->solver = j["solver"].get<std::string>();
    meta->n = j["n"].get<Eigen::Index>();
    meta->d = j["d"].get<Eigen::Index>();
    meta->seed = j["seed"].get<std::uint64_t>();
  }
  if (metrics) {
    if (j.contains("metrics")) {
      Metrics m;
      m.p_e = j["metrics"]["p_e"].get<double>();
      m.r_w = j["metrics"]["r_w"].get<double>();
      m.p_e_flip = j["metrics"]["p_e_flip"].get<double>();
      m.r_w_flip = j["metrics"]["r_w_flip"].get<double>();
      *metrics = m;
    } else {
      metrics->reset();
    }
  }
  return s;
}

void export_wcoords_csv(const std::string& path,
                        const PosteriorSummary& summary,
                        const Vector* truth_w) {
  std::ofstream out(path);
  if (!out) throw IoError("csv: cannot open " + path + " for writing");
  out << (truth_w ? "index,w_true,w_hat,ci_lo,ci_hi\n"
                  : "index,w_hat,ci_lo,ci_hi\n");
  for (Eigen::Index i = 0; i < summary.w_hat.size(); ++i) {
    out << i << ',';
    if (truth_w) out << format_double((*truth_w)[i]) << ',';
    out << format_double(summary.w_hat[i]) << ','
        << format_double(summary.ci_lo[i]) << ','
        << format_double(summary.ci_hi[i]) << '\n';
  }
}

void export_elbo_csv(const std::string& path, const ElboTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("csv: cannot open " + path + " for writing");
  out << "iter,elbo,delta_rel\n";
  for (std::size_t t = 0; t < trace.elbo.size(); ++t)
    out << t << ',' << format_double(trace.elbo[t]) << ','
        << format_double(trace.delta_rel[t]) << '\n';
}

void export_chain_csv(const std::string& path, const ChainTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("csv: cannot open " + path + " for writing");
  out << "iter,pi,log_joint";
  for (Eigen::Index j = 0; j < trace.w.cols(); ++j) out << ",w_" << j;
  out << '\n';
  for (std::size_t k = 0; k < trace.iters.size(); ++k) {
    out << trace.iters[k] << ',' << format_double(trace.pi[k]) << ','
        << format_double(trace.log_joint[k]);
    for (Eigen::Index j = 0; j < trace.w.cols(); ++j)
      out << ',' << format_double(trace.w(static_cast<Eigen::Index>(k), j));
    out << '\n';
  }
}

void export_bit_freq_csv(const std::string& path, const ChainTrace& trace) {
  std::ofstream out(path);
  if (!out) throw IoError("csv: cannot open " + path + " for writing");
  out << "i,b_freq\n";
  for (Eigen::Index i = 0; i < trace.b_freq.size(); ++i)
    out << i << ',' << format_double(trace.b_freq[i]) << '\n';
}

void export_sweep_csv(const std::string& path,
                      const std::vector<SweepPoint>& points) {
  std::ofstream out(path);
  if (!out) throw IoError("csv: cannot open " + path + " for writing");
  out << "dwr,p_e,r_w\n";
  for (const auto& p : points)
    out << format_double(p.dwr_db) << ',' << format_double(p.metrics.p_e)
        << ',' << format_double(p.metrics.r_w) << '\n';
}

std::vector<SweepPoint> dwr_sweep(const SignalMatrix& hosts,
                                  const Vector& w_direction,
                                  const BitStream& bits,
                                  const std::vector<double>& dwr_list,
                                  const SweepOptions& opts) {
  if (dwr_list.empty())
    throw InvalidParameter("dwr_sweep: empty DWR list");
  std::vector<SweepPoint> out;
  out.reserve(dwr_list.size());
  for (double dwr : dwr_list) {
    const Vector w = scale_to_dwr(hosts, w_direction, dwr);
    const SignalMatrix y = embed(hosts, w, bits);
    const Hyperparams h = init_hyperparams(y, dwr);
    PosteriorSummary summary;
    if (opts.solver == Solver::kMcmc)
      summary = run_gibbs(y, h, opts.mcmc).second;
    else
      summary = run_vb(y, h, opts.vb).second;
    out.push_back({dwr, compute_metrics(bits, w, summary)});
  }
  return out;
}

}  // namespace ssw
