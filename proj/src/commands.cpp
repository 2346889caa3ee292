#include "magdiv/commands.hpp"

#include "magdiv/diversity.hpp"
#include "magdiv/errors.hpp"
#include "magdiv/format.hpp"
#include "magdiv/magnitude.hpp"
#include "magdiv/metric.hpp"
#include "magdiv/tree.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace magdiv::cli {

using nlohmann::json;

namespace {

// Infinite values have no JSON encoding.
json real_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

struct LoadedInput {
  std::string digest;
  FiniteMetric metric;
  std::optional<WeightedTree> tree;
};

LoadedInput load_input(const std::string &path, const InputOptions &opts, double scale_by = 1.0) {
  const auto bytes = read_file(path);
  std::istringstream in(bytes);
  if (opts.kind == InputKind::Tree) {
    auto t = read_tree(in);
    if (scale_by != 1.0) t = scale(t, scale_by);
    auto m = tree_metric(t);
    return {sha256_hex(bytes), std::move(m), std::move(t)};
  }
  auto m = read_metric_csv(in, MetricOptions{.check_triangle = opts.check_triangle});
  if (scale_by != 1.0) m = m.scaled(scale_by);
  return {sha256_hex(bytes), std::move(m), std::nullopt};
}

json certificate_json(const CertificateReport &c) {
  return {{"c_value", c.c_value},
          {"max_on_support_deviation", c.max_on_support_deviation},
          {"min_off_support_slack", real_or_null(c.min_off_support_slack)},
          {"passed", c.passed}};
}

json labels_of(const FiniteMetric &m, const std::vector<std::size_t> &idx) {
  json out = json::array();
  for (auto i : idx) out.push_back(m.labels()[i]);
  return out;
}

json solution_json(const FiniteMetric &m, const DiversitySolution &s) {
  json measure = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    measure.push_back({{"label", m.labels()[i]}, {"mass", s.measure.values(static_cast<Eigen::Index>(i))}});
  }
  return {{"points", m.size()},
          {"diversity", s.diversity},
          {"measure", std::move(measure)},
          {"support", labels_of(m, s.support)},
          {"iterations", s.iterations},
          {"certificate", certificate_json(s.certificate)},
          {"certified", s.certificate.passed}};
}

void validate_scale(double t) {
  if (!std::isfinite(t) || !(t > 0.0)) throw ValidationError("--scale must be positive and finite");
}

}  // namespace

InputKind parse_kind(const std::string &text) {
  if (text == "tree") return InputKind::Tree;
  if (text == "matrix") return InputKind::Matrix;
  throw ValidationError("--kind must be 'tree' or 'matrix', got '" + text + "'");
}

json RunReport::to_json() const {
  return {{"command", command},
          {"input_digest", input_digest},
          {"results", results},
          {"versions", {{"format", kReportFormat}, {"tool", kToolVersion}}}};
}

std::string RunReport::dump() const { return to_json().dump(2) + "\n"; }

std::string sha256_hex(const std::string &bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("DigestError", "SHA-256 computation failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file_atomic(const std::string &path, const std::string &contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << contents;
    out.flush();
    if (!out) {
      out.close();
      std::remove(tmp.c_str());
      throw IoError("write to '" + path + "' failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    throw IoError("cannot move output into place at '" + path + "': " + ec.message());
  }
}

CommandOutput cmd_magnitude(const std::string &tree_file) {
  const auto bytes = read_file(tree_file);
  std::istringstream in(bytes);
  const auto t = read_tree(in);
  const auto w = tree_weights(t);
  const auto kernel = build_kernel(tree_metric(t));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(t.vertex_count()));
  const double residual = (kernel.matrix() * w.values - ones).lpNorm<Eigen::Infinity>();
  const double dense_magnitude = solve_spd(kernel, ones).sum();

  json weights = json::array();
  for (std::size_t i = 0; i < t.vertex_count(); ++i) {
    weights.push_back({{"label", t.vertices()[i]}, {"weight", w.values(static_cast<Eigen::Index>(i))}});
  }
  RunReport r{"magnitude", sha256_hex(bytes),
              {{"vertices", t.vertex_count()},
               {"edges", t.edge_count()},
               {"total_length", t.total_length()},
               {"magnitude", w.magnitude},
               {"dense_magnitude", dense_magnitude},
               {"weights", std::move(weights)},
               {"residual", residual}}};
  return {std::move(r), std::nullopt};
}

CommandOutput cmd_diversity(const std::string &input, const InputOptions &opts, double scale_by) {
  validate_scale(scale_by);
  const auto in = load_input(input, opts, scale_by);
  const auto s = peel(in.metric);
  json results = solution_json(in.metric, s);
  results["scale"] = scale_by;
  if (in.tree) results["magnitude"] = tree_magnitude(*in.tree);
  return {RunReport{"diversity", in.digest, std::move(results)}, std::nullopt};
}

CommandOutput cmd_oracle(const std::string &input, const InputOptions &opts) {
  const auto in = load_input(input, opts);
  const auto s = brute_force(in.metric);
  json results = solution_json(in.metric, s);
  results["winning_subset"] = labels_of(in.metric, s.subset);
  results["subsets_examined"] = s.iterations;
  results.erase("iterations");
  return {RunReport{"oracle", in.digest, std::move(results)}, std::nullopt};
}

CommandOutput cmd_profile(const std::string &input, const InputOptions &opts, double tmin,
                          double tmax, std::size_t steps, bool log_spacing) {
  const auto grid = make_grid(tmin, tmax, steps, log_spacing);
  const auto in = load_input(input, opts);
  const auto profile = diversity_profile(in.metric, grid);
  json rows = json::array();
  std::string csv = "t,diversity,support_size,certified\n";
  for (const auto &p : profile) {
    rows.push_back({{"t", p.t},
                    {"diversity", p.diversity},
                    {"support_size", p.support_size},
                    {"certified", p.certified}});
    csv += format_real(p.t) + "," + format_real(p.diversity) + "," +
           std::to_string(p.support_size) + "," + (p.certified ? "true" : "false") + "\n";
  }
  json results = {{"points", in.metric.size()},
                  {"tmin", tmin},
                  {"tmax", tmax},
                  {"steps", steps},
                  {"log_spacing", log_spacing},
                  {"profile", std::move(rows)}};
  return {RunReport{"profile", in.digest, std::move(results)}, std::move(csv)};
}

CommandOutput cmd_converge(const std::string &tree_file, const std::vector<std::size_t> &k_list) {
  if (k_list.empty()) throw ValidationError("--k needs at least one subdivision level");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (k_list[i] == 0) throw ValidationError("--k values must be positive");
    if (i > 0 && k_list[i] <= k_list[i - 1]) throw ValidationError("--k values must be increasing");
  }
  const auto bytes = read_file(tree_file);
  std::istringstream in(bytes);
  const auto t = read_tree(in);
  const double length = t.total_length();
  const double target = continuum_magnitude(length);

  json rows = json::array();
  std::string csv = "k,magnitude,target,gap,order\n";
  double prev_gap = 0.0;
  std::size_t prev_k = 0;
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    const auto k = k_list[i];
    const double mag = tree_magnitude(subdivide(t, k));
    const double gap = target - mag;
    // gap ~ C k^{-p}  =>  p = log(gap_prev / gap) / log(k / k_prev)
    std::optional<double> order;
    if (i > 0 && gap > 0.0 && prev_gap > 0.0) {
      order = std::log(prev_gap / gap) / std::log(static_cast<double>(k) / static_cast<double>(prev_k));
    }
    rows.push_back({{"k", k},
                    {"magnitude", mag},
                    {"target", target},
                    {"gap", gap},
                    {"order", order ? json(*order) : json(nullptr)}});
    csv += std::to_string(k) + "," + format_real(mag) + "," + format_real(target) + "," +
           format_real(gap) + "," + (order ? format_real(*order) : std::string()) + "\n";
    prev_gap = gap;
    prev_k = k;
  }
  json results = {{"total_length", length}, {"target", target}, {"levels", std::move(rows)}};
  return {RunReport{"converge", sha256_hex(bytes), std::move(results)}, std::move(csv)};
}

CommandOutput cmd_gen(std::size_t n, const std::string &length_law, std::uint64_t seed,
                      const std::string &out) {
  const auto law = parse_length_law(length_law);
  const auto t = random_tree(n, law, seed);
  const auto text = tree_to_string(t);
  write_file_atomic(out, text);
  json results = {{"vertices", t.vertex_count()},
                  {"edges", t.edge_count()},
                  {"length_law", to_string(law)},
                  {"seed", seed},
                  {"path", out}};
  return {RunReport{"gen", sha256_hex(text), std::move(results)}, std::nullopt};
}

CommandOutput cmd_check(const std::string &input, const InputOptions &opts,
                        const std::string &measure_file) {
  const auto in = load_input(input, opts);
  json doc;
  try {
    doc = json::parse(read_file(measure_file));
  } catch (const json::parse_error &e) {
    throw ValidationError(std::string("measure file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("measure file must be a JSON object {label: mass}");
  Measure mu{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(in.metric.size()))};
  for (const auto &[label, mass] : doc.items()) {
    const auto i = in.metric.index_of(label);
    if (!i) throw ValidationError("measure names unknown point '" + label + "'");
    if (!mass.is_number()) throw ValidationError("mass of '" + label + "' is not a number");
    const double v = mass.get<double>();
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("mass of '" + label + "' must be finite and nonnegative");
    mu.values(static_cast<Eigen::Index>(*i)) = v;
  }
  const double total = mu.total();
  if (!(total > 0.0)) throw ValidationError("measure has zero total mass");
  mu.values /= total;
  const auto cert = verify_certificate(in.metric, mu);
  json results = certificate_json(cert);
  results["diversity_of_measure"] = 1.0 / cert.c_value;
  results["input_total_mass"] = total;
  results["support"] = labels_of(in.metric, support_of(mu));
  return {RunReport{"check", in.digest, std::move(results)}, std::nullopt};
}

std::vector<std::size_t> parse_k_list(const std::string &text) {
  std::vector<std::size_t> out;
  std::stringstream s(text);
  for (std::string item; std::getline(s, item, ',');) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(item, &pos);
    } catch (const std::exception &) {
      throw ValidationError("--k entry '" + item + "' is not a positive integer");
    }
    if (pos != item.size() || item.front() == '-') {
      throw ValidationError("--k entry '" + item + "' is not a positive integer");
    }
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

json error_json(const std::string &command, const std::string &kind, const std::string &message) {
  return {{"command", command},
          {"error", {{"kind", kind}, {"message", message}}},
          {"versions", {{"format", kReportFormat}, {"tool", kToolVersion}}}};
}

}  // namespace magdiv::cli
