#include <cmath>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "thickening/thickening.hpp"

namespace {

using thk::io::json;

constexpr int kUsageError = 2;
constexpr int kCertificationError = 3;

struct Input {
  std::string space;
  std::string cloud;
};

struct Loaded {
  thk::FiniteMetricSpace space;
  std::optional<thk::PointCloud> cloud;
};

Loaded load(const std::string& space, const std::string& cloud) {
  if (space.empty() == cloud.empty()) throw thk::Error(thk::ErrorKind::InvalidArgument, "give exactly one of --space, --cloud");
  if (!space.empty()) return {thk::io::read_distance_matrix(space), std::nullopt};
  auto pc = thk::io::read_point_cloud(cloud);
  return {thk::euclidean_metric(pc), pc};
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
  } else {
    thk::io::write_file_atomic(output, text);
  }
}

std::string render(const thk::PersistenceDiagram& dgm, const std::string& format) {
  if (format == "csv") return thk::io::diagram_to_csv(dgm);
  if (format == "svg") return thk::io::diagram_to_svg(dgm);
  return thk::io::diagram_to_json(dgm).dump(2) + "\n";
}

thk::PersistenceDiagram only_degree(const thk::PersistenceDiagram& dgm, int degree) {
  thk::PersistenceDiagram out;
  out.touch(degree);
  for (const auto& iv : dgm.intervals(degree)) out.add(degree, iv);
  return out;
}

struct JobOptions {
  std::string kind = "vr";
  std::string p = "2";
  int max_dim = 1;
};

thk::FilteredComplex build(const Loaded& in, const JobOptions& job, const std::string& ambient_path) {
  const auto p = thk::PValue::parse(job.p);
  if (job.kind == "ambient_cech") {
    if (ambient_path.empty()) throw thk::Error(thk::ErrorKind::InvalidArgument, "ambient_cech needs --ambient");
    thk::FiniteMetricSpace M = in.cloud ? thk::euclidean_metric(thk::io::read_point_cloud(ambient_path))
                                        : thk::io::read_distance_matrix(ambient_path);
    return thk::build_ambient_cech_complex(thk::Embedding::prefix(in.space, M), p, job.max_dim);
  }
  thk::FiltrationKind kind = thk::FiltrationKind::vietoris_rips;
  if (job.kind == "cech") kind = thk::FiltrationKind::cech;
  if (job.kind == "classical" || job.kind == "classical_vr") kind = thk::FiltrationKind::classical_vr;
  if (job.kind == "classical_cech") kind = thk::FiltrationKind::classical_cech;
  return thk::build_complex(in.space, p, kind, job.max_dim);
}

void note_reliability(const thk::FilteredComplex& fc) {
  if (fc.conjectural_higher_degrees && fc.max_dim >= 1)
    std::cerr << "note: degrees >= 1 of the finite-p vr filtration are conjectural\n";
  if (fc.reliable_max_degree() < fc.max_dim)
    std::cerr << "note: degree " << fc.max_dim << " is truncated; raise --max-dim to close its intervals\n";
}

const std::vector<std::string> kKinds{"vr", "cech", "ambient_cech", "classical", "classical_vr", "classical_cech"};

void add_job_options(CLI::App* cmd, JobOptions& job) {
  cmd->add_option("--kind", job.kind, "Filtration kind")->check(CLI::IsMember(kKinds));
  cmd->add_option("--p", job.p, "Exponent p >= 1 or inf");
  cmd->add_option("--max-dim", job.max_dim, "Largest simplex dimension")->check(CLI::NonNegativeNumber);
}

json report_number(double v) { return thk::io::number_or_inf(v); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Persistent homology of p-Vietoris-Rips and p-Cech metric thickenings"};
  app.require_subcommand(1);

  // diagram
  Input din;
  JobOptions djob;
  std::string ambient, format = "json", output;
  std::optional<int> ddegree;
  auto* diagram = app.add_subcommand("diagram", "Compute a persistence diagram");
  diagram->add_option("--space", din.space, "Distance matrix CSV");
  diagram->add_option("--cloud", din.cloud, "Point cloud CSV");
  diagram->add_option("--ambient", ambient, "Ambient space whose first points are the input (ambient_cech)");
  add_job_options(diagram, djob);
  diagram->add_option("--degree", ddegree, "Only this degree")->check(CLI::NonNegativeNumber);
  diagram->add_option("--out", format, "Output format")->check(CLI::IsMember({"json", "csv", "svg"}));
  diagram->add_option("--output", output, "Output file (default stdout)");
  std::string complex_out;
  diagram->add_option("--complex-out", complex_out, "Also write the filtered complex as JSON lines");

  // compare
  std::vector<std::string> cspaces, cclouds;
  JobOptions cjob;
  std::optional<int> cdegree;
  std::string corr, coutput;
  auto* compare = app.add_subcommand("compare", "Bottleneck distance between two spaces' diagrams");
  compare->add_option("--space", cspaces, "Two distance matrix CSVs")->expected(0, 2);
  compare->add_option("--cloud", cclouds, "Two point cloud CSVs")->expected(0, 2);
  add_job_options(compare, cjob);
  compare->add_option("--degree", cdegree, "Only this degree")->check(CLI::NonNegativeNumber);
  compare->add_option("--corr", corr, "Correspondence CSV with columns phi, psi");
  compare->add_option("--output", coutput, "Output file (default stdout)");

  // oracle
  std::string oracle_name, oscale = "auto", op = "2", ooutput, oformat = "json";
  Input oin;
  int on = 1;
  auto* oracle = app.add_subcommand("oracle", "Closed-form reference diagrams");
  oracle->add_option("name", oracle_name, "zn or single-linkage")->required()->check(CLI::IsMember({"zn", "single-linkage"}));
  oracle->add_option("--n", on, "Equilateral space has n+1 points")->check(CLI::PositiveNumber);
  oracle->add_option("--p", op, "Exponent p >= 1 or inf");
  oracle->add_option("--space", oin.space, "Distance matrix CSV");
  oracle->add_option("--cloud", oin.cloud, "Point cloud CSV");
  oracle->add_option("--scale", oscale, "auto or a positive number");
  oracle->add_option("--out", oformat, "Output format")->check(CLI::IsMember({"json", "csv", "svg"}));
  oracle->add_option("--output", ooutput, "Output file (default stdout)");

  // audit-sphere
  int n_dim = 1, degree = 1, amax_dim = -1;
  std::size_t count = 40;
  std::string ap = "2", mode = "grid", aoutput;
  std::uint64_t seed = 0;
  auto* audit = app.add_subcommand("audit-sphere", "Check the 2-Cech sphere endpoint on a sample");
  audit->add_option("--n-dim", n_dim, "Sphere dimension")->check(CLI::PositiveNumber);
  audit->add_option("--count", count, "Number of sample points");
  audit->add_option("--p", ap, "Exponent; only p = 2 is certified");
  audit->add_option("--degree", degree, "Homology degree to audit")->check(CLI::NonNegativeNumber);
  audit->add_option("--max-dim", amax_dim, "Skeleton dimension (default degree + 1)");
  audit->add_option("--mode", mode, "grid or uniform")->check(CLI::IsMember({"grid", "uniform"}));
  audit->add_option("--seed", seed, "Seed for uniform sampling");
  audit->add_option("--output", aoutput, "Output file (default stdout)");

  // transport
  Input tin;
  std::string alpha_path, beta_path, tq = "1", toutput;
  auto* transport = app.add_subcommand("transport", "Wasserstein distance and an optimal plan");
  transport->add_option("--space", tin.space, "Distance matrix CSV");
  transport->add_option("--cloud", tin.cloud, "Point cloud CSV");
  transport->add_option("--alpha", alpha_path, "First measure (CSV weights or JSON)")->required();
  transport->add_option("--beta", beta_path, "Second measure")->required();
  transport->add_option("--q", tq, "Exponent q >= 1 or inf");
  transport->add_option("--output", toutput, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*diagram) {
      const auto in = load(din.space, din.cloud);
      const auto fc = build(in, djob, ambient);
      note_reliability(fc);
      if (!complex_out.empty()) thk::io::write_file_atomic(complex_out, thk::io::complex_to_jsonl(fc));
      auto dgm = thk::compute_diagram(fc);
      if (ddegree) dgm = only_degree(dgm, *ddegree);
      emit(render(dgm, format), output);
    } else if (*compare) {
      std::vector<Loaded> ins;
      if (cspaces.size() == 2 && cclouds.empty()) {
        for (const auto& s : cspaces) ins.push_back(load(s, ""));
      } else if (cclouds.size() == 2 && cspaces.empty()) {
        for (const auto& c : cclouds) ins.push_back(load("", c));
      } else {
        throw thk::Error(thk::ErrorKind::InvalidArgument, "give two --space or two --cloud inputs");
      }
      if (cjob.kind == "ambient_cech") throw thk::Error(thk::ErrorKind::InvalidArgument, "compare does not take ambient_cech");
      const auto da = thk::compute_diagram(build(ins[0], cjob, ""));
      const auto db = thk::compute_diagram(build(ins[1], cjob, ""));
      std::vector<int> degrees;
      if (cdegree) {
        degrees.push_back(*cdegree);
      } else {
        for (int k = 0; k <= cjob.max_dim; ++k) degrees.push_back(k);
      }
      json report;
      report["kind"] = cjob.kind;
      report["p"] = cjob.p;
      std::optional<double> bound;
      if (!corr.empty()) {
        const auto c = thk::io::parse_correspondence(thk::io::read_file(corr));
        const double gh = thk::gh_upper_bound(ins[0].space, ins[1].space, c);
        report["gh_upper_bound"] = report_number(gh);
        bound = 2.0 * gh;
      }
      bool pass = true;
      json rows = json::array();
      for (int k : degrees) {
        const double b = thk::bottleneck(da, db, k).value;
        json row{{"degree", k}, {"bottleneck", report_number(b)}};
        if (bound) {
          const bool ok = b <= *bound + 1e-9;
          row["bound"] = report_number(*bound);
          row["pass"] = ok;
          pass = pass && ok;
        }
        rows.push_back(std::move(row));
      }
      report["degrees"] = std::move(rows);
      if (bound) report["pass"] = pass;
      emit(report.dump(2) + "\n", coutput);
      if (!pass) {
        std::cerr << "CertificationFailure: bottleneck exceeds 2 * gh_upper_bound\n";
        return kCertificationError;
      }
    } else if (*oracle) {
      const auto p = thk::PValue::parse(op);
      thk::PersistenceDiagram dgm;
      if (oracle_name == "zn") {
        dgm = thk::zn_diagram(static_cast<std::size_t>(on), p).diagram;
      } else {
        const auto in = load(oin.space, oin.cloud);
        double scale = 0.0;
        if (oscale == "auto") {
          scale = thk::edge_death_scale(p);
        } else {
          try {
            scale = std::stod(oscale);
          } catch (const std::exception&) {
            throw thk::Error(thk::ErrorKind::InvalidArgument, "bad --scale '" + oscale + "'");
          }
        }
        dgm = thk::single_linkage_h0(in.space, scale);
      }
      emit(render(dgm, oformat), ooutput);
    } else if (*audit) {
      const auto p = thk::PValue::parse(ap);
      const auto cloud = thk::sample_sphere(n_dim, count, mode == "grid" ? thk::SampleMode::grid
                                                                        : thk::SampleMode::seeded_uniform, seed);
      const int max_dim = amax_dim >= 0 ? amax_dim : degree + 1;
      if (degree > max_dim) throw thk::Error(thk::ErrorKind::InvalidArgument, "--degree exceeds --max-dim");
      const auto X = thk::euclidean_metric(cloud);
      const auto dgm = thk::compute_diagram(thk::build_complex(X, p, thk::FiltrationKind::cech, max_dim));

      json report{{"n_dim", n_dim}, {"count", count}, {"p", p.to_string()}, {"degree", degree}};
      std::vector<std::string> reasons;
      std::optional<double> slack;
      if (n_dim == 1) {
        const double dh = thk::circle_sample_hausdorff(cloud);
        slack = 2.0 * dh;
        report["hausdorff"] = report_number(dh);
        report["slack"] = report_number(*slack);
      } else {
        reasons.push_back("no Hausdorff bound for this sphere sample");
      }
      if (p != thk::PValue(2.0)) reasons.push_back("only p = 2 is certified");
      if (slack && !(*slack < std::numbers::sqrt2 / 2)) reasons.push_back("slack too large to certify");

      const auto& ivs = dgm.intervals(degree);
      bool pass = false;
      if (degree == 0) {
        std::size_t infinite = 0;
        double worst = 0.0;
        for (const auto& iv : ivs) {
          if (iv.finite()) {
            worst = std::max(worst, iv.death);
          } else {
            ++infinite;
          }
        }
        report["infinite_intervals"] = infinite;
        report["max_finite_death"] = report_number(worst);
        pass = slack && infinite == 1 && worst <= 2.0 * *slack;
      } else {
        const thk::Interval* dominant = nullptr;
        for (const auto& iv : ivs)
          if (!dominant || iv.length() > dominant->length()) dominant = &iv;
        if (dominant) {
          report["dominant"] = json::array({report_number(dominant->birth), report_number(dominant->death)});
          const double gap = std::max(dominant->birth, std::abs(dominant->death - std::numbers::sqrt2));
          report["gap_to_endpoint"] = report_number(gap);
          pass = slack && dominant->birth <= *slack && std::abs(dominant->death - std::numbers::sqrt2) <= *slack + 1e-6;
        } else {
          report["dominant"] = nullptr;
          reasons.push_back("no interval in this degree");
        }
        if (degree >= max_dim) reasons.push_back("degree equals --max-dim; intervals may be truncated");
      }
      if (!pass && reasons.empty()) reasons.push_back("endpoint check failed");
      const bool certified = pass && reasons.empty();
      report["certified"] = certified;
      report["reasons"] = reasons;
      emit(report.dump(2) + "\n", aoutput);
      if (!certified) {
        std::cerr << "CertificationFailure: " << reasons.front() << "\n";
        return kCertificationError;
      }
    } else if (*transport) {
      const auto in = load(tin.space, tin.cloud);
      const auto alpha = thk::io::read_measure(alpha_path, in.space);
      const auto beta = thk::io::read_measure(beta_path, in.space);
      const auto q = thk::PValue::parse(tq);
      const auto res = q.is_infinite() ? thk::wasserstein_inf(alpha, beta) : thk::wasserstein(alpha, beta, q);
      json report{{"q", q.to_string()}, {"value", report_number(res.value)}};
      report["plan"] = thk::io::plan_to_json(res.plan);
      emit(report.dump(2) + "\n", toutput);
    }
  } catch (const thk::Error& e) {
    std::cerr << e.name() << ": " << e.what() << "\n";
    return e.kind() == thk::ErrorKind::CertificationFailure ? kCertificationError : kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "InvalidArgument: " << e.what() << "\n";
    return kUsageError;
  }
  return 0;
}
