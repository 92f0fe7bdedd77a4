// bjb: command-line front end for the block Jacobi decay toolkit.
//
//   bjb bounds  --lambda=-1 --b=0 [--family F --N 50 --k 1]
//   bjb green   --family F --lambda=-2-1i --N 200 --k 1
//   bjb eigs    --family F --N 300 [--b 0] [--tau 0.01]
//   bjb example --family st:s=3,t=3 --table=phase
//   bjb verify  --family F --lambda=-1 --b=0 --N 300 --k 1 [--mode green|eigenvector|commuting|corollary]
//
// Exit status: 0 all verdicts pass, 2 some verdict fails, 1 input error.
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <regex>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "bjb/bjb.hpp"

namespace {

using namespace bjb;
using ojson = nlohmann::ordered_json;

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_fail = 2;

struct Options {
  std::string family;
  std::string lambda = "-1";
  std::optional<double> b;
  double delta = 1.0;
  double eps = 0.1;
  std::size_t N = 0;
  std::size_t k = 1;
  std::optional<double> tau;
  std::string calib;
  std::string out;
  std::string format = "csv";
  std::string table = "all";
  std::string mode = "green";
  std::string which = "lowest";
  std::size_t M = 10;
  std::size_t n0 = 10;
};

// ---------------------------------------------------------------------------
// Parsing helpers.

double parse_number(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size()) throw DomainError(what + ": '" + s + "' is not a number");
  return x;
}

Complex parse_complex(const std::string& s) {
  static const std::regex re(
      R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*(?:([+-])\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij])?\s*$)");
  static const std::regex pure_imag(R"(^\s*([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*[ij]\s*$)");
  std::smatch m;
  if (std::regex_match(s, m, pure_imag) && s.find_first_of("ij") != std::string::npos) {
    const std::string mag = m[1].str();
    if (mag.empty() || mag == "+") return {0.0, 1.0};
    if (mag == "-") return {0.0, -1.0};
    return {0.0, parse_number(mag, "--lambda")};
  }
  if (!std::regex_match(s, m, re) || !m[1].matched)
    throw DomainError("--lambda: cannot parse '" + s + "' (use -1, -2-1i or a:b:step)");
  const double re_part = parse_number(m[1].str(), "--lambda");
  double im_part = 0.0;
  if (m[2].matched) {
    im_part = m[3].matched ? parse_number(m[3].str(), "--lambda") : 1.0;
    if (m[2].str() == "-") im_part = -im_part;
  }
  return {re_part, im_part};
}

/// Scalar, complex scalar, or real grid a:b:step (inclusive, step may be negative).
std::vector<Complex> parse_lambdas(const std::string& s) {
  if (std::count(s.begin(), s.end(), ':') == 2) {
    const std::size_t c1 = s.find(':'), c2 = s.find(':', c1 + 1);
    const double a = parse_number(s.substr(0, c1), "--lambda grid start");
    const double b = parse_number(s.substr(c1 + 1, c2 - c1 - 1), "--lambda grid end");
    const double step = parse_number(s.substr(c2 + 1), "--lambda grid step");
    if (step == 0.0 || (b - a) / step < 0.0)
      throw DomainError("--lambda grid: step must be nonzero and point from start to end");
    const double count = std::floor((b - a) / step + 1e-9) + 1.0;
    if (count > 100000) throw DomainError("--lambda grid: more than 100000 points");
    std::vector<Complex> out;
    for (std::size_t i = 0; i < static_cast<std::size_t>(count); ++i)
      out.emplace_back(a + static_cast<double>(i) * step);
    return out;
  }
  return {parse_complex(s)};
}

IndexRange parse_range(const std::string& s) {
  const std::size_t c = s.find(':');
  if (c == std::string::npos) throw DomainError("--calib: expected first:last, got '" + s + "'");
  const double a = parse_number(s.substr(0, c), "--calib"), b = parse_number(s.substr(c + 1), "--calib");
  if (a < 1 || b < a || a != std::floor(a) || b != std::floor(b))
    throw DomainError("--calib: need integers 1 <= first <= last, got '" + s + "'");
  return {static_cast<std::size_t>(a), static_cast<std::size_t>(b)};
}

EigenSelector parse_which(const std::string& s) {
  if (s == "lowest") return EigenSelector::lowest();
  if (s.rfind("lowest:", 0) == 0) {
    const double i = parse_number(s.substr(7), "--which");
    if (i < 0 || i != std::floor(i)) throw DomainError("--which: index must be a nonnegative integer");
    return EigenSelector::lowest(static_cast<std::size_t>(i));
  }
  if (s.rfind("nearest:", 0) == 0) return EigenSelector::nearest(parse_number(s.substr(8), "--which"));
  throw DomainError("--which: expected lowest, lowest:<i> or nearest:<x>, got '" + s + "'");
}

// ---------------------------------------------------------------------------
// Output.

class Sink {
public:
  Sink(std::string prefix, std::string format) : prefix_(std::move(prefix)), format_(std::move(format)) {}

  bool json() const { return format_ == "json"; }

  /// Writes a document to <prefix><suffix>.<ext>, or to stdout when no prefix is set.
  void emit(const std::string& suffix, const std::string& body) const {
    if (prefix_.empty()) {
      std::cout << body;
      if (!body.empty() && body.back() != '\n') std::cout << '\n';
      return;
    }
    const std::string path = prefix_ + suffix + (json() ? ".json" : ".csv");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DomainError("--out: cannot write '" + path + "'");
    f << body;
    if (!body.empty() && body.back() != '\n') f << '\n';
  }

private:
  std::string prefix_;
  std::string format_;
};

std::string csv_header(const std::string& columns) {
  return std::string("# ") + report_format_tag + "\n" + columns + "\n";
}

std::string fmt(double x) { return format_double(x); }

ojson complex_json(Complex z) { return ojson{{"re", z.real()}, {"im", z.imag()}}; }

// ---------------------------------------------------------------------------
// Parallel map over lambda values. Results land in input order.

std::size_t thread_count(std::size_t jobs) {
  std::size_t n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BJB_THREADS")) {
    const double v = parse_number(env, "BJB_THREADS");
    if (v < 1 || v != std::floor(v)) throw DomainError("BJB_THREADS must be a positive integer");
    n = static_cast<std::size_t>(v);
  }
  return std::min(n, std::max<std::size_t>(jobs, 1));
}

template <typename R, typename F>
std::vector<R> map_lambdas(const std::vector<Complex>& lambdas, F&& work) {
  std::vector<std::optional<R>> slots(lambdas.size());
  std::vector<std::exception_ptr> errors(lambdas.size());
  const std::size_t nthreads = thread_count(lambdas.size());
  std::atomic<std::size_t> next{0};
  auto run = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < lambdas.size();) {
      try {
        slots[i].emplace(work(lambdas[i]));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < nthreads; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  for (auto& e : errors)  // first failure in input order
    if (e) std::rethrow_exception(e);
  std::vector<R> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// ---------------------------------------------------------------------------
// Commands.

OperatorFamily require_family(const Options& o) {
  if (o.family.empty()) throw DomainError("--family is required for this command");
  return family_from_spec(o.family);
}

double resolve_b(const Options& o, const OperatorFamily* f) {
  if (o.b) return *o.b;
  if (f && f->edge_b) return *f->edge_b;
  throw DomainError("--b is required (the family declares no edge of the essential spectrum)");
}

void require_N(const Options& o, std::size_t min_n, const std::string& cmd) {
  if (o.N < min_n)
    throw DomainError(cmd + ": --N must be >= " + std::to_string(min_n) + " (got " + std::to_string(o.N) + ")");
}

BoundParams make_params(const Options& o, Complex lambda, double b) {
  BoundParams p{lambda, b, o.delta, o.eps};
  p.validate();
  return p;
}

int cmd_bounds(const Options& o, const Sink& sink) {
  std::optional<OperatorFamily> fam;
  if (!o.family.empty()) fam = family_from_spec(o.family);
  const double b = resolve_b(o, fam ? &*fam : nullptr);
  const auto lambdas = parse_lambdas(o.lambda);
  for (Complex l : lambdas) make_params(o, l, b);

  struct Row {
    BoundParams p;
    double gamma, simplified, cdelta;
    std::optional<DecayEnvelope> env;
  };
  if (fam) require_N(o, 1, "bounds");
  if (fam && (o.k < 1 || o.k > o.N)) throw DomainError("bounds: --k must lie in [1, N]");
  const auto rows = map_lambdas<Row>(lambdas, [&](Complex l) {
    const BoundParams p = make_params(o, l, b);
    Row r{p, gamma_rate(p), simplified_rate(p), corollary_delta(p), std::nullopt};
    if (fam) r.env = scalar_envelope(*fam, p, o.N);
    return r;
  });

  if (sink.json()) {
    ojson arr = ojson::array();
    for (const auto& r : rows) {
      ojson j{{"params", params_json(r.p)}, {"gamma", r.gamma}, {"simplified_rate", r.simplified},
              {"corollary_delta", r.cdelta}};
      if (r.env) {
        ojson env = ojson::array();
        for (std::size_t m = 1; m <= o.N; ++m)
          env.push_back({{"index", m}, {"partial_sum", r.env->partial_sum(m)}, {"envelope", r.env->bound(m, o.k)}});
        j["envelope"] = env;
      }
      arr.push_back(j);
    }
    sink.emit("", (lambdas.size() == 1 ? arr[0] : arr).dump(2));
    return exit_ok;
  }
  std::string rates = csv_header("lambda_re,lambda_im,b,delta,epsilon,gamma,simplified_rate,corollary_delta");
  for (const auto& r : rows)
    rates += fmt(r.p.lambda.real()) + "," + fmt(r.p.lambda.imag()) + "," + fmt(r.p.b) + "," + fmt(r.p.delta) +
             "," + fmt(r.p.epsilon) + "," + fmt(r.gamma) + "," + fmt(r.simplified) + "," + fmt(r.cdelta) + "\n";
  sink.emit("", rates);
  if (fam) {
    std::string env = csv_header("lambda_re,lambda_im,index,partial_sum,envelope");
    for (const auto& r : rows)
      for (std::size_t m = 1; m <= o.N; ++m)
        env += fmt(r.p.lambda.real()) + "," + fmt(r.p.lambda.imag()) + "," + std::to_string(m) + "," +
               fmt(r.env->partial_sum(m)) + "," + fmt(r.env->bound(m, o.k)) + "\n";
    sink.emit("_envelope", env);
  }
  return exit_ok;
}

int cmd_green(const Options& o, const Sink& sink) {
  const OperatorFamily fam = require_family(o);
  require_N(o, 1, "green");
  const auto lambdas = parse_lambdas(o.lambda);
  const Truncation trunc = assemble_truncation(fam, o.N);
  const auto cols = map_lambdas<std::vector<double>>(lambdas, [&](Complex l) {
    const GreenBlockSet g = green_column(trunc, l, o.k);
    std::vector<double> norms;
    for (std::size_t j = 1; j <= o.N; ++j) norms.push_back(spectral_norm(g.block(j)));
    return norms;
  });
  if (sink.json()) {
    ojson arr = ojson::array();
    for (std::size_t i = 0; i < lambdas.size(); ++i)
      arr.push_back({{"lambda", complex_json(lambdas[i])}, {"k", o.k}, {"norms", cols[i]}});
    sink.emit("", (lambdas.size() == 1 ? arr[0] : arr).dump(2));
    return exit_ok;
  }
  std::string out = csv_header("lambda_re,lambda_im,j,k,norm");
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    for (std::size_t j = 1; j <= o.N; ++j)
      out += fmt(lambdas[i].real()) + "," + fmt(lambdas[i].imag()) + "," + std::to_string(j) + "," +
             std::to_string(o.k) + "," + fmt(cols[i][j - 1]) + "\n";
  sink.emit("", out);
  return exit_ok;
}

int cmd_eigs(const Options& o, const Sink& sink) {
  const OperatorFamily fam = require_family(o);
  require_N(o, 1, "eigs");
  const double b = resolve_b(o, &fam);
  const Truncation trunc = assemble_truncation(fam, o.N);
  const auto pairs = eigenpairs_below(trunc, b);
  std::optional<Truncation> perturbed;
  if (o.tau) perturbed = perturbed_truncation(trunc, *o.tau);
  std::vector<double> dist;
  for (const auto& p : pairs) dist.push_back(perturbed ? distance_to_spectrum(*perturbed, p.value) : 0.0);

  if (sink.json()) {
    ojson arr = ojson::array();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      ojson j{{"index", i}, {"value", pairs[i].value}, {"last_block_norm", pairs[i].last_block_norm},
              {"boundary_suspect", pairs[i].boundary_suspect}};
      if (perturbed) j["dist_perturbed"] = dist[i];
      ojson blocks = ojson::array();
      for (std::size_t m = 1; m <= o.N; ++m) blocks.push_back(pairs[i].block_norm(m, fam.dim));
      j["block_norms"] = blocks;
      arr.push_back(j);
    }
    sink.emit("", ojson{{"b", b}, {"N", o.N}, {"eigenpairs", arr}}.dump(2));
    return exit_ok;
  }
  std::string out = csv_header(perturbed ? "index,value,last_block_norm,boundary_suspect,dist_perturbed"
                                         : "index,value,last_block_norm,boundary_suspect");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out += std::to_string(i) + "," + fmt(pairs[i].value) + "," + fmt(pairs[i].last_block_norm) + "," +
           (pairs[i].boundary_suspect ? "1" : "0");
    if (perturbed) out += "," + fmt(dist[i]);
    out += "\n";
  }
  sink.emit("", out);
  return exit_ok;
}

StParams st_params_from(const std::string& spec) {
  if (spec.rfind("st:", 0) != 0 && spec != "st")
    throw DomainError("example: --family must be an st family, e.g. st:s=3,t=3,alpha=0.6");
  StParams p;
  if (spec.size() > 3) {
    std::map<std::string, double> kv;
    std::string rest = spec.substr(3);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t end = rest.find(',', pos);
      if (end == std::string::npos) end = rest.size();
      const std::string item = rest.substr(pos, end - pos);
      const std::size_t eq = item.find('=');
      if (eq == std::string::npos) throw DomainError("example: expected key=value, got '" + item + "'");
      kv[item.substr(0, eq)] = parse_number(item.substr(eq + 1), "example: " + item.substr(0, eq));
      pos = end + 1;
    }
    for (const auto& [key, val] : kv) {
      if (key == "s") p.s = val;
      else if (key == "t") p.t = val;
      else if (key == "alpha") p.alpha = val;
      else throw DomainError("example: unknown parameter '" + key + "' (s, t, alpha)");
    }
  }
  p.validate();
  return p;
}

int cmd_example(const Options& o, const Sink& sink) {
  const StParams p = st_params_from(o.family.empty() ? "st" : o.family);
  static const std::vector<std::string> tables{"phase", "transfer", "levinson", "jc", "all"};
  if (std::find(tables.begin(), tables.end(), o.table) == tables.end())
    throw DomainError("--table: expected one of phase, transfer, levinson, jc, all");
  const bool all = o.table == "all";
  const std::size_t nmax = o.N == 0 ? 100 : o.N;
  const double lambda = parse_complex(o.lambda).real();

  if (o.table == "phase") {
    const char* phase = to_string(phase_class(p.s, p.t));
    sink.emit("_phase", sink.json() ? ojson{{"s", p.s}, {"t", p.t}, {"phase", phase}}.dump(2) : std::string(phase));
    return exit_ok;
  }
  ojson doc;
  if (all || o.table == "transfer") {
    if (nmax < 2) throw DomainError("example: --N must be >= 2 for the transfer table");
    const bool asym = std::abs(p.s * p.t - 4.0) <= 1e-12 && p.alpha > 0.5 && lambda < 0.0;
    std::string csv = csv_header(std::string("n,determinant,mu1_re,mu1_im,mu2_re,mu2_im,mu3_re,mu3_im,mu4_re,mu4_im,decaying_abs") +
                                 (asym ? ",asymptotic_decaying_abs" : ""));
    ojson rows = ojson::array();
    for (std::size_t n = 2; n <= nmax; ++n) {
      const auto roots = transfer_eigenvalues(p, lambda, n);
      const double det = transfer_matrix(p, lambda, n).determinant();
      const double dec = std::abs(decaying_root(roots).value);
      csv += std::to_string(n) + "," + fmt(det);
      ojson mus = ojson::array();
      for (auto z : roots) {
        csv += "," + fmt(z.real()) + "," + fmt(z.imag());
        mus.push_back(complex_json(z));
      }
      csv += "," + fmt(dec);
      ojson row{{"n", n}, {"determinant", det}, {"mu", mus}, {"decaying_abs", dec}};
      if (asym) {
        const double a = std::abs(mu_asymptotic(p, lambda, n)[1]);
        csv += "," + fmt(a);
        row["asymptotic_decaying_abs"] = a;
      }
      csv += "\n";
      rows.push_back(row);
    }
    if (sink.json()) doc["transfer"] = rows;
    else sink.emit("_transfer", csv);
  }
  if (all || o.table == "levinson") {
    if (!p.critical() || !(lambda < 0.0)) {
      if (!all) throw DomainError("example: the Levinson table needs s t = 4 and lambda < 0");
    } else {
      if (nmax < o.n0 || o.n0 < 2) throw DomainError("example: need 2 <= --n0 <= --N for the Levinson table");
      std::string csv = csv_header("n,log_product,log_closed_form,tie_flagged");
      ojson rows = ojson::array();
      double log_product = 0.0;
      bool tie = false;
      for (std::size_t n = o.n0; n <= nmax; ++n) {
        const auto prof = levinson_profile(p, lambda, n, n);  // single factor, accumulated here
        log_product += prof.log_product;
        tie = tie || prof.tie_flagged;
        const double closed = std::log(prof.closed_form);
        csv += std::to_string(n) + "," + fmt(log_product) + "," + fmt(closed) + "," + (tie ? "1" : "0") + "\n";
        rows.push_back({{"n", n}, {"log_product", log_product}, {"log_closed_form", closed}, {"tie_flagged", tie}});
      }
      if (sink.json()) doc["levinson"] = rows;
      else sink.emit("_levinson", csv);
    }
  }
  if (all || o.table == "jc") {
    const double bound = jc_lower_bound(p.s, p.t);
    const double min_eig = min_eigenvalue(assemble_truncation(jc_family(p.s, p.t), nmax));
    if (sink.json()) doc["jc"] = {{"s", p.s}, {"t", p.t}, {"N", nmax}, {"lower_bound", bound}, {"min_eigenvalue", min_eig}};
    else sink.emit("_jc", csv_header("s,t,N,lower_bound,min_eigenvalue") + fmt(p.s) + "," + fmt(p.t) + "," +
                              std::to_string(nmax) + "," + fmt(bound) + "," + fmt(min_eig) + "\n");
  }
  if (all) {
    const char* phase = to_string(phase_class(p.s, p.t));
    if (sink.json()) doc["phase"] = phase;
    else sink.emit("_phase", phase);
  }
  if (sink.json()) sink.emit("", doc.dump(2));
  return exit_ok;
}

int cmd_verify(const Options& o, const Sink& sink) {
  const OperatorFamily fam = require_family(o);
  require_N(o, 20, "verify");
  static const std::vector<std::string> modes{"green", "eigenvector", "commuting", "corollary"};
  if (std::find(modes.begin(), modes.end(), o.mode) == modes.end())
    throw DomainError("--mode: expected green, eigenvector, commuting or corollary");
  const double b = resolve_b(o, &fam);
  if (o.k < 1 || o.k > verdict_limit(o.N))
    throw DomainError("verify: --k must lie in [1, " + std::to_string(verdict_limit(o.N)) + "]");
  VerifyOptions vo;
  if (!o.calib.empty()) vo.calibration = parse_range(o.calib);
  vo.qualified_M = o.M;

  std::vector<DecayReport> reports;
  if (o.mode == "eigenvector") {
    BoundParams p{Complex(b - 1.0), b, o.delta, o.eps};  // lambda is replaced by the eigenvalue
    p.validate();
    reports.push_back(verify_eigenvector_decay(fam, p, o.N, parse_which(o.which), vo));
  } else {
    const auto lambdas = parse_lambdas(o.lambda);
    for (Complex l : lambdas) make_params(o, l, b);
    reports = map_lambdas<DecayReport>(lambdas, [&](Complex l) {
      BoundParams p = make_params(o, l, b);
      if (o.mode == "commuting") return verify_commuting_decay(fam, p, o.N, o.k, vo);
      if (o.mode == "corollary") p.delta = corollary_delta(p);
      return verify_green_decay(fam, p, o.N, o.k, vo);
    });
  }

  bool pass = true;
  for (const auto& r : reports) pass = pass && r.all_pass();
  if (sink.json()) {
    ojson arr = ojson::array();
    for (const auto& r : reports) arr.push_back(report_summary_json(r));
    sink.emit("", (reports.size() == 1 ? arr[0] : arr).dump(2));
  } else if (reports.size() == 1) {
    sink.emit("", report_csv(reports[0]));
  } else {
    for (std::size_t i = 0; i < reports.size(); ++i) sink.emit("_" + std::to_string(i), report_csv(reports[i]));
  }
  for (const auto& r : reports)
    if (!r.all_pass())
      std::cerr << "verify: " << r.verdict.size() - r.pass_count() << " of " << r.verdict.size()
                << " verdicts fail at lambda=" << fmt(r.params.lambda.real())
                << (r.params.lambda.imag() != 0.0 ? "+" + fmt(r.params.lambda.imag()) + "i" : "") << "\n";
  return pass ? exit_ok : exit_fail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green-matrix and eigenvector decay bounds for block Jacobi operators"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--family", o.family, "st:s=..,t=..,alpha=.. | scalar-free | diagonal-test:.. | jc:s=..,t=.. | file.json");
  app.add_option("--lambda", o.lambda, "spectral parameter: -1, -2-1i, or a grid a:b:step");
  app.add_option("--b", o.b, "edge b of the essential spectrum (default: family's own)");
  app.add_option("--delta", o.delta, "delta > 0");
  app.add_option("--eps", o.eps, "epsilon in (0,1)");
  app.add_option("--N", o.N, "number of blocks in the truncation");
  app.add_option("--k", o.k, "source block index");
  app.add_option("--tau", o.tau, "perturbation strength for J(tau) (eigs)");
  app.add_option("--calib", o.calib, "calibration range first:last");
  app.add_option("--out", o.out, "output path prefix (default: stdout)");
  app.add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--table", o.table, "example table: phase | transfer | levinson | jc | all");
  app.add_option("--mode", o.mode, "verify mode: green | eigenvector | commuting | corollary");
  app.add_option("--which", o.which, "eigenvector selector: lowest[:i] | nearest:x");
  app.add_option("--M", o.M, "M in the qualified constant");
  app.add_option("--n0", o.n0, "first factor of the Levinson product");

  int status = exit_ok;
  const Sink* sink = nullptr;
  Sink sink_storage("", "csv");
  auto bind = [&](const char* name, const char* help, int (*fn)(const Options&, const Sink&)) {
    app.add_subcommand(name, help)->callback([&, fn] {
      sink_storage = Sink(o.out, o.format);
      sink = &sink_storage;
      status = fn(o, *sink);
    });
  };
  bind("bounds", "decay rates gamma and envelope tables", cmd_bounds);
  bind("green", "norms of a Green-matrix column", cmd_green);
  bind("eigs", "eigenpairs of the truncation below b", cmd_eigs);
  bind("example", "tables for the 2x2 st family", cmd_example);
  bind("verify", "decay reports with pass/fail verdicts", cmd_verify);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_input;
  }
  return status;
}
