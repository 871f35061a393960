#include "cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "rotkit/bigfloat.hpp"
#include "rotkit/cantor.hpp"
#include "rotkit/dynamics.hpp"
#include "rotkit/errors.hpp"
#include "rotkit/exact_core.hpp"
#include "rotkit/lambda_tree.hpp"
#include "rotkit/series.hpp"
#include "rotkit/verify.hpp"

namespace rotkit::cli {

namespace {

using Json = nlohmann::ordered_json;

// Raised for file-system failures; the message is the OS error text.
class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t parse_positive(const std::string& text, const std::string& what) {
  const Rational r = Rational::parse(text);
  if (!r.is_integer() || r.sign() <= 0) throw ParseError(what + " must be a positive integer, got '" + text + "'");
  return to_u64(r.num());
}

long parse_precision(const std::string& text, const std::string& origin) {
  const std::uint64_t v = parse_positive(text, origin);
  if (v < 64 || v > (1u << 20)) throw ParseError(origin + " must lie in [64, 2^20], got " + text);
  return static_cast<long>(v);
}

// "num/den" in lowest terms, or a plain integer.
Rational parse_reduced(const std::string& text, const std::string& what) {
  const Rational r = Rational::parse(text);
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const Rational n = Rational::parse(text.substr(0, slash));
    const Rational d = Rational::parse(text.substr(slash + 1));
    if (n.num() != r.num() * d.num() / r.den() || d.num() != r.den()) {
      throw ParseError(what + " must be in lowest terms, got '" + text + "' (= " + r.str() + ")");
    }
  }
  return r;
}

// "num/den", "2^-k" or a decimal such as 1e-18; must lie in (0, 1).
Rational parse_eps(const std::string& text) {
  Rational eps;
  if (text.rfind("2^", 0) == 0) {
    const Rational e = Rational::parse(text.substr(2));
    if (!e.is_integer() || !e.num().fits_slong_p()) throw ParseError("bad exponent in '" + text + "'");
    eps = Rational::pow2(e.num().get_si());
  } else if (text.find('/') != std::string::npos && text.find_first_of("eE") == std::string::npos) {
    eps = Rational::parse(text);
  } else {
    eps = Rational::parse_decimal(text);
  }
  if (eps.sign() <= 0 || eps >= Rational(1)) throw ParseError("eps must lie in (0, 1), got '" + text + "'");
  return eps;
}

OutputFormat parse_format(const std::string& text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  throw ParseError("output format must be json or csv, got '" + text + "'");
}

const char* format_name(OutputFormat f) { return f == OutputFormat::json ? "json" : "csv"; }

int digits_for(long prec) { return std::max(1, static_cast<int>(static_cast<double>(prec - 1) * 0.30102999566)); }

std::string decimal(const Rational& v, long prec, Round rnd, int digits) {
  return BigFloat(v, prec, rnd).to_fixed(digits, rnd);
}

Json config_json(const RunConfig& c) {
  Json j;
  j["float_precision_bits"] = c.float_precision_bits;
  j["max_depth"] = c.max_depth ? Json(*c.max_depth) : Json(nullptr);
  j["orbit_step_cap"] = c.orbit_step_cap;
  j["exact_bit_budget"] = c.exact_bit_budget;
  j["grid_cap"] = c.grid_cap;
  j["output_format"] = format_name(c.output_format);
  return j;
}

Json envelope(const std::string& command, Json input, const RunConfig& cfg) {
  Json j;
  j["command"] = command;
  j["input"] = std::move(input);
  j["config"] = config_json(cfg);
  return j;
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << "\n"; }

Json plateau_json(const Plateau& p) { return Json::array({p.lo.str(), p.hi.str()}); }

// Writes to `path`, or to `out` when path is empty or "-".
void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoFailure(path + ": " + std::strerror(errno));
  f << text;
  f.close();
  if (!f) throw IoFailure(path + ": " + std::strerror(errno));
}

// ---- commands ---------------------------------------------------------------

struct RhoArgs {
  std::string lambda, delta, method = "tree";
  std::uint64_t steps = 1000;
};

int cmd_rho(const RhoArgs& a, const RunConfig& cfg, std::ostream& out) {
  const Rational l = parse_reduced(a.lambda, "lambda");
  const Rational d = parse_reduced(a.delta, "delta");
  const ContractedRotation map(l, d);
  Json j = envelope("rho", Json{{"lambda", l.str()}, {"delta", d.str()}, {"method", a.method}}, cfg);
  int code = kOk;

  std::optional<RhoResult> exact;
  if (a.method != "orbit") {
    try {
      exact = rho_exact(l, d, cfg.max_depth);
    } catch (const DepthExceeded& e) {
      const BracketingPair& p = e.pair();
      j["error"] = "depth-exceeded";
      j["message"] = e.what();
      j["bracket"] = Json{{"left", p.left.frac.str()},
                          {"left_value", p.left.value().str()},
                          {"right", p.right.frac.str()},
                          {"right_value", p.right.value().str()},
                          {"depth", p.depth}};
      emit(out, j);
      return kResource;
    }
    j["rho"] = exact->rho.str();
    j["plateau"] = plateau_json(exact->plateau);
    j["depth"] = exact->depth;
  }
  if (a.method != "tree") {
    if (a.steps > cfg.orbit_step_cap) {
      throw ResourceLimit("orbit steps " + std::to_string(a.steps) + " exceed orbit_step_cap " +
                          std::to_string(cfg.orbit_step_cap));
    }
    const RhoEstimate e = rho_estimate(map, Rational(0), a.steps, cfg.float_precision_bits);
    const int digits = digits_for(cfg.float_precision_bits);
    Json o;
    o["steps"] = e.n;
    o["estimate"] = e.estimate.to_fixed(digits);
    o["error_bound"] = e.error_bar.str();
    o["enclosure"] = Json::array({e.lower.to_fixed(digits, Round::down), e.upper.to_fixed(digits, Round::up)});
    o["precision_bits"] = e.working_precision;
    o["exact_steps"] = e.exact_steps;
    if (exact) {
      const bool ok = e.consistent_with(exact->rho.value());
      o["cross_check"] = ok ? "consistent" : "inconsistent";
      if (!ok) code = kVerification;
    }
    j["orbit"] = std::move(o);
  }
  emit(out, j);
  return code;
}

struct StaircaseArgs {
  std::string lambda, out_path, format;
  std::uint64_t grid = 0;
  unsigned jobs = 1;
};

int cmd_staircase(const StaircaseArgs& a, const RunConfig& cfg, std::ostream& out) {
  const Rational l = parse_reduced(a.lambda, "lambda");
  if (a.grid == 0) throw ParseError("--grid must be positive");
  if (a.grid > cfg.grid_cap) {
    throw ResourceLimit("grid " + std::to_string(a.grid) + " exceeds grid_cap " + std::to_string(cfg.grid_cap));
  }
  const std::uint64_t n = a.grid;
  std::vector<std::optional<RhoResult>> rows(n);
  std::vector<std::exception_ptr> errors(n);
  const unsigned jobs = std::max(1u, std::min<unsigned>(a.jobs, static_cast<unsigned>(n)));
  auto work = [&](unsigned w) {
    for (std::uint64_t i = w; i < n; i += jobs) {
      try {
        rows[i] = rho_exact(l, Rational(to_bigint(i), to_bigint(n)), cfg.max_depth);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::uint64_t i = 1; i < n; ++i) {
    if (rows[i]->rho < rows[i - 1]->rho) {
      throw VerificationFailed("rho decreases between delta = " + std::to_string(i - 1) + "/" + std::to_string(n) +
                               " and " + std::to_string(i) + "/" + std::to_string(n));
    }
  }

  const OutputFormat fmt = a.format.empty() ? OutputFormat::csv : parse_format(a.format);
  std::ostringstream os;
  if (fmt == OutputFormat::csv) {
    os << "delta_num,delta_den,rho_num,rho_den,plateau_lo,plateau_hi,depth\n";
    for (std::uint64_t i = 0; i < n; ++i) {
      const Rational d(to_bigint(i), to_bigint(n));
      const RhoResult& r = *rows[i];
      os << d.num().get_str() << "," << d.den().get_str() << "," << r.rho.p() << "," << r.rho.q() << ","
         << r.plateau.lo.str() << "," << r.plateau.hi.str() << "," << r.depth << "\n";
    }
  } else {
    Json j = envelope("staircase", Json{{"lambda", l.str()}, {"grid", n}}, cfg);
    Json arr = Json::array();
    for (std::uint64_t i = 0; i < n; ++i) {
      const RhoResult& r = *rows[i];
      arr.push_back(Json{{"delta", Rational(to_bigint(i), to_bigint(n)).str()},
                         {"rho", r.rho.str()},
                         {"plateau", plateau_json(r.plateau)},
                         {"depth", r.depth}});
    }
    j["rows"] = std::move(arr);
    os << j.dump(2) << "\n";
  }
  write_text(a.out_path, os.str(), out);
  return kOk;
}

struct TreeArgs {
  std::string lambda, format;
  unsigned depth = 0;
};

int cmd_tree(const TreeArgs& a, const RunConfig& cfg, std::ostream& out) {
  const Rational l = parse_reduced(a.lambda, "lambda");
  if (a.depth == 0) throw ParseError("--depth must be positive");
  const auto row = tree_row(l, a.depth);
  const OutputFormat fmt = a.format.empty() ? cfg.output_format : parse_format(a.format);
  if (fmt == OutputFormat::csv) {
    out << "p,q,value_num,value_den,plateau_lo,plateau_hi\n";
    for (const auto& n : row) {
      const Plateau p = plateau(n);
      const Rational v = n.value();
      out << n.frac.p() << "," << n.frac.q() << "," << v.num().get_str() << "," << v.den().get_str() << ","
          << p.lo.str() << "," << p.hi.str() << "\n";
    }
    return kOk;
  }
  Json j = envelope("tree", Json{{"lambda", l.str()}, {"depth", a.depth}}, cfg);
  Json nodes = Json::array();
  for (const auto& n : row) {
    const Plateau p = plateau(n);
    nodes.push_back(Json{{"fraction", n.frac.str()},
                         {"value", n.value().str()},
                         {"plateau", plateau_json(p)},
                         {"sentinel", p.sentinel}});
  }
  j["nodes"] = std::move(nodes);
  emit(out, j);
  return kOk;
}

struct OrbitArgs {
  std::string lambda, delta, x0 = "0";
  std::uint64_t steps = 0;
};

int cmd_orbit(const OrbitArgs& a, const RunConfig& cfg, std::ostream& out) {
  const Rational l = parse_reduced(a.lambda, "lambda");
  const Rational d = parse_reduced(a.delta, "delta");
  const Rational x0 = parse_reduced(a.x0, "x0");
  const ContractedRotation map(l, d);
  const RhoResult r = rho_exact(l, d, cfg.max_depth);
  PeriodicOrbitOptions opts;
  opts.precision_bits = cfg.float_precision_bits;
  const PeriodicOrbit c = find_periodic_orbit(map, r.rho, opts);

  Json j = envelope("orbit", Json{{"lambda", l.str()}, {"delta", d.str()}, {"x0", x0.str()}, {"steps", a.steps}}, cfg);
  j["rho"] = r.rho.str();
  j["plateau"] = plateau_json(r.plateau);
  Json cyc;
  cyc["period"] = c.period;
  Json pts = Json::array();
  for (const auto& p : c.points) pts.push_back(p.str());
  cyc["points"] = std::move(pts);
  cyc["wrap_word"] = c.wrap_word;
  cyc["touches_discontinuity"] = c.touches_discontinuity;
  cyc["left_limit"] = c.left_limit;
  j["cycle"] = std::move(cyc);
  if (a.steps > 0) {
    if (a.steps > cfg.orbit_step_cap) {
      throw ResourceLimit("orbit steps " + std::to_string(a.steps) + " exceed orbit_step_cap " +
                          std::to_string(cfg.orbit_step_cap));
    }
    const Orbit orb = iterate(map, x0, a.steps, IterateLimits{cfg.orbit_step_cap, cfg.exact_bit_budget});
    Json lift = Json::array();
    for (const auto& p : orb.points) lift.push_back(p.str());
    j["lift_orbit"] = std::move(lift);
  }
  emit(out, j);
  return kOk;
}

struct DeltaArgs {
  std::string lambda, rho, eps = "2^-64";
};

int cmd_delta(const DeltaArgs& a, const RunConfig& cfg, std::ostream& out) {
  const Rational l = parse_reduced(a.lambda, "lambda");
  const RhoSpec rho = RhoSpec::parse(a.rho);
  const Rational eps = parse_eps(a.eps);
  const SeriesValue v = delta_of_rho(rho, l, eps);
  const long prec = cfg.float_precision_bits;
  // Enough places to resolve eps, limited by the working precision.
  const int eps_digits = static_cast<int>(std::ceil(-std::log10(std::max(eps.to_double(), 1e-300)))) + 3;
  const int digits = std::min(digits_for(prec), std::max(eps_digits, 6));

  Json j = envelope("delta", Json{{"lambda", l.str()}, {"rho", rho.str()}, {"eps", eps.str()}}, cfg);
  j["delta"] = decimal(v.partial_sum, prec, Round::nearest, digits);
  j["tail_bound"] = v.tail_bound.str();
  j["tail_bound_decimal"] = BigFloat(v.tail_bound, prec, Round::up).to_sci(6, Round::up);
  j["enclosure"] = Json::array({decimal(v.lower(), prec, Round::down, digits), decimal(v.upper(), prec, Round::up, digits)});
  j["partial_sum"] = v.partial_sum.str();
  j["terms"] = v.terms_used;
  j["digits"] = digits;
  emit(out, j);
  return kOk;
}

struct CantorArgs {
  std::string lambda, sigma = "1", format;
  unsigned k = 0;
};

int cmd_cantor(const CantorArgs& a, const RunConfig& cfg, std::ostream& out) {
  const Rational l = parse_reduced(a.lambda, "lambda");
  const Rational sigma = parse_reduced(a.sigma, "sigma");
  if (a.k == 0) throw ParseError("--k must be positive");
  const auto rows = cover_rows(l, a.k);
  const OutputFormat fmt = a.format.empty() ? cfg.output_format : parse_format(a.format);
  if (fmt == OutputFormat::csv) {
    out << "k,j,lo,hi,length_num,length_den\n";
    for (const auto& row : rows) {
      for (const auto& g : row.gaps) {
        out << g.k << "," << g.j << "," << g.lo.str() << "," << g.hi.str() << "," << g.length.num().get_str() << ","
            << g.length.den().get_str() << "\n";
      }
    }
    return kOk;
  }
  Json j = envelope("cantor", Json{{"lambda", l.str()}, {"k", a.k}, {"sigma", sigma.str()}}, cfg);
  Json arr = Json::array();
  for (const auto& row : rows) {
    Json r;
    r["k"] = row.k;
    r["total_length"] = row.total_length().str();
    Json gaps = Json::array();
    for (const auto& g : row.gaps) {
      gaps.push_back(Json{{"j", g.j},
                          {"between", Json::array({g.left.str(), g.right.str()})},
                          {"lo", g.lo.str()},
                          {"hi", g.hi.str()},
                          {"length", g.length.str()}});
    }
    r["gaps"] = std::move(gaps);
    arr.push_back(std::move(r));
  }
  j["rows"] = std::move(arr);
  const Lemma9Report rep = lemma9_certificate(rows.back(), sigma, cfg.float_precision_bits);
  j["lemma9"] = Json{{"k", rep.k},
                     {"max_length", rep.max_length.str()},
                     {"lambda_k", rep.lambda_k.str()},
                     {"max_ok", rep.max_ok},
                     {"min_q_sum", rep.min_q_sum},
                     {"q_ok", rep.q_ok},
                     {"sum_upper", rep.sum_upper},
                     {"bound_lower", rep.bound_lower},
                     {"sum_ok", rep.sum_ok}};
  emit(out, j);
  return rep.ok() ? kOk : kVerification;
}

struct VerifyArgs {
  std::vector<std::string> suites;
  std::vector<std::string> criteria;
  bool list = false;
  std::uint64_t seed = VerifyOptions{}.seed;
};

Json suite_json(const SuiteResult& r) {
  return Json{{"name", r.name},       {"description", r.description}, {"passed", r.passed},
              {"checks", r.checks},   {"failures", r.failures},       {"note", r.note}};
}

int cmd_verify(const VerifyArgs& a, const RunConfig& cfg, std::ostream& out) {
  Json j = envelope("verify", Json{{"suites", a.suites}, {"criteria", a.criteria}, {"seed", a.seed}}, cfg);
  if (a.list) {
    Json cat = Json::array();
    for (const auto& s : suite_catalog()) cat.push_back(Json{{"name", s.name}, {"description", s.description}});
    j["suites"] = std::move(cat);
    j["criteria"] = criterion_ids();
    emit(out, j);
    return kOk;
  }
  if (a.suites.empty() && a.criteria.empty()) throw ParseError("verify needs --suite, --criterion or --list");

  VerifyOptions opts;
  opts.seed = a.seed;
  opts.precision_bits = cfg.float_precision_bits;
  std::vector<std::string> suites, criteria = a.criteria;
  for (const auto& s : a.suites) {
    if (s == "all") {
      for (const auto& c : suite_catalog()) suites.push_back(c.name);
    } else if (s == "acceptance") {
      for (const auto& id : criterion_ids()) criteria.push_back(id);
    } else {
      suites.push_back(s);
    }
  }
  for (const auto& s : suites) {
    const auto cat = suite_catalog();
    if (std::none_of(cat.begin(), cat.end(), [&](const SuiteInfo& i) { return i.name == s; })) {
      throw ParseError("unknown suite '" + s + "'");
    }
  }
  for (const auto& c : criteria) {
    const auto ids = criterion_ids();
    if (std::find(ids.begin(), ids.end(), c) == ids.end()) throw ParseError("unknown criterion '" + c + "'");
  }

  bool ok = true;
  Json sj = Json::array();
  for (const auto& s : suites) {
    const SuiteResult r = run_suite(s, opts);
    ok = ok && r.passed;
    sj.push_back(suite_json(r));
  }
  Json cj = Json::array();
  for (const auto& c : criteria) {
    const CriterionResult r = run_criterion(c, opts);
    ok = ok && r.passed;
    cj.push_back(Json{{"id", r.id}, {"title", r.title}, {"passed", r.passed}, {"detail", r.detail}});
  }
  j["results"] = Json{{"suites", std::move(sj)}, {"criteria", std::move(cj)}};
  j["passed"] = ok;
  emit(out, j);
  return ok ? kOk : kVerification;
}

int exit_code_for(const std::exception_ptr& e, std::ostream& err) {
  try {
    std::rethrow_exception(e);
  } catch (const IoFailure& x) {
    err << "error: " << x.what() << "\n";
    return kIoError;
  } catch (const InvalidArgument& x) {
    err << "error: " << x.what() << "\n";
    return kUsage;
  } catch (const PreconditionViolated& x) {
    err << "error: " << x.what() << "\n";
    return kUsage;
  } catch (const HypothesisViolated& x) {
    err << "error: " << x.what() << "\n";
    return kUsage;
  } catch (const DepthExceeded& x) {
    err << "error: " << x.what() << "\n";
    return kResource;
  } catch (const ResourceLimit& x) {
    err << "error: " << x.what() << "\n";
    return kResource;
  } catch (const HorizonExceeded& x) {
    err << "error: " << x.what() << "\n";
    return kResource;
  } catch (const Error& x) {
    err << "error: " << x.what() << "\n";
    return kVerification;
  } catch (const std::exception& x) {
    err << "error: " << x.what() << "\n";
    return kIoError;
  }
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ParseError(where + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "float_precision_bits") {
      cfg.float_precision_bits = parse_precision(value, where + ": float_precision_bits");
    } else if (key == "max_depth") {
      cfg.max_depth = parse_positive(value, where + ": max_depth");
    } else if (key == "orbit_step_cap") {
      cfg.orbit_step_cap = parse_positive(value, where + ": orbit_step_cap");
    } else if (key == "exact_bit_budget") {
      cfg.exact_bit_budget = parse_positive(value, where + ": exact_bit_budget");
    } else if (key == "grid_cap") {
      cfg.grid_cap = parse_positive(value, where + ": grid_cap");
    } else if (key == "output_format") {
      cfg.output_format = parse_format(value);
    } else {
      throw ParseError(where + ": unknown key '" + key + "'");
    }
  }
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact rotation numbers of contracted rotations f(x) = {lambda x + delta}", "rotkit"};
  app.require_subcommand(1);
  std::string config_path, precision_flag;
  app.add_option("--config", config_path, "key = value configuration file");
  app.add_option("--precision", precision_flag, "float precision in bits (>= 64)");

  RhoArgs rho;
  std::string rho_depth;
  auto* rho_cmd = app.add_subcommand("rho", "rotation number of f for rational lambda, delta");
  rho_cmd->add_option("--lambda", rho.lambda, "contraction factor num/den")->required();
  rho_cmd->add_option("--delta", rho.delta, "translation num/den")->required();
  rho_cmd->add_option("--method", rho.method, "tree, orbit or auto")
      ->check(CLI::IsMember({"tree", "orbit", "auto"}));
  rho_cmd->add_option("--max-depth", rho_depth, "tree descent depth limit");
  rho_cmd->add_option("--steps", rho.steps, "orbit length for the orbit estimate");

  StaircaseArgs st;
  std::string st_depth;
  auto* st_cmd = app.add_subcommand("staircase", "rho over delta = i/N, i = 0..N-1");
  st_cmd->add_option("--lambda", st.lambda, "contraction factor num/den")->required();
  st_cmd->add_option("--grid", st.grid, "number of delta samples N")->required();
  st_cmd->add_option("--out", st.out_path, "output file (default stdout)");
  st_cmd->add_option("--format", st.format, "csv (default) or json");
  st_cmd->add_option("--jobs", st.jobs, "worker threads");
  st_cmd->add_option("--max-depth", st_depth, "tree descent depth limit");

  TreeArgs tr;
  auto* tr_cmd = app.add_subcommand("tree", "row of the lambda-deformed Stern-Brocot tree");
  tr_cmd->add_option("--lambda", tr.lambda, "contraction factor num/den")->required();
  tr_cmd->add_option("--depth", tr.depth, "row index k >= 1")->required();
  tr_cmd->add_option("--format", tr.format, "json or csv");

  OrbitArgs ob;
  auto* ob_cmd = app.add_subcommand("orbit", "exact periodic orbit, optionally an exact orbit prefix");
  ob_cmd->add_option("--lambda", ob.lambda, "contraction factor num/den")->required();
  ob_cmd->add_option("--delta", ob.delta, "translation num/den")->required();
  ob_cmd->add_option("--x0", ob.x0, "start point for --steps");
  ob_cmd->add_option("--steps", ob.steps, "exact lift orbit length");

  DeltaArgs de;
  auto* de_cmd = app.add_subcommand("delta", "delta(lambda, rho) from the Sturmian series");
  de_cmd->add_option("--lambda", de.lambda, "contraction factor num/den")->required();
  de_cmd->add_option("--rho", de.rho, "p/q, golden, sqrt:D:p/q+ or -, cf:[a1,...]")->required();
  de_cmd->add_option("--eps", de.eps, "tail tolerance: num/den, 2^-k or decimal");

  CantorArgs ca;
  auto* ca_cmd = app.add_subcommand("cantor", "gap intervals E_1..E_k and the lemma9 gap-sum certificate");
  ca_cmd->add_option("--lambda", ca.lambda, "contraction factor num/den")->required();
  ca_cmd->add_option("--k", ca.k, "deepest row")->required();
  ca_cmd->add_option("--sigma", ca.sigma, "exponent in (0, 1] for the certificate");
  ca_cmd->add_option("--format", ca.format, "json or csv");

  VerifyArgs ve;
  auto* ve_cmd = app.add_subcommand("verify", "run invariant suites or acceptance criteria");
  ve_cmd->add_option("--suite", ve.suites, "suite name, 'all' or 'acceptance' (repeatable)");
  ve_cmd->add_option("--criterion", ve.criteria, "acceptance criterion id (repeatable)");
  ve_cmd->add_flag("--list", ve.list, "list suites and criteria");
  ve_cmd->add_option("--seed", ve.seed, "sampling seed");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    RunConfig cfg;
    if (const char* env = std::getenv("ROTKIT_PRECISION_BITS"); env != nullptr && *env != '\0') {
      cfg.float_precision_bits = parse_precision(env, "ROTKIT_PRECISION_BITS");
    }
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw IoFailure(config_path + ": " + std::strerror(errno));
      std::ostringstream text;
      text << f.rdbuf();
      apply_config_text(cfg, text.str(), config_path);
    }
    if (!precision_flag.empty()) cfg.float_precision_bits = parse_precision(precision_flag, "--precision");
    if (!rho_depth.empty()) cfg.max_depth = parse_positive(rho_depth, "--max-depth");
    if (!st_depth.empty()) cfg.max_depth = parse_positive(st_depth, "--max-depth");

    if (rho_cmd->parsed()) return cmd_rho(rho, cfg, out);
    if (st_cmd->parsed()) return cmd_staircase(st, cfg, out);
    if (tr_cmd->parsed()) return cmd_tree(tr, cfg, out);
    if (ob_cmd->parsed()) return cmd_orbit(ob, cfg, out);
    if (de_cmd->parsed()) return cmd_delta(de, cfg, out);
    if (ca_cmd->parsed()) return cmd_cantor(ca, cfg, out);
    if (ve_cmd->parsed()) return cmd_verify(ve, cfg, out);
    err << "error: no command\n";
    return kUsage;
  } catch (...) {
    return exit_code_for(std::current_exception(), err);
  }
}

}  // namespace rotkit::cli
