#ifndef VNQP_TOOLS_CLI_HPP
#define VNQP_TOOLS_CLI_HPP

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "vnqp/vnqp.hpp"

namespace vnqp::cli {

inline std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InvalidArgument("not a number: '" + item + "'");
    out.push_back(v);
  }
  return out;
}

/// quad | flat:<a',b'> | adversarial:<a0,a1,...>/<b0,b1,...>
inline Convex1D parse_function(const std::string& spec) {
  if (spec == "quad") return quadratic();
  if (spec.rfind("flat:", 0) == 0) {
    const auto v = parse_number_list(spec.substr(5));
    if (v.size() != 2) throw InvalidArgument("flat:<a',b'> needs two numbers");
    return flat_quadratic(v[0], v[1]);
  }
  if (spec.rfind("adversarial:", 0) == 0) {
    const std::string body = spec.substr(12);
    const auto slash = body.find('/');
    if (slash == std::string::npos) throw InvalidArgument("adversarial:<a list>/<b list> expected");
    return build_adversarial(parse_number_list(body.substr(0, slash)), parse_number_list(body.substr(slash + 1)));
  }
  throw InvalidArgument("unknown function '" + spec + "'");
}

inline std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  return os;
}

inline std::optional<Algo> parse_algo(const std::string& s) {
  for (auto a : {Algo::Enhanced, Algo::VonNeumann, Algo::Perceptron})
    if (s == to_string(a)) return a;
  return std::nullopt;
}

/// Exit codes: 0 success, 1 invalid arguments or I/O, 2 numeric failure.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Enhanced von Neumann feasibility solver and experiments"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "write a random instance with unit-norm columns");
  std::size_t gm = 30, gn = 8000;
  double gshift = 0.315;
  std::uint64_t gseed = 1;
  std::string gout;
  gen->add_option("--m", gm, "rows")->capture_default_str();
  gen->add_option("--n", gn, "columns")->capture_default_str();
  gen->add_option("--shift", gshift, "entries are U[0,1) - shift")->capture_default_str();
  gen->add_option("--seed", gseed, "generator seed")->capture_default_str();
  gen->add_option("--out", gout, "output path (.csv for text, binary otherwise)")->required();

  auto* solve_cmd = app.add_subcommand("solve", "decide Ax = 0, x in the simplex, or find A^T y > 0");
  std::string smatrix, salgo = "enhanced", sagg = "accumulator", strace;
  std::size_t smax_set = 0, sits = 2000;
  double seps = 1e-9, smargin = 0.0;
  solve_cmd->add_option("--matrix", smatrix, "matrix file")->required();
  solve_cmd->add_option("--algo", salgo, "enhanced | vn | perceptron")->capture_default_str();
  solve_cmd->add_option("--max-set", smax_set, "memory cap N, 0 for unbounded")->capture_default_str();
  solve_cmd->add_option("--aggregation", sagg, "oldest | smallest | largest | accumulator | none")
      ->capture_default_str();
  solve_cmd->add_option("--eps", seps, "primal tolerance on ||Ax||")->capture_default_str();
  solve_cmd->add_option("--cert-margin", smargin, "required margin for A^T y")->capture_default_str();
  solve_cmd->add_option("--max-iters", sits, "iteration budget")->capture_default_str();
  solve_cmd->add_option("--trace", strace, "write the per-iteration trace as CSV");

  auto* bench = app.add_subcommand("bench", "run a batch of instances over several variants");
  BenchConfig bc;
  std::size_t bruns = 50;
  std::uint64_t bfirst = 1;
  std::string bvariants = "2,5,10,15,20,25,0", bout, bsummary;
  bool paper_scale = false;
  bench->add_option("--runs", bruns, "number of seeds")->capture_default_str();
  bench->add_option("--seed-start", bfirst, "first seed")->capture_default_str();
  bench->add_option("--m", bc.m, "rows")->capture_default_str();
  bench->add_option("--n", bc.n, "columns")->capture_default_str();
  bench->add_option("--shift", bc.shift, "entries are U[0,1) - shift")->capture_default_str();
  bench->add_option("--variants", bvariants, "comma list of vn, perceptron, N or N:rule")->capture_default_str();
  bench->add_option("--max-iters", bc.max_iters, "iteration budget per run")->capture_default_str();
  bench->add_option("--eps", bc.eps, "primal tolerance")->capture_default_str();
  bench->add_option("--threads", bc.threads, "worker threads, 0 for all cores")->capture_default_str();
  bench->add_option("--out", bout, "report CSV")->required();
  bench->add_option("--summary", bsummary, "comparison against variant 2 as CSV");
  bench->add_flag("--paper-scale", paper_scale, "n = 80000 and 491 seeds");

  auto* sep = app.add_subcommand("separate", "separate conv(A) from conv(B) or find a common point");
  std::string sa, sb, sepout;
  SeparationConfig sc;
  sep->add_option("--a", sa, "matrix file for A")->required();
  sep->add_option("--b", sb, "matrix file for B")->required();
  sep->add_option("--eps", sc.eps, "tolerance on ||Ax - Bz||")->capture_default_str();
  sep->add_option("--max-iters", sc.max_iters, "iteration budget")->capture_default_str();
  sep->add_option("--out", sepout, "write status,iterations,final_gap as CSV");

  auto* br = app.add_subcommand("bracket", "interval bracketing on a one-dimensional convex function");
  std::string bfn = "quad", bt_out;
  double ba0 = 1.0, bb0 = 1.0, btol = 1e-9;
  std::size_t bsteps = 10000;
  br->add_option("--fn", bfn, "quad | flat:<a',b'> | adversarial:<a list>/<b list>")->capture_default_str();
  br->add_option("--a0", ba0, "left extent")->capture_default_str();
  br->add_option("--b0", bb0, "right extent")->capture_default_str();
  br->add_option("--tol", btol, "stop once a + b <= tol")->capture_default_str();
  br->add_option("--max-steps", bsteps, "step budget")->capture_default_str();
  br->add_option("--out", bt_out, "trace CSV: iter,a,b,slope,c");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 1;
  }

  try {
    if (*gen) {
      write_matrix(gout, generate_instance(gm, gn, gshift, gseed));
      out << "wrote " << gm << "x" << gn << " matrix to " << gout << '\n';
    } else if (*solve_cmd) {
      SolveConfig cfg;
      const auto algo = parse_algo(salgo);
      if (!algo) throw InvalidArgument("unknown algorithm '" + salgo + "'");
      const auto agg = parse_aggregation(sagg);
      if (!agg) throw InvalidArgument("unknown aggregation '" + sagg + "'");
      cfg.algo = *algo;
      cfg.max_set = *algo == Algo::VonNeumann ? 2 : smax_set;
      cfg.aggregation = *agg;
      cfg.eps = seps;
      cfg.cert_margin = smargin;
      cfg.max_iters = sits;
      cfg.record_trace = !strace.empty();
      const ConeProblem problem(read_matrix(smatrix));
      const auto res = solve(problem, cfg);
      out << "status=" << to_string(res.status) << " iterations=" << res.iterations
          << " norm_y=" << format_double(norm(res.y)) << '\n';
      if (!strace.empty()) {
        auto os = open_output(strace);
        write_trace_csv(os, res.trace);
      }
    } else if (*bench) {
      if (paper_scale) {
        bc.n = 80000;
        bruns = 491;
      }
      bc.seeds = seed_range(bfirst, bruns);
      bc.variants = parse_variants(bvariants);
      check_bench_config(bc);
      auto os = open_output(bout);
      const auto report = run_benchmark(bc);
      write_report_csv(os, report);
      const auto summary = summarize(report, "2");
      if (!bsummary.empty()) {
        auto ss = open_output(bsummary);
        write_summary_csv(ss, summary);
      }
      out << "wrote " << report.rows.size() << " rows to " << bout << '\n';
    } else if (*sep) {
      const auto res = separate_hulls(read_matrix(sa), read_matrix(sb), sc);
      const double gap = res.gap_trace.empty() ? 0.0 : res.gap_trace.back();
      out << "status=" << to_string(res.status) << " iterations=" << res.iterations
          << " final_gap=" << format_double(gap) << '\n';
      if (!sepout.empty()) {
        auto os = open_output(sepout);
        os << "status,iterations,final_gap\n"
           << to_string(res.status) << ',' << res.iterations << ',' << format_double(gap) << '\n';
      }
    } else if (*br) {
      const auto f = parse_function(bfn);
      const auto t = bracket(f, ba0, bb0, btol, bsteps);
      out << "status=" << to_string(t.status) << " steps=" << t.steps.size() << " a=" << format_double(t.final_a)
          << " b=" << format_double(t.final_b) << '\n';
      if (!bt_out.empty()) {
        auto os = open_output(bt_out);
        os << "iter,a,b,slope,c\n";
        for (const auto& s : t.steps)
          os << s.iter << ',' << format_double(s.a) << ',' << format_double(s.b) << ',' << format_double(s.slope)
             << ',' << format_double(s.c) << '\n';
      }
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

}  // namespace vnqp::cli

#endif  // VNQP_TOOLS_CLI_HPP
