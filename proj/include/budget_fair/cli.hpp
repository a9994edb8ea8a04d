#ifndef BUDGET_FAIR_CLI_HPP
#define BUDGET_FAIR_CLI_HPP

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "budget_fair/audit.hpp"
#include "budget_fair/constructions.hpp"
#include "budget_fair/families.hpp"
#include "budget_fair/io.hpp"
#include "budget_fair/reports.hpp"
#include "budget_fair/solver.hpp"
#include "budget_fair/sweep.hpp"

namespace budget_fair::cli {

enum ExitCode : int {
  kOk = 0,
  kNoWitness = 1,
  kInputError = 2,
  kResourceLimit = 3,
  kInfeasible = 4,
  kTheoremFailure = 5,
  kDegenerate = 6,
};

inline std::uint64_t node_limit_from_env() {
  if (const char* s = std::getenv("BUDGET_FAIR_NODE_LIMIT")) {
    try {
      return std::stoull(s);
    } catch (const std::exception&) {
      throw ParseError(std::string("BUDGET_FAIR_NODE_LIMIT is not an integer: ") + s);
    }
  }
  return kDefaultNodeLimit;
}

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

inline void emit(const Streams& io, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-")
    io.out << text;
  else
    write_file(path, text);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct SolveArgs {
  std::string instance, method = "exact", out;
  std::uint64_t seed = 0;
};

inline int cmd_solve(const SolveArgs& a, const Streams& io) {
  Instance inst = load_instance(read_file(a.instance));
  SolveResult r = a.method == "exact" ? solve_exact(inst, node_limit_from_env()) : solve_local_search(inst, a.seed);
  emit(io, a.out, dump(to_json(r)));
  if (a.method == "exact" && !r.exact) {
    io.err << "node limit exceeded; wrote the best allocation found\n";
    return kResourceLimit;
  }
  return kOk;
}

struct AuditArgs {
  std::string instance, allocation, out;
  bool po = false;
  std::uint64_t po_limit = kDefaultPoLimit;
};

inline int cmd_audit(const AuditArgs& a, const Streams& io) {
  Instance inst = load_instance(read_file(a.instance));
  Allocation x = load_allocation(read_file(a.allocation), inst);
  if (!is_feasible(inst, x)) {
    io.err << "allocation is not budget-feasible\n";
    return kInfeasible;
  }
  AuditReport r = audit_allocation(inst, x, a.po, a.po_limit);
  emit(io, a.out, dump(to_json(r)));
  return kOk;
}

struct VerifyArgs {
  std::string instance, out;
  std::uint64_t po_limit = kDefaultPoLimit;
};

inline int cmd_verify(const VerifyArgs& a, const Streams& io) {
  Instance inst = load_instance(read_file(a.instance));
  Theorem1Report r = verify_theorem1(inst, a.po_limit, node_limit_from_env());
  emit(io, a.out, dump(to_json(r)));
  if (!r.passed()) {
    io.err << "counterexample: Max-NSW allocation is " << (r.ef1_ok ? "" : "not 1/4-EF1 ")
           << (r.po_ok ? "" : "not Pareto optimal") << "\n"
           << serialize(inst);
    return kTheoremFailure;
  }
  return kOk;
}

struct SweepArgs {
  std::string family, kappas, out;
};

inline int cmd_sweep(const SweepArgs& a, const Streams& io) {
  if (a.family != "large-budget-tight") {
    io.err << "sweep supports only the large-budget-tight family\n";
    return kInputError;
  }
  std::vector<SweepRow> rows;
  std::stringstream ss(a.kappas);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    long k = 0;
    try {
      std::size_t used = 0;
      k = std::stol(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw ParseError("bad kappa '" + tok + "'");
    }
    if (k < 2) throw ParseError("kappa must be at least 2 in a sweep");
    rows.push_back(sweep_row(k, node_limit_from_env()));
  }
  if (rows.empty()) throw ParseError("empty kappa list");
  emit(io, a.out, sweep_csv(rows));
  return kOk;
}

struct GenArgs {
  std::string family, eps = "1/10", out, alloc_out;
  long kappa = 2;
  std::size_t n = 2, m = 6;
  std::uint64_t seed = 0;
};

inline int cmd_gen(const GenArgs& a, const Streams& io) {
  auto fam = parse_family(a.family);
  if (!fam) {
    io.err << "unknown family '" << a.family << "'\n";
    return kInputError;
  }
  FamilySpec spec;
  spec.family = *fam;
  spec.eps = parse_num(a.eps);
  spec.kappa = a.kappa;
  spec.n = a.n;
  spec.m = a.m;
  spec.seed = a.seed;
  Generated g = generate(spec);
  emit(io, a.out, serialize(g.instance));
  if (!a.alloc_out.empty()) {
    if (!g.reference) {
      io.err << "family '" << a.family << "' has no reference allocation\n";
      return kInputError;
    }
    write_file(a.alloc_out, serialize(*g.reference));
  }
  return kOk;
}

struct ImproveArgs {
  std::string instance, allocation, variant = "quarter", out;
};

inline int cmd_improve(const ImproveArgs& a, const Streams& io) {
  Instance inst = load_instance(read_file(a.instance));
  Allocation x = load_allocation(read_file(a.allocation), inst);
  if (!is_feasible(inst, x)) {
    io.err << "allocation is not budget-feasible\n";
    return kInfeasible;
  }
  Num factor;
  Num k;
  if (a.variant == "quarter") {
    factor = 4;
  } else if (a.variant == "warmup") {
    factor = make_num(11, 3);
  } else if (a.variant == "large-budget") {
    k = fourth_root_lower_bound(Num(kappa(inst)));
    if (k <= 10) {
      io.err << "large-budget variant needs kappa^(1/4) > 10, got " << to_string(k) << "\n";
      return kDegenerate;
    }
    factor = 2 + Num(20) / (k - 10);
  } else {
    io.err << "unknown variant '" << a.variant << "'\n";
    return kInputError;
  }

  AuditReport report = audit_allocation(inst, x);
  const auto& w = report.ef1_witness;
  if (!w || !(w->envy_value > factor * bundle_value(inst, w->envier, x.bundles[w->envier]))) {
    io.out << "no witness\n";
    return kNoWitness;
  }
  ViolationWitness witness{w->envier, w->envied, w->set};
  try {
    Improvement r = a.variant == "quarter"  ? construct_improvement_quarter(inst, x, witness)
                    : a.variant == "warmup" ? construct_improvement_warmup(inst, x, witness)
                                            : construct_improvement_large_budget(inst, x, witness, k);
    if (!(r.after > r.before) || !is_feasible(inst, r.allocation)) {
      io.err << "construction did not produce a strictly better feasible allocation\n";
      return kDegenerate;
    }
    emit(io, a.out, dump(to_json(r)));
  } catch (const PreconditionError& e) {
    io.err << e.what() << "\n";
    return kDegenerate;
  } catch (const DegenerateError& e) {
    io.err << e.what() << "\n";
    return kDegenerate;
  }
  return kOk;
}

/// Entry point shared by the executable and the tests.
inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Streams io{out, err};
  CLI::App app{"Budget-feasible Nash welfare allocations and EF1 auditing"};
  app.require_subcommand(1);

  SolveArgs solve;
  auto* s = app.add_subcommand("solve", "Compute a Max-NSW allocation");
  s->add_option("instance", solve.instance, "Instance JSON")->required();
  s->add_option("--method", solve.method)->check(CLI::IsMember({"exact", "local-search"}));
  s->add_option("--seed", solve.seed, "Seed for local search");
  s->add_option("--out", solve.out, "Output path (default stdout)");

  AuditArgs audit;
  auto* au = app.add_subcommand("audit", "Exact EF / EF1 factors of an allocation");
  au->add_option("instance", audit.instance)->required();
  au->add_option("allocation", audit.allocation)->required();
  au->add_flag("--po", audit.po, "Also check Pareto optimality exhaustively");
  au->add_option("--po-limit", audit.po_limit, "Max assignments enumerated by the PO check");
  au->add_option("--out", audit.out);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check that a Max-NSW allocation is 1/4-EF1 and PO");
  v->add_option("instance", verify.instance)->required();
  v->add_option("--po-limit", verify.po_limit);
  v->add_option("--out", verify.out);

  SweepArgs sweep;
  auto* sw = app.add_subcommand("sweep", "EF1 factor against the large-budget bound over kappa");
  sw->add_option("family", sweep.family)->required();
  sw->add_option("--kappa", sweep.kappas, "Comma-separated kappa values")->required();
  sw->add_option("--out", sweep.out, "CSV output path (default stdout)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate an instance family");
  g->add_option("family", gen.family, "tight-quarter | large-budget-tight | approx-gap | random")->required();
  g->add_option("--eps", gen.eps);
  g->add_option("--kappa", gen.kappa);
  g->add_option("--n", gen.n);
  g->add_option("--m", gen.m);
  g->add_option("--seed", gen.seed);
  g->add_option("--out", gen.out, "Instance output path (default stdout)");
  g->add_option("--alloc-out", gen.alloc_out, "Reference allocation output path");

  ImproveArgs improve;
  auto* im = app.add_subcommand("improve", "Turn an EF1 violation into a better allocation");
  im->add_option("instance", improve.instance)->required();
  im->add_option("allocation", improve.allocation)->required();
  im->add_option("--variant", improve.variant)->check(CLI::IsMember({"quarter", "warmup", "large-budget"}));
  im->add_option("--out", improve.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*s) return cmd_solve(solve, io);
    if (*au) return cmd_audit(audit, io);
    if (*v) return cmd_verify(verify, io);
    if (*sw) return cmd_sweep(sweep, io);
    if (*g) return cmd_gen(gen, io);
    if (*im) return cmd_improve(improve, io);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << "\n";
    return kInfeasible;
  } catch (const LimitError& e) {
    err << "error: " << e.what() << "\n";
    return kResourceLimit;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}

}  // namespace budget_fair::cli

#endif  // BUDGET_FAIR_CLI_HPP
