// command-line surface: validate / check / split / walls / gen / oracle
// exit codes: 0 success, 1 semantic failure, 2 syntax or usage error
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semistab/battery.hpp"
#include "semistab/instance_io.hpp"

namespace {

using namespace semistab;

// controlled exit: the message is already formatted for the report stream
struct CliError {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError{2, "PARSE_ERROR: cannot read file " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Instance load_instance(const std::string& path) {
  try {
    return parse_instance(read_file(path));
  } catch (const ParseError& e) {
    throw CliError{2, std::string("PARSE_ERROR: ") + e.what()};
  }
}

rat require_fraction(const std::string& text, const std::string& what) {
  auto v = parse_fraction(text);
  if (!v)
    throw CliError{2, "USAGE_ERROR: " + what + " must be a fraction p/q, got \"" + text + "\""};
  return *v;
}

std::string ids_text(const std::vector<int>& ids) {
  if (ids.empty()) return "-";
  std::string out;
  for (int id : ids) {
    if (!out.empty()) out += ",";
    out += std::to_string(id);
  }
  return out;
}

std::string margin_text(const std::optional<rat>& m) {
  return m ? fraction_string(*m) : std::string("-");
}

json verdict_json(const Verdict& v) {
  json out;
  out["class"] = to_string(v.classification);
  out["witness"] = v.witness;
  out["margin"] = v.margin ? json(fraction_string(*v.margin)) : json(nullptr);
  return out;
}

void verdict_lines(const Verdict& v, const std::string& suffix = "") {
  std::cout << "CLASS" << suffix << ": " << to_string(v.classification) << "\n"
            << "WITNESS" << suffix << ": " << ids_text(v.witness) << "\n"
            << "MARGIN" << suffix << ": " << margin_text(v.margin) << "\n";
}

int report_invalid(const ValidationReport& rep, bool as_json) {
  if (as_json) {
    json out;
    out["result"] = "invalid";
    out["problems"] = rep.problems;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "RESULT: invalid\n";
    for (const auto& p : rep.problems) std::cout << "PROBLEM: " << p << "\n";
  }
  return 1;
}

int cmd_validate(const std::string& path, bool as_json) {
  auto inst = load_instance(path);
  auto rep = validate_instance(inst);
  if (!rep.ok()) return report_invalid(rep, as_json);
  if (as_json) {
    json out;
    out["result"] = "valid";
    out["problems"] = json::array();
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "RESULT: valid\n";
  }
  return 0;
}

std::optional<long long> decorated_twist(const Instance& inst) {
  if (!inst.decorated) return std::nullopt;
  const long long r = inst.kind == "filtration" ? inst.filtration.ambient_rank
                                                : inst.ortho.base.ambient_rank;
  const long long d = inst.kind == "filtration" ? inst.filtration.ambient_degree
                                                : inst.ortho.base.ambient_degree;
  return reduce_decorated(inst.decorated->b, inst.decorated->c, inst.decorated->n_N, r, d);
}

int cmd_check(const std::string& path, const std::string& delta_text, const std::string& mode,
              bool as_json) {
  rat delta = require_fraction(delta_text, "--delta");
  if (delta <= 0) throw CliError{2, "USAGE_ERROR: delta must be positive"};
  auto inst = load_instance(path);
  auto rep = validate_instance(inst);
  if (!rep.ok()) return report_invalid(rep, as_json);

  auto twist = decorated_twist(inst);

  if (inst.kind == "filtration") {
    const auto& f = inst.filtration;
    const auto& M = inst.pattern;
    if (as_json) {
      json out;
      out["kind"] = inst.kind;
      out["delta"] = fraction_string(delta);
      out["p"] = fraction_string(p_value(f));
      out["mu"] = fraction_string(mu_value(f, M));
      out["stab"] = fraction_string(stab_value(f, M, delta));
      out["critical"] = is_critical(f, M);
      if (twist) out["decorated_twist"] = *twist;
      std::cout << out.dump(2) << "\n";
    } else {
      std::cout << "KIND: filtration\n"
                << "DELTA: " << fraction_string(delta) << "\n"
                << "P: " << fraction_string(p_value(f)) << "\n"
                << "MU: " << fraction_string(mu_value(f, M)) << "\n"
                << "STAB: " << fraction_string(stab_value(f, M, delta)) << "\n"
                << "CRITICAL: " << (is_critical(f, M) ? "yes" : "no") << "\n";
      if (twist) std::cout << "DECORATED_TWIST: " << *twist << "\n";
    }
    return 0;
  }

  const auto& cat = inst.ortho.base;
  // the canonical check per kind: plain catalogs use the brute-force scan,
  // orthogonal instances the isotropic-degree test, parabolic the shifted scan
  const bool ramanan = inst.kind == "orthogonal";
  auto compute_full = [&]() {
    if (inst.kind == "orthogonal") return ramanan_verdict(inst.ortho);
    if (inst.kind == "parabolic") return parabolic_verdict_full(cat, inst.parabolic, delta);
    return verdict_full(cat, delta);
  };
  auto compute_reduced = [&]() {
    if (inst.kind == "parabolic") return parabolic_verdict_reduced(cat, inst.parabolic, delta);
    return verdict_reduced(cat, delta);
  };

  json out;
  out["kind"] = inst.kind;
  out["delta"] = fraction_string(delta);
  out["mode"] = mode;
  if (twist) out["decorated_twist"] = *twist;
  auto header_lines = [&]() {
    std::cout << "KIND: " << inst.kind << "\n"
              << "DELTA: " << fraction_string(delta) << "\n"
              << "MODE: " << mode << "\n";
    if (twist) std::cout << "DECORATED_TWIST: " << *twist << "\n";
  };

  if (mode == "full" || mode == "reduced") {
    Verdict v = mode == "full" ? compute_full() : compute_reduced();
    if (as_json) {
      out["verdict"] = verdict_json(v);
      std::cout << out.dump(2) << "\n";
    } else {
      header_lines();
      verdict_lines(v);
    }
    return 0;
  }

  Verdict a = compute_full();
  Verdict b = compute_reduced();
  const bool agree = a.classification == b.classification;
  const std::string a_key = ramanan ? "ramanan" : "full";
  const std::string a_suffix = ramanan ? "_RAMANAN" : "_FULL";
  if (as_json) {
    out[a_key] = verdict_json(a);
    out["reduced"] = verdict_json(b);
    out["agree"] = agree;
    std::cout << out.dump(2) << "\n";
  } else {
    header_lines();
    verdict_lines(a, a_suffix);
    verdict_lines(b, "_REDUCED");
    std::cout << "AGREE: " << (agree ? "yes" : "no") << "\n";
  }
  return agree ? 0 : 1;
}

std::string steps_text(const std::vector<int>& indices) {
  std::string out = "{";
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(indices[i] + 1);  // steps are numbered from 1 in reports
  }
  return out + "}";
}

std::string weights_text(const std::vector<rat>& w) {
  std::string out;
  for (const auto& x : w) {
    if (!out.empty()) out += ",";
    out += fraction_string(x);
  }
  return out;
}

int cmd_split(const std::string& path, const std::string& delta_text, bool as_json) {
  rat delta = require_fraction(delta_text, "--delta");
  if (delta <= 0) throw CliError{2, "USAGE_ERROR: delta must be positive"};
  auto inst = load_instance(path);
  auto rep = validate_instance(inst);
  if (!rep.ok()) return report_invalid(rep, as_json);
  if (inst.kind != "filtration")
    throw CliError{1, "ERROR: split requires a filtration instance, got kind " + inst.kind};

  const auto& f = inst.filtration;
  const auto& M = inst.pattern;
  auto dec = split_full(f, M);
  auto verify = verify_decomposition(f, M, dec);

  rat sum_p = 0;
  rat sum_mu = 0;
  json pieces = json::array();
  std::vector<std::string> piece_lines;
  for (const auto& piece : dec.pieces) {
    auto sub = subfiltration(f, piece.indices, piece.weights);
    auto sub_m = induced_pattern(M, piece.indices);
    rat pp = p_value(sub);
    rat pm = mu_value(sub, sub_m);
    sum_p += pp;
    sum_mu += pm;
    json pj;
    json steps = json::array();
    for (int i : piece.indices) steps.push_back(i + 1);
    pj["steps"] = steps;
    pj["weights"] = json::array();
    for (const auto& w : piece.weights) pj["weights"].push_back(fraction_string(w));
    pj["p"] = fraction_string(pp);
    pj["mu"] = fraction_string(pm);
    pieces.push_back(pj);
    piece_lines.push_back("PIECE: steps " + steps_text(piece.indices) + " weights " +
                          weights_text(piece.weights) + " p " + fraction_string(pp) + " mu " +
                          fraction_string(pm));
  }
  rat whole_p = p_value(f);
  rat whole_mu = mu_value(f, M);

  if (as_json) {
    json out;
    out["kind"] = "filtration";
    out["delta"] = fraction_string(delta);
    out["pieces"] = pieces;
    out["trace"] = dec.trace;
    out["p"] = fraction_string(whole_p);
    out["mu"] = fraction_string(whole_mu);
    out["stab"] = fraction_string(stab_value(f, M, delta));
    out["sum_p"] = fraction_string(sum_p);
    out["sum_mu"] = fraction_string(sum_mu);
    out["verify"] = verify.ok() ? "ok" : "failed";
    out["problems"] = verify.problems;
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "KIND: filtration\n"
              << "DELTA: " << fraction_string(delta) << "\n"
              << "PIECES: " << dec.pieces.size() << "\n";
    for (const auto& line : piece_lines) std::cout << line << "\n";
    std::string trace;
    for (const auto& label : dec.trace) {
      if (!trace.empty()) trace += ",";
      trace += label;
    }
    std::cout << "TRACE: " << (trace.empty() ? "-" : trace) << "\n"
              << "P: " << fraction_string(whole_p) << "\n"
              << "MU: " << fraction_string(whole_mu) << "\n"
              << "STAB: " << fraction_string(stab_value(f, M, delta)) << "\n"
              << "SUM_P: " << fraction_string(sum_p) << "\n"
              << "SUM_MU: " << fraction_string(sum_mu) << "\n"
              << "VERIFY: " << (verify.ok() ? "ok" : "failed") << "\n";
    for (const auto& p : verify.problems) std::cout << "PROBLEM: " << p << "\n";
  }
  return verify.ok() ? 0 : 1;
}

int cmd_walls(const std::string& path, const std::string& lo_text, const std::string& hi_text,
              bool as_json) {
  rat lo = require_fraction(lo_text, "--lo");
  rat hi = require_fraction(hi_text, "--hi");
  auto inst = load_instance(path);
  auto rep = validate_instance(inst);
  if (!rep.ok()) return report_invalid(rep, as_json);

  SubbundleCatalog cat;
  if (inst.kind == "catalog" || inst.kind == "orthogonal") {
    cat = inst.ortho.base;
  } else if (inst.kind == "parabolic") {
    cat = parabolic_shift(inst.ortho.base, inst.parabolic);
  } else {
    throw CliError{1, "ERROR: wall scan requires a catalog instance, got kind " + inst.kind};
  }

  std::vector<rat> walls;
  try {
    walls = delta_walls(cat, lo, hi);
  } catch (const std::exception& e) {
    throw CliError{2, std::string("USAGE_ERROR: ") + e.what()};
  }

  if (as_json) {
    json out;
    out["kind"] = inst.kind;
    out["lo"] = fraction_string(lo);
    out["hi"] = fraction_string(hi);
    out["walls"] = json::array();
    for (const auto& w : walls) out["walls"].push_back(fraction_string(w));
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "KIND: " << inst.kind << "\n"
              << "LO: " << fraction_string(lo) << "\n"
              << "HI: " << fraction_string(hi) << "\n"
              << "WALLS: " << walls.size() << "\n";
    for (const auto& w : walls) std::cout << "WALL: " << fraction_string(w) << "\n";
  }
  return 0;
}

int cmd_gen(GeneratorConfig cfg, int count) {
  if (cfg.rank_bound < 2)
    throw CliError{2, "USAGE_ERROR: no proper subbundles possible with rank bound " +
                          std::to_string(cfg.rank_bound)};
  if (cfg.length_bound < 1 || cfg.degree_bound < 0 || cfg.denom_bound < 1)
    throw CliError{2, "USAGE_ERROR: unsatisfiable generator bounds"};
  for (int i = 0; i < count; ++i) {
    // every instance gets its own stream, so output depends only on (seed, index)
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(i)));
    Instance inst;
    if (cfg.family == "orthogonal") {
      inst = orthogonal_instance(random_orthogonal_catalog(rng, cfg));
    } else if (cfg.family == "parabolic") {
      auto cat = random_catalog(rng, cfg);
      auto pd = random_parabolic_data(rng, cat);
      inst = parabolic_instance(std::move(cat), std::move(pd));
    } else {
      inst = catalog_instance(random_catalog(rng, cfg));
    }
    std::cout << print_instance(inst, -1) << "\n";
  }
  return 0;
}

int cmd_oracle(std::uint64_t seed, int trials, int jobs, bool inject, bool as_json) {
  BatteryOptions opts;
  opts.seed = seed;
  opts.jobs = jobs;
  opts.inject_fault = inject;
  auto results = run_battery(opts, SuiteTrials::scaled(trials));
  bool all_pass = true;
  for (const auto& r : results) all_pass = all_pass && r.passed();

  if (as_json) {
    json out;
    out["seed"] = seed;
    out["trials"] = trials;
    if (trials == 0) out["warning"] = "0 trials requested; every suite passes vacuously";
    out["suites"] = json::array();
    for (const auto& r : results) {
      json sj;
      sj["name"] = r.name;
      sj["trials"] = r.trials;
      sj["failures"] = r.failures;
      sj["witnesses"] = r.witnesses;
      out["suites"].push_back(sj);
    }
    out["result"] = all_pass ? "pass" : "fail";
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "SEED: " << seed << "\n"
              << "TRIALS: " << trials << "\n";
    if (trials == 0) std::cout << "WARNING: 0 trials requested; every suite passes vacuously\n";
    for (const auto& r : results) {
      std::cout << "SUITE: " << r.name << " trials " << r.trials << " failures " << r.failures
                << " " << (r.passed() ? "PASS" : "FAIL") << "\n";
      for (const auto& w : r.witnesses) std::cout << "WITNESS: " << w << "\n";
    }
    std::cout << "RESULT: " << (all_pass ? "pass" : "fail") << "\n";
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact-arithmetic semistability toolkit for filtered and quadric-decorated bundles"};
  app.require_subcommand(1);

  std::string path;
  std::string delta_text = "1/1";
  std::string mode = "full";
  std::string lo_text;
  std::string hi_text;
  bool as_json = false;
  GeneratorConfig gen_cfg;
  int count = 10;
  std::uint64_t oracle_seed = 1;
  int trials = 1000;
  int jobs = 1;
  bool inject = false;

  auto* v = app.add_subcommand("validate", "parse an instance file and check every invariant");
  v->add_option("path", path, "instance file")->required();
  v->add_flag("--json", as_json, "machine-readable report");

  auto* c = app.add_subcommand("check", "classify an instance at a parameter value");
  c->add_option("path", path, "instance file")->required();
  c->add_option("--delta", delta_text, "positive fraction p/q")->required();
  c->add_option("--mode", mode, "full, reduced, or both")
      ->check(CLI::IsMember({"full", "reduced", "both"}));
  c->add_flag("--json", as_json, "machine-readable report");

  auto* s = app.add_subcommand("split",
                               "decompose a weighted filtration into single steps and critical pairs");
  s->add_option("path", path, "instance file")->required();
  s->add_option("--delta", delta_text, "positive fraction p/q");
  s->add_flag("--json", as_json, "machine-readable report");

  auto* w = app.add_subcommand("walls", "list parameter walls inside an open interval");
  w->add_option("path", path, "instance file")->required();
  w->add_option("--lo", lo_text, "lower endpoint, fraction p/q")->required();
  w->add_option("--hi", hi_text, "upper endpoint, fraction p/q")->required();
  w->add_flag("--json", as_json, "machine-readable report");

  auto* g = app.add_subcommand("gen", "emit seeded random instances, one JSON object per line");
  g->add_option("--seed", gen_cfg.seed, "stream seed");
  g->add_option("--count", count, "number of instances")->check(CLI::NonNegativeNumber);
  g->add_option("--family", gen_cfg.family, "generic, orthogonal, or parabolic")
      ->check(CLI::IsMember({"generic", "orthogonal", "parabolic"}));
  g->add_option("--rank-bound", gen_cfg.rank_bound, "largest ambient rank");
  g->add_option("--length-bound", gen_cfg.length_bound, "largest catalog size");
  g->add_option("--degree-bound", gen_cfg.degree_bound, "largest |degree|");
  g->add_option("--denom-bound", gen_cfg.denom_bound, "largest weight denominator");

  auto* o = app.add_subcommand("oracle", "run the verification battery on seeded instances");
  o->add_option("--seed", oracle_seed, "battery seed");
  o->add_option("--trials", trials, "instances per suite")->check(CLI::NonNegativeNumber);
  o->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  o->add_flag("--inject-fault", inject, "flip passing checks to exercise failure reporting");
  o->add_flag("--json", as_json, "machine-readable report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*v) return cmd_validate(path, as_json);
    if (*c) return cmd_check(path, delta_text, mode, as_json);
    if (*s) return cmd_split(path, delta_text, as_json);
    if (*w) return cmd_walls(path, lo_text, hi_text, as_json);
    if (*g) return cmd_gen(gen_cfg, count);
    if (*o) return cmd_oracle(oracle_seed, trials, jobs, inject, as_json);
  } catch (const CliError& e) {
    std::cout << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cout << "ERROR: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
