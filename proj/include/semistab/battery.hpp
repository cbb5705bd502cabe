#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "semistab/checker.hpp"
#include "semistab/generator.hpp"
#include "semistab/oracle.hpp"
#include "semistab/orthogonal.hpp"
#include "semistab/parabolic.hpp"
#include "semistab/splitter.hpp"

namespace semistab {

struct SuiteResult {
  std::string name;
  int trials = 0;
  int failures = 0;
  std::vector<std::string> witnesses;  // first few failing instances

  bool passed() const { return failures == 0; }
};

// per-suite instance counts; the defaults are the release gate, scaled(n)
// shrinks every seeded suite to n instances for quick sweeps
struct SuiteTrials {
  int split = 10000;
  int regression = 3;
  int equivalence = 1000;
  int weight_one = 1000;
  int closed_form = 11;  // one index per ambient rank from 2 through 12
  int criticality = 10000;
  int orthogonal = 500;
  int boundary = 200;
  int parabolic = 500;
  int heredity = 1000;

  static SuiteTrials full() { return {}; }

  static SuiteTrials scaled(int n) {
    SuiteTrials t;
    t.split = t.equivalence = t.weight_one = t.criticality = t.heredity = n;
    t.orthogonal = t.boundary = t.parabolic = n;
    t.regression = n > 0 ? 3 : 0;
    t.closed_form = std::min(11, std::max(n, 0));
    return t;
  }
};

struct BatteryOptions {
  std::uint64_t seed = 1;
  int jobs = 1;
  bool inject_fault = false;  // flips passing checks on a fixed index stripe
};

namespace detail {

// runs one suite over an index range; each index derives its own stream from
// the suite seed, so the result is identical for any job count
template <class Fn>
inline SuiteResult run_suite(const std::string& name, int trials, std::uint64_t suite_seed,
                             const BatteryOptions& opts, Fn&& fn) {
  SuiteResult res;
  res.name = name;
  res.trials = std::max(trials, 0);
  std::vector<std::string> messages(static_cast<std::size_t>(res.trials));
  std::vector<char> failed(static_cast<std::size_t>(res.trials), 0);
  auto work = [&](int from, int step) {
    for (int i = from; i < res.trials; i += step) {
      std::optional<std::string> bad;
      try {
        bad = fn(mix_seed(suite_seed, static_cast<std::uint64_t>(i)), i);
      } catch (const std::exception& e) {
        bad = std::string("exception: ") + e.what();
      }
      if (opts.inject_fault && i % 7 == 3 && !bad)
        bad = "injected fault: this passing check was reported as a failure";
      if (bad) {
        messages[static_cast<std::size_t>(i)] = *bad;
        failed[static_cast<std::size_t>(i)] = 1;
      }
    }
  };
  const int jobs = std::max(1, opts.jobs);
  if (jobs == 1 || res.trials <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(work, k, jobs);
    for (auto& th : pool) th.join();
  }
  for (int i = 0; i < res.trials; ++i)
    if (failed[static_cast<std::size_t>(i)]) {
      ++res.failures;
      if (res.witnesses.size() < 5)
        res.witnesses.push_back("instance " + std::to_string(i) + ": " +
                                messages[static_cast<std::size_t>(i)]);
    }
  return res;
}

inline VanishingPattern five_step_pattern() {
  return VanishingPattern{{{0, 0, 0, 0, 1},
                           {0, 0, 0, 1, 1},
                           {0, 0, 1, 1, 1},
                           {0, 1, 1, 1, 1},
                           {1, 1, 1, 1, 1}}};
}

inline WeightedFiltration five_step(std::vector<rat> weights) {
  WeightedFiltration f;
  f.ambient_rank = 5;
  f.ambient_degree = 0;
  f.ranks = {1, 2, 3, 4};
  f.degrees = {0, 0, 0, 0};
  f.weights = std::move(weights);
  return f;
}

inline rat piece_mu(const WeightedFiltration& f, const VanishingPattern& M, const Piece& p) {
  return oracle::mu(subfiltration(f, p.indices, p.weights), induced_pattern(M, p.indices));
}

}  // namespace detail

inline std::vector<SuiteResult> run_battery(const BatteryOptions& opts, const SuiteTrials& trials) {
  std::vector<SuiteResult> out;

  out.push_back(detail::run_suite(
      "split-conservation", trials.split, mix_seed(opts.seed, 101), opts,
      [](std::uint64_t s, int) -> std::optional<std::string> {
        Rng rng(s);
        GeneratorConfig cfg;
        int t = static_cast<int>(rng.range(3, 8));
        auto f = random_filtration(rng, cfg, t);
        auto M = random_pattern(rng, t);
        auto rep = verify_decomposition(f, M, split_full(f, M));
        if (!rep.ok()) return rep.joined();
        return std::nullopt;
      }));

  out.push_back(detail::run_suite(
      "five-step-regression", trials.regression, mix_seed(opts.seed, 102), opts,
      [](std::uint64_t, int index) -> std::optional<std::string> {
        const std::vector<std::vector<rat>> weight_sets = {
            {rat(1), rat(2), rat(1), rat(2)},
            {rat(2), rat(1), rat(1), rat(1)},
            {rat(1), rat(1), rat(2), rat(1)}};
        auto f = detail::five_step(weight_sets[static_cast<std::size_t>(index)]);
        auto M = detail::five_step_pattern();
        auto dec = split_full(f, M);
        auto rep = verify_decomposition(f, M, dec);
        if (!rep.ok()) return "conservation: " + rep.joined();
        auto piece_is = [&](std::size_t k, std::vector<int> idx, std::vector<rat> w) {
          return k < dec.pieces.size() && dec.pieces[k].indices == idx &&
                 dec.pieces[k].weights == w;
        };
        if (index == 0) {
          if (dec.trace != std::vector<std::string>{"C2"}) return "unexpected trace";
          if (dec.pieces.size() != 2 || !piece_is(0, {0, 3}, {rat(1), rat(2)}) ||
              !piece_is(1, {1, 2}, {rat(2), rat(1)}))
            return "unexpected pieces";
          if (oracle::mu(f, M) != 3) return "whole-chain correction is not 3";
          rat a = detail::piece_mu(f, M, dec.pieces[0]);
          rat b = detail::piece_mu(f, M, dec.pieces[1]);
          if (!((a == 2 && b == 1) || (a == 1 && b == 2)))
            return "piece corrections are not 2 and 1";
        } else if (index == 1) {
          if (dec.trace != std::vector<std::string>{"C3", "C2"}) return "unexpected trace";
          if (dec.pieces.size() != 3 || !piece_is(0, {0}, {rat(1)}) ||
              !piece_is(1, {0, 3}, {rat(1), rat(1)}) || !piece_is(2, {1, 2}, {rat(1), rat(1)}))
            return "unexpected pieces";
        } else {
          if (dec.trace != std::vector<std::string>{"C3-pair"}) return "unexpected trace";
          if (dec.pieces.size() != 3 || !piece_is(0, {0, 2}, {rat(1), rat(1)}) ||
              !piece_is(1, {1, 2}, {rat(1), rat(1)}) || !piece_is(2, {3}, {rat(1)}))
            return "unexpected pieces";
        }
        return std::nullopt;
      }));

  out.push_back(detail::run_suite(
      "definition-equivalence", trials.equivalence, mix_seed(opts.seed, 103), opts,
      [](std::uint64_t s, int) -> std::optional<std::string> {
        Rng rng(s);
        GeneratorConfig cfg;
        cfg.rank_bound = 10;
        cfg.length_bound = 8;
        auto cat = random_catalog(rng, cfg);
        for (rat delta : {rat(1, 4), rat(1, 2), rat(1), rat(3)}) {
          auto full = verdict_full(cat, delta);
          auto reduced = verdict_reduced(cat, delta);
          if (full.classification != reduced.classification)
            return std::string("classes differ at delta ") + fraction_string(delta) + ": " +
                   to_string(full.classification) + " vs " + to_string(reduced.classification);
        }
        return std::nullopt;
      }));

  out.push_back(detail::run_suite(
      "weight-one-sufficiency", trials.weight_one, mix_seed(opts.seed, 104), opts,
      [](std::uint64_t s, int) -> std::optional<std::string> {
        Rng rng(s);
        GeneratorConfig cfg;
        cfg.rank_bound = 10;
        cfg.length_bound = 8;
        const rat deltas[] = {rat(1, 4), rat(1, 2), rat(1), rat(3)};
        rat delta = deltas[rng.range(0, 3)];
        auto cat = random_semistable_catalog(rng, cfg, delta);
        auto chains = enumerate_chains(cat, cat.size());
        if (chains.empty()) return std::nullopt;
        for (int k = 0; k < 100; ++k) {
          const auto& chain = chains[static_cast<std::size_t>(
              rng.range(0, static_cast<long long>(chains.size()) - 1))];
          std::vector<rat> w;
          for (std::size_t i = 0; i < chain.size(); ++i) w.push_back(random_weight(rng, 8));
          if (oracle::stab(chain_filtration(cat, chain, w), chain_pattern(cat, chain), delta) < 0)
            return "negative value on a positively weighted chain";
        }
        return std::nullopt;
      }));

  out.push_back(detail::run_suite(
      "two-step-closed-form", trials.closed_form, mix_seed(opts.seed, 105), opts,
      [](std::uint64_t, int index) -> std::optional<std::string> {
        const long long r = index + 2;
        // all reduced rationals in (0,2] with denominator at most 8
        std::vector<rat> grid;
        for (long long q = 1; q <= 8; ++q)
          for (long long p = 1; p <= 2 * q; ++p)
            if (std::gcd(p, q) == 1) grid.push_back(rat(p, q));
        const auto M = critical_pair_pattern();
        for (long long r_i = 1; r_i < r; ++r_i)
          for (long long r_j = r_i + 1; r_j < r; ++r_j)
            for (const rat& a_i : grid)
              for (const rat& a_j : grid) {
                WeightedFiltration f;
                f.ambient_rank = r;
                f.ambient_degree = 0;
                f.ranks = {r_i, r_j};
                f.degrees = {0, 0};
                f.weights = {a_i, a_j};
                if (mu_value(f, M) != mu_len2_critical(r, r_i, r_j, a_i, a_j))
                  return "closed form broke at ranks " + std::to_string(r_i) + "," +
                         std::to_string(r_j) + " of " + std::to_string(r);
              }
        return std::nullopt;
      }));

  out.push_back(detail::run_suite(
      "criticality-stability", trials.criticality, mix_seed(opts.seed, 106), opts,
      [](std::uint64_t s, int) -> std::optional<std::string> {
        Rng rng(s);
        GeneratorConfig cfg;
        int t = static_cast<int>(rng.range(1, 8));
        auto f = random_filtration(rng, cfg, t);
        auto M = random_pattern(rng, t);
        const bool c0 = is_critical(f, M);
        for (int k = 0; k < 10; ++k) {
          auto g = f;
          for (auto& w : g.weights) w = random_weight(rng, cfg.denom_bound);
          if (is_critical(g, M) != c0) return "criticality changed under a reweighting";
        }
        rat singles = 0;
        for (int i = 0; i < t; ++i)
          singles += f.weights[static_cast<std::size_t>(i)] *
                     (k_of(M, i) * f.ambient_rank - 2 * f.ranks[static_cast<std::size_t>(i)]);
        if (!(mu_value(f, M) <= singles)) return "correction exceeds the singleton sum";
        return std::nullopt;
      }));

  out.push_back(detail::run_suite(
      "orthogonal-equivalence", trials.orthogonal, mix_seed(opts.seed, 107), opts,
      [](std::uint64_t s, int) -> std::optional<std::string> {
        Rng rng(s);
        GeneratorConfig cfg;
        cfg.rank_bound = 10;
        cfg.degree_bound = 4;
        auto oc = random_orthogonal_catalog(rng, cfg);
        auto valid = validate_orthogonal(oc);
        if (!valid.ok()) return "generator produced an invalid instance: " + valid.joined();
        for (rat delta : {rat(1, 4), rat(1), rat(2)}) {
          auto rep = equivalence_report(oc, delta);
          if (!rep.agree)
            return std::string("classes differ at delta ") + fraction_string(delta) + ": " +
                   to_string(rep.ramanan.classification) + " vs " +
                   to_string(rep.reduced.classification);
        }
        for (const auto& e : oc.base.elements) {
          const int p = oc.base.position_of(e.id);
          if (oc.base.vanishing[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)] != 0)
            continue;
          if (oc.perp[static_cast<std::size_t>(p)] == p) continue;
          auto [f, M] = critical_triple(oc, e.id);
          if (!is_critical(f, M)) return "perp chain is not critical";
        }
        return std::nullopt;
      }));

  out.push_back(detail::run_suite(
      "boundary-restriction", trials.boundary, mix_seed(opts.seed, 108), opts,
      [](std::uint64_t s, int) -> std::optional<std::string> {
        Rng rng(s);
        GeneratorConfig cfg;
        auto inst = random_equality_instance(rng, cfg);
        if (!(inst.delta < rat(1, inst.cat.ambient_rank)))
          return "delta is not below the small-parameter threshold";
        auto v = verdict_full(inst.cat, inst.delta);
        if (v.classification != StabilityClass::strictly_semistable)
          return std::string("expected a boundary instance, got ") + to_string(v.classification);
        if (v.margin != rat(0) || v.witness != std::vector<int>{inst.witness_id})
          return "boundary witness is not the designated element";
        auto view = restrict_to_subbundle(inst.cat, inst.witness_id);
        if (verdict_full(view, inst.delta).classification == StabilityClass::unstable)
          return "restriction to the witness went unstable";
        return std::nullopt;
      }));

  out.push_back(detail::run_suite(
      "parabolic-transport", trials.parabolic, mix_seed(opts.seed, 109), opts,
      [](std::uint64_t s, int) -> std::optional<std::string> {
        Rng rng(s);
        GeneratorConfig cfg;
        cfg.rank_bound = 9;
        cfg.length_bound = 6;
        auto cat = random_catalog(rng, cfg);
        auto pd = random_parabolic_data(rng, cat);
        const rat deltas[] = {rat(1, 4), rat(1), rat(3)};
        rat delta = deltas[rng.range(0, 2)];
        auto full = parabolic_verdict_full(cat, pd, delta);
        auto reduced = parabolic_verdict_reduced(cat, pd, delta);
        if (full.classification != reduced.classification)
          return std::string("classes differ: ") + to_string(full.classification) + " vs " +
                 to_string(reduced.classification);
        return std::nullopt;
      }));

  out.push_back(detail::run_suite(
      "noncritical-heredity", trials.heredity, mix_seed(opts.seed, 110), opts,
      [](std::uint64_t s, int) -> std::optional<std::string> {
        Rng rng(s);
        GeneratorConfig cfg;
        int t = static_cast<int>(rng.range(3, 7));
        auto f = random_filtration(rng, cfg, t);
        auto M = random_noncritical_pattern(rng, t);
        for (unsigned mask = 1; mask < (1u << t); ++mask) {
          std::vector<int> subset;
          for (int b = 0; b < t; ++b)
            if (mask & (1u << b)) subset.push_back(b);
          if (is_critical(subfiltration(f, subset), induced_pattern(M, subset)))
            return "a subfiltration turned critical";
        }
        return std::nullopt;
      }));

  return out;
}

}  // namespace semistab
