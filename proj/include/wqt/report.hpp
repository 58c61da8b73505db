#pragma once

#include <wqt/fockoracle.hpp>
#include <wqt/qpoisson.hpp>
#include <wqt/relcheck.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <queue>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace wqt {

using ordered_json = nlohmann::ordered_json;

struct PointSpec {
  BigRat t;
  long p = 0, q = 0;
  EvalPoint to_point() const { return EvalPoint(t, p, q); }
  std::string str() const {
    return "t=" + t.str() + ",p=" + std::to_string(p) + ",q=" + std::to_string(q);
  }
};

inline PointSpec parse_point(const std::string& s) {
  PointSpec ps;
  try {
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, ',')) {
      auto eq = cur.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("missing '='");
      std::string key = cur.substr(0, eq), val = cur.substr(eq + 1);
      if (key == "t") {
        auto slash = val.find('/');
        if (slash == std::string::npos)
          ps.t = BigRat::from_string(val);
        else
          ps.t = BigRat(BigInt(val.substr(0, slash)), BigInt(val.substr(slash + 1)));
      } else if (key == "p") {
        ps.p = std::stol(val);
      } else if (key == "q") {
        ps.q = std::stol(val);
      } else {
        throw std::invalid_argument("unknown key " + key);
      }
    }
  } catch (const std::invalid_argument&) {
    throw;
  } catch (const std::exception& e) {
    throw std::invalid_argument("bad point spec '" + s + "': " + e.what());
  }
  return ps;
}

struct RunConfig {
  int M = 1, N = 0;
  std::string diagram_selector = "standard";  // standard | all | index:<n>
  std::vector<std::string> suites;
  long K = 24;
  int cap = 4;
  std::vector<PointSpec> points;
  std::vector<std::pair<int, int>> ij;  // explicit relation list; empty = from cap
  long oracle_cutoff = 3;
  long oracle_window = 1;
  long poisson_mmax = 4;
  std::string format = "text";
  unsigned long seed = 20240801;

  void validate() const {
    if (K < 4) throw std::invalid_argument("config: K must be >= 4");
    if (cap < 2) throw std::invalid_argument("config: cap must be >= 2");
    if (points.empty()) throw std::invalid_argument("config: need at least one eval point");
    for (const auto& p : points) p.to_point();  // throws on bad points
    if (M < 0 || N < 0 || M + N < 1) throw std::invalid_argument("config: invalid (M,N)");
  }

  static std::vector<PointSpec> default_points() {
    return {{BigRat(2, 3), 3, 2}, {BigRat(1, 2), 2, 1}, {BigRat(3, 5), 5, 3}};
  }
  std::vector<std::pair<int, int>> relations() const {
    if (!ij.empty()) return ij;
    std::vector<std::pair<int, int>> v;
    for (int i = 1; i <= cap; ++i)
      for (int j = i; i + j <= cap; ++j) v.push_back({i, j});
    return v;
  }
};

struct SuiteResult {
  std::string suite;
  std::string relation;  // e.g. "(1,2)" or diagram word
  std::string point;
  bool pass = true;
  std::vector<std::string> ledger;
  double seconds = 0;
};

struct SuiteReport {
  RunConfig config;
  std::vector<SuiteResult> results;
  bool pass() const {
    for (const auto& r : results)
      if (!r.pass) return false;
    return true;
  }
};

inline int worker_count() {
  if (const char* s = std::getenv("WQT_WORKERS")) {
    int n = std::atoi(s);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 4u));
}

// Bounded worker pool; results land in pre-assigned slots so output
// stays deterministic regardless of scheduling.
inline void run_tasks(std::vector<std::function<void()>>& tasks) {
  int n = worker_count();
  if (n <= 1 || tasks.size() <= 1) {
    for (auto& t : tasks) t();
    return;
  }
  std::mutex mu;
  std::size_t next = 0;
  auto worker = [&] {
    while (true) {
      std::size_t mine;
      {
        std::lock_guard<std::mutex> lock(mu);
        if (next >= tasks.size()) return;
        mine = next++;
      }
      tasks[mine]();
    }
  };
  std::vector<std::thread> threads;
  for (int i = 0; i < n; ++i) threads.emplace_back(worker);
  for (auto& th : threads) th.join();
}

// ---------------------------------------------------------------------
// Suite runners.
// ---------------------------------------------------------------------

inline std::vector<SuperDiagram> select_diagrams(const RunConfig& cfg) {
  auto all = enumerate_systems(cfg.M, cfg.N);
  if (cfg.diagram_selector == "all") return all;
  if (cfg.diagram_selector == "standard") return {SuperDiagram::standard(cfg.M, cfg.N)};
  if (cfg.diagram_selector.rfind("index:", 0) == 0) {
    std::size_t idx = std::stoul(cfg.diagram_selector.substr(6));
    if (idx >= all.size()) throw std::invalid_argument("diagram index out of range");
    return {all[idx]};
  }
  throw std::invalid_argument("bad diagram selector: " + cfg.diagram_selector);
}

inline SuiteReport run(const RunConfig& cfg) {
  cfg.validate();
  SuiteReport out;
  out.config = cfg;
  auto diagrams = select_diagrams(cfg);
  std::vector<std::function<void()>> tasks;
  std::vector<SuiteResult>& res = out.results;

  auto add = [&](SuiteResult base, std::function<void(SuiteResult&)> body) {
    res.push_back(std::move(base));
    std::size_t slot = res.size() - 1;
    tasks.push_back([&res, slot, body] {
      auto start = std::chrono::steady_clock::now();
      try {
        body(res[slot]);
      } catch (const std::exception& e) {
        res[slot].pass = false;
        res[slot].ledger.push_back(std::string("exception: ") + e.what());
      }
      res[slot].seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    });
  };

  auto want = [&](const std::string& s) {
    return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end();
  };

  for (const auto& d : diagrams) {
    std::string word = d.canonical_word();
    if (want("diagram"))
      add({"diagram", word, "", true, {}, 0}, [d](SuiteResult& r) {
        auto rep = check_D_invariance(d.M(), d.N());
        r.pass = rep.pass;
        r.ledger.push_back("systems=" + std::to_string(rep.systems_checked));
        r.ledger.push_back("D(0,L)=" + rep.common_value.str());
        if (!rep.pass) r.ledger.push_back(rep.failure);
      });
    for (const auto& pspec : cfg.points) {
      EvalPoint pt = pspec.to_point();
      auto table = [d, pt] { return ParamTable(d, pt); };
      if (want("params"))
        add({"params", word, pspec.str(), true, {}, 0}, [table](SuiteResult& r) {
          ParamTable t = table();
          r.ledger.push_back("a=" + t.a_exponent().str());
        });
      if (want("locality"))
        add({"locality", word, pspec.str(), true, {}, 0}, [table, &cfg](SuiteResult& r) {
          ParamTable t = table();
          for (auto rep : {check_mutual_locality(t, cfg.K), check_locality_series(t, cfg.K)}) {
            if (!rep.pass) r.pass = false;
            for (auto& f : rep.failures) r.ledger.push_back(rep.name + ": " + f);
          }
        });
      if (want("screening"))
        add({"screening", word, pspec.str(), true, {}, 0}, [table, &cfg](SuiteResult& r) {
          ParamTable t = table();
          for (auto rep : {check_T1_screening(t, cfg.K), check_symmetry(t, cfg.K),
                           check_h_closed_forms(t, cfg.K), check_screening_relations(t, cfg.K),
                           check_det_A(t, cfg.K)}) {
            if (!rep.pass) r.pass = false;
            for (auto& f : rep.failures) r.ledger.push_back(rep.name + ": " + f);
          }
        });
      if (want("vertex"))
        add({"vertex", word, pspec.str(), true, {}, 0}, [table, &cfg](SuiteResult& r) {
          ParamTable t = table();
          auto rep = check_vertex_commutation(t, cfg.K);
          r.pass = rep.pass;
          for (auto& f : rep.failures) r.ledger.push_back(f);
        });
      for (auto [i, j] : cfg.relations()) {
        std::string rel = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
        if (want("fusion"))
          add({"fusion", word + " " + rel, pspec.str(), true, {}, 0},
              [table, i, j](SuiteResult& r) {
                ParamTable t = table();
                auto rep = check_fusion(t, i, j);
                r.pass = rep.pass;
                r.ledger.push_back("pairs=" + std::to_string(rep.pairs_checked));
                for (auto& f : rep.failures) r.ledger.push_back(f);
              });
        if (want("exchange"))
          add({"exchange", word + " " + rel, pspec.str(), true, {}, 0},
              [table, i, j](SuiteResult& r) {
                ParamTable t = table();
                auto rep = check_exchange(t, i, j);
                r.pass = rep.pass;
                r.ledger.push_back("pairs=" + std::to_string(rep.pairs_checked));
                for (auto& f : rep.failures) r.ledger.push_back(f);
              });
        if (want("quadratic"))
          add({"quadratic", word + " " + rel, pspec.str(), true, {}, 0},
              [table, i, j](SuiteResult& r) {
                ParamTable t = table();
                auto rep = check_quadratic(t, i, j);
                r.pass = rep.pass;
                r.ledger.push_back("pairs=" + std::to_string(rep.pairs_checked));
                r.ledger.push_back("rows=" + std::to_string(rep.ledger.size()));
                for (const auto& row : rep.ledger)
                  if (!row.matched)
                    r.ledger.push_back("x^" + std::to_string(row.pole_exp) + " " +
                                       symbol_str(row.symbol) + " lhs=" + row.lhs.str() +
                                       " rhs=" + row.rhs.str());
                for (auto& f : rep.failures) r.ledger.push_back(f);
              });
      }
      if (want("oracle"))
        add({"oracle", word, pspec.str(), true, {}, 0}, [table, &cfg](SuiteResult& r) {
          ParamTable t = table();
          FockSpace space(t.L(), cfg.oracle_cutoff);
          auto h = oracle_check_heisenberg(t, space);
          auto c = oracle_check_contraction(t, space);
          auto b = oracle_check_base_quadratic(t, space, 1, cfg.oracle_window);
          r.pass = h.pass && c.pass && b.pass;
          r.ledger.push_back("elements=" + std::to_string(h.elements_compared +
                                                          c.elements_compared +
                                                          b.elements_compared));
          for (auto* rep : {&h, &c, &b})
            for (auto& f : rep->failures) r.ledger.push_back(f);
        });
    }
    if (want("poisson"))
      add({"poisson", word, "", true, {}, 0}, [&cfg](SuiteResult& r) {
        if (cfg.M < cfg.N) {
          r.ledger.push_back("skipped: the classical limit is stated for M >= N");
          return;
        }
        for (int i = 1; i <= 2; ++i)
          for (int j = i; j <= 2; ++j)
            for (long m = 0; m <= cfg.poisson_mmax; ++m) {
              auto rep = check_classical_limit(cfg.M, cfg.N, i, j, m);
              if (!rep.pass) {
                r.pass = false;
                r.ledger.push_back("limit (" + std::to_string(i) + "," + std::to_string(j) +
                                   ") m=" + std::to_string(m) +
                                   " err=" + std::to_string(rep.relative_error));
              }
            }
      });
  }
  run_tasks(tasks);
  return out;
}

// ---------------------------------------------------------------------
// Serialization. The structured form is deterministic (no timings).
// ---------------------------------------------------------------------

inline ordered_json config_json(const RunConfig& cfg) {
  ordered_json j;
  j["M"] = cfg.M;
  j["N"] = cfg.N;
  j["diagram"] = cfg.diagram_selector;
  j["suites"] = cfg.suites;
  j["K"] = cfg.K;
  j["cap"] = cfg.cap;
  std::vector<std::string> pts;
  for (auto& p : cfg.points) pts.push_back(p.str());
  j["points"] = pts;
  std::vector<std::string> rels;
  for (auto [a, b] : cfg.relations())
    rels.push_back(std::to_string(a) + "," + std::to_string(b));
  j["relations"] = rels;
  j["seed"] = cfg.seed;
  return j;
}

inline std::string emit_report(const SuiteReport& rep, const std::string& format) {
  if (format == "structured" || format == "json") {
    ordered_json j;
    j["schema"] = "wqt-report/1";
    j["config"] = config_json(rep.config);
    ordered_json suites = ordered_json::array();
    for (const auto& r : rep.results) {
      ordered_json s;
      s["suite"] = r.suite;
      s["relation"] = r.relation;
      s["point"] = r.point;
      s["status"] = r.pass ? "pass" : "fail";
      s["ledger"] = r.ledger;
      suites.push_back(s);
    }
    j["suites"] = suites;
    j["pass"] = rep.pass();
    return j.dump(2) + "\n";
  }
  std::ostringstream os;
  for (const auto& r : rep.results) {
    os << (r.pass ? "pass" : "FAIL") << "  " << r.suite;
    if (!r.relation.empty()) os << " " << r.relation;
    if (!r.point.empty()) os << " @ " << r.point;
    os << "  (" << std::fixed << r.seconds << "s)\n";
    for (const auto& l : r.ledger) os << "      " << l << "\n";
  }
  os << (rep.pass() ? "ALL PASS" : "FAILURES PRESENT") << "\n";
  return os.str();
}

}  // namespace wqt
