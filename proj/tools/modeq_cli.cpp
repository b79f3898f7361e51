// Command-line front end: classify, invariants, pencil, oracle, tables.
#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "modeq/equivalence.hpp"
#include "modeq/oracle.hpp"
#include "modeq/pencils.hpp"

using json = nlohmann::json;
using namespace modeq;

namespace {

constexpr int kUsageError = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Rational parse_rational(const std::string& flag, const std::string& text) {
  try {
    return Rational::parse(text);
  } catch (const Error&) {
    throw UsageError("--" + flag + ": cannot read '" + text + "' as a rational");
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream in(s);
  while (std::getline(in, tok, sep)) out.push_back(tok);
  return out;
}

json to_json(const QSqrt3& x) { return json::array({x.a().str(), x.b().str()}); }

json params_json(const DensityPair& p) { return {{"lambda", p.lambda.str()}, {"mu", p.mu.str()}}; }

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---- classify ----

struct ClassifyArgs {
  std::string lambda1, mu1, lambda2, mu2, n;
  int l = 0;
  std::string pattern;
  bool experimental = false;
};

int run_classify(const ClassifyArgs& a) {
  DensityPair pa{parse_rational("lambda1", a.lambda1), parse_rational("mu1", a.mu1)};
  DensityPair pb{parse_rational("lambda2", a.lambda2), parse_rational("mu2", a.mu2)};
  Rational n = parse_rational("n", a.n);
  SeriesSpec spec;
  try {
    if (a.pattern.empty()) {
      spec = SeriesSpec(n, a.l);
    } else {
      std::vector<int> pat;
      for (const auto& t : split(a.pattern, ',')) pat.push_back(std::stoi(t));
      spec = SeriesSpec(n, pat);
      if (a.l != 0 && a.l != spec.l)
        throw UsageError("--l " + std::to_string(a.l) + " disagrees with the pattern's length " + std::to_string(spec.l));
    }
  } catch (const std::invalid_argument&) {
    throw UsageError("--pattern must be a comma-separated list of integers");
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }

  json out;
  out["params_a"] = params_json(pa);
  out["params_b"] = params_json(pb);
  out["gamma"] = {{"a", pa.gamma().str()}, {"b", pb.gamma().str()}};
  out["delta"] = {{"a", pa.delta().str()}, {"b", pb.delta().str()}};
  out["n"] = n.str();
  out["l"] = spec.l;
  out["pattern"] = spec.pattern;
  out["witness"] = nullptr;
  out["failing_condition"] = nullptr;
  out["reason"] = nullptr;

  Verdict v;
  try {
    v = spec.is_full() ? decide(spec, pa, pb) : decide_lacunary(spec, pa, pb, a.experimental);
  } catch (const UnsupportedPattern& e) {
    v = {Unsupported{e.what()}};
  } catch (const ExcludedN& e) {
    v = {Unsupported{e.what()}};
  }
  out["outcome"] = v.name();
  int code = 0;
  if (auto* e = std::get_if<Equivalent>(&v.outcome)) {
    json w = json::object();
    for (const auto& [k, x] : e->witness) w[std::to_string(k)] = to_json(x);
    out["witness"] = w;
  } else if (auto* in = std::get_if<Inequivalent>(&v.outcome)) {
    const auto& f = in->failing;
    json fc = {{"i", f.i}, {"j", f.j}, {"value_a", to_json(f.value_a)}, {"value_b", to_json(f.value_b)},
               {"kind", to_string(f.kind)}};
    if (f.invariant) fc["invariant"] = *f.invariant;
    out["failing_condition"] = fc;
    code = 1;
  } else {
    out["reason"] = std::get<Unsupported>(v.outcome).reason;
    code = 2;
  }
  emit(out);
  return code;
}

// ---- invariants ----

int run_invariants(const std::string& lam, const std::string& mu, const std::string& n_text, const std::string& kinds) {
  DensityPair p{parse_rational("lambda", lam), parse_rational("mu", mu)};
  Rational n = parse_rational("n", n_text);
  std::vector<InvariantKind> wanted;
  for (const auto& name : split(kinds, ',')) {
    auto k = invariant_kind_from_string(name);
    if (!k || *k == InvariantKind::GeneralRatio) throw UsageError("--kinds: unknown invariant '" + name + "'");
    wanted.push_back(*k);
  }
  json vals = json::object();
  for (auto k : wanted) {
    try {
      auto v = invariant(k, n, p).value;
      vals[to_string(k)] = v ? to_json(*v) : json("undefined");
    } catch (const Error& e) {
      vals[to_string(k)] = {{"error", e.what()}};
    }
  }
  emit({{"params", params_json(p)},
        {"gamma", p.gamma().str()},
        {"delta", p.delta().str()},
        {"n", n.str()},
        {"invariants", vals}});
  return 0;
}

// ---- pencil ----

struct PencilArgs {
  std::string family, n5, n6, levels, window, out = "csv", output;
  int resolution = 200;
};

std::string fmt(const Rational& r) { return Surd{r, Rational(0), Rational(0)}.decimal(); }

std::string svg_path(const CurveSample& s) {
  std::ostringstream d;
  for (const auto& line : s.polylines) {
    for (std::size_t k = 0; k < line.size(); ++k) {
      const auto& pt = s.points[line[k]];
      d << (k == 0 ? "M" : " L") << pt.x.decimal() << "," << pt.y.decimal();
    }
    d << " ";
  }
  std::string out = d.str();
  if (!out.empty()) out.pop_back();
  return out;
}

int run_pencil(const PencilArgs& a) {
  PencilFamily fam;
  try {
    if (a.family == "Rtilde") {
      fam = PencilFamily::rtilde();
    } else if (a.family == "I") {
      if (a.n5.empty()) throw UsageError("--family I needs --n5");
      fam = PencilFamily::ipencil(parse_rational("n5", a.n5));
    } else if (a.family == "M") {
      if (a.n6.empty()) throw UsageError("--family M needs --n6");
      fam = PencilFamily::mpencil(parse_rational("n6", a.n6));
    } else {
      throw UsageError("--family must be Rtilde, I or M");
    }
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  auto wparts = split(a.window, ',');
  if (wparts.size() != 4) throw UsageError("--window needs x0,x1,y0,y1");
  Window w{parse_rational("window", wparts[0]), parse_rational("window", wparts[1]), parse_rational("window", wparts[2]),
           parse_rational("window", wparts[3])};
  std::vector<Level> levels;
  for (const auto& t : split(a.levels, ',')) levels.push_back(t == "inf" ? Level::inf() : Level{parse_rational("levels", t)});
  if (levels.empty()) throw UsageError("--levels needs at least one value");
  if (a.out != "csv" && a.out != "svg") throw UsageError("--out must be csv or svg");

  std::vector<CurveSample> curves;
  try {
    for (const auto& lv : levels) curves.push_back(sample_level_curve(fam, lv, w, a.resolution));
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  auto bps = base_points(fam);

  std::ostringstream body;
  if (a.out == "csv") {
    body << "family,level,x,y\n";
    for (const auto& c : curves)
      for (const auto& pt : c.points) body << fam.name() << "," << c.level.str() << "," << pt.x.decimal() << "," << pt.y.decimal() << "\n";
    for (const auto& b : bps) body << fam.name() << ",base," << fmt(b.x) << "," << fmt(b.y) << "\n";
  } else {
    Rational wd = w.x1 - w.x0, ht = w.y1 - w.y0;
    Rational stroke = std::min(wd, ht) / Rational(400), radius = std::min(wd, ht) / Rational(80);
    // y grows downward in SVG: flip inside a group so the viewBox stays the requested window
    body << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << fmt(w.x0) << " " << fmt(-w.y1) << " " << fmt(wd) << " "
         << fmt(ht) << "\">\n";
    body << "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\"" << fmt(stroke) << "\">\n";
    for (const auto& c : curves)
      body << "<path data-level=\"" << c.level.str() << "\" d=\"" << svg_path(c) << "\"/>\n";
    for (const auto& b : bps)
      body << "<circle cx=\"" << fmt(b.x) << "\" cy=\"" << fmt(b.y) << "\" r=\"" << fmt(radius) << "\" fill=\"red\" stroke=\"none\"/>\n";
    body << "</g>\n</svg>\n";
  }
  if (a.output.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(a.output, std::ios::binary);
    if (!f) throw UsageError("cannot write " + a.output);
    f << body.str();
  }
  return 0;
}

// ---- oracle ----

unsigned thread_cap() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MODEQ_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return std::min<unsigned>(hw, static_cast<unsigned>(v));
  }
  return hw;
}

// Runs f over [0, count) on a bounded pool; results keep their index so output order is fixed.
std::vector<json> parallel_cells(std::size_t count, const std::function<json(std::size_t)>& f) {
  std::vector<json> out(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < count; k = next++) out[k] = f(k);
  };
  std::vector<std::thread> pool;
  unsigned n = std::min<unsigned>(thread_cap(), static_cast<unsigned>(std::max<std::size_t>(count, 1)));
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return out;
}

struct GridCell {
  SeriesSpec spec;
  DensityPair a;
  DensityPair b;
};

std::vector<GridCell> oracle_grid(bool full, bool with_resonant) {
  std::mt19937 gen(20240611);
  auto rat = [&](long num, long den) {
    std::uniform_int_distribution<long> p(-num, num), q(1, den);
    return Rational(p(gen), q(gen));
  };
  std::vector<GridCell> cells;
  std::vector<int> lengths = full ? std::vector<int>{3, 4, 5} : std::vector<int>{3, 4};
  int per = full ? 6 : 3;
  for (int l : lengths)
    for (int k = 0; k < per;) {
      Rational n = rat(9, 5);
      if (resonance_class(n, l) != ResonanceClass::NonResonant) continue;
      DensityPair a{rat(7, 4), rat(7, 4)};
      DensityPair b = k % 3 == 0 ? a.conjugate() : DensityPair{rat(7, 4), rat(7, 4)};
      cells.push_back({SeriesSpec(n, l), a, b});
      ++k;
    }
  // the classical Bol pair and, for pq, one resonant spec that must be skipped
  cells.push_back({SeriesSpec(Rational(-5), 5), {Rational(1), Rational(3)}, {Rational(0), Rational(3)}});
  if (with_resonant) cells.push_back({SeriesSpec(Rational(-1), 3), {Rational(0), Rational(1)}, {Rational(0), Rational(1)}});
  return cells;
}

json cell_head(const GridCell& c) { return {{"n", c.spec.n.str()}, {"l", c.spec.l}, {"params_a", params_json(c.a)}}; }

int run_oracle(const std::string& check, const std::string& grid, int D, int P) {
  if (check != "cmz" && check != "pq" && check != "intertwiner") throw UsageError("--check must be cmz, pq or intertwiner");
  if (grid != "small" && grid != "full") throw UsageError("--grid must be small or full");
  if (D < 6) throw UsageError("--degree must be at least 6");
  if (P < 5) throw UsageError("--gen-cap must be at least 5");
  auto cells = oracle_grid(grid == "full", check == "pq");

  auto results = parallel_cells(cells.size(), [&](std::size_t k) -> json {
    const GridCell& c = cells[k];
    json r = cell_head(c);
    try {
      if (check == "pq") {
        auto q = build_pq(c.spec, c.a, D);
        bool same = q.pq == build_pq_linear(c.spec, c.a, D);
        r["status"] = same ? "pass" : "fail";
        if (!same) r["detail"] = "fixed-point and linear-solve quantizations differ";
      } else if (check == "cmz") {
        auto q = build_pq(c.spec, c.a, D);
        json entries = json::array();
        bool ok = true;
        for (int j = 0; j < c.spec.l; ++j)
          for (int i = j + 2; i < c.spec.l && i - j <= 4; ++i) {
            json e = {{"i", i}, {"j", j}};
            try {
              QSqrt3 want = b_cmz(c.spec.n + Rational(j), i - j, c.a);
              QSqrt3 got = recover_b(q, i, j, P).value;
              e["recovered"] = to_json(got);
              e["formula"] = to_json(want);
              if (got != want) ok = false;
            } catch (const DenominatorVanishes&) {
              e["skipped"] = "formula denominator vanishes";
            }
            entries.push_back(e);
          }
        r["entries"] = entries;
        r["status"] = ok ? "pass" : "fail";
      } else {
        r["params_b"] = params_json(c.b);
        bool engine = decide(c.spec, c.a, c.b).equivalent();
        auto eps = brute_force_intertwiner(c.spec, c.a, c.b, D, P);
        r["decide"] = engine ? "Equivalent" : "Inequivalent";
        r["intertwiner"] = eps ? "found" : "none";
        r["status"] = engine == eps.has_value() ? "pass" : "fail";
      }
    } catch (const ResonantInput& e) {
      r["status"] = "skip";
      r["detail"] = std::string("ResonantInput: ") + e.what();
    } catch (const Error& e) {
      r["status"] = "fail";
      r["detail"] = e.what();
    }
    return r;
  });

  int pass = 0, fail = 0, skip = 0;
  json first_fail = nullptr;
  for (const auto& r : results) {
    const auto& s = r["status"];
    if (s == "pass") ++pass;
    if (s == "skip") ++skip;
    if (s == "fail") {
      if (first_fail.is_null()) first_fail = r;
      ++fail;
    }
  }
  emit({{"check", check},
        {"grid", grid},
        {"degree", D},
        {"gen_cap", P},
        {"cells", results},
        {"summary", {{"pass", pass}, {"fail", fail}, {"skip", skip}}},
        {"first_failure", first_fail}});
  return fail == 0 ? 0 : 1;
}

// ---- tables ----

int run_tables(const std::string& which) {
  std::vector<KnownTable> list;
  if (which == "all") {
    list = {KnownTable::DO97, KnownTable::GO96, KnownTable::LO99_l3, KnownTable::Ga00_D2, KnownTable::Ga00_D3};
  } else {
    auto t = known_table_from_string(which);
    if (!t) throw UsageError("--which must be DO97, GO96, LO99_l3, Ga00_D2, Ga00_D3 or all");
    list = {*t};
  }
  json out = json::array();
  for (auto t : list) {
    auto r = known_tables(t);
    json classes = json::array();
    for (const auto& cls : r.classes) {
      json members = json::array();
      for (const auto& p : cls) members.push_back(params_json(p));
      classes.push_back(members);
    }
    out.push_back({{"name", r.name}, {"n", r.spec.n.str()}, {"l", r.spec.l}, {"classes", classes}});
  }
  emit(which == "all" ? out : out[0]);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivalence of pseudodifferential symbol quotients"};
  app.require_subcommand(1);

  ClassifyArgs ca;
  auto* classify = app.add_subcommand("classify", "decide whether two symbol quotients are equivalent");
  classify->add_option("--lambda1", ca.lambda1)->required();
  classify->add_option("--mu1", ca.mu1)->required();
  classify->add_option("--lambda2", ca.lambda2)->required();
  classify->add_option("--mu2", ca.mu2)->required();
  classify->add_option("--n", ca.n, "offset n = delta - k")->required()->allow_extra_args(false);
  classify->add_option("--l", ca.l, "series length");
  classify->add_option("--pattern", ca.pattern, "present rungs, e.g. 0,2,3,5");
  classify->add_flag("--experimental", ca.experimental, "allow the experimental pattern 0,2,3,4,6");

  std::string il, im, in_, kinds = "I,J,K,M,R,Itilde,Jtilde,Mtilde,Rtilde";
  auto* invs = app.add_subcommand("invariants", "evaluate rational invariants");
  invs->add_option("--lambda", il)->required();
  invs->add_option("--mu", im)->required();
  invs->add_option("--n", in_)->required();
  invs->add_option("--kinds", kinds);

  PencilArgs pa;
  auto* pencil = app.add_subcommand("pencil", "sample level curves of a pencil of conics");
  pencil->add_option("--family", pa.family, "Rtilde, I or M")->required();
  pencil->add_option("--n5", pa.n5);
  pencil->add_option("--n6", pa.n6);
  pencil->add_option("--levels", pa.levels, "comma-separated levels; inf selects the denominator curve")->required();
  pencil->add_option("--window", pa.window, "x0,x1,y0,y1")->required();
  pencil->add_option("--out", pa.out, "csv or svg");
  pencil->add_option("--resolution", pa.resolution);
  pencil->add_option("--output", pa.output, "file to write instead of stdout");

  std::string check, grid = "small";
  int degree = 8, gen_cap = 6;
  auto* oracle = app.add_subcommand("oracle", "verify formulas against the brute-force representation");
  oracle->add_option("--check", check, "cmz, pq or intertwiner")->required();
  oracle->add_option("--grid", grid, "small or full");
  oracle->add_option("--degree", degree);
  oracle->add_option("--gen-cap", gen_cap);

  std::string which = "all";
  auto* tables = app.add_subcommand("tables", "regenerate classical classification tables");
  tables->add_option("--which", which);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (*classify) {
      if (ca.l == 0 && ca.pattern.empty()) throw UsageError("classify needs --l or --pattern");
      return run_classify(ca);
    }
    if (*invs) return run_invariants(il, im, in_, kinds);
    if (*pencil) return run_pencil(pa);
    if (*oracle) return run_oracle(check, grid, degree, gen_cap);
    if (*tables) return run_tables(which);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return kUsageError;
}
