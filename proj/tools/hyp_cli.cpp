// Command-line front end: ends, filtered ends, adjacency digraphs, crossings
// and splitting searches for a quasiconvex subgroup of a hyperbolic group.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "hyp/annulus.hpp"
#include "hyp/cayley.hpp"
#include "hyp/constants.hpp"
#include "hyp/digraph.hpp"
#include "hyp/ends.hpp"
#include "hyp/error.hpp"
#include "hyp/presentation.hpp"
#include "hyp/splittings.hpp"
#include "hyp/subgroup.hpp"

using namespace hyp;
using json = nlohmann::ordered_json;

namespace {

constexpr int kSchemaVersion = 1;

enum Exit { kDecided = 0, kInputError = 2, kUndecided = 3, kInsufficientRadius = 4 };

struct RunConfig {
  std::string command;
  std::string input;
  std::string mode = "desk";
  std::optional<int> r, K, R, Q, delta, ball_radius;
  std::optional<std::string> lambda, epsilon;
  std::int64_t budget = 20'000'000;
  int pad = 1;
  bool json = false;
  std::string dot;
  std::string oracle;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string ladder;
  std::int64_t estimate_delta = -1;
  int at_least = -1;
  int max_g_layer = 2;
  std::int64_t max_elements = 1'000;
  std::string split_mode = "lonely";
  int slices = 64;
  std::string comm_element;
  std::string fi_subgroup;
};

// ---------------------------------------------------------------------------
// Serialisation

struct Printer {
  const GroupPresentation& p;
  const SubgroupContext* ctx = nullptr;

  std::string word(const Word& w) const {
    std::string s = p.alphabet().format(w);
    return s.empty() ? "1" : s;
  }
  // Y-words as y1 Y2 ..., lowercase for a generator and uppercase for its inverse.
  static std::string yword(const YWord& y) {
    if (y.empty()) return "1";
    std::string s;
    for (Letter t : y) {
      if (!s.empty()) s += ' ';
      s += (t & 1) ? 'Y' : 'y';
      s += std::to_string((t >> 1) + 1);
    }
    return s;
  }
  json yelement(const YWord& y) const {
    json j;
    j["y"] = yword(y);
    if (ctx) j["g"] = word(free_reduce(ctx->evaluate(y)));
    return j;
  }
  json words(const std::vector<Word>& ws) const {
    json a = json::array();
    for (const auto& w : ws) a.push_back(word(w));
    return a;
  }
};

json ledger_json(const ConstantLedger& g) {
  json j;
  j["mode"] = mode_name(g.mode);
  j["delta"] = g.delta;
  j["C"] = g.C;
  j["D"] = g.D;
  j["D_lambda"] = g.D_lambda;
  j["M"] = g.M;
  j["eta"] = g.eta;
  j["n"] = g.n;
  j["a"] = to_string(g.a);
  j["k1"] = to_string(g.k1);
  j["k2"] = to_string(g.k2);
  j["Q"] = g.Q;
  j["lambda"] = to_string(g.lambda);
  j["epsilon"] = to_string(g.epsilon);
  j["r"] = g.r;
  j["K"] = g.K;
  j["R"] = g.R;
  j["warnings"] = g.warnings;
  json f;
  for (const auto& [name, formula] : g.formulas) f[name] = formula;
  j["formulas"] = f;
  return j;
}

json filtered_json(const FilteredResult& f) {
  json j;
  j["kind"] = filtered_kind_name(f.kind);
  j["n"] = f.n;
  j["sequence"] = f.sequence;
  j["oracle"] = f.oracle;
  j["oracle_calls"] = f.oracle_calls;
  return j;
}

json comm_json(const Printer& pr, const CommVerdict& c) {
  json j;
  j["g"] = pr.word(c.g);
  j["verdict"] = comm_status_name(c.verdict);
  j["method"] = c.method;
  j["intersection_sample"] = pr.words(c.intersection);
  j["evidence_radius"] = c.evidence_radius;
  j["trace_H"] = c.trace_H;
  j["trace_Hg"] = c.trace_Hg;
  j["index_H"] = c.index_H ? json(*c.index_H) : json(nullptr);
  j["index_Hg"] = c.index_Hg ? json(*c.index_Hg) : json(nullptr);
  j["budget_spent"] = c.budget_spent;
  return j;
}

json certificate_json(const Printer& pr, const CrossingCertificate& c) {
  json j;
  j["g"] = pr.word(c.g);
  j["U"] = c.U;
  j["r_g"] = c.r_g;
  j["threshold_H"] = c.threshold_H;
  j["threshold_gH"] = c.threshold_gH;
  json w = json::object();
  for (int i = 0; i < 4; ++i) {
    const auto& x = c.witnesses[static_cast<std::size_t>(i)];
    if (!x) {
      w[pattern_name(i)] = nullptr;
      continue;
    }
    w[pattern_name(i)] = json{{"x", pr.word(x->x)}, {"d_H", x->d_H}, {"d_gH", x->d_gH}};
  }
  j["witnesses"] = w;
  j["found"] = c.found();
  j["scanned"] = c.scanned;
  j["skipped"] = c.skipped;
  return j;
}

json crossings_json(const Printer& pr, const CrossingsReport& r) {
  json j;
  j["outcome"] = crossings_outcome_name(r.outcome);
  j["e_pair"] = r.e_pair;
  j["elements_tried"] = r.elements_tried;
  j["skipped_member"] = r.skipped_member;
  j["skipped_unknown"] = r.skipped_unknown;
  json cls = json::array();
  for (const auto& c : r.classes) {
    json e;
    e["U"] = c.U;
    e["certificate"] = c.certificate ? certificate_json(pr, *c.certificate) : json(nullptr);
    e["best"] = c.best ? certificate_json(pr, *c.best) : json(nullptr);
    cls.push_back(e);
  }
  j["classes"] = cls;
  return j;
}

void flatten(const json& j, const std::string& prefix, std::ostream& os) {
  if (j.is_object()) {
    if (j.empty()) os << prefix << " = {}\n";
    for (auto it = j.begin(); it != j.end(); ++it)
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), os);
  } else if (j.is_array()) {
    bool scalar = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
    if (scalar) {
      os << prefix << " = [";
      for (std::size_t i = 0; i < j.size(); ++i) os << (i ? ", " : "") << (j[i].is_string() ? j[i].get<std::string>() : j[i].dump());
      os << "]\n";
    } else {
      for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", os);
    }
  } else {
    os << prefix << " = " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

void emit(const RunConfig& cfg, const json& report) {
  if (cfg.json) {
    std::cout << report.dump(2) << "\n";
  } else {
    flatten(report, "", std::cout);
  }
}

// ---------------------------------------------------------------------------
// Setup shared by every command

std::vector<std::array<int, 3>> parse_ladder(const std::string& text) {
  std::vector<std::array<int, 3>> out;
  std::stringstream ss(text);
  std::string rung;
  while (std::getline(ss, rung, ';')) {
    std::array<int, 3> t{};
    std::replace(rung.begin(), rung.end(), ',', ' ');
    std::istringstream rs(rung);
    if (!(rs >> t[0] >> t[1] >> t[2])) fail(ErrorKind::Input, "ladder rungs are r,K,R separated by ';'");
    std::string rest;
    if (rs >> rest) fail(ErrorKind::Input, "ladder rungs are r,K,R separated by ';'");
    out.push_back(t);
  }
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    fail(ErrorKind::Input, "constant '" + key + "' is not an integer: " + v);
  }
}

struct Session {
  RunConfig cfg;
  InputSpec in;
  std::shared_ptr<const SubgroupContext> ctx;
  ConstantLedger ledger;
  std::vector<std::array<int, 3>> ladder;
  int ball_radius = 0;
  CayleyBall ball;
  std::unique_ptr<SubgroupView> view;
  json report;

  template <class T>
  std::optional<T> from_file(const std::string& key) const {
    auto it = in.constants.find(key);
    if (it == in.constants.end()) return std::nullopt;
    if constexpr (std::is_same_v<T, int>) {
      return to_int(key, it->second);
    } else {
      return it->second;
    }
  }

  void load() {
    in = load_input(cfg.input);
    if (in.subgroup_generators.empty()) fail(ErrorKind::Input, "input has no [subgroup] generators");
    const int Q = cfg.Q ? *cfg.Q : from_file<int>("Q").value_or(0);
    const std::string lambda = cfg.lambda ? *cfg.lambda : from_file<std::string>("lambda").value_or("1");
    const std::string epsilon = cfg.epsilon ? *cfg.epsilon : from_file<std::string>("epsilon").value_or("0");
    ctx = std::make_shared<SubgroupContext>(in.presentation, in.subgroup_generators, Q, parse_rational(lambda),
                                            parse_rational(epsilon));

    ConstantInputs ci;
    ci.delta = cfg.delta ? *cfg.delta : from_file<int>("delta").value_or(0);
    ci.Q = Q;
    ci.lambda = ctx->lambda();
    ci.epsilon = ctx->epsilon();
    if (auto n = from_file<int>("n")) ci.n = *n;
    if (auto a = from_file<std::string>("a")) ci.a = parse_rational(*a);
    if (auto k = from_file<std::string>("k1")) ci.k1 = parse_rational(*k);
    if (auto k = from_file<std::string>("k2")) ci.k2 = parse_rational(*k);
    if (auto e = from_file<int>("eta")) ci.eta_override = *e;

    const std::string mode = cfg.mode.empty() ? from_file<std::string>("mode").value_or("desk") : cfg.mode;
    if (mode == "paper") {
      ledger = derive_paper_constants(ci);
    } else if (mode == "desk") {
      auto r = cfg.r ? cfg.r : from_file<int>("r");
      auto K = cfg.K ? cfg.K : from_file<int>("K");
      auto R = cfg.R ? cfg.R : from_file<int>("R");
      if (!r || !K || !R) fail(ErrorKind::Input, "desk mode needs r, K and R");
      ledger = desk_constants(ci, *r, *K, *R);
    } else {
      fail(ErrorKind::Input, "mode must be paper or desk");
    }

    const std::string lad = !cfg.ladder.empty() ? cfg.ladder : from_file<std::string>("ladder").value_or("");
    ladder = lad.empty() ? std::vector<std::array<int, 3>>{{ledger.r, ledger.K, ledger.R},
                                                          {ledger.r + 1, ledger.K + 1, ledger.R + 1}}
                         : parse_ladder(lad);
    int needed = ledger.R + 1;
    if (cfg.command == "ends")
      for (const auto& t : ladder) needed = std::max(needed, t[2] + 1);
    ball_radius = cfg.ball_radius ? *cfg.ball_radius : from_file<int>("ball_radius").value_or(needed);
    if (ball_radius < 0) fail(ErrorKind::Domain, "ball radius must be non-negative");
    if (cfg.budget <= 0) fail(ErrorKind::Domain, "budget must be positive");
    if (cfg.pad < 0) fail(ErrorKind::Domain, "pad must be non-negative");
    if (cfg.workers <= 0) fail(ErrorKind::Domain, "workers must be positive");
  }

  Printer printer() const { return Printer{*in.presentation, ctx.get()}; }

  json header() const {
    const Printer pr = printer();
    json j;
    j["schema_version"] = kSchemaVersion;
    j["command"] = cfg.command;
    j["seed"] = cfg.seed;
    json g;
    g["name"] = in.presentation->name();
    g["generators"] = std::string(in.presentation->alphabet().generators().begin(),
                                  in.presentation->alphabet().generators().end());
    g["relators"] = pr.words(in.presentation->relators());
    g["word_problem"] = in.presentation->wp_strategy() == WpStrategy::FreeGroup ? "free" : "dehn";
    g["digest"] = in.presentation->digest();
    j["group"] = g;
    json h;
    h["generators"] = pr.words(ctx->generators());
    h["y_free"] = ctx->y_free();
    j["subgroup"] = h;
    j["constants"] = ledger_json(ledger);
    return j;
  }

  void build() {
    ball = build_ball(in.presentation, ball_radius, cfg.budget);
    report["ball"] = json{{"radius", ball.radius()}, {"vertices", ball.size()}, {"complete", ball.complete()}};
    if (!ball.complete())
      fail(ErrorKind::BudgetExhausted, "the ball of radius " + std::to_string(ball_radius) + " exceeds the vertex budget " +
                                           std::to_string(cfg.budget));
    view = std::make_unique<SubgroupView>(ctx, ball);
    report["ball"]["subgroup_exact_radius"] = view->exact_radius();
  }

  std::unique_ptr<GwpOracle> oracle() const {
    if (cfg.oracle.empty()) return default_oracle(*ctx, 200'000);
    if (cfg.oracle == "folding") return std::make_unique<FoldingOracle>(*ctx);
    if (cfg.oracle == "bounded") return std::make_unique<BoundedSearchOracle>(*ctx, 200'000);
    fail(ErrorKind::Input, "oracle must be folding or bounded");
  }
};

// ---------------------------------------------------------------------------
// Commands

int cmd_constants(Session& s) {
  if (s.cfg.estimate_delta >= 0) {
    s.build();
    DeltaSampling ds;
    ds.samples = s.cfg.estimate_delta;
    ds.seed = s.cfg.seed;
    ds.workers = s.cfg.workers;
    DeltaEstimate e = estimate_delta(s.ball, ds);
    s.report["delta_estimate"] =
        json{{"delta", e.delta}, {"triangles", e.triangles}, {"skipped", e.skipped}, {"samples", ds.samples}};
  }
  return kDecided;
}

int cmd_ends(Session& s) {
  s.build();
  EndsOptions opt;
  opt.ladder = s.ladder;
  opt.upper_bound_vertex_budget = s.cfg.budget;
  EndsReport r = ends_of_pair(*s.view, s.ledger, opt);
  json j;
  j["e_pair"] = r.e_pair ? json(*r.e_pair) : json(nullptr);
  j["stabilized"] = r.stabilized;
  j["finite_index"] = r.finite_index;
  j["upper_bound"] = r.upper_bound;
  json rungs = json::array();
  for (const auto& x : r.stabilization)
    rungs.push_back(json{{"r", x.r},
                         {"K", x.K},
                         {"R", x.R},
                         {"e_pair", x.e_pair},
                         {"cover_size", x.cover_size},
                         {"cover_components", x.cover_components},
                         {"marked_components", x.marked_components},
                         {"digraph_components", x.digraph_components}});
  j["stabilization"] = rungs;
  j["filtered"] = r.filtered ? filtered_json(*r.filtered) : json(nullptr);
  j["budget_spent"] = r.budget_spent;
  j["notes"] = r.notes;
  s.report["result"] = j;
  return r.stabilized || r.finite_index ? kDecided : kUndecided;
}

int cmd_digraph(Session& s) {
  s.build();
  const Printer pr = s.printer();
  FiniteCover F = minimal_cover(*s.view, s.ledger);
  AdjacencyDigraph d = build_digraph(F, *s.view, DigraphMode::Full);
  const auto comp = digraph_components(d);
  json j;
  j["cover"] = json{{"vertices", F.size()}, {"components", F.components.size()}, {"marked", F.marked_count()}};
  j["vertex_count"] = d.vertex_count;
  j["marked"] = std::vector<int>(d.marked.begin(), d.marked.end());
  json labels = json::array();
  for (const auto& l : d.labels) labels.push_back(pr.yelement(l.y));
  j["labels"] = labels;
  json edges = json::array();
  for (const auto& e : d.edges) edges.push_back(json{{"from", e.from}, {"to", e.to}, {"label", e.label}});
  j["edges"] = edges;
  j["components"] = comp;
  json langs = json::array();
  std::vector<int> done;
  for (int v = 0; v < d.vertex_count; ++v) {
    const int c = comp[static_cast<std::size_t>(v)];
    if (std::find(done.begin(), done.end(), c) != done.end()) continue;
    done.push_back(c);
    LanguageSummary L;
    try {
      L = language_summary(d, *s.ctx, v, v, s.cfg.budget);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::CombinatorialBlowup) throw;
      L = schreier_summary(d, *s.ctx, v, v);
    }
    json l;
    l["component"] = c;
    l["base"] = v;
    l["form"] = L.lollipop ? "lollipop" : "spanning-tree";
    json ks = json::array();
    for (const auto& k : L.K_gens) ks.push_back(pr.yelement(k.y));
    l["K_generators"] = ks;
    l["steps"] = L.steps;
    langs.push_back(l);
  }
  j["languages"] = langs;
  if (!s.cfg.dot.empty()) {
    std::ofstream out(s.cfg.dot, std::ios::binary);
    if (!out) fail(ErrorKind::Input, "cannot write " + s.cfg.dot);
    out << export_dot(d, *s.in.presentation);
    j["dot"] = s.cfg.dot;
  }
  s.report["result"] = j;
  return kDecided;
}

int cmd_filtered(Session& s) {
  s.build();
  const Printer pr = s.printer();
  auto oracle = s.oracle();
  json j;
  j["finite_index"] = is_finite_index(*s.view, s.ledger);
  FilteredResult f = filtered_ends(*s.view, s.ledger, *oracle);
  j["filtered"] = filtered_json(f);
  int code = f.kind == FilteredResult::Kind::Finite ? kDecided : kUndecided;
  if (s.cfg.at_least >= 0) {
    auto o2 = s.oracle();
    Tri t = filtered_ends_at_least(*s.view, s.ledger, s.cfg.at_least, *o2);
    j["at_least"] = json{{"N", s.cfg.at_least}, {"answer", tri_name(t)}};
    code = t == Tri::Unknown ? kUndecided : kDecided;
  }
  if (f.kind == FilteredResult::Kind::Finite) {
    auto o3 = s.oracle();
    ComponentAction a = component_action(*s.view, s.ledger, *o3);
    json ca;
    ca["n"] = a.n;
    ca["perms"] = a.perms;
    json ks = json::array();
    for (const auto& k : a.kernel_generators) ks.push_back(pr.yelement(k));
    ca["kernel_generators"] = ks;
    ca["kernel_index"] = a.kernel_index;
    j["component_action"] = ca;
  }
  s.report["result"] = j;
  return code;
}

CrossingsOptions crossings_options(const RunConfig& cfg) {
  CrossingsOptions opt;
  opt.max_g_layer = cfg.max_g_layer;
  opt.max_elements = cfg.max_elements;
  opt.crossing.pad = cfg.pad;
  opt.crossing.max_vertices = cfg.budget;
  return opt;
}

int cmd_crossings(Session& s) {
  s.build();
  CrossingsReport r = crossings_search(*s.view, s.ledger, crossings_options(s.cfg));
  s.report["result"] = crossings_json(s.printer(), r);
  return r.outcome == CrossingsReport::Outcome::BudgetExhausted ? kUndecided : kDecided;
}

std::vector<Word> parse_words(const GroupPresentation& p, const std::string& text) {
  std::vector<Word> out;
  std::stringstream ss(text);
  std::string w;
  while (std::getline(ss, w, ',')) {
    w.erase(std::remove_if(w.begin(), w.end(), [](unsigned char c) { return std::isspace(c); }), w.end());
    if (!w.empty()) out.push_back(p.alphabet().parse(w));
  }
  return out;
}

int cmd_split(Session& s) {
  s.build();
  const Printer pr = s.printer();
  SplitOptions opt;
  if (s.cfg.split_mode == "finite-filtered") {
    opt.mode = SplitMode::FiniteFiltered;
  } else if (s.cfg.split_mode == "lonely") {
    opt.mode = SplitMode::Lonely;
  } else if (s.cfg.split_mode == "not-lonely") {
    opt.mode = SplitMode::NotLonely;
  } else {
    fail(ErrorKind::Input, "split mode must be finite-filtered, lonely or not-lonely");
  }
  for (const auto& c : s.in.candidates) {
    Candidate cand;
    cand.generators = c.edge_generators;
    if (c.lambda) cand.lambda = parse_rational(*c.lambda);
    if (c.epsilon) cand.epsilon = parse_rational(*c.epsilon);
    opt.candidates.push_back(cand);
  }
  opt.slices = s.cfg.slices;
  opt.crossings = crossings_options(s.cfg);
  if (!s.cfg.comm_element.empty()) opt.commensurating_element = s.in.presentation->alphabet().parse(s.cfg.comm_element);
  if (!s.cfg.fi_subgroup.empty()) opt.finite_index_subgroup = parse_words(*s.in.presentation, s.cfg.fi_subgroup);
  SplitReport r = split_decision(*s.view, s.ledger, opt);
  json j;
  j["outcome"] = split_outcome_name(r.outcome);
  j["mode"] = split_mode_name(r.mode);
  j["concluded_by"] = r.concluded_by.empty() ? json(nullptr) : json(r.concluded_by);
  j["candidate"] = r.candidate ? json(*r.candidate) : json(nullptr);
  json cv = json::array();
  for (const auto& v : r.candidate_verdicts) {
    json e;
    e["commensurable"] = tri_name(v.commensurable);
    json a = json::array(), b = json::array();
    for (const auto& c : v.candidate_in_comm_H) a.push_back(comm_json(pr, c));
    for (const auto& c : v.H_in_comm_candidate) b.push_back(comm_json(pr, c));
    e["candidate_in_comm_H"] = a;
    e["H_in_comm_candidate"] = b;
    cv.push_back(e);
  }
  j["candidate_verdicts"] = cv;
  j["track_b_subgroup"] = pr.words(r.track_b_subgroup);
  j["crossings"] = r.crossings ? crossings_json(pr, *r.crossings) : json(nullptr);
  j["slices_used"] = r.slices_used;
  j["notes"] = r.notes;
  s.report["result"] = j;
  return r.outcome == SplitReport::Outcome::BudgetExhausted ? kUndecided : kDecided;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::Syntax:
    case ErrorKind::Input:
    case ErrorKind::Domain:
    case ErrorKind::Precondition:
      return kInputError;
    case ErrorKind::InsufficientRadius:
      return kInsufficientRadius;
    case ErrorKind::StrategyNotVerified:
    case ErrorKind::BudgetExhausted:
    case ErrorKind::CombinatorialBlowup:
      return kUndecided;
  }
  return kUndecided;
}

int run(Session& s) {
  try {
    s.load();
    s.report = s.header();
    if (s.cfg.command == "constants") return cmd_constants(s);
    if (s.cfg.command == "ends") return cmd_ends(s);
    if (s.cfg.command == "digraph") return cmd_digraph(s);
    if (s.cfg.command == "filtered") return cmd_filtered(s);
    if (s.cfg.command == "crossings") return cmd_crossings(s);
    if (s.cfg.command == "split") return cmd_split(s);
    fail(ErrorKind::Input, "unknown command " + s.cfg.command);
  } catch (const Error& e) {
    if (s.report.is_null()) s.report = json{{"schema_version", kSchemaVersion}, {"command", s.cfg.command}, {"seed", s.cfg.seed}};
    s.report["error"] = json{{"kind", error_kind_name(e.kind())}, {"message", e.what()}};
    std::cerr << "error (" << error_kind_name(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  }
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("input", cfg.input, "Input file")->required();
  sub->add_option("--mode", cfg.mode, "Constant mode: paper or desk")->check(CLI::IsMember({"paper", "desk"}));
  sub->add_option("--r", cfg.r, "Annulus inner radius");
  sub->add_option("--K", cfg.K, "Sphere radius");
  sub->add_option("--R", cfg.R, "Annulus outer radius");
  sub->add_option("--Q", cfg.Q, "Quasiconvexity constant");
  sub->add_option("--delta", cfg.delta, "Hyperbolicity constant");
  sub->add_option("--lambda", cfg.lambda, "Subgroup distortion multiplier");
  sub->add_option("--epsilon", cfg.epsilon, "Subgroup distortion offset");
  sub->add_option("--ball-radius", cfg.ball_radius, "Radius of the Cayley ball");
  sub->add_option("--budget", cfg.budget, "Vertex budget");
  sub->add_option("--pad", cfg.pad, "Crossing threshold padding per letter of g");
  sub->add_flag("--json", cfg.json, "Emit JSON");
  sub->add_option("--oracle", cfg.oracle, "Membership oracle")->check(CLI::IsMember({"folding", "bounded"}));
  sub->add_option("--seed", cfg.seed, "Seed for sampling");
  sub->add_option("--workers", cfg.workers, "Worker threads");
  sub->add_option("--ladder", cfg.ladder, "Stabilisation ladder, e.g. \"1,1,4;2,2,5\"");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ends, filtered ends and splittings of quasiconvex subgroups"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.mode.clear();

  auto* c = app.add_subcommand("constants", "Print the constant ledger");
  add_common(c, cfg);
  c->add_option("--estimate-delta", cfg.estimate_delta,
                "Estimate delta from thin triangles: number of sampled corner pairs, 0 for all");

  auto* e = app.add_subcommand("ends", "Number of ends of the pair");
  add_common(e, cfg);

  auto* d = app.add_subcommand("digraph", "Adjacency digraph of the minimal cover");
  add_common(d, cfg);
  d->add_option("--dot", cfg.dot, "Write the digraph in DOT format to this path");

  auto* f = app.add_subcommand("filtered", "Filtered ends by the growing cover");
  add_common(f, cfg);
  f->add_option("--at-least", cfg.at_least, "Also decide whether the count is at least N");

  auto* x = app.add_subcommand("crossings", "Search for crossing certificates");
  add_common(x, cfg);
  x->add_option("--max-g-layer", cfg.max_g_layer, "Largest word length of tested g");
  x->add_option("--max-elements", cfg.max_elements, "Largest number of tested g");

  auto* s = app.add_subcommand("split", "Two-track splitting search");
  add_common(s, cfg);
  s->add_option("--split-mode", cfg.split_mode, "finite-filtered, lonely or not-lonely");
  s->add_option("--slices", cfg.slices, "Round-robin turns");
  s->add_option("--max-g-layer", cfg.max_g_layer, "Largest word length of tested g");
  s->add_option("--comm-element", cfg.comm_element, "Element of Comm(H) - H for not-lonely mode");
  s->add_option("--fi-subgroup", cfg.fi_subgroup, "Comma-separated generators of a finite-index subgroup of H");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? 0 : kInputError;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  Session session;
  session.cfg = cfg;
  int rc = run(session);
  emit(cfg, session.report);
  return rc;
}
