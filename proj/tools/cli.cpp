#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include "roughmax/cz.hpp"
#include "roughmax/ergodic.hpp"
#include "roughmax/expsum.hpp"
#include "roughmax/kernel.hpp"
#include "roughmax/maximal.hpp"
#include "roughmax/seqset.hpp"
#include "roughmax/stats.hpp"

#ifndef ROUGHMAX_VERSION
#define ROUGHMAX_VERSION "0.0.0"
#endif

namespace roughmax::cli {
namespace {

struct Token {
  std::string text;
  std::size_t position;
};

std::vector<Token> split_tokens(const std::string& text, char sep, std::size_t base = 0) {
  std::vector<Token> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      out.push_back({text.substr(start, i - start), base + start});
      start = i + 1;
    }
  }
  return out;
}

double grammar_number(const Token& t) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(t.text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (t.text.empty() || used != t.text.size() || !std::isfinite(v)) {
    throw GrammarError("growth spec: expected a number, got '" + t.text + "'", t.position);
  }
  return v;
}

int grammar_int(const Token& t) {
  const double v = grammar_number(t);
  if (v != std::floor(v) || std::abs(v) > 1e6) {
    throw GrammarError("growth spec: expected an integer, got '" + t.text + "'", t.position);
  }
  return static_cast<int>(v);
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::int64_t param_int(const ExperimentConfig& cfg, const std::string& key) {
  const std::string& s = cfg.params.at(key);
  std::size_t used = 0;
  std::int64_t v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DomainError("--" + key + ": expected an integer, got '" + s + "'");
  return v;
}

double param_double(const ExperimentConfig& cfg, const std::string& key) {
  const std::string& s = cfg.params.at(key);
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw DomainError("--" + key + ": expected a number, got '" + s + "'");
  return v;
}

// "kmin..kmax"
std::pair<int, int> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) throw DomainError("expected a range kmin..kmax, got '" + s + "'");
  try {
    std::size_t u1 = 0, u2 = 0;
    const std::string a = s.substr(0, dots), b = s.substr(dots + 2);
    const int lo = std::stoi(a, &u1), hi = std::stoi(b, &u2);
    if (u1 == a.size() && u2 == b.size() && lo <= hi) return {lo, hi};
  } catch (const std::exception&) {
  }
  throw DomainError("expected a range kmin..kmax, got '" + s + "'");
}

// "key=value,key=value"
std::map<std::string, std::string> parse_record(const std::string& s) {
  std::map<std::string, std::string> out;
  if (s.empty()) return out;
  for (const Token& t : split_tokens(s, ',')) {
    const auto eq = t.text.find('=');
    if (eq == std::string::npos || eq == 0) throw DomainError("--params: expected key=value, got '" + t.text + "'");
    out[t.text.substr(0, eq)] = t.text.substr(eq + 1);
  }
  return out;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    if (ch == ';' || ch == '=' || ch == '\\') out += '\\';
    out += ch;
  }
  return out;
}

// Splits on unescaped sep and removes the escapes.
std::vector<std::string> unescape_split(const std::string& s, char sep) {
  std::vector<std::string> out(1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\' && i + 1 < s.size()) {
      out.back() += s[++i];
    } else if (s[i] == sep) {
      out.emplace_back();
    } else {
      out.back() += s[i];
    }
  }
  return out;
}

// Splits key=value on the first unescaped '='.
std::pair<std::string, std::string> split_pair(const std::string& s) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') {
      ++i;
    } else if (s[i] == '=') {
      return {s.substr(0, i), s.substr(i + 1)};
    }
  }
  throw DomainError("config: expected key=value, got '" + s + "'");
}

std::string unescape(const std::string& s) { return unescape_split(s, '\0').front(); }

// ---------------------------------------------------------------------------
// subcommands

std::int64_t pow2(int k) { return std::int64_t{1} << k; }

Table growth_table(const ExperimentConfig& cfg) {
  const InverseFunction phi(parse_growth_spec(cfg.growth));
  const double lo = cfg.params.at("lo").empty() ? phi.y0() : param_double(cfg, "lo");
  const double hi = param_double(cfg, "hi");
  const auto points = param_int(cfg, "points");
  if (!(lo >= phi.y0()) || !(hi > lo) || points < 2) throw DomainError("growth-table: need h(x0) <= lo < hi, points >= 2");
  const auto grid = log_grid(lo, hi, static_cast<int>(points));
  const AuxFunctionReport r = aux_report(phi, grid);
  Table t;
  t.columns = {"y", "phi", "phi_prime", "theta1", "theta2", "theta3", "vartheta1", "vartheta2", "vartheta3"};
  const bool c_one = !r.sigma.empty();
  if (c_one) t.columns.insert(t.columns.end(), {"sigma", "tau", "rho"});
  for (std::size_t i = 0; i < grid.size(); ++i) {
    std::vector<Cell> row{grid[i], phi(grid[i]), phi.derivative(grid[i], 1), r.theta[0][i], r.theta[1][i],
                          r.theta[2][i], r.vartheta[0][i], r.vartheta[1][i], r.vartheta[2][i]};
    if (c_one) row.insert(row.end(), {r.sigma[i], r.tau[i], r.rho[i]});
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table seqset_table(const ExperimentConfig& cfg) {
  const GrowthFunction g = parse_growth_spec(cfg.growth);
  const InverseFunction phi(g);
  const std::int64_t nmax = param_int(cfg, "nmax");
  const SequenceSet s = generate(g, nmax);
  if (auto it = cfg.destinations.find("emit"); it != cfg.destinations.end() && !it->second.empty()) {
    std::ofstream os(it->second);
    if (!os) throw DomainError("seqset: cannot open '" + it->second + "'");
    os << "# roughmax " << version() << "\n# config: " << cfg.experiment_string() << "\nn\n";
    for (std::int64_t n : s.elements()) os << n << '\n';
  }
  Table t;
  t.columns = {"N", "count", "phi_N", "ratio"};
  std::vector<std::int64_t> Ns;
  for (std::int64_t N = 1; N <= nmax; N *= 2) {
    if (static_cast<double>(N) >= phi.y0()) Ns.push_back(N);
  }
  if (Ns.empty() || Ns.back() != nmax) Ns.push_back(nmax);
  for (std::int64_t N : Ns) {
    const std::int64_t c = s.count(N);
    const double p = phi(static_cast<double>(N));
    t.rows.push_back({N, c, p, static_cast<double>(c) / p});
  }
  t.notes.push_back("p_min=" + std::to_string(s.p_min()));
  return t;
}

Table kernel_decomp_table(const ExperimentConfig& cfg, Workers w) {
  const GrowthFunction g = parse_growth_spec(cfg.growth);
  const InverseFunction phi(g);
  const auto kmin = static_cast<int>(param_int(cfg, "kmin")), kmax = static_cast<int>(param_int(cfg, "kmax"));
  if (kmin < 2 || kmax < kmin || kmax > 26) throw DomainError("kernel-decomp: need 2 <= kmin <= kmax <= 26");
  const std::string& norm = cfg.params.at("normalization");
  if (norm != "count" && norm != "phi") throw DomainError("kernel-decomp: --normalization is count or phi");
  const SequenceSet s = generate(g, 4 * pow2(kmax));
  Table t;
  t.columns = {"k", "N", "small_x_bound", "gn_sup", "en_sup", "gn_lipschitz", "mass"};
  std::vector<DecompositionReport> reps;
  for (int k = kmin; k <= kmax; ++k) {
    const Kernel K = build_kernel(s, phi, pow2(k), norm == "count" ? Normalization::CountExact : Normalization::PhiApprox);
    const DecompositionReport r = decomposition_report(K, phi, w);
    reps.push_back(r);
    t.rows.push_back({std::int64_t{k}, r.scale, r.small_x_bound, r.gn_sup, r.en_sup, r.gn_lipschitz, r.mass});
  }
  if (reps.size() >= 4) t.notes.push_back("chi_fit=" + format_double(estimate_chi(reps)));
  return t;
}

Table expsum_table(const ExperimentConfig& cfg, Workers w) {
  const InverseFunction phi(parse_growth_spec(cfg.growth));
  const std::string& lemma = cfg.params.at("lemma");
  Lemma which;
  if (lemma == "3.2") {
    which = Lemma::SinglePhase;
  } else if (lemma == "3.4") {
    which = Lemma::TwoPhase;
  } else if (lemma == "3.6") {
    which = Lemma::MinNorm;
  } else {
    throw DomainError("expsum: --lemma is 3.2, 3.4 or 3.6");
  }
  const auto [kmin, kmax] = parse_range(cfg.params.at("sweep"));
  SweepParams sp;
  for (const auto& [k, v] : parse_record(cfg.params.at("params"))) {
    ExperimentConfig tmp;
    tmp.params[k] = v;
    if (k == "m") {
      sp.m = param_int(tmp, k);
    } else if (k == "m2") {
      sp.m2 = param_int(tmp, k);
    } else if (k == "kappa") {
      sp.kappa = param_double(tmp, k);
    } else if (k == "resonant") {
      sp.resonant = param_int(tmp, k) != 0;
    } else if (k == "Mexp") {
      sp.M_exponent = param_double(tmp, k);
    } else {
      throw DomainError("expsum: unknown --params key '" + k + "'");
    }
  }
  const auto rows = lemma_sweep(phi, which, kmin, kmax, sp, w);
  Table t;
  t.columns = {"k", "N", "actual_abs", "bound", "ratio"};
  std::vector<double> ratios;
  for (const SweepRow& r : rows) {
    t.rows.push_back({std::int64_t{r.k}, r.N, r.actual_abs, r.bound, r.ratio});
    ratios.push_back(r.ratio);
  }
  const double mx = *std::max_element(ratios.begin(), ratios.end());
  t.notes.push_back("max_ratio=" + format_double(mx) + " median_ratio=" + format_double(median(ratios)));
  return t;
}

Signal corpus_signal(const std::string& corpus, int n_lo) {
  if (corpus == "delta") return delta<double>(0);
  const auto parts = split_tokens(corpus, ':');
  if (parts.size() == 3 && parts[0].text == "random") {
    ExperimentConfig tmp;
    tmp.params = {{"K", parts[1].text}, {"seed", parts[2].text}};
    const auto K = param_int(tmp, "K");
    const auto seed = static_cast<std::uint64_t>(param_int(tmp, "seed"));
    if (K < 1 || K > (1 << 20)) throw DomainError("--corpus: K must lie in [1, 2^20]");
    const std::int64_t half = std::max<std::int64_t>(pow2(n_lo), K);
    return random_sparse(static_cast<int>(K), seed, -half, half);
  }
  throw DomainError("--corpus is delta or random:K:seed, got '" + corpus + "'");
}

Table weaktype_table(const ExperimentConfig& cfg, Workers w) {
  const GrowthFunction g = parse_growth_spec(cfg.growth);
  const InverseFunction phi(g);
  if (cfg.n_lo < 1 || cfg.n_hi < cfg.n_lo || cfg.n_hi > 24) throw DomainError("weaktype: need 1 <= nlo <= nhi <= 24");
  const SequenceSet s = generate(g, 4 * pow2(cfg.n_hi));
  const ScaleFamily fam = build_family(s, phi, cfg.n_lo, cfg.n_hi);
  const Signal f = corpus_signal(cfg.params.at("corpus"), cfg.n_lo);
  const Signal mf = maximal_function(fam, f, w);
  const auto lambdas = default_lambdas(fam, f, static_cast<int>(param_int(cfg, "lambdas")));
  Table t;
  t.columns = {"lambda", "superlevel_count", "ratio"};
  for (const WeakTypePoint& p : weak_type_profile_of(mf, l1_norm(f), lambdas)) {
    t.rows.push_back({p.lambda, p.superlevel_count, p.ratio});
  }
  t.notes.push_back("sup_over_all_lambda=" + format_double(weak_type_sup(mf, l1_norm(f))));
  return t;
}

Table cz_table(const ExperimentConfig& cfg) {
  const std::string& input = cfg.params.at("input");
  std::ifstream is(input);
  if (!is) throw DomainError("cz: cannot open '" + input + "'");
  const Signal f = read_signal_csv(is);
  const double lambda = param_double(cfg, "lambda");
  const auto cz = cz_decompose(f, lambda);
  if (auto it = cfg.destinations.find("emit-atoms"); it != cfg.destinations.end() && !it->second.empty()) {
    std::filesystem::create_directories(it->second);
    for (const auto& a : cz.atoms) {
      const auto path = std::filesystem::path(it->second) /
                        ("atom_s" + std::to_string(a.cube.s) + "_j" + std::to_string(a.cube.j) + ".csv");
      std::ofstream os(path);
      if (!os) throw DomainError("cz: cannot write '" + path.string() + "'");
      write_signal_csv(os, a.atom);
    }
    std::ofstream os(std::filesystem::path(it->second) / "good.csv");
    write_signal_csv(os, cz.good);
  }
  Table t;
  t.columns = {"s", "j", "begin", "end", "mass", "average"};
  double measure = 0;
  for (const auto& a : cz.atoms) {
    const double mass = total(a.atom);
    t.rows.push_back({std::int64_t{a.cube.s}, a.cube.j, a.cube.begin(), a.cube.end(), mass,
                      mass / static_cast<double>(a.cube.size())});
    measure += static_cast<double>(a.cube.size());
  }
  const CZCheck c = check_cz(f, cz, 1e-12);
  t.notes.push_back("good_sup=" + format_double(sup_norm(cz.good)) + " total_measure=" + format_double(measure) +
                    " invariants=" + (c.all() ? "ok" : "violated"));
  return t;
}

std::vector<double> parse_observable(const std::string& text, std::int64_t m) {
  const auto parts = split_tokens(text, ':');
  ExperimentConfig tmp;
  if (parts.size() == 2 && parts[0].text == "indicator") {
    tmp.params["k"] = parts[1].text;
    return indicator(m, param_int(tmp, "k"));
  }
  if (parts.size() == 2 && parts[0].text == "constant") {
    tmp.params["v"] = parts[1].text;
    return std::vector<double>(static_cast<std::size_t>(m), param_double(tmp, "v"));
  }
  throw DomainError("--f is indicator:k or constant:v, got '" + text + "'");
}

Table ergodic_table(const ExperimentConfig& cfg) {
  const GrowthFunction g = parse_growth_spec(cfg.growth);
  const InverseFunction phi(g);
  const FiniteSystem sys = parse_system(cfg.params.at("system"));
  const auto f = parse_observable(cfg.params.at("f"), sys.size());
  const std::int64_t x = param_int(cfg, "x");
  const auto [kmin, kmax] = parse_range(cfg.params.at("sweep"));
  if (kmin < 0 || kmax > 34) throw DomainError("ergodic: sweep must lie in 0..34");
  const auto osc = param_int(cfg, "oscillation");
  const std::int64_t top = std::max(pow2(kmax), osc > 0 ? std::int64_t{1} << (2 * (osc + 1)) : 0);
  const SequenceSet s = generate(g, top);
  std::vector<std::int64_t> Ns;
  for (int k = kmin; k <= kmax; ++k) {
    if (s.count(pow2(k)) > 0) Ns.push_back(pow2(k));
  }
  if (Ns.empty()) throw DomainError("ergodic: every scale in the sweep has an empty N_h cap [1, N]");
  const auto weighted = weighted_average_path(sys, s, phi, f, x, Ns);
  Table t;
  t.columns = {"k", "N", "count", "average", "weighted_average"};
  for (std::size_t i = 0; i < Ns.size(); ++i) {
    const auto k = static_cast<std::int64_t>(std::log2(static_cast<double>(Ns[i])));
    t.rows.push_back({k, Ns[i], s.count(Ns[i]), ergodic_average(sys, s, f, x, Ns[i]), weighted[i]});
  }
  if (osc > 0) {
    const double eps = param_double(cfg, "eps");
    for (std::int64_t J = 1; J <= osc; ++J) {
      std::vector<std::int64_t> bp;
      for (std::int64_t j = 1; j <= J + 1; ++j) bp.push_back(std::int64_t{1} << (2 * j));
      const double v = oscillation_diagnostic(sys, s, phi, f, x, eps, bp);
      t.notes.push_back("oscillation at x (pointwise proxy, not the L2 norm) J=" + std::to_string(J) +
                        " sum_over_J=" + format_double(v / static_cast<double>(J)));
    }
  }
  return t;
}

Table verify_family_table(const ExperimentConfig& cfg, Workers w) {
  const GrowthFunction g = parse_growth_spec(cfg.growth);
  const InverseFunction phi(g);
  if (cfg.n_lo < 2 || cfg.n_hi < cfg.n_lo + 3 || cfg.n_hi > 24) {
    throw DomainError("verify-family: need 2 <= nlo, nhi >= nlo + 3, nhi <= 24");
  }
  const SequenceSet s = generate(g, 4 * pow2(cfg.n_hi));
  const ScaleFamily fam = build_family(s, phi, cfg.n_lo, cfg.n_hi);
  const FamilyReport rep = verify_family_hypotheses(fam, phi, w);
  Table t;
  t.columns = {"n", "N", "d", "D", "residual", "center_times_d", "sup_times_D", "lipschitz"};
  for (const auto& r : rep.rows) {
    t.rows.push_back({std::int64_t{r.n}, r.N, r.d, r.D, r.residual, r.center_times_d, r.sup_times_D, r.lipschitz});
  }
  t.notes.push_back("eps0=" + format_double(rep.eps0) + " M=" + format_double(rep.growth_ratio) +
                    " eps1=" + format_double(rep.eps1) + " eps2=" + format_double(rep.eps2));
  t.notes.push_back("center_spread=" + format_double(rep.center_spread) + " sup_spread=" +
                    format_double(rep.sup_spread) + " lipschitz_spread=" + format_double(rep.lipschitz_spread));
  return t;
}

}  // namespace

std::string version() { return ROUGHMAX_VERSION; }

GrowthFunction parse_growth_spec(const std::string& text) {
  std::string body = text;
  std::optional<double> x0;
  if (const auto at = text.find('@'); at != std::string::npos) {
    body = text.substr(0, at);
    x0 = grammar_number({text.substr(at + 1), at + 1});
  }
  const auto tok = split_tokens(body, ':');
  const std::string& name = tok[0].text;
  std::size_t extras = 0;
  Variant v{};
  if (name == "pure") {
    v = Variant::PurePower;
  } else if (name == "powerlog" || name == "poweriterlog") {
    v = name == "powerlog" ? Variant::PowerLog : Variant::PowerIterLog;
    extras = 1;
  } else if (name == "powerexplog") {
    v = Variant::PowerExpLog;
    extras = 2;
  } else {
    throw GrammarError("growth spec: unknown variant '" + name + "'", 0);
  }
  if (tok.size() < 3 + extras) {
    throw GrammarError("growth spec: " + name + " needs " + std::to_string(2 + extras) + " fields", body.size());
  }
  if (tok.size() > 3 + extras) throw GrammarError("growth spec: unexpected field", tok[3 + extras].position);
  const double c = grammar_number(tok[1]);
  const double C_h = grammar_number(tok[2]);
  GrowthParams p;
  if (v == Variant::PowerLog) p.A = grammar_number(tok[3]);
  if (v == Variant::PowerExpLog) {
    p.A = grammar_number(tok[3]);
    p.B = grammar_number(tok[4]);
  }
  if (v == Variant::PowerIterLog) p.m = grammar_int(tok[3]);
  return make_growth(v, c, C_h, p, x0);
}

std::string ExperimentConfig::to_string() const {
  std::ostringstream os;
  os << experiment_string() << ";workers=" << workers << ";out=" << escape(out);
  for (const auto& [k, v] : destinations) os << ";dest." << escape(k) << '=' << escape(v);
  return os.str();
}

std::string ExperimentConfig::experiment_string() const {
  std::ostringstream os;
  os << "command=" << escape(command) << ";h=" << escape(growth) << ";nlo=" << n_lo << ";nhi=" << n_hi
     << ";seed=" << seed << ";format=" << escape(format);
  for (const auto& [k, v] : params) os << ";param." << escape(k) << '=' << escape(v);
  return os.str();
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig c;
  std::vector<std::string> fields;
  // split on unescaped ';' while keeping escapes for the key=value split
  std::string cur;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '\\' && i + 1 < text.size()) {
      cur += text[i];
      cur += text[++i];
    } else if (text[i] == ';') {
      fields.push_back(cur);
      cur.clear();
    } else {
      cur += text[i];
    }
  }
  fields.push_back(cur);
  for (const std::string& f : fields) {
    auto [k_raw, v_raw] = split_pair(f);
    const std::string k = unescape(k_raw), v = unescape(v_raw);
    ExperimentConfig tmp;
    tmp.params["v"] = v;
    if (k == "command") {
      c.command = v;
    } else if (k == "h") {
      c.growth = v;
    } else if (k == "nlo") {
      c.n_lo = static_cast<int>(param_int(tmp, "v"));
    } else if (k == "nhi") {
      c.n_hi = static_cast<int>(param_int(tmp, "v"));
    } else if (k == "seed") {
      c.seed = std::stoull(v);
    } else if (k == "format") {
      c.format = v;
    } else if (k == "workers") {
      c.workers = static_cast<int>(param_int(tmp, "v"));
    } else if (k == "out") {
      c.out = v;
    } else if (k.rfind("param.", 0) == 0) {
      c.params[k.substr(6)] = v;
    } else if (k.rfind("dest.", 0) == 0) {
      c.destinations[k.substr(5)] = v;
    } else {
      throw DomainError("config: unknown key '" + k + "'");
    }
  }
  return c;
}

void write_table(std::ostream& os, const Table& t, const ExperimentConfig& cfg) {
  if (cfg.format == "json") {
    nlohmann::ordered_json j;
    j["version"] = version();
    j["config"] = cfg.experiment_string();
    j["columns"] = t.columns;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
      auto row = nlohmann::ordered_json::array();
      for (const Cell& c : r) std::visit([&](const auto& v) { row.push_back(v); }, c);
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    j["notes"] = t.notes;
    os << j.dump(1) << '\n';
    return;
  }
  os << "# roughmax " << version() << '\n' << "# config: " << cfg.experiment_string() << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) os << ',';
      if (const auto* d = std::get_if<double>(&r[i])) {
        os << format_double(*d);
      } else if (const auto* n = std::get_if<std::int64_t>(&r[i])) {
        os << *n;
      } else {
        os << std::get<std::string>(r[i]);
      }
    }
    os << '\n';
  }
  for (const auto& n : t.notes) os << "# " << n << '\n';
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  ExperimentConfig cfg;
  CLI::App app{"Rough maximal functions along generalized Piatetski-Shapiro sequences", "roughmax"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.add_option("--h", cfg.growth, "growth function spec, e.g. pure:1.02:1 or powerlog:1.02:1:1")->capture_default_str();
  app.add_option("--seed", cfg.seed, "seed for randomized inputs")->capture_default_str();
  app.add_option("--workers", cfg.workers, "worker threads")->check(CLI::Range(1, 1024))->capture_default_str();
  app.add_option("--out", cfg.out, "output file (default stdout)");
  app.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  std::map<std::string, std::map<std::string, std::string>> sub;
  std::map<std::string, std::map<std::string, std::string>> dest;
  const auto opt = [&](CLI::App* a, const std::string& name, const std::string& def, const std::string& help) {
    auto& slot = sub[a->get_name()][name];
    slot = def;
    return a->add_option("--" + name, slot, help)->capture_default_str();
  };
  const auto path = [&](CLI::App* a, const std::string& name, const std::string& help) {
    return a->add_option("--" + name, dest[a->get_name()][name], help);
  };

  auto* gt = app.add_subcommand("growth-table", "phi, theta_i and vartheta_i on a log grid");
  opt(gt, "lo", "", "grid start (default h(x0))");
  opt(gt, "hi", "1073741824", "grid end");
  opt(gt, "points", "64", "grid points");

  auto* sq = app.add_subcommand("seqset", "enumerate N_h and tabulate |N_h cap [1,N]| / phi(N)");
  opt(sq, "nmax", "1048576", "largest integer enumerated");
  path(sq, "emit", "write the elements, one per line, to this file");

  auto* kd = app.add_subcommand("kernel-decomp", "autocorrelation decomposition of K_{h,N} over N = 2^k");
  opt(kd, "kmin", "12", "smallest k");
  opt(kd, "kmax", "20", "largest k");
  opt(kd, "normalization", "phi", "count or phi");

  auto* es = app.add_subcommand("expsum", "exponential sums against their bounds over N = 2^k");
  opt(es, "lemma", "3.2", "3.2 (single phase), 3.4 (two phases) or 3.6 (min-norm sum)");
  opt(es, "sweep", "12..16", "kmin..kmax");
  opt(es, "params", "m=1", "record m=..,m2=..,kappa=..,resonant=0|1,Mexp=..");

  auto* wt = app.add_subcommand("weaktype", "lambda |{M_h f > lambda}| / ||f||_1 over a lambda grid");
  app.add_option("--nlo", cfg.n_lo, "smallest dyadic scale exponent")->capture_default_str();
  app.add_option("--nhi", cfg.n_hi, "largest dyadic scale exponent")->capture_default_str();
  opt(wt, "corpus", "delta", "delta or random:K:seed");
  opt(wt, "lambdas", "64", "number of log-spaced heights");

  auto* cz = app.add_subcommand("cz", "Calderon-Zygmund decomposition of a signal");
  opt(cz, "input", "", "signal CSV with columns x,value")->required();
  opt(cz, "lambda", "", "height")->required();
  path(cz, "emit-atoms", "directory receiving one CSV per atom and good.csv");

  auto* eg = app.add_subcommand("ergodic", "ergodic averages along N_h on a finite system");
  opt(eg, "system", "shift:97:5", "identity:m, shift:m:step or random:m:seed");
  opt(eg, "f", "indicator:0", "indicator:k or constant:v");
  opt(eg, "x", "0", "starting state");
  opt(eg, "sweep", "10..20", "kmin..kmax, N = 2^k");
  opt(eg, "oscillation", "0", "report the oscillation sum for J = 1..this, breakpoints 4^j");
  opt(eg, "eps", "0.1", "lacunary parameter of Z_eps");

  app.add_subcommand("verify-family", "kernel family hypotheses over n in [nlo, nhi]");

  std::vector<std::string> reversed_args(args.rbegin(), args.rend());
  try {
    app.parse(reversed_args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "roughmax: " << e.what() << '\n' << app.help();
    return kExitInvalid;
  }

  const CLI::App* chosen = app.get_subcommands().front();
  cfg.command = chosen->get_name();
  cfg.params = sub[cfg.command];
  cfg.destinations = dest[cfg.command];
  for (auto it = cfg.destinations.begin(); it != cfg.destinations.end();) {
    it = it->second.empty() ? cfg.destinations.erase(it) : std::next(it);
  }
  if (cfg.command != "weaktype" && cfg.command != "verify-family") {
    // scale range only applies to the family commands
    cfg.n_lo = ExperimentConfig{}.n_lo;
    cfg.n_hi = ExperimentConfig{}.n_hi;
  }
  if (cfg.command == "verify-family" && app.count("--nlo") == 0 && app.count("--nhi") == 0) {
    cfg.n_lo = 12;
    cfg.n_hi = 20;
  }
  const Workers w{cfg.workers};

  try {
    Table t;
    if (cfg.command == "growth-table") {
      t = growth_table(cfg);
    } else if (cfg.command == "seqset") {
      t = seqset_table(cfg);
    } else if (cfg.command == "kernel-decomp") {
      t = kernel_decomp_table(cfg, w);
    } else if (cfg.command == "expsum") {
      t = expsum_table(cfg, w);
    } else if (cfg.command == "weaktype") {
      t = weaktype_table(cfg, w);
    } else if (cfg.command == "cz") {
      t = cz_table(cfg);
    } else if (cfg.command == "ergodic") {
      t = ergodic_table(cfg);
    } else {
      t = verify_family_table(cfg, w);
    }
    std::ostringstream buf;
    write_table(buf, t, cfg);
    if (cfg.out.empty()) {
      out << buf.str();
    } else {
      std::ofstream os(cfg.out, std::ios::binary);
      if (!os) throw DomainError("cannot open output '" + cfg.out + "'");
      os << buf.str();
    }
  } catch (const NumericError& e) {
    err << "roughmax: numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    err << "roughmax: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "roughmax: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitOk;
}

}  // namespace roughmax::cli
