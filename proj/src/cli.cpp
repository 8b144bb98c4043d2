#include "fracbv/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fracbv/exact.hpp"
#include "fracbv/godunov.hpp"
#include "fracbv/kk.hpp"
#include "fracbv/packet_family.hpp"
#include "fracbv/triangular.hpp"
#include "fracbv/variation.hpp"

namespace fracbv {

using nlohmann::json;

namespace {

constexpr int kSchema = 1;

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string(what) + ": malformed JSON (" + e.what() + ")");
  }
}

void only_keys(const json& j, const std::set<std::string>& allowed, const char* what) {
  for (const auto& item : j.items())
    if (!allowed.count(item.key())) throw ConfigError(std::string(what) + ": unknown key '" + item.key() + "'");
}

std::vector<double> number_list(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_array()) throw ConfigError(std::string(what) + ": '" + key + "' must be a list");
  std::vector<double> v;
  for (const auto& e : j[key]) {
    if (!e.is_number()) throw ConfigError(std::string(what) + ": '" + key + "' must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

double number(const json& j, const char* key, const char* what) {
  if (!j.contains(key) || !j[key].is_number()) throw ConfigError(std::string(what) + ": '" + key + "' must be a number");
  return j[key].get<double>();
}

json num(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(17) << v;
  return s.str();
}

struct Globals {
  std::string out_path;
  std::string format = "csv";
  int threads = 1;
  std::uint64_t seed = 0;
};

// Writes to --out when given, else to the stream passed to run_cli.
class Sink {
 public:
  Sink(const Globals& g, std::ostream& fallback) : os_(&fallback) {
    if (!g.out_path.empty()) {
      file_.open(g.out_path, std::ios::binary);
      if (!file_) throw ConfigError("cannot open output file '" + g.out_path + "'");
      os_ = &file_;
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_;
};

void emit_json(std::ostream& os, json j) {
  j["schema"] = kSchema;
  os << j.dump(2) << "\n";
}

json regions_json(const PiecewiseProfile& prof) {
  json arr = json::array();
  const auto& R = prof.regions();
  for (std::size_t k = 0; k < R.size(); ++k) {
    json r{{"left", R[k].left}, {"right", R[k].right}};
    if (R[k].kind == Region::Kind::constant) {
      r["kind"] = "constant";
      r["value"] = R[k].value;
    } else {
      r["kind"] = "fan";
      r["center"] = R[k].center;
    }
    r["shock_at_left"] = k > 0 && prof.shock_at(k);
    arr.push_back(r);
  }
  return arr;
}

void emit_profile(std::ostream& os, const Globals& g, const PiecewiseProfile& prof, int K, json extra) {
  const SampledFunction f = sample_profile(prof, K);
  if (g.format == "json") {
    extra["time"] = prof.time();
    extra["regions"] = regions_json(prof);
    extra["x"] = std::vector<double>(f.xs.data(), f.xs.data() + f.xs.size());
    extra["u"] = std::vector<double>(f.vs.data(), f.vs.data() + f.vs.size());
    emit_json(os, extra);
  } else {
    write_profile_csv(os, f);
  }
}

std::shared_ptr<const PsiContext> power_law_context(double p, double M, const SourceProfile& S) {
  return std::make_shared<const PsiContext>(PsiContext{Flux::power_law(p, M), S});
}

}  // namespace

Flux parse_flux_spec(const std::string& text) {
  const json j = parse_json(text, "flux");
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) throw ConfigError("flux: need a 'kind' string");
  const std::string kind = j["kind"];
  if (kind == "power_law") {
    only_keys(j, {"kind", "p", "M"}, "flux");
    const double M = j.contains("M") ? number(j, "M", "flux") : 1.0;
    return Flux::power_law(number(j, "p", "flux"), M);
  }
  if (kind == "table") {
    only_keys(j, {"kind", "u", "df", "M"}, "flux");
    return Flux::table(number_list(j, "u", "flux"), number_list(j, "df", "flux"), number(j, "M", "flux"));
  }
  throw ConfigError("flux: unknown kind '" + kind + "'");
}

SourceProfile parse_source_spec(const std::string& text) {
  if (text.empty() || text == "zero") return SourceProfile::zero();
  {
    std::istringstream s(text);
    double a;
    if (s >> a && (s >> std::ws).eof()) return SourceProfile::constant(a);
  }
  const json j = parse_json(text, "alpha");
  if (!j.is_object()) throw ConfigError("alpha: expected 'zero', a number or a JSON object");
  if (!j.contains("alpha") || !j["alpha"].is_string()) throw ConfigError("alpha: object form needs an \"alpha\" kind");
  const std::string kind = j["alpha"];
  if (kind == "zero") {
    only_keys(j, {"alpha"}, "alpha");
    return SourceProfile::zero();
  }
  if (kind == "constant") {
    only_keys(j, {"alpha", "a"}, "alpha");
    if (!j.contains("a") || !j["a"].is_number()) throw ConfigError("alpha: constant needs a number \"a\"");
    return SourceProfile::constant(j["a"].get<double>());
  }
  if (kind != "pw") throw ConfigError("alpha: unknown kind '" + kind + "'");
  only_keys(j, {"alpha", "t", "v"}, "alpha");
  return SourceProfile::piecewise(number_list(j, "t", "alpha"), number_list(j, "v", "alpha"));
}

SampledFunction read_profile_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("profile csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,u") throw ConfigError("profile csv: header must be 'x,u'");
  std::vector<double> xs;
  std::vector<double> vs;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ConfigError("profile csv: expected two columns");
    // strtod rather than stod: stod rejects subnormals, which sample_profile can emit next to 0
    auto number = [&](const std::string& field) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(field.c_str(), &end);
      if (field.empty() || end != field.c_str() + field.size() || (errno == ERANGE && std::abs(v) > 1.0))
        throw ConfigError("profile csv: malformed number in '" + line + "'");
      return v;
    };
    xs.push_back(number(line.substr(0, comma)));
    vs.push_back(number(line.substr(comma + 1)));
  }
  try {
    return SampledFunction::from(xs, vs);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("profile csv: ") + e.what());
  }
}

void write_profile_csv(std::ostream& out, const SampledFunction& f) {
  out << "x,u\n";
  for (Eigen::Index i = 0; i < f.size(); ++i) out << fmt(f.xs[i]) << ',' << fmt(f.vs[i]) << '\n';
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact entropy solutions, fractional variation and their certificates"};
  app.require_subcommand(0, 1);
  app.fallthrough();
  Globals g;
  app.add_option("--out", g.out_path, "Output file (default stdout)");
  app.add_option("--format", g.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads for independent runs")->check(CLI::Range(1, 256));
  app.add_option("--seed", g.seed, "Seed for randomized sweeps");

  std::string alpha = "zero";
  std::string flux_text;
  double p = 2.0, q = 3.0, M = 0.0, t = 1.0, t0 = 1.0, s = 0.5;
  double dx = 0.1, delta = 0.5, xc = 0.0;
  double wl = 1.0, wr = -1.0, x0 = 0.0, lo = NAN, hi = NAN;
  double A = 0.0, B = 0.02, a_int = 0.0, b_int = 1.0, T = 1.0;
  double sprime = 1.0, eps = 0.5, kk_delta = 0.1, kk_t = 0.5, cfl = 0.9;
  int samples = 64, N = 10, Nv = 30, n_kk = 10, res = 0, Ni = 1000;
  std::string kind = "powerlaw", init = "packet", input;
  std::vector<int> cells{2048};

  auto* packet = app.add_subcommand("packet", "Single antisymmetric packet profile");
  packet->add_option("--p", p)->check(CLI::PositiveNumber);
  packet->add_option("--alpha", alpha);
  packet->add_option("--dx", dx);
  packet->add_option("--delta", delta);
  packet->add_option("--x", xc, "Packet center");
  packet->add_option("--t", t)->required();
  packet->add_option("--samples", samples);
  packet->add_option("--M", M, "Flux bound (default from delta and the source)");

  auto* riemann = app.add_subcommand("riemann", "Riemann problem profile");
  riemann->add_option("--flux", flux_text, "Flux JSON (default power law --p)");
  riemann->add_option("--p", p);
  riemann->add_option("--M", M);
  riemann->add_option("--alpha", alpha);
  riemann->add_option("--wl", wl);
  riemann->add_option("--wr", wr);
  riemann->add_option("--x0", x0);
  riemann->add_option("--t", t)->required();
  riemann->add_option("--lo", lo);
  riemann->add_option("--hi", hi);
  riemann->add_option("--samples", samples);

  auto* family = app.add_subcommand("family", "Truncated counterexample family profile");
  family->add_option("--kind", kind)->check(CLI::IsMember({"powerlaw", "assp"}));
  family->add_option("--p", p);
  family->add_option("--q", q);
  family->add_option("--M", M);
  family->add_option("--alpha", alpha);
  family->add_option("--N", N);
  family->add_option("--t", t)->required();
  family->add_option("--t0", t0);
  family->add_option("--samples", samples);

  auto* assp = app.add_subcommand("assp", "Single-shock cell states (a, b, tau)");
  assp->add_option("--q", q);
  assp->add_option("--M", M);
  assp->add_option("--alpha", alpha);
  assp->add_option("--t0", t0);
  assp->add_option("--A", A);
  assp->add_option("--B", B);

  auto* variation = app.add_subcommand("variation", "TV^s of a sampled profile");
  variation->add_option("--s", s)->required();
  variation->add_option("--input", input, "CSV with header x,u ('-' for stdin)")->required();

  auto* diverge = app.add_subcommand("diverge", "Per-packet TV^s lower bounds and partial sums");
  diverge->add_option("--family", kind)->check(CLI::IsMember({"powerlaw", "assp"}));
  diverge->add_option("--p", p);
  diverge->add_option("--q", q);
  diverge->add_option("--M", M);
  diverge->add_option("--alpha", alpha);
  diverge->add_option("--s", s)->required();
  diverge->add_option("--N", N);
  diverge->add_option("--t", t);
  diverge->add_option("--t0", t0);

  auto* oracle = app.add_subcommand("oracle", "Godunov run against the exact solution");
  oracle->add_option("--flux", flux_text);
  oracle->add_option("--p", p);
  oracle->add_option("--M", M);
  oracle->add_option("--alpha", alpha);
  oracle->add_option("--init", init)->check(CLI::IsMember({"riemann", "packet", "family"}));
  oracle->add_option("--cells", cells)->expected(1, 64);
  oracle->add_option("--t", t)->required();
  oracle->add_option("--cfl", cfl);
  oracle->add_option("--lo", lo);
  oracle->add_option("--hi", hi);
  oracle->add_option("--wl", wl);
  oracle->add_option("--wr", wr);
  oracle->add_option("--x0", x0);
  oracle->add_option("--dx", dx);
  oracle->add_option("--delta", delta);
  oracle->add_option("--x", xc);
  oracle->add_option("--N", N);

  auto* tri = app.add_subcommand("triangular", "Triangular system diagnostics");
  tri->add_option("--p", p);
  tri->add_option("--T", T);
  tri->add_option("--t", t);
  tri->add_option("--N", N);
  tri->add_option("--sprime", sprime);
  tri->add_option("--Nv", Nv);
  tri->add_option("--eps", eps);

  auto* kk = app.add_subcommand("kk", "Keyfitz-Kranzer construction diagnostics");
  kk->add_option("--p", p);
  kk->add_option("--delta", kk_delta);
  kk->add_option("--n", n_kk);
  kk->add_option("--t", kk_t);
  kk->add_option("--res", res, "Grid resolution for an optional CSV dump (0: none)");
  kk->add_option("--Ni", Ni);

  auto* bound = app.add_subcommand("bound", "Upper bound on TV^s over [a, b]");
  bound->add_option("--p", p);
  bound->add_option("--M", M);
  bound->add_option("--alpha", alpha);
  bound->add_option("--t", t)->required();
  bound->add_option("--a", a_int);
  bound->add_option("--b", b_int);
  bound->add_option("--T", T);

  auto fail = [&](int code, const std::string& kind_name, const std::string& msg) {
    json e{{"schema", kSchema}, {"error", {{"kind", kind_name}, {"message", msg}}}};
    err << e.dump() << "\n";
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(kExitConfig, "config", e.what());
  }

  try {
    if (app.get_subcommands().empty()) throw ConfigError("no command given");
    const SourceProfile S = parse_source_spec(alpha);
    Sink sink(g, out);
    std::ostream& os = *sink;

    if (packet->parsed()) {
      if (M <= 0.0) M = delta * std::exp(S.max_beta(t)) * (1.0 + 1e-9);
      const auto ctx = power_law_context(p, M, S);
      const Packet P = make_packet(*ctx, xc, dx, delta);
      const auto prof = packet_profile(ctx, P, t);
      const FanEdges e = fan_edges(*ctx, P, t);
      emit_profile(os, g, prof, samples,
                   {{"t_n", num(P.t_n)}, {"zeta_L", e.zeta_L}, {"zeta_R", e.zeta_R}, {"x_n", P.x_n}});
    } else if (riemann->parsed()) {
      if (std::isnan(lo)) lo = x0 - 1.0;
      if (std::isnan(hi)) hi = x0 + 1.0;
      Flux F = flux_text.empty()
                   ? Flux::power_law(p, M > 0.0 ? M : std::max(std::abs(wl), std::abs(wr)) * std::exp(S.max_beta(t)) * (1.0 + 1e-9))
                   : parse_flux_spec(flux_text);
      const auto ctx = std::make_shared<const PsiContext>(PsiContext{F, S});
      const auto prof = riemann_profile(ctx, wl, wr, x0, t, lo, hi);
      json extra{{"wl", wl}, {"wr", wr}};
      if (wl > wr) extra["shock"] = riemann_shock(*ctx, wl, wr, x0, t).position;
      emit_profile(os, g, prof, samples, extra);
    } else if (family->parsed()) {
      if (kind == "powerlaw") {
        const auto fam = make_power_law_family(p, S, N, std::max(10.0, t), M);
        const auto prof = family_profile(fam, t);
        json cells_j = json::array();
        for (int n = 1; n <= N; ++n) {
          const Packet& P = fam.packets[static_cast<std::size_t>(n - 1)];
          cells_j.push_back({{"n", n}, {"x_n", P.x_n}, {"dx", P.dx}, {"delta", P.delta}, {"t_n", num(P.t_n)}});
        }
        emit_profile(os, g, prof, samples, {{"kind", "powerlaw"}, {"packets", cells_j}});
      } else {
        const auto ctx = power_law_context(q, M > 0.0 ? M : 1.0, S);
        const auto fam = make_assp_family(ctx, t0, N);
        const auto prof = family_profile(fam, t);
        json cells_j = json::array();
        for (const Cell& c : fam.cells)
          cells_j.push_back({{"n", c.n}, {"A", c.A}, {"B", c.B}, {"a", c.a}, {"b", c.b}, {"tau", c.tau}});
        emit_profile(os, g, prof, samples, {{"kind", "assp"}, {"n0", fam.n0}, {"t0", t0}, {"cells", cells_j}});
      }
    } else if (assp->parsed()) {
      const auto ctx = power_law_context(q, M > 0.0 ? M : 1.0, S);
      const StateBounds bnd = default_state_bounds(*ctx, t0);
      const CellStates st = solve_cell_states(*ctx, t0, A, B, bnd);
      const double tau = tau_position(*ctx, t0, A, B, st.a, st.b);
      const double resG = std::abs(g_functional(*ctx, t0, st.a) - g_functional(*ctx, t0, st.b));
      const double resF = std::abs(f_plus(*ctx, t0, st.a) + f_minus(*ctx, t0, st.b) - (B - A));
      const double c0 = ctx->source.gamma(q, t0);
      const double lower = std::pow(c0, -1.0 / q) * std::pow(B - A, 1.0 / q);
      if (g.format == "json") {
        emit_json(os, {{"a", st.a}, {"b", st.b}, {"tau", tau}, {"residual_G", resG}, {"residual_F", resF},
                       {"sweeps", st.iterations}, {"fallback", st.used_fallback},
                       {"gap_lower_bound", lower}, {"gap_bound_holds", st.a - st.b >= lower}});
      } else {
        os << "a,b,tau,residual_G,residual_F\n"
           << fmt(st.a) << ',' << fmt(st.b) << ',' << fmt(tau) << ',' << fmt(resG) << ',' << fmt(resF) << '\n';
      }
    } else if (variation->parsed()) {
      SampledFunction f;
      if (input == "-") {
        f = read_profile_csv(std::cin);
      } else {
        std::ifstream in(input);
        if (!in) throw ConfigError("cannot open input '" + input + "'");
        f = read_profile_csv(in);
      }
      if (!(s > 0.0 && s <= 1.0)) throw ConfigError("--s must lie in (0, 1]");
      const VariationReport rep = p_variation(f, 1.0 / s);
      if (g.format == "json") {
        emit_json(os, {{"s", s}, {"p", rep.p}, {"value", rep.value},
                       {"subdivision", std::vector<long long>(rep.subdivision.begin(), rep.subdivision.end())}});
      } else {
        os << "p,value\n" << fmt(rep.p) << ',' << fmt(rep.value) << '\n';
      }
    } else if (diverge->parsed()) {
      std::vector<PartialSum> rows;
      if (kind == "powerlaw") {
        rows = family_tvs_partial_sums(make_power_law_family(p, S, N, std::max(10.0, t), M), t, s, N);
      } else {
        const auto ctx = power_law_context(q, M > 0.0 ? M : 1.0, S);
        rows = family_tvs_partial_sums(make_assp_family(ctx, t0, N), t, s, N);
      }
      if (g.format == "json") {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back({{"n", r.n}, {"bound", r.bound}, {"cumulative", r.cumulative}});
        json j{{"family", kind}, {"s", s}, {"t", t}, {"rows", arr}};
        std::vector<double> ns, cs;
        for (const auto& r : rows) {
          ns.push_back(r.n);
          cs.push_back(r.cumulative);
        }
        if (ns.size() >= 2) j["growth_exponent"] = fitted_growth_exponent(ns, cs);
        emit_json(os, j);
      } else {
        os << "n,bound,cumulative\n";
        for (const auto& r : rows) os << r.n << ',' << fmt(r.bound) << ',' << fmt(r.cumulative) << '\n';
      }
    } else if (oracle->parsed()) {
      std::shared_ptr<const PsiContext> ctx;
      std::function<double(double, double)> initial;
      std::function<double(double, double)> exact;  // integral over [a, b] at time t
      double support_lo = 0.0, support_hi = 0.0, margin = 0.0;
      if (init == "riemann") {
        Flux F = flux_text.empty()
                     ? Flux::power_law(p, M > 0.0 ? M : std::max(std::abs(wl), std::abs(wr)) * std::exp(S.max_beta(t)) * (1.0 + 1e-9))
                     : parse_flux_spec(flux_text);
        ctx = std::make_shared<const PsiContext>(PsiContext{F, S});
        support_lo = std::isnan(lo) ? x0 - 1.0 : lo;
        support_hi = std::isnan(hi) ? x0 + 1.0 : hi;
        initial = [=](double a, double b) {
          const double m = std::clamp(x0, a, b);
          return wl * (m - a) + wr * (b - m);
        };
        const auto prof = std::make_shared<PiecewiseProfile>(riemann_profile(ctx, wl, wr, x0, t, support_lo, support_hi));
        exact = [prof](double a, double b) { return prof->integral(a, b); };
        margin = speed_bound(F, S, t) * t;
      } else {
        std::vector<Packet> packets;
        if (init == "packet") {
          ctx = power_law_context(p, M > 0.0 ? M : delta * std::exp(S.max_beta(t)) * (1.0 + 1e-9), S);
          packets.push_back(make_packet(*ctx, xc, dx, delta));
        } else {
          const auto fam = make_power_law_family(p, S, N, std::max(10.0, t), M);
          ctx = fam.ctx;
          packets = fam.packets;
        }
        support_lo = packets.front().left();
        support_hi = packets.back().right();
        const double pad = 0.25 * (support_hi - support_lo);
        if (std::isnan(lo)) lo = support_lo - pad;
        if (std::isnan(hi)) hi = support_hi + pad;
        support_lo = lo;
        support_hi = hi;
        initial = [packets](double a, double b) {
          double sum = 0.0;
          for (const Packet& P : packets) {
            sum += P.delta * std::max(0.0, std::min(b, P.x_n) - std::max(a, P.left()));
            sum -= P.delta * std::max(0.0, std::min(b, P.right()) - std::max(a, P.x_n));
          }
          return sum;
        };
        auto prof = std::make_shared<PiecewiseProfile>(ctx, t);
        for (const Packet& P : packets) append_packet(*prof, P);
        exact = [prof](double a, double b) { return prof->integral(a, b); };
      }
      std::sort(cells.begin(), cells.end());
      std::vector<double> errors(cells.size());
      std::vector<Snapshot> finest;
      auto run_one = [&](std::size_t k) {
        const int n = cells[k];
        MeshRun run{support_lo, support_hi, n, cfl, t, {}};
        const Eigen::VectorXd u0 = cell_averages(initial, support_lo, support_hi, n);
        auto snaps = godunov_solve(ctx->flux, S, u0, run);
        const Eigen::VectorXd ue = cell_averages(exact, support_lo, support_hi, n);
        const double h = (support_hi - support_lo) / n;
        double e = 0.0;
        for (int i = 0; i < n; ++i) {
          const double xm = support_lo + (i + 0.5) * h;
          if (xm < support_lo + margin || xm > support_hi - margin) continue;
          e += std::abs(snaps.back().u[i] - ue[i]) * h;
        }
        errors[k] = e;
        if (k + 1 == cells.size()) finest = std::move(snaps);
      };
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> faults(cells.size());
      for (std::size_t k = 0; k < cells.size(); ++k) {
        auto job = [&, k] {
          try {
            run_one(k);
          } catch (...) {
            faults[k] = std::current_exception();
          }
        };
        if (static_cast<int>(pool.size()) >= g.threads) {
          for (auto& th : pool) th.join();
          pool.clear();
        }
        pool.emplace_back(job);
      }
      for (auto& th : pool) th.join();
      for (auto& f : faults)
        if (f) std::rethrow_exception(f);
      const int n = cells.back();
      const double h = (support_hi - support_lo) / n;
      const Eigen::VectorXd ue = cell_averages(exact, support_lo, support_hi, n);
      if (g.format == "json") {
        json table = json::array();
        for (std::size_t k = 0; k < cells.size(); ++k) table.push_back({{"cells", cells[k]}, {"l1", errors[k]}});
        emit_json(os, {{"init", init}, {"t", t}, {"lo", support_lo}, {"hi", support_hi}, {"errors", table}});
      } else {
        os << "x,u_num,u_exact\n";
        for (int i = 0; i < n; ++i)
          os << fmt(support_lo + (i + 0.5) * h) << ',' << fmt(finest.back().u[i]) << ',' << fmt(ue[i]) << '\n';
      }
    } else if (tri->parsed()) {
      const TriangularSetup TS = make_triangular_setup(p, T, N);
      const double defect = seam_defect(TS, t);
      const VDivergence vd = v_divergence_sums(TS, alternating_v0, t, sprime, Nv);
      const auto bounds = triangular_tv_lower_bounds(TS, eps, N);
      emit_json(os, {{"p", p}, {"T", T}, {"t", t}, {"N", N}, {"seam_defect", defect},
                     {"sprime", sprime}, {"Nv", Nv}, {"v_sum", vd.sum},
                     {"v_sum_expected", Nv * std::pow(2.0, 1.0 / sprime)},
                     {"tv_lower_bound_cumulative", bounds.empty() ? 0.0 : bounds.back().cumulative}});
    } else if (kk->parsed()) {
      const KKSetup K = make_kk_setup(p, kk_delta, n_kk);
      const KKState st = evolve(K, kk_t);
      const KKState st0 = build_initial_data(K);
      const double sup = sup_distance(st0.u, K.b);
      const double sup_bound = K.b.norm() * std::pow(n_kk, -1.0 - kk_delta) + std::ldexp(1.0, -n_kk + 1);
      json j{{"p", p}, {"delta", kk_delta}, {"n", n_kk}, {"t", kk_t}, {"M", K.M}, {"i_max", K.i_max},
             {"sup_distance", sup}, {"sup_bound", sup_bound},
             {"bv_u0_minus_b", bv_exact(st0.u, 2.0 * K.M)}, {"bv_eta0", bv_exact(st0.eta, 2.0 * K.M)},
             {"bv_u_t", bv_exact(st.u, 2.0 * K.M)}, {"reference_bound", bv_reference_bound(K)},
             {"straight_characteristics", straight_characteristics(K, st, kk_t)},
             {"jump_sum", jump_sum_lower_bound(K, kk_t, Ni)}, {"N_i", Ni}};
      if (g.format == "csv") {
        if (res <= 0) throw ConfigError("kk: CSV output is a grid dump and needs --res");
        // point samples at cell centres; strips finer than the grid are aliased
        const Eigen::VectorXd e = uniform_edges(-2.0 * K.M, 2.0 * K.M, res);
        os << "x,y,u1,u2\n";
        for (int r = 0; r < res; ++r) {
          const double y = 0.5 * (e[r] + e[r + 1]);
          for (int c = 0; c < res; ++c) {
            const double x = 0.5 * (e[c] + e[c + 1]);
            const Eigen::Vector2d v = st.u.value(x, y);
            os << fmt(x) << ',' << fmt(y) << ',' << fmt(v[0]) << ',' << fmt(v[1]) << '\n';
          }
        }
      } else {
        if (res > 0) {
          const Eigen::VectorXd e = uniform_edges(-2.0 * K.M, 2.0 * K.M, res);
          try {
            j["bv_grid"] = bv_grid_norm(rasterize(st.u, e, e));
          } catch (const std::range_error& ex) {
            j["bv_grid"] = nullptr;
            j["raster"] = ex.what();
          }
        }
        emit_json(os, j);
      }
    } else if (bound->parsed()) {
      const double Mb = M > 0.0 ? M : 1.0;
      const double v = tvs_upper_bound(Flux::power_law(p, Mb), S, t, a_int, b_int, T);
      if (g.format == "json") emit_json(os, {{"bound", num(v)}, {"p", p}, {"t", t}, {"a", a_int}, {"b", b_int}});
      else os << "bound\n" << fmt(v) << '\n';
    }
    return kExitOk;
  } catch (const NumericalError& e) {
    return fail(kExitNumerical, "numerical", e.what());
  } catch (const std::range_error& e) {
    return fail(kExitNumerical, "numerical", e.what());
  } catch (const std::logic_error& e) {
    return fail(kExitConfig, "config", e.what());
  } catch (const std::exception& e) {
    return fail(kExitNumerical, "numerical", e.what());
  }
}

}  // namespace fracbv
