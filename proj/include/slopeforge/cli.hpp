#pragma once

#include <json.hpp>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "slopeforge/isocrystal.hpp"
#include "slopeforge/kisin.hpp"
#include "slopeforge/phimod.hpp"
#include "slopeforge/tori.hpp"

namespace slopeforge {

using nlohmann::json;

struct CliOptions {
  std::optional<long> n;
  std::optional<long> nmax;
  std::optional<long> search_degree;
  std::optional<long> bound;
};

struct PolySeries {
  std::string name;
  PolygonFunction poly;
};

struct Report {
  std::vector<std::string> lines;
  std::vector<PolySeries> series;
  std::string certificate;
};

namespace cli_detail {

// Recursive-descent parser for the polynomial literal grammar: rational
// coefficients (integer or a/b), variable u, operators + - * ^.
struct PolyParser {
  const std::string& s;
  size_t i = 0;

  [[noreturn]] void err(const std::string& what) const {
    fail(errc::parse_error, what + " at column " + std::to_string(i + 1));
  }
  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }
  bool peek(char c) {
    skip_ws();
    return i < s.size() && s[i] == c;
  }
  bool eat(char c) {
    if (!peek(c)) return false;
    ++i;
    return true;
  }
  Int parse_uint() {
    skip_ws();
    if (i >= s.size() || s[i] < '0' || s[i] > '9') err("expected digits");
    Int v = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') v = v * 10 + (s[i++] - '0');
    return v;
  }
  QPoly parse_factor() {
    skip_ws();
    QPoly base;
    if (eat('u')) {
      base = q_monomial(1);
    } else {
      Int num = parse_uint();
      Rat c(num);
      if (eat('/')) {
        Int den = parse_uint();
        if (den == 0) err("zero denominator");
        c = Rat(num) / Rat(den);
      }
      base = q_const(c);
    }
    if (eat('^')) {
      Int e = parse_uint();
      QPoly out = q_one();
      for (Int k = 0; k < e; ++k) out = q_mul(out, base);
      return out;
    }
    return base;
  }
  QPoly parse_term() {
    QPoly out = parse_factor();
    while (eat('*')) out = q_mul(out, parse_factor());
    return out;
  }
  QPoly parse_expr() {
    bool neg = eat('-');
    QPoly out = parse_term();
    if (neg) out = q_neg(out);
    for (;;) {
      if (eat('+'))
        out = q_add(out, parse_term());
      else if (eat('-'))
        out = q_sub(out, parse_term());
      else
        return out;
    }
  }
};

inline QPoly parse_poly(const std::string& s) {
  PolyParser p{s};
  QPoly out = p.parse_expr();
  p.skip_ws();
  if (p.i != s.size()) p.err("unexpected input");
  return out;
}

inline Rat parse_rat(const std::string& s) {
  PolyParser p{s};
  QPoly out = p.parse_expr();
  p.skip_ws();
  if (p.i != s.size()) p.err("unexpected input");
  if (q_deg(out) > 0) {
    p.i = 0;
    p.err("expected a constant literal");
  }
  return out.empty() ? Rat(0) : out[0];
}

// Schema helpers: every failure names the offending path.
[[noreturn]] inline void schema(const std::string& path, const std::string& expected) {
  fail(errc::schema_error, path + ": expected " + expected);
}

inline const json& need(const json& j, const std::string& path, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(path + "." + key, "a value");
  return j.at(key);
}

inline long need_int(const json& j, const std::string& path, const char* key) {
  const json& v = need(j, path, key);
  if (!v.is_number_integer()) schema(path + "." + key, "an integer");
  return v.get<long>();
}

inline std::optional<long> opt_int(const json& j, const std::string& path, const char* key) {
  if (!j.is_object() || !j.contains(key)) return std::nullopt;
  const json& v = j.at(key);
  if (!v.is_number_integer()) schema(path + "." + key, "an integer");
  return v.get<long>();
}

inline std::string need_str(const json& j, const std::string& path, const char* key) {
  const json& v = need(j, path, key);
  if (!v.is_string()) schema(path + "." + key, "a string");
  return v.get<std::string>();
}

inline std::string literal_of(const json& v, const std::string& path) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  schema(path, "a literal string or integer");
}

inline std::vector<std::string> literal_list(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) schema(path, "a nonempty array of literals");
  std::vector<std::string> out;
  for (size_t k = 0; k < v.size(); ++k)
    out.push_back(literal_of(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

inline Mat<QPoly> poly_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) schema(path, "a nonempty matrix");
  Mat<QPoly> out;
  for (size_t i = 0; i < v.size(); ++i) {
    auto row = literal_list(v[i], path + "[" + std::to_string(i) + "]");
    std::vector<QPoly> r;
    for (const auto& lit : row) r.push_back(parse_poly(lit));
    out.push_back(std::move(r));
  }
  return out;
}

inline Mat<Rat> rat_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) schema(path, "a nonempty matrix");
  Mat<Rat> out;
  for (size_t i = 0; i < v.size(); ++i) {
    auto row = literal_list(v[i], path + "[" + std::to_string(i) + "]");
    std::vector<Rat> r;
    for (const auto& lit : row) r.push_back(parse_rat(lit));
    out.push_back(std::move(r));
  }
  return out;
}

inline FpRatFun to_fp(const QPoly& f, long p, const std::string& path) {
  std::vector<long> cs(f.size());
  for (size_t k = 0; k < f.size(); ++k) {
    if (rat_den(f[k]) != 1) schema(path, "integer coefficients over the u-ring");
    cs[k] = static_cast<long>(((rat_num(f[k]) % p) + p) % p);
  }
  return fprf(fp_make(p, std::move(cs)));
}

struct RingSpec {
  std::string kind;
  long p = 0;
  long n = 1;
  long nu = 8;
};

inline RingSpec ring_spec(const json& doc, std::initializer_list<const char*> kinds) {
  const json& ring = need(doc, "$", "ring");
  RingSpec out;
  out.kind = need_str(ring, "ring", "kind");
  bool ok = false;
  for (const char* k : kinds) ok = ok || out.kind == k;
  if (!ok) schema("ring.kind", "one of the kinds supported by this command");
  out.p = need_int(ring, "ring", "p");
  if (out.p < 2) schema("ring.p", "a prime >= 2");
  if (auto n = opt_int(ring, "ring", "n")) out.n = *n;
  if (auto nu = opt_int(ring, "ring", "u_precision")) out.nu = *nu;
  return out;
}

inline EisensteinPoly eisenstein_of(const json& doc, long p) {
  if (!doc.contains("eisenstein")) schema("$.eisenstein", "a coefficient list");
  auto lits = literal_list(doc.at("eisenstein"), "eisenstein");
  QPoly f;
  for (const auto& lit : lits) f.push_back(parse_rat(lit));
  return make_eisenstein(std::move(f), Int(p));
}

inline const json& payload_of(const json& doc, const char* kind) {
  const json& obj = need(doc, "$", "object");
  if (need_str(obj, "object", "kind") != kind) schema("object.kind", std::string("\"") + kind + "\"");
  return need(obj, "object", "payload");
}

inline std::string cert_string(const Certificate& c) {
  return c.exhaustive ? "exhaustive" : "bounded: " + c.bound;
}

inline std::string fprf_to_string(const FpRatFun& x) {
  std::string s = fp_to_string(x.num);
  if (!(x.den.c.size() == 1 && x.den.c[0] == 1)) s += "/(" + fp_to_string(x.den) + ")";
  return s;
}

inline std::string poly_list_string(const std::vector<FpRatFun>& v) {
  std::string s = "(";
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fprf_to_string(v[i]);
  }
  return s + ")";
}

inline FlagFiltration<Rat> rat_flag(const json& v, size_t dim, const std::string& path) {
  if (!v.is_object()) schema(path, "a flag object");
  const json& jb = need(v, path, "breaks");
  const json& js = need(v, path, "steps");
  if (!jb.is_array() || !js.is_array() || jb.size() != js.size())
    schema(path, "matching breaks/steps arrays");
  std::vector<Rat> breaks;
  std::vector<Mat<Rat>> steps;
  for (size_t i = 0; i < jb.size(); ++i) {
    breaks.push_back(parse_rat(literal_of(jb[i], path + ".breaks")));
    steps.push_back(rat_matrix(js[i], path + ".steps[" + std::to_string(i) + "]"));
  }
  return FlagFiltration<Rat>(dim, std::move(breaks), std::move(steps), Rat(1));
}

}  // namespace cli_detail

// ---- command handlers ----

inline Report run_type(const json& doc) {
  const json& payload = cli_detail::payload_of(doc, "types");
  auto lits = cli_detail::literal_list(cli_detail::need(payload, "payload", "entries"),
                                       "payload.entries");
  std::vector<Rat> e;
  for (const auto& lit : lits) e.push_back(cli_detail::parse_rat(lit));
  TypeVector t(std::move(e));
  Report out;
  out.lines.push_back("type: " + type_to_string(t));
  out.lines.push_back("degree: " + rat_to_string(degree(t)));
  out.series.push_back({"type", polygon_of(t)});
  out.certificate = "exact";
  return out;
}

inline Report run_pos(const json& doc) {
  auto ring = cli_detail::ring_spec(doc, {"u", "p", "eisenstein"});
  const json& payload = cli_detail::payload_of(doc, "lattice_pair");
  Mat<QPoly> m1 = cli_detail::poly_matrix(cli_detail::need(payload, "payload", "m1"),
                                          "payload.m1");
  Mat<QPoly> m2 = cli_detail::poly_matrix(cli_detail::need(payload, "payload", "m2"),
                                          "payload.m2");
  TypeVector t;
  if (ring.kind == "u") {
    UContext ctx{ring.p, std::nullopt};
    auto conv = [&](const Mat<QPoly>& m, const char* path) {
      Mat<FpRatFun> out;
      for (const auto& row : m) {
        std::vector<FpRatFun> r;
        for (const auto& x : row) r.push_back(cli_detail::to_fp(x, ring.p, path));
        out.push_back(std::move(r));
      }
      return DvrLattice<UContext>{std::move(out)};
    };
    t = pos(ctx, conv(m1, "payload.m1"), conv(m2, "payload.m2"));
  } else {
    auto conv = [&](const Mat<QPoly>& m) {
      Mat<QRatFun> out;
      for (const auto& row : m) {
        std::vector<QRatFun> r;
        for (const auto& x : row) r.push_back(qrf(x));
        out.push_back(std::move(r));
      }
      return out;
    };
    if (ring.kind == "p") {
      PContext ctx{Int(ring.p)};
      t = pos(ctx, DvrLattice<PContext>{conv(m1)}, DvrLattice<PContext>{conv(m2)});
    } else {
      EContext ctx{cli_detail::eisenstein_of(doc, ring.p)};
      t = pos(ctx, DvrLattice<EContext>{conv(m1)}, DvrLattice<EContext>{conv(m2)});
    }
  }
  Report out;
  out.lines.push_back("pos: " + type_to_string(t));
  out.lines.push_back("nu: " + rat_to_string(degree(t)));
  out.series.push_back({"pos", polygon_of(t)});
  out.certificate = "exact";
  return out;
}

inline Report run_hn(const json& doc, const CliOptions& opts) {
  auto ring = cli_detail::ring_spec(doc, {"u"});
  const json& payload = cli_detail::payload_of(doc, "phimodule");
  Mat<QPoly> raw = cli_detail::poly_matrix(cli_detail::need(payload, "payload", "matrix"),
                                           "payload.matrix");
  Mat<FpRatFun> a;
  for (const auto& row : raw) {
    std::vector<FpRatFun> r;
    for (const auto& x : row) r.push_back(cli_detail::to_fp(x, ring.p, "payload.matrix"));
    a.push_back(std::move(r));
  }
  auto m = pt_make(ring.p, ring.nu, std::move(a));
  std::optional<long> sd = opts.search_degree;
  auto pf = pt_fargues(m, sd);
  Report out;
  out.lines.push_back("t_H: " + type_to_string(pt_hodge_type(m)));
  out.lines.push_back("t_F1: " + type_to_string(pf.polygon));
  for (size_t i = 0; i < pf.flag.steps.size(); ++i) {
    const auto& step = pf.flag.steps[i];
    out.lines.push_back("flag[" + std::to_string(i) + "]: " +
                        (step.whole ? "M" : cli_detail::poly_list_string(step.line.w)) +
                        "  slope " + rat_to_string(pf.flag.slopes[i]));
  }
  out.series.push_back({"t_H", polygon_of(pt_hodge_type(m))});
  out.series.push_back({"t_F1", polygon_of(pf.polygon)});
  out.certificate = cli_detail::cert_string(pf.flag.cert) + ", N_u=" + std::to_string(ring.nu);
  return out;
}

inline KisinModule kisin_of(const json& doc, const CliOptions& opts) {
  auto ring = cli_detail::ring_spec(doc, {"kisin"});
  const json& payload = cli_detail::payload_of(doc, "kisin");
  Mat<QPoly> a = cli_detail::poly_matrix(cli_detail::need(payload, "payload", "matrix"),
                                         "payload.matrix");
  long twist = cli_detail::opt_int(payload, "payload", "twist").value_or(0);
  long n_max = 4;
  if (doc.contains("options"))
    if (auto v = cli_detail::opt_int(doc.at("options"), "options", "n_max")) n_max = *v;
  if (opts.nmax) n_max = *opts.nmax;
  return k_make(ring.p, std::move(a), cli_detail::eisenstein_of(doc, ring.p), twist, n_max,
                ring.nu);
}

inline Report run_kisin(const std::string& sub, const json& doc, const CliOptions& opts) {
  KisinModule m = kisin_of(doc, opts);
  Report out;
  out.certificate = "N_u=" + std::to_string(m.N_u) + ", n_max=" + std::to_string(m.n_max);
  auto push = [&](const std::string& name, const PolygonFunction& f) {
    out.series.push_back({name, f});
  };
  if (sub == "polygon" || sub == "limit") {
    push("t_H", polygon_of(k_hodge_type(m)));
    push("t_F1", k_fargues_n(m, 1));
    if (sub == "polygon") {
      long n = opts.n.value_or(m.n_max);
      if (n != 1) push("t_F" + std::to_string(n), k_fargues_n(m, n));
      out.lines.push_back("t_F" + std::to_string(n) + " breakpoints:");
      for (const auto& [x, y] : out.series.back().poly.breakpoints())
        out.lines.push_back("  (" + rat_to_string(x) + ", " + rat_to_string(y) + ")");
    } else {
      push("t_F" + std::to_string(m.n_max), k_fargues_n(m, m.n_max));
      push("t_F_limit", k_fargues_limit(m));
      out.lines.push_back("levels: 1.." + std::to_string(m.n_max));
      out.lines.push_back("limit degree: " +
                          rat_to_string(out.series.back().poly.value_end()));
    }
    return out;
  }
  if (sub == "theta") {
    auto step = k_theta_step(m);
    out.lines.push_back("k0: " + std::to_string(step.k0));
    out.lines.push_back("refined: " + std::string(step.refined ? "true" : "false"));
    out.lines.push_back("theta rank: " + std::to_string(step.theta.r));
    out.lines.push_back("kpart rank: " + std::to_string(step.kpart.r));
    push("t_F1", k_fargues_n(m, 1));
    if (step.theta.r > 0) push("theta t_F1", k_fargues_n(step.theta, 1));
    return out;
  }
  if (sub == "decompose") {
    auto dec = k_hn_decompose(m);
    out.lines.push_back("steps: " + std::to_string(dec.steps) + " (bound " +
                        std::to_string(dec.step_bound) + ")");
    out.lines.push_back("witness p-valuation: " + std::to_string(dec.witness_pval));
    out.lines.push_back("envelope constant: " + rat_to_string(dec.envelope_c));
    std::string slopes = "(";
    for (size_t i = 0; i < dec.flag.size(); ++i) {
      if (i) slopes += ", ";
      slopes += rat_to_string(dec.flag[i].slope);
    }
    out.lines.push_back("flag slopes: " + slopes + ")");
    push("t_H", polygon_of(k_hodge_type(m)));
    push("t_F1", k_fargues_n(m, 1));
    push("hn t_F1", k_fargues_n(dec.n, 1));
    return out;
  }
  cli_detail::schema("command", "a kisin subcommand polygon|limit|theta|decompose");
}

inline Isocrystal isocrystal_of(const json& doc, const char* kind) {
  auto ring = cli_detail::ring_spec(doc, {"p"});
  const json& payload = cli_detail::payload_of(doc, kind);
  Mat<Rat> b = cli_detail::rat_matrix(cli_detail::need(payload, "payload", "b"), "payload.b");
  long s = cli_detail::opt_int(payload, "payload", "s").value_or(1);
  return iso_make(Int(ring.p), std::move(b), s);
}

inline Report run_newton(const json& doc) {
  auto d = isocrystal_of(doc, "isocrystal");
  Report out;
  TypeVector t = newton_type(d);
  out.lines.push_back(type_to_string(t));
  out.lines.push_back("kottwitz: " + std::to_string(kottwitz_point(d)));
  out.series.push_back({"t_N", polygon_of(t)});
  out.certificate = "exact";
  return out;
}

inline Report run_mazur(const json& doc) {
  auto d = isocrystal_of(doc, "isocrystal");
  const json& payload = cli_detail::payload_of(doc, "isocrystal");
  WittLattice y{cli_detail::rat_matrix(cli_detail::need(payload, "payload", "lattice"),
                                       "payload.lattice")};
  TypeVector th = lattice_hodge_type(d, y);
  TypeVector tni = involution(newton_type(d));
  Report out;
  out.lines.push_back("t_N^i: " + type_to_string(tni));
  out.lines.push_back("t_H(y): " + type_to_string(th));
  out.lines.push_back(std::string("mazur: ") + (mazur_check(d, y) ? "true" : "false"));
  out.series.push_back({"t_N^i", polygon_of(tni)});
  out.series.push_back({"t_H", polygon_of(th)});
  out.certificate = "exact";
  return out;
}

inline Report run_xmu(const json& doc, const CliOptions& opts) {
  auto d = isocrystal_of(doc, "isocrystal");
  const json& payload = cli_detail::payload_of(doc, "isocrystal");
  auto lits = cli_detail::literal_list(cli_detail::need(payload, "payload", "mu"), "payload.mu");
  std::vector<Rat> e;
  for (const auto& lit : lits) e.push_back(cli_detail::parse_rat(lit));
  TypeVector mu(std::move(e));
  long bound = 2;
  if (doc.contains("options"))
    if (auto v = cli_detail::opt_int(doc.at("options"), "options", "bounds")) bound = *v;
  if (opts.bound) bound = *opts.bound;
  auto set = lattice_set(d, mu, bound);
  Report out;
  out.lines.push_back("lattices: " + std::to_string(set.size()));
  out.lines.push_back(std::string("nonempty: ") + (set.empty() ? "false" : "true"));
  out.lines.push_back(std::string("criterion: ") + (gashi_criterion(d, mu) ? "true" : "false"));
  out.lines.push_back(std::string("mu-ordinary: ") + (is_mu_ordinary(d, mu) ? "true" : "false"));
  out.certificate = "exhaustive window, bound=" + std::to_string(bound);
  return out;
}

inline Report run_wa(const json& doc) {
  auto d = isocrystal_of(doc, "filtered");
  const json& payload = cli_detail::payload_of(doc, "filtered");
  auto fd = fi_make(d, cli_detail::rat_flag(cli_detail::need(payload, "payload", "flag"), d.r,
                                            "payload.flag"));
  Report out;
  bool wa = fi_is_weakly_admissible(fd);
  out.lines.push_back("deg: " + rat_to_string(fi_deg(fd)));
  out.lines.push_back(std::string("weakly admissible: ") + (wa ? "true" : "false"));
  out.series.push_back({"t_H", polygon_of(fi_hodge_type(fd))});
  if (wa) {
    auto hn = fi_fargues(fd);
    std::string slopes = "(";
    for (size_t i = 0; i < hn.slopes.size(); ++i) {
      if (i) slopes += ", ";
      slopes += rat_to_string(hn.slopes[i]);
    }
    out.lines.push_back("fargues slopes: " + slopes + ")");
    out.series.push_back({"t_F", polygon_of(hn.polygon)});
    out.certificate = cli_detail::cert_string(hn.cert);
  } else {
    out.certificate = "exhaustive";
  }
  return out;
}

inline Report run_phicris(const json& doc) {
  auto d = isocrystal_of(doc, "isocrystal");
  const json& payload = cli_detail::payload_of(doc, "isocrystal");
  WittLattice y{cli_detail::rat_matrix(cli_detail::need(payload, "payload", "lattice"),
                                       "payload.lattice")};
  long s = cli_detail::opt_int(payload, "payload", "s_power").value_or(1);
  WittLattice out_lat = phi_cris(d, y, s);
  Report out;
  out.lines.push_back("phi_cris^" + std::to_string(s) + "(y) basis:");
  for (const auto& row : out_lat.basis) {
    std::string line = "  [";
    for (size_t j = 0; j < row.size(); ++j) {
      if (j) line += ", ";
      line += rat_to_string(row[j]);
    }
    out.lines.push_back(line + "]");
  }
  out.certificate = "exact";
  return out;
}

inline Report run_abelian(const json& doc) {
  const json& payload = cli_detail::payload_of(doc, "abelian");
  long size = cli_detail::need_int(payload, "payload", "size");
  long iota0 = cli_detail::opt_int(payload, "payload", "iota0").value_or(0);
  if (size < 1 || iota0 < 0 || iota0 >= size) cli_detail::schema("payload.size", "1 <= iota0 < size");
  auto s = galois_cyclic(static_cast<size_t>(size), static_cast<size_t>(iota0));
  const json& jw = cli_detail::need(payload, "payload", "weights");
  if (!jw.is_array() || jw.empty()) cli_detail::schema("payload.weights", "a nonempty array");
  std::vector<CharacterFunction> x;
  for (size_t i = 0; i < jw.size(); ++i) {
    auto lits = cli_detail::literal_list(jw[i], "payload.weights[" + std::to_string(i) + "]");
    std::vector<Rat> v;
    for (const auto& lit : lits) v.push_back(cli_detail::parse_rat(lit));
    x.push_back(cf_make(s, std::move(v)));
  }
  Report out;
  out.lines.push_back("t_H: " + type_to_string(push_to_weights(x, WeightKind::hodge)));
  out.lines.push_back("t_N: " + type_to_string(push_to_weights(x, WeightKind::newton)));
  out.lines.push_back(std::string("ordinary: ") + (is_ordinary_abelian(x) ? "true" : "false"));
  out.certificate = "exhaustive";
  return out;
}

inline Report run_command(const std::string& command, const json& doc, const CliOptions& opts) {
  if (command == "type") return run_type(doc);
  if (command == "pos") return run_pos(doc);
  if (command == "hn") return run_hn(doc, opts);
  if (command == "newton") return run_newton(doc);
  if (command == "mazur") return run_mazur(doc);
  if (command == "xmu") return run_xmu(doc, opts);
  if (command == "wa") return run_wa(doc);
  if (command == "phicris") return run_phicris(doc);
  if (command == "abelian") return run_abelian(doc);
  if (command.rfind("kisin ", 0) == 0) return run_kisin(command.substr(6), doc, opts);
  cli_detail::schema("command", "a known command");
}

// Batch documents are arrays processed in input order; series names are
// prefixed so one report carries every polygon deterministically.
inline Report run_document(const std::string& command, const json& doc, const CliOptions& opts) {
  if (!doc.is_array()) return run_command(command, doc, opts);
  Report out;
  for (size_t k = 0; k < doc.size(); ++k) {
    Report r = run_command(command, doc[k], opts);
    std::string tag = "[" + std::to_string(k) + "] ";
    for (const auto& line : r.lines) out.lines.push_back(tag + line);
    for (auto& s : r.series) out.series.push_back({tag + s.name, std::move(s.poly)});
    if (!out.certificate.empty()) out.certificate += "; ";
    out.certificate += tag + r.certificate;
  }
  return out;
}

inline std::string emit_text(const Report& r) {
  std::string out;
  for (const auto& line : r.lines) out += line + "\n";
  out += "certificate: " + r.certificate + "\n";
  return out;
}

inline std::string emit_csv(const Report& r) {
  std::string out = "x,y,series\n";
  for (const auto& s : r.series)
    for (const auto& [x, y] : s.poly.breakpoints())
      out += rat_to_string(x) + "," + rat_to_string(y) + "," + s.name + "\n";
  return out;
}

inline std::string emit_svg(const Report& r) {
  const double w = 480, h = 360, margin = 48;
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  bool first = true;
  for (const auto& s : r.series)
    for (const auto& [x, y] : s.poly.breakpoints()) {
      double xd = static_cast<double>(x), yd = static_cast<double>(y);
      if (first || xd < xmin) xmin = xd;
      if (first || xd > xmax) xmax = xd;
      if (first || yd < ymin) ymin = yd;
      if (first || yd > ymax) ymax = yd;
      first = false;
    }
  if (xmax == xmin) xmax = xmin + 1;
  if (ymax == ymin) ymax = ymin + 1;
  auto sx = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (w - 2 * margin); };
  auto sy = [&](double y) { return h - margin - (y - ymin) / (ymax - ymin) * (h - 2 * margin); };
  const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << w
     << "\" height=\"" << h << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
     << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
  for (size_t i = 0; i < r.series.size(); ++i) {
    const char* color = colors[i % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : r.series[i].poly.breakpoints())
      os << sx(static_cast<double>(x)) << "," << sy(static_cast<double>(y)) << " ";
    os << "\"/>\n";
    double ly = 16 + 16 * static_cast<double>(i);
    os << "<rect x=\"" << w - margin - 120 << "\" y=\"" << ly - 9
       << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n"
       << "<text x=\"" << w - margin - 106 << "\" y=\"" << ly << "\" font-size=\"12\">"
       << r.series[i].name << "</text>\n";
  }
  os << "<text x=\"" << margin << "\" y=\"" << h - 12 << "\" font-size=\"11\">certificate: "
     << r.certificate << "</text>\n</svg>\n";
  return os.str();
}

inline std::string emit(const Report& r, const std::string& format) {
  if (format == "text") return emit_text(r);
  if (format == "csv") return emit_csv(r);
  if (format == "svg") return emit_svg(r);
  cli_detail::schema("format", "text, csv or svg");
}

inline json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) fail(errc::parse_error, "input is not well-formed JSON");
  return doc;
}

}  // namespace slopeforge
