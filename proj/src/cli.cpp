#include "gcg/cli.hpp"

#include <chrono>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "gcg/linalg.hpp"

#ifndef GCG_VERSION
#define GCG_VERSION "0.0.0"
#endif

namespace gcg::cli {

std::string tool_version() { return GCG_VERSION; }

namespace {

std::string at(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(at(path, key), "missing required field");
  return *it;
}

const Json* optional_field(const Json& obj, const std::string& key) {
  if (!obj.is_object()) return nullptr;
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw InputError(path, "expected an array");
  return j;
}

int require_int(const Json& j, const std::string& path) {
  if (!j.is_number_integer()) throw InputError(path, "expected an integer");
  return j.get<int>();
}

Complex constant_of(const Poly& p, const std::string& path) {
  if (!p.is_constant()) throw InputError(path, "expected a constant");
  return p.constant_value();
}

CMatrix constant_matrix(const PMatrix& m, const std::string& path) {
  return m.map([&](const Poly& p) { return constant_of(p, path); });
}

bool is_constant(const PMatrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (!m(i, j).is_constant()) return false;
    }
  }
  return true;
}

bool is_constant(const PForm& f) {
  for (const auto& [mask, c] : f.terms()) {
    if (!c.is_constant()) return false;
  }
  return true;
}

CForm constant_form(const PForm& f, const std::string& path) {
  if (!is_constant(f)) throw InputError(path, "expected constant coefficients");
  return eval(f, Point(f.dim(), Complex(0)));
}

CGenVector constant_section(const PSection& s, const std::string& path) {
  for (const auto& c : s.flat()) constant_of(c, path);
  return eval(s, Point(s.dim(), Complex(0)));
}

// Factor of a basis entry: an index, "d<name>" for forms, "d/d<name>" for multivectors.
PForm basis_factor(const Chart& c, const Json& b, const std::string& path, Variance v) {
  const int m = c.dim();
  if (b.is_number_integer()) {
    int i = b.get<int>();
    if (i < 1 || i > m) throw InputError(path, "basis index out of range 1.." + std::to_string(m));
    return PForm::monomial(m, Mask{1} << (i - 1), Poly(1), v);
  }
  if (!b.is_string()) throw InputError(path, "basis entry must be an index or a name");
  std::string s = b.get<std::string>();
  const std::string prefix = v == Variance::form ? "d" : "d/d";
  if (s.rfind(prefix, 0) != 0) throw InputError(path, "basis name must start with '" + prefix + "'");
  std::string name = s.substr(prefix.size());
  for (int i = 0; i < m; ++i) {
    if (c.names()[i] == name) return PForm::monomial(m, Mask{1} << i, Poly(1), v);
  }
  for (int j = 0; j < c.complex_dim(); ++j) {
    const auto& z = c.complex_names()[j];
    if (name == z) return v == Variance::form ? c.dz(j) : PForm::linear(c.d_dz(j), v);
    if (name == z + "bar") return v == Variance::form ? c.dzbar(j) : PForm::linear(c.d_dzbar(j), v);
  }
  throw InputError(path, "unknown coordinate '" + name + "'");
}

std::mt19937_64 make_engine(std::uint64_t seed) { return std::mt19937_64(seed); }

int uniform(std::mt19937_64& eng, int lo, int hi) {
  return lo + static_cast<int>(eng() % static_cast<std::uint64_t>(hi - lo + 1));
}

Poly random_poly(std::mt19937_64& eng, int m, int degree) {
  Poly p = Poly(0).with_nvars(m);
  for (const auto& mono : monomials_up_to(m, degree)) {
    if (uniform(eng, 0, 1) == 0) continue;
    int c = uniform(eng, -2, 2);
    if (c != 0) p += Poly::monomial(m, mono, Complex(c));
  }
  return p;
}

PSection random_section(std::mt19937_64& eng, int m, int degree) {
  PVector x, xi;
  for (int i = 0; i < m; ++i) x.push_back(random_poly(eng, m, degree));
  for (int i = 0; i < m; ++i) xi.push_back(random_poly(eng, m, degree));
  return PSection(x, xi);
}

PForm random_two_form(std::mt19937_64& eng, int m, int degree) {
  PForm b(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) b.add((Mask{1} << i) | (Mask{1} << j), random_poly(eng, m, degree));
  }
  return b;
}

// A point where some polynomial in the list is nonzero.
std::optional<Point> nonzero_point(const std::vector<Poly>& polys, int m, std::uint64_t seed) {
  std::vector<Point> tries{Point(m, Complex(0)), Point(m, Complex(1))};
  auto eng = make_engine(seed ^ 0x9e3779b97f4a7c15ULL);
  for (int t = 0; t < 64; ++t) {
    Point p(m);
    for (auto& x : p) x = Complex(uniform(eng, -5, 5));
    tries.push_back(p);
  }
  for (const auto& p : tries) {
    for (const auto& q : polys) {
      if (!q.eval(p).is_zero()) return p;
    }
  }
  return std::nullopt;
}

// Point entry of a type map, with complex coordinates when the chart has them.
Json point_entry(const Chart& c, const Point& p, int type) {
  Json e{{"point", encode_point(p)}, {"type", type}};
  if (c.complex_dim() > 0) {
    Point z;
    for (auto [a, b] : c.pairs()) z.push_back(p[a] + Complex::i() * p[b]);
    e["z"] = encode_point(z);
  }
  return e;
}

Json encode_basis(const Chart& c, const std::vector<CGenVector>& b) {
  Json out = Json::array();
  for (const auto& v : b) out.push_back(encode_section(c, to_poly(v)));
  return out;
}

Json encode_cvectors(const Chart& c, const std::vector<CVector>& vs) {
  Json out = Json::array();
  for (const auto& v : vs) {
    PVector p;
    for (const auto& x : v) p.push_back(Poly(x));
    out.push_back(encode_vector(c, p));
  }
  return out;
}

Json encode_cmatrix(const Chart& c, const CMatrix& m) { return encode_matrix(c, to_poly(m)); }
Json encode_cform(const Chart& c, const CForm& f) { return encode_form(c, to_poly(f)); }

Json encode_entries(const Chart& c, const std::vector<TensorEntry>& t) {
  Json out = Json::array();
  for (const auto& e : t) out.push_back({{"i", e.i}, {"j", e.j}, {"k", e.k}, {"value", encode_scalar(c, e.value)}});
  return out;
}

struct Outcome {
  bool pass = true;
  Json certificate = Json::object();
  Json counterexample = Json::object();
};

Outcome fail_with(Json ce) {
  Outcome o;
  o.pass = false;
  o.counterexample = std::move(ce);
  return o;
}

struct Context {
  const Job& job;
  const Chart& chart;
  const Json& in;
  int m() const { return chart.dim(); }
  std::string path(const std::string& key) const { return "/input/" + key; }
  const Json& req(const std::string& key) const { return require(in, key, "/input"); }
  const Json* opt(const std::string& key) const { return optional_field(in, key); }

  std::vector<PSection> sections(const std::string& key) const {
    const Json& a = require_array(req(key), path(key));
    std::vector<PSection> out;
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(decode_section(chart, a[i], at(path(key), i)));
    return out;
  }
  std::vector<CGenVector> basis(const std::string& key) const {
    std::vector<CGenVector> out;
    auto s = sections(key);
    for (std::size_t i = 0; i < s.size(); ++i) out.push_back(constant_section(s[i], at(path(key), i)));
    return out;
  }
  PForm form(const std::string& key, Variance v = Variance::form) const {
    return decode_form(chart, req(key), path(key), v);
  }
  PForm twist() const {
    const Json* h = opt("h");
    return h ? decode_form(chart, *h, path("h")) : PForm(m());
  }
  PMatrix matrix(const std::string& key, int rows, int cols) const {
    return decode_matrix(chart, req(key), path(key), rows, cols);
  }
  // Raw 2m×2m matrix, or {"symplectic": ω}, {"complex": J}, {"deformed": β}.
  PMatrix structure() const {
    const Json& j = req("j");
    const int m = this->m();
    if (j.is_array()) return matrix("j", 2 * m, 2 * m);
    if (const Json* w = optional_field(j, "symplectic")) {
      return j_symplectic_field(decode_matrix(chart, *w, path("j/symplectic"), m, m));
    }
    if (const Json* c = optional_field(j, "complex")) {
      PMatrix jc = decode_matrix(chart, *c, path("j/complex"), m, m);
      PMatrix r(2 * m, 2 * m);
      r.set_block(0, 0, jc.map([](const Poly& p) { return -p; }));
      r.set_block(m, m, jc.transpose());
      return r;
    }
    if (const Json* b = optional_field(j, "deformed")) {
      return deform_by_bivector(chart, two_form_matrix(decode_form(chart, *b, path("j/deformed"), Variance::multivector))).j;
    }
    throw InputError(path("j"), "expected a matrix or one of symplectic, complex, deformed");
  }
  std::vector<Point> samples(const Chart& c) const {
    if (!job.options.samples) return {};
    return decode_samples(c, *job.options.samples, "/options/samples");
  }
  std::vector<Point> samples() const { return samples(chart); }
};

// ---- commands on a single fiber ----

Outcome cmd_check_isotropic(const Context& cx) {
  auto b = cx.basis("basis");
  if (auto v = find_isotropy_violation(b)) {
    Json ce{{"identity", v->i >= 0 ? "isotropy" : "rank"}, {"rank", v->rank}};
    if (v->i >= 0) {
      ce["i"] = v->i;
      ce["j"] = v->j;
      ce["value"] = v->value.str();
    }
    return fail_with(ce);
  }
  auto l = MaxIsotropic::from_basis(b);
  Outcome o;
  o.certificate = {{"dim", l.dim()},
                   {"type", l.type()},
                   {"parity", l.parity()},
                   {"real", l.is_real()},
                   {"delta", encode_cvectors(cx.chart, l.delta())},
                   {"eps", encode_cmatrix(cx.chart, l.eps())},
                   {"annihilator", encode_cvectors(cx.chart, l.annihilator())}};
  return o;
}

Outcome cmd_canonical_form(const Context& cx) {
  Outcome o;
  if (cx.opt("j")) {
    auto s = GCStructure::validate(constant_matrix(cx.structure(), cx.path("j")));
    auto d = canonical_spinor(s);
    o.certificate = {{"type", d.k},
                     {"omega_k", encode_cform(cx.chart, d.omega_k)},
                     {"b", encode_cmatrix(cx.chart, d.b_form())},
                     {"omega", encode_cmatrix(cx.chart, d.omega_form())},
                     {"spinor", encode_cform(cx.chart, d.generator)}};
    return o;
  }
  auto l = cx.opt("spinor") ? null_space_isotropic(constant_form(cx.form("spinor"), cx.path("spinor")))
                            : MaxIsotropic::from_basis(cx.basis("basis"));
  auto g = graph_over_cotangent(l);
  o.certificate = {{"type", l.type()},
                   {"delta", encode_cvectors(cx.chart, l.delta())},
                   {"eps", encode_cmatrix(cx.chart, l.eps())},
                   {"reconstructed", encode_basis(cx.chart, l.reconstruct())},
                   {"cotangent_graph",
                    {{"F", encode_cvectors(cx.chart, g.F)},
                     {"gamma", encode_cmatrix(cx.chart, g.gamma)},
                     {"beta", encode_cmatrix(cx.chart, g.beta)}}}};
  return o;
}

Outcome cmd_spinor_of(const Context& cx) {
  auto l = MaxIsotropic::from_basis(cx.basis("basis"));
  Outcome o;
  o.certificate = {{"spinor", encode_cform(cx.chart, pure_spinor(l))}, {"type", l.type()}};
  return o;
}

Outcome cmd_null_space(const Context& cx) {
  CForm phi = constant_form(cx.form("spinor"), cx.path("spinor"));
  auto ns = null_space(phi);
  if (!ns.pure) {
    return fail_with({{"identity", "purity"},
                      {"null_space_dim", ns.basis.size()},
                      {"null_space", encode_basis(cx.chart, ns.basis)}});
  }
  auto l = MaxIsotropic::from_basis(ns.basis);
  Outcome o;
  o.certificate = {{"basis", encode_basis(cx.chart, ns.basis)}, {"type", l.type()}};
  return o;
}

Outcome cmd_mukai(const Context& cx) {
  CForm s = constant_form(cx.form("s"), cx.path("s"));
  CForm t = constant_form(cx.form("t"), cx.path("t"));
  Outcome o;
  o.certificate = {{"pairing", encode_cform(cx.chart, mukai_pair(s, t))}, {"scalar", mukai_scalar(s, t).str()}};
  return o;
}

Transform decode_transform(const Context& cx) {
  const Json& t = cx.req("transform");
  const std::string p = cx.path("transform");
  std::string kind = require(t, "kind", p).is_string() ? t["kind"].get<std::string>() : "";
  CMatrix mat = constant_matrix(decode_matrix(cx.chart, require(t, "matrix", p), at(p, "matrix"), cx.m(), cx.m()),
                                at(p, "matrix"));
  if (kind == "B") {
    if (!mat.is_antisymmetric()) throw InputError(at(p, "matrix"), "B must be antisymmetric");
    return BTransform{mat};
  }
  if (kind == "beta") {
    if (!mat.is_antisymmetric()) throw InputError(at(p, "matrix"), "beta must be antisymmetric");
    return BetaTransform{mat};
  }
  if (kind == "gl") return GLTransform{mat};
  throw InputError(at(p, "kind"), "kind must be one of B, beta, gl");
}

Outcome cmd_transform(const Context& cx) {
  Transform t = decode_transform(cx);
  Outcome o;
  o.certificate["matrix"] = encode_cmatrix(cx.chart, transform_matrix(t));
  if (cx.opt("basis")) {
    std::vector<CGenVector> out;
    for (const auto& v : cx.basis("basis")) out.push_back(apply_transform(t, v));
    o.certificate["basis"] = encode_basis(cx.chart, out);
  }
  if (cx.opt("spinor")) {
    o.certificate["spinor"] = encode_cform(cx.chart, spin_lift(t, constant_form(cx.form("spinor"), cx.path("spinor"))));
  }
  return o;
}

Outcome cmd_tensor(const Context& cx) {
  auto a = MaxIsotropic::from_basis(cx.basis("a"));
  auto b = MaxIsotropic::from_basis(cx.basis("b"));
  auto t = tensor_product(a, b);
  Outcome o;
  o.certificate = {{"basis", encode_basis(cx.chart, t.basis())}, {"type", t.type()}};
  return o;
}

Outcome cmd_validate_gcs(const Context& cx) {
  PMatrix j = cx.structure();
  Outcome o;
  if (is_constant(j)) {
    CMatrix c = constant_matrix(j, cx.path("j"));
    if (auto v = GCStructure::violation(c)) return fail_with({{"identity", *v}});
    auto s = GCStructure::validate(c);
    o.certificate = {{"type", type_of(s)}, {"eigenbundle", encode_basis(cx.chart, eigenbundle(s).basis())}};
    return o;
  }
  if (auto v = GCField::violation(j)) return fail_with({{"identity", *v}});
  auto s = GCField::validate(j);
  Json frame = Json::array();
  for (const auto& e : s.eigenframe()) frame.push_back(encode_section(cx.chart, e));
  o.certificate = {{"eigenframe", frame}};
  return o;
}

Outcome cmd_type_map(const Context& cx) {
  auto pts = cx.samples();
  Outcome o;
  Json map = Json::array();
  if (cx.opt("j")) {
    PMatrix j = cx.structure();
    auto s = GCField::validate(j);
    if (pts.empty()) pts.push_back(Point(cx.m(), Complex(0)));
    for (const auto& p : pts) map.push_back(point_entry(cx.chart, p, type_of(s.at(p))));
  } else {
    PForm phi = cx.form("spinor");
    if (pts.empty()) pts.push_back(Point(cx.m(), Complex(0)));
    for (const auto& p : pts) {
      CForm v = eval(phi, p);
      auto ns = null_space(v);
      if (!ns.pure) {
        return fail_with({{"identity", "purity"}, {"point", encode_point(p)}, {"null_space_dim", ns.basis.size()}});
      }
      map.push_back(point_entry(cx.chart, p, MaxIsotropic::from_basis(ns.basis).type()));
    }
  }
  o.certificate = {{"types", map}};
  return o;
}

Outcome cmd_darboux(const Context& cx) {
  auto s = GCStructure::validate(constant_matrix(cx.structure(), cx.path("j")));
  auto d = darboux_point(s);
  Outcome o;
  o.certificate = {{"type", d.k},
                   {"b_tilde", encode_cmatrix(cx.chart, d.b_tilde)},
                   {"omega0", encode_cmatrix(cx.chart, d.omega0)},
                   {"delta", encode_cvectors(cx.chart, d.delta)},
                   {"n_frame", encode_cvectors(cx.chart, d.n_frame)},
                   {"omega_k", encode_cform(cx.chart, d.omega_k)},
                   {"line_equal", d.line_equal},
                   {"symplectic_on_delta", d.symplectic_on_delta},
                   {"complex_on_n", d.complex_on_n}};
  if (!(d.line_equal && d.symplectic_on_delta && d.complex_on_n)) return fail_with(o.certificate);
  return o;
}

Outcome cmd_grading(const Context& cx) {
  auto s = GCStructure::validate(constant_matrix(cx.structure(), cx.path("j")));
  CForm phi = cx.opt("spinor") ? constant_form(cx.form("spinor"), cx.path("spinor")) : canonical_spinor(s).generator;
  const int n = cx.m() / 2;
  Json comps = Json::object();
  CForm sum(cx.m());
  for (int k = -n; k <= n; ++k) {
    CForm c = grading_project(s, phi, k);
    sum += c;
    if (!c.is_zero()) comps[std::to_string(k)] = encode_cform(cx.chart, c);
  }
  Outcome o;
  o.certificate = {{"components", comps}};
  if (!(sum == phi)) return fail_with({{"identity", "sum of graded components"}, {"components", comps}});
  return o;
}

Outcome cmd_poisson_of(const Context& cx) {
  PMatrix j = cx.structure();
  Outcome o;
  PMatrix p = is_constant(j) ? to_poly(poisson_of(GCStructure::validate(constant_matrix(j, cx.path("j")))))
                             : GCField::validate(j).poisson();
  o.certificate = {{"poisson", encode_matrix(cx.chart, p)}};
  return o;
}

// ---- field commands ----

Outcome cmd_check_integrable(const Context& cx) {
  PForm phi = cx.form("spinor");
  PForm h = cx.twist();
  std::optional<PSection> witness;
  if (cx.opt("witness")) witness = decode_section(cx.chart, cx.req("witness"), cx.path("witness"));
  auto r = check_spinor_integrability(phi, h, witness, cx.job.options.degree_bound, cx.samples());
  if (r.verdict == IntegrabilityResult::Verdict::pass) {
    Outcome o;
    o.certificate = {{"witness", encode_section(cx.chart, r.witness)},
                     {"witness_in_conjugate", r.witness_in_conjugate},
                     {"supplied_witness_failed", r.supplied_witness_failed},
                     {"degree_bound", r.degree_bound},
                     {"residual", encode_form(cx.chart, r.residual)}};
    return o;
  }
  Json ce{{"identity", "d_H phi = (X + xi) . phi"},
          {"kind", r.verdict == IntegrabilityResult::Verdict::inconsistent ? "inconsistent_at_point"
                                                                          : "degree_bound_exhausted"},
          {"degree_bound", r.degree_bound},
          {"residual", encode_form(cx.chart, r.residual)},
          {"supplied_witness_failed", r.supplied_witness_failed}};
  if (r.point) {
    ce["point"] = encode_point(*r.point);
    ce["point_residual"] = encode_cform(cx.chart, r.point_residual);
  }
  return fail_with(ce);
}

Outcome cmd_nijenhuis(const Context& cx) {
  auto s = GCField::validate(cx.structure());
  auto n = nijenhuis_field(s, cx.twist());
  if (n.empty()) {
    Outcome o;
    o.certificate = {{"nijenhuis", Json::array()}};
    return o;
  }
  Json entries = Json::array();
  std::vector<Poly> all;
  for (const auto& e : n) {
    entries.push_back({{"a", e.a}, {"b", e.b}, {"value", encode_section(cx.chart, e.value)}});
    for (const auto& c : e.value.flat()) all.push_back(c);
  }
  Json ce{{"identity", "N_J = 0"}, {"entries", entries}};
  if (auto p = nonzero_point(all, cx.m(), cx.job.options.seed)) ce["point"] = encode_point(*p);
  return fail_with(ce);
}

Outcome cmd_schouten(const Context& cx) {
  Outcome o;
  if (cx.opt("beta")) {
    PForm b = cx.form("beta", Variance::multivector);
    PForm bb = schouten(b, b);
    if (bb.is_zero()) {
      o.certificate = {{"bracket", encode_form(cx.chart, bb)}};
      return o;
    }
    std::vector<Poly> all;
    for (const auto& [mask, c] : bb.terms()) all.push_back(c);
    Json ce{{"identity", "[beta, beta] = 0"}, {"bracket", encode_form(cx.chart, bb)}};
    if (auto p = nonzero_point(all, cx.m(), cx.job.options.seed)) ce["point"] = encode_point(*p);
    return fail_with(ce);
  }
  PForm a = cx.form("a", Variance::multivector);
  PForm b = cx.form("b", Variance::multivector);
  o.certificate = {{"bracket", encode_form(cx.chart, schouten(a, b))}};
  return o;
}

DiracPair decode_pair(const Context& cx) {
  const Json& f = cx.req("frames");
  if (f.is_string()) {
    if (f.get<std::string>() != "complex") throw InputError(cx.path("frames"), "unknown frame preset");
    auto [l, comp] = complex_frames(cx.chart);
    return make_dirac_pair(l, comp, cx.twist(), cx.samples());
  }
  const std::string p = cx.path("frames");
  auto read = [&](const std::string& key) {
    std::vector<PSection> out;
    const Json& a = require_array(require(f, key, p), at(p, key));
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(decode_section(cx.chart, a[i], at(at(p, key), i)));
    return out;
  };
  return make_dirac_pair(read("l"), read("complement"), cx.twist(), cx.samples());
}

Outcome cmd_maurer_cartan(const Context& cx) {
  DiracPair pair = decode_pair(cx);
  PForm eps;
  if (cx.opt("eps")) {
    eps = cx.form("eps");
  } else {
    PMatrix beta(cx.m(), cx.m()), b(cx.m(), cx.m());
    if (cx.opt("beta")) beta = two_form_matrix(cx.form("beta", Variance::multivector));
    if (cx.opt("b")) b = two_form_matrix(cx.form("b"));
    eps = dual_two_form(pair, beta, b);
  }
  auto r = maurer_cartan(pair, eps);
  Json body{{"eps", encode_form(cx.chart, eps)},
            {"d_eps", encode_form(cx.chart, r.d_eps)},
            {"bracket", encode_form(cx.chart, r.bracket)},
            {"residual", encode_form(cx.chart, r.residual)}};
  if (r.pass) {
    Outcome o;
    o.certificate = body;
    return o;
  }
  body["identity"] = "d_L eps + 1/2 [eps, eps] = 0";
  std::vector<Poly> all;
  for (const auto& [mask, c] : r.residual.terms()) all.push_back(c);
  if (auto p = nonzero_point(all, cx.m(), cx.job.options.seed)) body["point"] = encode_point(*p);
  return fail_with(body);
}

Outcome cmd_deform(const Context& cx) {
  PMatrix beta = two_form_matrix(cx.form("beta", Variance::multivector));
  auto d = deform_by_bivector(cx.chart, beta);
  auto s = GCField::validate(d.j);
  Outcome o;
  o.certificate = {{"j", encode_matrix(cx.chart, d.j)},
                   {"spinor", encode_form(cx.chart, d.spinor)},
                   {"poisson", encode_matrix(cx.chart, s.poisson())}};
  Json types = Json::array();
  for (const auto& p : cx.samples()) types.push_back(point_entry(cx.chart, p, type_of(s.at(p))));
  o.certificate["types"] = types;
  return o;
}

Outcome cmd_modular(const Context& cx) {
  PForm beta = cx.form("beta", Variance::multivector);
  PForm vol = cx.form("volume");
  Poly lf = cx.opt("log_factor") ? decode_scalar(cx.chart, cx.req("log_factor"), cx.path("log_factor"))
                                 : Poly(0).with_nvars(cx.m());
  PVector x = modular_vector_field(beta, vol, lf, cx.job.options.degree_bound.value_or(3));
  Outcome o;
  o.certificate = {{"vector_field", encode_vector(cx.chart, x)}};
  return o;
}

Outcome cmd_ham_symmetry(const Context& cx) {
  Poly f = decode_scalar(cx.chart, cx.req("f"), cx.path("f"));
  auto s = GCField::validate(cx.structure());
  auto r = hamiltonian_symmetry(f, s, cx.twist());
  Json body{{"df", encode_section(cx.chart, r.df)}};
  if (r.symmetry) {
    Outcome o;
    o.certificate = body;
    return o;
  }
  body["identity"] = "[Df, L] in L";
  body["failures"] = encode_entries(cx.chart, r.failures);
  return fail_with(body);
}

// Parameter chart and submanifold from {"params": [...], "map": [...]}.
std::pair<Chart, SubmanifoldData> decode_submanifold(const Context& cx) {
  const Json& e = cx.req("embedding");
  const std::string p = cx.path("embedding");
  const Json& names = require_array(require(e, "params", p), at(p, "params"));
  std::vector<std::string> pn;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!names[i].is_string()) throw InputError(at(at(p, "params"), i), "parameter names are strings");
    pn.push_back(names[i].get<std::string>());
  }
  Chart pc(pn);
  const Json& map = require_array(require(e, "map", p), at(p, "map"));
  if (static_cast<int>(map.size()) != cx.m()) throw InputError(at(p, "map"), "map needs one entry per coordinate");
  std::vector<Poly> emb;
  for (std::size_t i = 0; i < map.size(); ++i) emb.push_back(decode_scalar(pc, map[i], at(at(p, "map"), i)));
  PMatrix f;
  if (cx.opt("f")) f = decode_matrix(pc, cx.req("f"), cx.path("f"), pc.dim(), pc.dim());
  return {pc, SubmanifoldData::make(emb, pc.dim(), f, cx.twist())};
}

Outcome cmd_pullback(const Context& cx) {
  auto [pc, s] = decode_submanifold(cx);
  auto r = pullback_dirac(cx.sections("l"), s, cx.samples(pc));
  Json frame = Json::array();
  for (const auto& e : r.frame) frame.push_back(encode_section(pc, e));
  Json body{{"frame", frame},
            {"generic_rank", r.generic_rank},
            {"ranks", r.ranks},
            {"frame_ranks", r.frame_ranks},
            {"h", encode_form(pc, r.h)}};
  if (r.tensor.empty()) {
    Outcome o;
    o.certificate = body;
    return o;
  }
  body["identity"] = "T_L = 0 on S";
  body["tensor"] = encode_entries(pc, r.tensor);
  return fail_with(body);
}

Outcome cmd_brane_check(const Context& cx) {
  auto [pc, s] = decode_submanifold(cx);
  auto j = GCField::validate(cx.structure());
  auto r = brane_check(j, s, cx.samples(pc));
  if (!r.compatible) {
    Json ce{{"identity", "J(tau) = tau"}};
    if (r.violation) {
      ce["i"] = r.violation->i;
      ce["k"] = r.violation->k;
      ce["value"] = encode_scalar(pc, r.violation->value);
      if (auto p = nonzero_point({r.violation->value}, pc.dim(), cx.job.options.seed)) ce["point"] = encode_point(*p);
    }
    return fail_with(ce);
  }
  Json delta = Json::array();
  for (const auto& d : r.delta) delta.push_back(encode_vector(pc, d));
  Json ell = Json::array();
  for (const auto& e : r.ell) ell.push_back(encode_basis(Chart::real(cx.m()), e));
  Outcome o;
  o.certificate = {{"coisotropic", r.coisotropic},
                   {"lagrangian", r.lagrangian},
                   {"space_filling", r.space_filling},
                   {"delta", delta},
                   {"delta_rank", r.delta_rank},
                   {"delta_ranks", r.delta_ranks},
                   {"f_type_11", r.f_type_11},
                   {"basic", r.basic},
                   {"ell", ell}};
  if (r.induced_j) o.certificate["induced_j"] = encode_matrix(pc, *r.induced_j);
  if (r.holomorphic_form) {
    o.certificate["holomorphic_form"] = encode_matrix(pc, *r.holomorphic_form);
    o.certificate["holomorphic_sign"] = r.holomorphic_sign;
  }
  return o;
}

Outcome cmd_axiom_suite(const Context& cx) {
  const int m = cx.opt("dim") ? require_int(cx.req("dim"), cx.path("dim")) : 3;
  const int deg = cx.opt("degree") ? require_int(cx.req("degree"), cx.path("degree")) : 2;
  const int am = cx.opt("anomaly_dim") ? require_int(cx.req("anomaly_dim"), cx.path("anomaly_dim")) : 4;
  if (m < 1 || m > kMaxVars || am < 4 || am > kMaxVars) throw InputError(cx.path("dim"), "dimension out of range");
  const int cases = cx.job.options.cases;
  auto eng = make_engine(cx.job.options.seed);
  std::map<std::string, int> passed;
  auto fail_case = [&](int idx, const std::string& id, const Chart& c, const PSection& e1, const PSection& e2,
                       const PSection& e3, const PForm& h) {
    return fail_with({{"identity", id},
                      {"case", idx},
                      {"e1", encode_section(c, e1)},
                      {"e2", encode_section(c, e2)},
                      {"e3", encode_section(c, e3)},
                      {"h", encode_form(c, h)}});
  };
  Chart c = Chart::real(m);
  for (int t = 0; t < cases; ++t) {
    PSection e1 = random_section(eng, m, deg), e2 = random_section(eng, m, deg), e3 = random_section(eng, m, deg);
    Poly f = random_poly(eng, m, deg);
    PForm h = m >= 3 ? exterior_d(random_two_form(eng, m, deg)) : PForm(m);
    auto br = [&](const PSection& a, const PSection& b) { return courant_bracket(a, b, h); };
    PSection b12 = br(e1, e2), b13 = br(e1, e3), b23 = br(e2, e3);
    if (!(br(e1, b23) == br(b12, e3) + br(e2, b13))) return fail_case(t, "C1", c, e1, e2, e3, h);
    passed["C1"]++;
    if (!(b12.vec == lie_bracket(e1.vec, e2.vec))) return fail_case(t, "C2", c, e1, e2, e3, h);
    passed["C2"]++;
    if (!(br(e1, f * e2) == f * b12 + apply_vector(e1.vec, f) * e2)) return fail_case(t, "C3", c, e1, e2, e3, h);
    passed["C3"]++;
    if (!(apply_vector(e1.vec, inner(e2, e3)) == inner(b12, e3) + inner(e2, b13))) {
      return fail_case(t, "C4", c, e1, e2, e3, h);
    }
    passed["C4"]++;
    if (!(br(e1, e1) == PSection(PVector(m, Poly(0)), linear_part(differential(inner(e1, e1), m))))) {
      return fail_case(t, "C5", c, e1, e2, e3, h);
    }
    passed["C5"]++;
    // skew Jacobi form: [[e1,e2],e3] + cyclic = d of the Nijenhuis operator
    PSection jac = br(b12, e3) - br(e1, b23) + br(e2, b13);
    if (!jac.is_zero()) return fail_case(t, "jacobi", c, e1, e2, e3, h);
    passed["jacobi"]++;
  }
  Chart ca = Chart::real(am);
  for (int t = 0; t < cases; ++t) {
    PSection e1 = random_section(eng, am, 1), e2 = random_section(eng, am, 1), e3 = random_section(eng, am, 1);
    PForm h = PForm::monomial(am, 0b111, random_poly(eng, am, 2) + Poly::var(am, 3)) +
              PForm::monomial(am, 0b1110, random_poly(eng, am, 1));
    auto br = [&](const PSection& a, const PSection& b) { return courant_bracket(a, b, h); };
    PSection lhs = br(br(e1, e2), e3) - br(e1, br(e2, e3)) + br(e2, br(e1, e3));
    PForm dh = exterior_d(h);
    PSection anomaly(PVector(am, Poly(0)), linear_part(contract(e3.vec, contract(e2.vec, contract(e1.vec, dh)))));
    if (!(lhs == anomaly)) return fail_case(t, "anomaly", ca, e1, e2, e3, h);
    passed["anomaly"]++;
  }
  Outcome o;
  o.certificate = {{"cases", cases}, {"dim", m}, {"anomaly_dim", am}, {"degree", deg}, {"passed", passed}};
  return o;
}

using Handler = std::function<Outcome(const Context&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"check-isotropic", cmd_check_isotropic}, {"canonical-form", cmd_canonical_form},
      {"spinor-of", cmd_spinor_of},             {"null-space", cmd_null_space},
      {"mukai", cmd_mukai},                     {"transform", cmd_transform},
      {"tensor", cmd_tensor},                   {"validate-gcs", cmd_validate_gcs},
      {"type-map", cmd_type_map},               {"darboux", cmd_darboux},
      {"grading", cmd_grading},                 {"poisson-of", cmd_poisson_of},
      {"check-integrable", cmd_check_integrable}, {"nijenhuis", cmd_nijenhuis},
      {"schouten", cmd_schouten},               {"maurer-cartan", cmd_maurer_cartan},
      {"deform", cmd_deform},                   {"modular", cmd_modular},
      {"ham-symmetry", cmd_ham_symmetry},       {"pullback", cmd_pullback},
      {"brane-check", cmd_brane_check},         {"axiom-suite", cmd_axiom_suite},
  };
  return h;
}

Report error_report(const std::string& command, std::uint64_t seed, const std::string& message,
                    const std::string& location) {
  Report r;
  r.command = command;
  r.verdict = "error";
  r.seed = seed;
  r.error = {{"message", message}};
  if (!location.empty()) r.error["location"] = location;
  return r;
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = [] {
    std::vector<std::string> out;
    for (const auto& [k, v] : handlers()) out.push_back(k);
    return out;
  }();
  return c;
}

// ---- codecs ----

Chart decode_chart(const Json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "expected an object");
  auto check_size = [&](int n, const std::string& p) {
    if (n < 1) throw InputError(p, "dimension must be positive");
    if (n > kMaxVars) throw CapacityError(p + ": dimension " + std::to_string(n) + " exceeds capacity " + std::to_string(kMaxVars));
  };
  if (const Json* r = optional_field(j, "real")) {
    int m = require_int(*r, at(path, "real"));
    check_size(m, at(path, "real"));
    return Chart::real(m);
  }
  if (const Json* c = optional_field(j, "complex")) {
    int n = require_int(*c, at(path, "complex"));
    check_size(2 * n, at(path, "complex"));
    return Chart::complex(n);
  }
  const Json& names = require_array(require(j, "names", path), at(path, "names"));
  check_size(static_cast<int>(names.size()), at(path, "names"));
  std::vector<std::string> nm;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!names[i].is_string()) throw InputError(at(at(path, "names"), i), "expected a string");
    nm.push_back(names[i].get<std::string>());
  }
  std::vector<std::pair<int, int>> pairs;
  if (const Json* p = optional_field(j, "pairs")) {
    require_array(*p, at(path, "pairs"));
    for (std::size_t i = 0; i < p->size(); ++i) {
      const Json& e = (*p)[i];
      if (!e.is_array() || e.size() != 2) throw InputError(at(at(path, "pairs"), i), "pair must be [re, im]");
      pairs.emplace_back(require_int(e[0], at(at(path, "pairs"), i)) - 1, require_int(e[1], at(at(path, "pairs"), i)) - 1);
    }
  }
  std::vector<std::string> cn;
  if (const Json* c = optional_field(j, "complex_names")) {
    for (const auto& e : require_array(*c, at(path, "complex_names"))) cn.push_back(e.get<std::string>());
  }
  try {
    return Chart(nm, pairs, cn);
  } catch (const ValidationError& e) {
    throw InputError(path, e.what());
  }
}

Json encode_chart(const Chart& c) {
  Json j{{"names", c.names()}};
  if (c.complex_dim() > 0) {
    Json pairs = Json::array();
    for (auto [a, b] : c.pairs()) pairs.push_back({a + 1, b + 1});
    j["pairs"] = pairs;
    j["complex_names"] = c.complex_names();
  }
  return j;
}

Poly decode_scalar(const Chart& c, const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Poly(Complex(j.get<long>())).with_nvars(c.dim());
  if (!j.is_string()) throw InputError(path, "scalar must be a string or an integer");
  try {
    return c.parse(j.get<std::string>());
  } catch (const Error& e) {
    throw InputError(path, e.what());
  }
}

Json encode_scalar(const Chart& c, const Poly& p) { return p.str(c.names()); }

PVector decode_vector(const Chart& c, const Json& j, const std::string& path, int size) {
  require_array(j, path);
  if (size >= 0 && static_cast<int>(j.size()) != size) {
    throw InputError(path, "expected " + std::to_string(size) + " entries");
  }
  PVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(decode_scalar(c, j[i], at(path, i)));
  return v;
}

Json encode_vector(const Chart& c, const PVector& v) {
  Json out = Json::array();
  for (const auto& x : v) out.push_back(encode_scalar(c, x));
  return out;
}

PMatrix decode_matrix(const Chart& c, const Json& j, const std::string& path, int rows, int cols) {
  require_array(j, path);
  if (rows >= 0 && static_cast<int>(j.size()) != rows) throw InputError(path, "expected " + std::to_string(rows) + " rows");
  if (j.empty()) return PMatrix(0, 0);
  const int nc = cols >= 0 ? cols : static_cast<int>(require_array(j[0], at(path, 0)).size());
  PMatrix m(static_cast<int>(j.size()), nc);
  for (std::size_t i = 0; i < j.size(); ++i) {
    PVector row = decode_vector(c, j[i], at(path, i), nc);
    for (int k = 0; k < nc; ++k) m(static_cast<int>(i), k) = row[k];
  }
  return m;
}

Json encode_matrix(const Chart& c, const PMatrix& m) {
  Json out = Json::array();
  for (int i = 0; i < m.rows(); ++i) out.push_back(encode_vector(c, m.row(i)));
  return out;
}

PForm decode_form(const Chart& c, const Json& j, const std::string& path, Variance v) {
  require_array(j, path);
  PForm f(c.dim(), v);
  for (std::size_t t = 0; t < j.size(); ++t) {
    const std::string tp = at(path, t);
    Poly coeff = decode_scalar(c, require(j[t], "coeff", tp), at(tp, "coeff"));
    const Json& basis = require_array(require(j[t], "basis", tp), at(tp, "basis"));
    PForm term = PForm::scalar(c.dim(), coeff, v);
    for (std::size_t b = 0; b < basis.size(); ++b) term = wedge(term, basis_factor(c, basis[b], at(at(tp, "basis"), b), v));
    f += term;
  }
  return f;
}

Json encode_form(const Chart& c, const PForm& f) {
  Json out = Json::array();
  for (const auto& [mask, coeff] : f.terms()) {
    Json basis = Json::array();
    for (int i = 0; i < f.dim(); ++i) {
      if (mask & (Mask{1} << i)) basis.push_back(i + 1);
    }
    out.push_back({{"coeff", encode_scalar(c, coeff)}, {"basis", basis}});
  }
  return out;
}

PSection decode_section(const Chart& c, const Json& j, const std::string& path) {
  if (!j.is_object()) throw InputError(path, "section must be an object with vec and covec");
  PVector zero(c.dim(), Poly(0).with_nvars(c.dim()));
  const Json* x = optional_field(j, "vec");
  const Json* xi = optional_field(j, "covec");
  if (!x && !xi) throw InputError(path, "section needs vec or covec");
  return PSection(x ? decode_vector(c, *x, at(path, "vec"), c.dim()) : zero,
                  xi ? decode_vector(c, *xi, at(path, "covec"), c.dim()) : zero);
}

Json encode_section(const Chart& c, const PSection& s) {
  return {{"vec", encode_vector(c, s.vec)}, {"covec", encode_vector(c, s.covec)}};
}

Point decode_point(const Chart& c, const Json& j, const std::string& path) {
  Point p;
  for (const auto& x : decode_vector(c, j, path, c.dim())) p.push_back(constant_of(x, path));
  return p;
}

Json encode_point(const Point& p) {
  Json out = Json::array();
  for (const auto& x : p) out.push_back(x.str());
  return out;
}

std::vector<Point> decode_samples(const Chart& c, const Json& j, const std::string& path) {
  std::vector<Point> pts;
  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) pts.push_back(decode_point(c, j[i], at(path, i)));
    return pts;
  }
  const Json& g = require(j, "grid", path);
  const std::string gp = at(path, "grid");
  const Json& vals = require_array(require(g, "values", gp), at(gp, "values"));
  std::vector<Complex> vs;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    vs.push_back(constant_of(decode_scalar(Chart(), vals[i], at(at(gp, "values"), i)), at(at(gp, "values"), i)));
  }
  std::string over = "real";
  if (const Json* o = optional_field(g, "over")) over = o->get<std::string>();
  const int n = over == "complex" ? c.complex_dim() : c.dim();
  if (over != "complex" && over != "real") throw InputError(at(gp, "over"), "over must be real or complex");
  if (n == 0) throw InputError(at(gp, "over"), "chart has no complex coordinates");
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) {
    total *= vs.size();
    if (total > 4096) throw InputError(gp, "grid has more than 4096 points");
  }
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::vector<Complex> coords(n);
    std::size_t r = idx;
    for (int i = n - 1; i >= 0; --i) {
      coords[i] = vs[r % vs.size()];
      r /= vs.size();
    }
    pts.push_back(over == "complex" ? c.point_from_complex(coords) : Point(coords));
  }
  return pts;
}

// ---- jobs ----

Job parse_job(const Json& doc, const Overrides& ov) {
  if (!doc.is_object()) throw InputError("", "job must be a JSON object");
  const Json& schema = require(doc, "schema", "");
  if (!schema.is_string() || schema.get<std::string>() != kJobSchema) {
    throw InputError("/schema", std::string("expected \"") + kJobSchema + "\"");
  }
  Job job;
  const Json& cmd = require(doc, "command", "");
  if (!cmd.is_string() || !handlers().count(cmd.get<std::string>())) throw InputError("/command", "unknown command");
  job.command = cmd.get<std::string>();
  job.chart = decode_chart(require(doc, "chart", ""));
  job.input = require(doc, "input", "");
  if (!job.input.is_object()) throw InputError("/input", "expected an object");
  if (const Json* o = optional_field(doc, "options")) {
    if (!o->is_object()) throw InputError("/options", "expected an object");
    if (const Json* s = optional_field(*o, "seed")) {
      if (!s->is_number_unsigned()) throw InputError("/options/seed", "expected a non-negative integer");
      job.options.seed = s->get<std::uint64_t>();
    }
    if (const Json* c = optional_field(*o, "cases")) job.options.cases = require_int(*c, "/options/cases");
    if (const Json* d = optional_field(*o, "degree_bound")) job.options.degree_bound = require_int(*d, "/options/degree_bound");
    if (const Json* s = optional_field(*o, "samples")) job.options.samples = *s;
    for (const auto& [k, v] : o->items()) {
      if (k != "seed" && k != "cases" && k != "degree_bound" && k != "samples") throw InputError("/options/" + k, "unknown option");
    }
  }
  if (ov.seed) job.options.seed = *ov.seed;
  if (ov.cases) job.options.cases = *ov.cases;
  if (ov.degree_bound) job.options.degree_bound = *ov.degree_bound;
  if (ov.samples) job.options.samples = *ov.samples;
  if (job.options.cases < 1) throw InputError("/options/cases", "must be positive");
  if (job.options.degree_bound && *job.options.degree_bound < 0) throw InputError("/options/degree_bound", "must be >= 0");
  if (job.options.samples) decode_samples(job.chart, *job.options.samples, "/options/samples");
  for (const auto& [k, v] : doc.items()) {
    if (k != "schema" && k != "command" && k != "chart" && k != "input" && k != "options" && k != "description" &&
        k != "expect")
      throw InputError("/" + k, "unknown field");
  }
  return job;
}

Job parse_job_text(const std::string& text, const Overrides& ov) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError("byte " + std::to_string(e.byte), "malformed JSON");
  }
  return parse_job(doc, ov);
}

Report run(const Job& job) {
  auto start = std::chrono::steady_clock::now();
  Report r;
  r.command = job.command;
  r.seed = job.options.seed;
  try {
    Context cx{job, job.chart, job.input};
    Outcome o = handlers().at(job.command)(cx);
    r.verdict = o.pass ? "pass" : "fail";
    if (o.pass) {
      r.certificate = o.certificate;
    } else {
      r.counterexample = o.counterexample;
    }
  } catch (const InputError& e) {
    r = error_report(job.command, job.options.seed, e.what(), e.location());
  } catch (const Error& e) {
    r = error_report(job.command, job.options.seed, e.what(), "");
  }
  r.timing_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

Report run_text(const std::string& text, const Overrides& ov) {
  std::string command;
  try {
    Job job = parse_job_text(text, ov);
    return run(job);
  } catch (const InputError& e) {
    return error_report(command, ov.seed.value_or(0), e.what(), e.location());
  } catch (const Error& e) {
    return error_report(command, ov.seed.value_or(0), e.what(), "");
  }
}

Json to_json(const Report& r) {
  Json j{{"schema", kReportSchema},
         {"command", r.command},
         {"verdict", r.verdict},
         {"seed", r.seed},
         {"tool_version", tool_version()},
         {"timing_ms", r.timing_ms}};
  if (r.verdict == "pass") j["certificate"] = r.certificate;
  if (r.verdict == "fail") j["counterexample"] = r.counterexample;
  if (r.verdict == "error") j["error"] = r.error;
  return j;
}

Report report_from_json(const Json& j) {
  if (!j.is_object() || j.value("schema", "") != kReportSchema) throw InputError("/schema", "not a report");
  Report r;
  r.command = j.at("command").get<std::string>();
  r.verdict = j.at("verdict").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.timing_ms = j.at("timing_ms").get<double>();
  if (j.contains("certificate")) r.certificate = j["certificate"];
  if (j.contains("counterexample")) r.counterexample = j["counterexample"];
  if (j.contains("error")) r.error = j["error"];
  return r;
}

std::string emit(const Report& r, const std::string& format) {
  if (format == "json") return to_json(r).dump(2) + "\n";
  if (format != "text") throw InputError("--format", "format must be json or text");
  std::ostringstream os;
  os << r.command << ": " << r.verdict << "\n";
  auto dump_fields = [&](const Json& obj) {
    for (const auto& [k, v] : obj.items()) {
      std::string s = v.dump();
      if (s.size() > 160) s = s.substr(0, 157) + "...";
      os << "  " << k << " = " << s << "\n";
    }
  };
  if (r.verdict == "pass") dump_fields(r.certificate);
  if (r.verdict == "fail") dump_fields(r.counterexample);
  if (r.verdict == "error") {
    os << "  error: " << r.error.value("message", "") << "\n";
  }
  os << "  seed = " << r.seed << ", version " << tool_version() << "\n";
  return os.str();
}

int exit_code(const Report& r) {
  if (r.verdict == "pass") return 0;
  if (r.verdict == "fail") return 1;
  return 2;
}

}  // namespace gcg::cli
